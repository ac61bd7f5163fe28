//! Free resolutions by iterated Gröbner kernels, and Ext against the ring
//! from the dualized resolution. Shared by the commutative graded side and
//! the Weyl side.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::gb;
use crate::monomial::{ModuleOrder, Monomial, MonomialOrder};
use crate::vector::{Term, Vector};

/// `L_len → … → L_1 → L_0`, each `L_s` free with generator degrees
/// `degrees[s]`; `maps[s]` lists the images in `L_s` of the generators of
/// `L_{s+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeResolution {
    pub degrees: Vec<Vec<i64>>,
    pub maps: Vec<Vec<Vector>>,
    /// True when the last module is followed by zero.
    pub complete: bool,
}

impl FreeResolution {
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.len()).collect()
    }

    pub fn rank(&self, s: usize) -> usize {
        self.degrees.get(s).map(|d| d.len()).unwrap_or(0)
    }

    pub fn order(&self, mono: &MonomialOrder, s: usize) -> ModuleOrder {
        ModuleOrder::top(mono.clone(), self.degrees.get(s).cloned().unwrap_or_default())
    }
}

pub fn grading(mono: &MonomialOrder, nvars: usize) -> Vec<u32> {
    mono.weights(nvars).unwrap_or_else(|| vec![1; nvars])
}

/// Filtration degree of a vector: maximal weight of a term plus the degree
/// of its position.
pub fn weight_of(v: &Vector, w: &[u32], pos_degrees: &[i64]) -> i64 {
    v.weight(w, pos_degrees).unwrap_or(i64::MIN)
}

/// Resolves `A^rank / ⟨relations⟩` with generator degrees `degrees`.
///
/// Each new free module is generated by a Gröbner basis of the previous
/// kernel for the weighted order, with generator degrees equal to the
/// filtration degrees of the basis elements, so every differential is
/// strict. At most `len` differentials are computed.
pub fn resolve(
    alg: &Algebra,
    mono: &MonomialOrder,
    degrees: &[i64],
    relations: &[Vector],
    len: usize,
) -> Result<FreeResolution> {
    let w = grading(mono, alg.nvars());
    let mut res = FreeResolution {
        degrees: vec![degrees.to_vec()],
        maps: Vec::new(),
        complete: false,
    };
    if len == 0 {
        res.complete = relations.iter().all(|r| r.is_zero());
        return Ok(res);
    }
    let ord0 = ModuleOrder::top(mono.clone(), degrees.to_vec());
    let first = gb::groebner(alg, relations, &ord0)?;
    if first.is_empty() {
        res.complete = true;
        return Ok(res);
    }
    res.degrees
        .push(first.iter().map(|g| weight_of(g, &w, degrees)).collect());
    res.maps.push(first);
    while res.maps.len() < len {
        let s = res.maps.len();
        let next = gb::kernel(
            alg,
            &res.maps[s - 1],
            res.rank(s - 1),
            &res.degrees[s - 1],
            &res.degrees[s],
            mono,
        )?;
        if next.is_empty() {
            res.complete = true;
            return Ok(res);
        }
        let src = &res.degrees[s];
        let d: Vec<i64> = next.iter().map(|g| weight_of(g, &w, src)).collect();
        res.degrees.push(d);
        res.maps.push(next);
    }
    if !res.complete {
        let s = res.maps.len();
        let next = gb::kernel(
            alg,
            &res.maps[s - 1],
            res.rank(s - 1),
            &res.degrees[s - 1],
            &res.degrees[s],
            mono,
        )?;
        res.complete = next.is_empty();
    }
    Ok(res)
}

/// Checks that consecutive differentials compose to zero.
pub fn compositions_vanish(alg: &Algebra, mono: &MonomialOrder, res: &FreeResolution) -> bool {
    for s in 1..res.maps.len() {
        let ord = res.order(mono, s - 1);
        for img in &res.maps[s] {
            if !crate::vector::apply_map(alg, img, &res.maps[s - 1], &ord).is_zero() {
                return false;
            }
        }
    }
    true
}

/// A left module presented as `A^rank / ⟨relations⟩` with generator degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct Presented {
    pub degrees: Vec<i64>,
    /// Reduced Gröbner basis of the relations for the weighted order.
    pub relations: Vec<Vector>,
}

impl Presented {
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_zero(&self) -> bool {
        gb::is_full(&self.relations, self.rank())
    }
}

/// Entrywise anti-involution, transposed: the dual differential
/// `Hom(L_s, A) → Hom(L_{s+1}, A)` written as a left-linear map
/// `A^{r_s} → A^{r_{s+1}}`.
fn dual_map(alg: &Algebra, map: &[Vector], r_s: usize, target_ord: &ModuleOrder) -> Vec<Vector> {
    let f = alg.field;
    let mut cols: Vec<Vec<Term>> = vec![Vec::new(); r_s];
    for (k, img) in map.iter().enumerate() {
        for t in &img.terms {
            for (m, c) in alg.anti_involution_term(&t.m) {
                cols[t.pos as usize].push(Term {
                    m,
                    pos: k as u32,
                    c: f.mul(c, t.c),
                });
            }
        }
    }
    cols.into_iter()
        .map(|c| Vector::from_terms(c, f, target_ord))
        .collect()
}

/// `Ext^s(M, A)` where `res` resolves `M`, computed as the cohomology of the
/// dual complex and returned as a left module via the anti-involution
/// (for commutative rings this is the module itself).
///
/// The presentation carries the filtration induced on the kernel and then
/// passed to the quotient; generator degrees are filtration degrees.
pub fn ext(alg: &Algebra, mono: &MonomialOrder, res: &FreeResolution, s: usize) -> Result<Presented> {
    let nv = alg.nvars();
    let f = alg.field;
    let w = grading(mono, nv);
    let r_s = res.rank(s);
    if r_s == 0 {
        return Ok(Presented {
            degrees: vec![],
            relations: vec![],
        });
    }
    if s >= res.maps.len() && !res.complete {
        return Err(Error::Internal(format!(
            "resolution of length {} is too short for Ext^{s}",
            res.maps.len()
        )));
    }
    let neg = |d: &Vec<i64>| d.iter().map(|x| -x).collect::<Vec<i64>>();
    let dd_s = neg(&res.degrees[s]);
    let ord_s = ModuleOrder::top(mono.clone(), dd_s.clone());
    // kernel of the dual differential leaving Hom(L_s)
    let kernel: Vec<Vector> = if s < res.maps.len() {
        let dd_next = neg(&res.degrees[s + 1]);
        let ord_next = ModuleOrder::top(mono.clone(), dd_next.clone());
        let delta = dual_map(alg, &res.maps[s], r_s, &ord_next);
        gb::kernel(alg, &delta, res.rank(s + 1), &dd_next, &dd_s, mono)?
    } else {
        (0..r_s).map(|l| Vector::unit(nv, l)).collect()
    };
    if kernel.is_empty() {
        return Ok(Presented {
            degrees: vec![],
            relations: vec![],
        });
    }
    let image: Vec<Vector> = if s >= 1 {
        dual_map(alg, &res.maps[s - 1], res.rank(s - 1), &ord_s)
    } else {
        Vec::new()
    };
    let m = kernel.len();
    let degrees: Vec<i64> = kernel.iter().map(|k| weight_of(k, &w, &dd_s)).collect();
    let mut src_deg = degrees.clone();
    if s >= 1 {
        src_deg.extend(neg(&res.degrees[s - 1]));
    }
    let mut gens = kernel.clone();
    gens.extend(image);
    let syz = gb::kernel(alg, &gens, r_s, &dd_s, &src_deg, mono)?;
    let ord_ext = ModuleOrder::top(mono.clone(), degrees.clone());
    let rels: Vec<Vector> = syz
        .iter()
        .map(|v| {
            Vector::from_terms(
                v.terms.iter().filter(|t| (t.pos as usize) < m).cloned().collect(),
                f,
                &ord_ext,
            )
        })
        .filter(|v| !v.is_zero())
        .collect();
    let relations = gb::groebner(alg, &rels, &ord_ext)?;
    Ok(Presented { degrees, relations })
}

/// Number of standard monomials of `A^rank / U` (given a Gröbner basis
/// of `U` for a weighted order) of filtration degree exactly `i`, counted
/// among monomials whose weight-0 part has total degree at most `cap`.
pub fn standard_count(
    basis: &[Vector],
    degrees: &[i64],
    w: &[u32],
    i: i64,
    cap: u32,
) -> usize {
    let nv = w.len();
    let mut count = 0;
    for (j, &dj) in degrees.iter().enumerate() {
        let target = i - dj;
        if target < 0 {
            continue;
        }
        for m in monomials_with(w, target as u32, cap, nv) {
            let divisible = basis.iter().any(|g| {
                let l = g.lead().unwrap();
                l.pos as usize == j && l.m.divides(&m)
            });
            if !divisible {
                count += 1;
            }
        }
    }
    count
}

/// All monomials of weighted degree `target` whose weight-0 variables have
/// total degree at most `cap`.
pub fn monomials_with(w: &[u32], target: u32, cap: u32, nv: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nv];
    fn rec(
        i: usize,
        w: &[u32],
        left: u32,
        cap_left: u32,
        cur: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if i == w.len() {
            if left == 0 {
                out.push(Monomial::from_exponents(cur));
            }
            return;
        }
        if w[i] == 0 {
            for e in 0..=cap_left {
                cur[i] = e;
                rec(i + 1, w, left, cap_left - e, cur, out);
            }
        } else {
            let mut e = 0;
            while e * w[i] <= left {
                cur[i] = e;
                rec(i + 1, w, left - e * w[i], cap_left, cur, out);
                e += 1;
            }
        }
        cur[i] = 0;
    }
    rec(0, w, target, cap, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn koszul_resolution_in_two_variables() {
        let f = Field::new(7).unwrap();
        let alg = Algebra::commutative(f, 2);
        let mono = MonomialOrder::DegRevLex;
        let x = Vector::monomial(Monomial::var(2, 0), 0, 1);
        let y = Vector::monomial(Monomial::var(2, 1), 0, 1);
        let res = resolve(&alg, &mono, &[0], &[x, y], 4).unwrap();
        assert_eq!(res.ranks(), vec![1, 2, 1]);
        assert_eq!(res.degrees, vec![vec![0], vec![1, 1], vec![2]]);
        assert!(res.complete);
        assert!(compositions_vanish(&alg, &mono, &res));
        let e2 = ext(&alg, &mono, &res, 2).unwrap();
        assert_eq!(e2.rank(), 1);
        assert!(!e2.is_zero());
        assert!(ext(&alg, &mono, &res, 1).unwrap().is_zero());
        assert!(ext(&alg, &mono, &res, 0).unwrap().is_zero());
    }

    #[test]
    fn monomial_enumeration() {
        // weights (0,1): xi-degree 2, t-degree ≤ 1 → xi^2, t*xi^2
        assert_eq!(monomials_with(&[0, 1], 2, 1, 2).len(), 2);
    }
}
