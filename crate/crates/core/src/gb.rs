//! Buchberger's algorithm for left submodules of free modules over an
//! [`Algebra`], normal forms, division with quotients and syzygy kernels.
//!
//! The same code serves commutative polynomial rings and the Weyl algebra:
//! for the latter every multiplication is a left multiplication in normal
//! form. The product criterion is only used for commutative ideals.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::monomial::{ModuleOrder, Monomial, MonomialOrder};
use crate::vector::{Term, Vector};
use std::cell::Cell;
use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

thread_local! {
    static TIMEOUT: Cell<Option<Duration>> = const { Cell::new(None) };
}

/// Sets the time limit applied to each individual Gröbner run on this thread.
pub fn set_timeout(limit: Option<Duration>) {
    TIMEOUT.with(|t| t.set(limit));
}

fn deadline() -> Option<Instant> {
    TIMEOUT.with(|t| t.get()).map(|d| Instant::now() + d)
}

fn find_divisor<'a>(basis: &'a [Vector], m: &Monomial, pos: u32) -> Option<&'a Vector> {
    basis.iter().find(|g| {
        let l = g.lead().expect("basis elements are nonzero");
        l.pos == pos && l.m.divides(m)
    })
}

/// Full normal form of `v` with respect to `basis` (elements must be monic).
pub fn reduce(alg: &Algebra, v: &Vector, basis: &[Vector], ord: &ModuleOrder) -> Vector {
    let f = alg.field;
    let mut rest = v.clone();
    let mut done: Vec<Term> = Vec::new();
    while let Some(lt) = rest.lead().cloned() {
        match find_divisor(basis, &lt.m, lt.pos) {
            Some(g) => {
                let gl = g.lead().unwrap();
                let q = gl.m.quotient_of(&lt.m);
                let c = f.mul(lt.c, f.inv(gl.c));
                let prod = g.left_mul_term(alg, c, &q, ord);
                rest = rest.sub(&prod, f, ord);
            }
            None => {
                done.push(lt);
                rest.terms.remove(0);
            }
        }
    }
    Vector { terms: done }
}

/// Division with quotients: returns `(q, r)` with `v = Σ q_k ⋆ basis[k] + r`
/// and `r` fully reduced. Quotients are rank-one vectors.
pub fn divide(
    alg: &Algebra,
    v: &Vector,
    basis: &[Vector],
    ord: &ModuleOrder,
) -> (Vec<Vector>, Vector) {
    let f = alg.field;
    let mut q_terms: Vec<Vec<Term>> = vec![Vec::new(); basis.len()];
    let mut rest = v.clone();
    let mut done: Vec<Term> = Vec::new();
    while let Some(lt) = rest.lead().cloned() {
        let hit = basis.iter().position(|g| {
            let l = g.lead().unwrap();
            l.pos == lt.pos && l.m.divides(&lt.m)
        });
        match hit {
            Some(k) => {
                let g = &basis[k];
                let gl = g.lead().unwrap();
                let q = gl.m.quotient_of(&lt.m);
                let c = f.mul(lt.c, f.inv(gl.c));
                let prod = g.left_mul_term(alg, c, &q, ord);
                rest = rest.sub(&prod, f, ord);
                q_terms[k].push(Term { m: q, pos: 0, c });
            }
            None => {
                done.push(lt);
                rest.terms.remove(0);
            }
        }
    }
    let qord = ModuleOrder::ideal(ord.mono.clone());
    let qs = q_terms
        .into_iter()
        .map(|t| Vector::from_terms(t, f, &qord))
        .collect();
    (qs, Vector { terms: done })
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    deg: i64,
    i: usize,
    j: usize,
}

fn s_vector(alg: &Algebra, a: &Vector, b: &Vector, ord: &ModuleOrder) -> Vector {
    let la = a.lead().unwrap();
    let lb = b.lead().unwrap();
    let l = la.m.lcm(&lb.m);
    let f = alg.field;
    let ca = f.inv(la.c);
    let cb = f.inv(lb.c);
    let x = a.left_mul_term(alg, ca, &la.m.quotient_of(&l), ord);
    let y = b.left_mul_term(alg, cb, &lb.m.quotient_of(&l), ord);
    x.sub(&y, f, ord)
}

/// Reduced Gröbner basis of the left submodule generated by `gens`,
/// sorted decreasingly by leading term.
pub fn groebner(alg: &Algebra, gens: &[Vector], ord: &ModuleOrder) -> Result<Vec<Vector>> {
    let f = alg.field;
    let limit = deadline();
    let mut basis: Vec<Vector> = Vec::new();
    for g in gens {
        let mut g = g.resort(f, ord);
        if g.is_zero() {
            continue;
        }
        g.make_monic(f);
        if !basis.contains(&g) {
            basis.push(g);
        }
    }
    // the product criterion only holds for ideals in commutative rings
    let product_criterion =
        alg.is_commutative() && basis.iter().all(|g| g.terms.iter().all(|t| t.pos == 0));
    let mut pending: BTreeSet<PairKey> = BTreeSet::new();
    let mut live: HashSet<(usize, usize)> = HashSet::new();
    let key = |basis: &[Vector], i: usize, j: usize| -> Option<PairKey> {
        let (a, b) = (basis[i].lead().unwrap(), basis[j].lead().unwrap());
        if a.pos != b.pos {
            return None;
        }
        let l = a.m.lcm(&b.m);
        let deg = ord.degree(&l, a.pos).unwrap_or(l.degree() as i64);
        Some(PairKey { deg, i, j })
    };
    for j in 0..basis.len() {
        for i in 0..j {
            if let Some(k) = key(&basis, i, j) {
                pending.insert(k);
                live.insert((i, j));
            }
        }
    }
    while let Some(pk) = pending.iter().next().copied() {
        pending.remove(&pk);
        live.remove(&(pk.i, pk.j));
        if let Some(lim) = limit {
            if Instant::now() > lim {
                return Err(Error::Timeout);
            }
        }
        let (a, b) = (&basis[pk.i], &basis[pk.j]);
        let (la, lb) = (a.lead().unwrap(), b.lead().unwrap());
        if product_criterion && la.m.is_coprime(&lb.m) {
            continue;
        }
        let l = la.m.lcm(&lb.m);
        let pos = la.pos;
        let chain = (0..basis.len()).any(|k| {
            if k == pk.i || k == pk.j {
                return false;
            }
            let lk = basis[k].lead().unwrap();
            if lk.pos != pos || !lk.m.divides(&l) {
                return false;
            }
            let p1 = (pk.i.min(k), pk.i.max(k));
            let p2 = (pk.j.min(k), pk.j.max(k));
            !live.contains(&p1) && !live.contains(&p2)
        });
        if chain {
            continue;
        }
        let s = s_vector(alg, a, b, ord);
        let mut h = reduce(alg, &s, &basis, ord);
        if h.is_zero() {
            continue;
        }
        h.make_monic(f);
        basis.push(h);
        let n = basis.len() - 1;
        for i in 0..n {
            if let Some(k) = key(&basis, i, n) {
                pending.insert(k);
                live.insert((i, n));
            }
        }
    }
    Ok(interreduce(alg, basis, ord))
}

/// Turns a Gröbner basis into the reduced one.
fn interreduce(alg: &Algebra, basis: Vec<Vector>, ord: &ModuleOrder) -> Vec<Vector> {
    let mut keep: Vec<Vector> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lg = g.lead().unwrap();
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let lh = h.lead().unwrap();
            j != i
                && lh.pos == lg.pos
                && lh.m.divides(&lg.m)
                && (lh.m != lg.m || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Vector> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let g = &keep[i];
        let head = Vector {
            terms: vec![g.terms[0].clone()],
        };
        let tail = Vector {
            terms: g.terms[1..].to_vec(),
        };
        let tail = reduce(alg, &tail, &others, ord);
        let mut r = head.add(&tail, alg.field, ord);
        r.make_monic(alg.field);
        out.push(r);
    }
    out.sort_by(|a, b| {
        let (la, lb) = (a.lead().unwrap(), b.lead().unwrap());
        ord.compare(&lb.m, lb.pos, &la.m, la.pos)
    });
    out
}

/// True iff the Gröbner basis generates all of `A^rank`.
pub fn is_full(gb: &[Vector], rank: usize) -> bool {
    (0..rank).all(|j| {
        gb.iter().any(|g| {
            let l = g.lead().unwrap();
            l.pos as usize == j && l.m.is_one()
        })
    })
}

/// Gröbner basis of the kernel of the left-linear map `A^s → A^n`,
/// `e_k ↦ images[k]`, for the weighted order with the given source degrees.
///
/// Computed by eliminating the target block from the augmented module
/// generated by `(images[k], e_k)`.
pub fn kernel(
    alg: &Algebra,
    images: &[Vector],
    target_rank: usize,
    target_degrees: &[i64],
    source_degrees: &[i64],
    mono: &MonomialOrder,
) -> Result<Vec<Vector>> {
    let f = alg.field;
    let n = target_rank;
    let mut pos_degrees = target_degrees.to_vec();
    pos_degrees.resize(n, 0);
    pos_degrees.extend_from_slice(source_degrees);
    pos_degrees.resize(n + images.len(), 0);
    let ord = ModuleOrder {
        mono: mono.clone(),
        pos_degrees,
        split: Some(n),
        pot: false,
    };
    let nv = alg.nvars();
    let aug: Vec<Vector> = images
        .iter()
        .enumerate()
        .map(|(k, img)| {
            let mut terms = img.terms.clone();
            terms.push(Term {
                m: Monomial::one(nv),
                pos: (n + k) as u32,
                c: 1,
            });
            Vector::from_terms(terms, f, &ord)
        })
        .collect();
    let gb = groebner(alg, &aug, &ord)?;
    let sord = ModuleOrder::top(mono.clone(), source_degrees.to_vec());
    Ok(gb
        .into_iter()
        .filter(|g| g.lead().unwrap().pos as usize >= n)
        .map(|g| g.map_positions(f, &sord, |p| p - n as u32))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn poly(terms: &[(i64, &[u32])], f: Field, ord: &ModuleOrder) -> Vector {
        Vector::from_terms(
            terms
                .iter()
                .map(|(c, e)| Term {
                    m: Monomial::from_exponents(e),
                    pos: 0,
                    c: f.from_i64(*c),
                })
                .collect(),
            f,
            ord,
        )
    }

    #[test]
    fn cox_little_oshea_example() {
        let f = Field::new(7).unwrap();
        let alg = Algebra::commutative(f, 2);
        let ord = ModuleOrder::ideal(MonomialOrder::Lex);
        let g1 = poly(&[(1, &[3, 0])], f, &ord);
        let g2 = poly(&[(1, &[2, 0]), (-1, &[0, 1])], f, &ord);
        let gb = groebner(&alg, &[g1, g2], &ord).unwrap();
        let expect = vec![
            poly(&[(1, &[2, 0]), (-1, &[0, 1])], f, &ord),
            poly(&[(1, &[1, 1])], f, &ord),
            poly(&[(1, &[0, 2])], f, &ord),
        ];
        assert_eq!(gb, expect);
    }

    #[test]
    fn weyl_unit_ideal() {
        let f = Field::new(7).unwrap();
        let alg = Algebra::weyl(f, 1);
        let ord = ModuleOrder::ideal(MonomialOrder::cotangent(1));
        let d = poly(&[(1, &[0, 1])], f, &ord);
        let t = poly(&[(1, &[1, 0])], f, &ord);
        let gb = groebner(&alg, &[d, t], &ord).unwrap();
        assert_eq!(gb, vec![poly(&[(1, &[0, 0])], f, &ord)]);
    }

    #[test]
    fn kernel_of_koszul_map() {
        let f = Field::new(5).unwrap();
        let alg = Algebra::commutative(f, 2);
        let ord = ModuleOrder::ideal(MonomialOrder::DegRevLex);
        let x = poly(&[(1, &[1, 0])], f, &ord);
        let y = poly(&[(1, &[0, 1])], f, &ord);
        let k = kernel(&alg, &[x, y], 1, &[0], &[1, 1], &MonomialOrder::DegRevLex).unwrap();
        assert_eq!(k.len(), 1, "{k:?}");
        let syz = &k[0];
        // y e_0 - x e_1 up to sign
        assert_eq!(syz.terms.len(), 2);
        assert!(syz.terms.iter().all(|t| t.m.degree() == 1));
    }
}
