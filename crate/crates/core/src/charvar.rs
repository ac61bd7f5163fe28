//! Characteristic varieties at level 0, holonomicity, purity certificates
//! from Ext vanishing, the component check against `Ext^r`, the
//! localization test and the level-`m` relabeling.
//!
//! Everything already lives over `F_p`, so the reduction modulo the
//! uniformizer and the removal of torsion are the identity here.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gb;
use crate::ideal::{self, IdealHandle};
use crate::monomial::{ModuleOrder, MonomialOrder};
use crate::poly::{PolyRing, Polynomial};
use crate::vector::Vector;
use crate::weyl::{self, Side, WeylPresentation};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct CharVariety {
    pub d: usize,
    pub ring: Arc<PolyRing>,
    /// Cuts out `Supp gr M` set-theoretically; not necessarily radical.
    pub ideal: IdealHandle,
    /// `-1` for the empty variety (zero module).
    pub dim: i64,
    /// Minimal primes as variable-index sets, when the ideal is monomial.
    pub components: Option<Vec<Vec<usize>>>,
    /// Shifts of the good filtration the computation used.
    pub shifts: Vec<i64>,
}

impl CharVariety {
    pub fn from_ideal(ring: &Arc<PolyRing>, d: usize, ideal: IdealHandle, shifts: Vec<i64>) -> Result<Self> {
        let dim = ideal.dim()?;
        let components = if dim >= 0 && ideal.is_monomial()? {
            Some(ideal.monomial_components()?)
        } else {
            None
        };
        Ok(CharVariety {
            d,
            ring: ring.clone(),
            ideal,
            dim,
            components,
            shifts,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.dim < 0
    }

    /// Reduced Gröbner basis of the ideal, as strings.
    pub fn ideal_strings(&self) -> Result<Vec<String>> {
        self.ideal.to_strings()
    }

    pub fn component_names(&self) -> Option<Vec<Vec<String>>> {
        self.components.as_ref().map(|cs| {
            cs.iter()
                .map(|c| c.iter().map(|&i| self.ring.names[i].clone()).collect())
                .collect()
        })
    }

    /// Codimension of each component in `T*X`.
    pub fn component_codims(&self) -> Option<Vec<i64>> {
        self.components
            .as_ref()
            .map(|cs| cs.iter().map(|c| c.len() as i64).collect())
    }
}

/// Characteristic ideals of the flag subquotients of `S^n / Q`: for a
/// position-over-term Gröbner basis of `Q`, `I_j` is generated by the
/// `e_j`-coefficients of the elements whose leading position is `j`.
pub fn flag_ideals(ring: &Arc<PolyRing>, rank: usize, symbols: &[Vector]) -> Result<Vec<Vec<Vector>>> {
    let alg = ring.algebra();
    let ord = ModuleOrder::pot(ring.order.clone(), rank);
    let basis = gb::groebner(&alg, symbols, &ord)?;
    Ok((0..rank)
        .map(|j| {
            basis
                .iter()
                .filter(|g| g.lead().unwrap().pos as usize == j)
                .map(|g| g.component(j).resort(ring.field, &ring.ideal_order()))
                .collect()
        })
        .collect())
}

/// Ideal whose zero set is the support of `S^n / Q` (`Q` given by
/// generators).
pub fn support_ideal(ring: &Arc<PolyRing>, rank: usize, symbols: &[Vector]) -> Result<IdealHandle> {
    let nv = ring.nvars();
    let one = Vector::unit(nv, 0);
    if rank == 0 {
        return Ok(IdealHandle::from_vectors(ring, &[one]));
    }
    if rank == 1 {
        let gens: Vec<Vector> = symbols.iter().map(|s| s.component(0)).collect();
        return Ok(IdealHandle::from_vectors(ring, &gens));
    }
    let mut acc: Option<Vec<Vector>> = None;
    for ij in flag_ideals(ring, rank, symbols)? {
        if gb::is_full(&gb::groebner(&ring.algebra(), &ij, &ring.ideal_order())?, 1) {
            continue;
        }
        acc = Some(match acc {
            None => ij,
            Some(prev) => ideal::intersect_raw(ring, &prev, &ij)?,
        });
    }
    Ok(IdealHandle::from_vectors(ring, &acc.unwrap_or_else(|| vec![one])))
}

/// `Car(M)` for a left presentation.
pub fn char_variety(p: &WeylPresentation) -> Result<CharVariety> {
    if p.side != Side::Left {
        return Err(Error::Precondition("characteristic variety of a right presentation; transpose first".into()));
    }
    let ring = PolyRing::cotangent(p.field, p.d);
    let g = weyl::weyl_left_gb(p)?;
    let ideal = support_ideal(&ring, p.rank(), &g.symbols)?;
    CharVariety::from_ideal(&ring, p.d, ideal, p.shifts.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HolonomicityReport {
    pub dim: i64,
    pub d: usize,
    pub bernstein_ok: bool,
    pub holonomic: bool,
    pub zero: bool,
}

pub fn holonomicity_report(c: &CharVariety) -> HolonomicityReport {
    let zero = c.is_empty();
    HolonomicityReport {
        dim: c.dim,
        d: c.d,
        bernstein_ok: zero || c.dim >= c.d as i64,
        holonomic: !zero && c.dim == c.d as i64,
        zero,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Exactly one nonvanishing Ext, no geometric data to compare.
    PureCertified,
    /// Exactly one nonvanishing `Ext^r` and every component has codim `r`.
    PureGeometricConfirmed,
    /// Ext certificate and component codimensions disagree.
    Inconsistent,
    /// Several Ext modules are nonzero; no purity certificate.
    Uncertified,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::PureCertified => "pure-certified",
            Verdict::PureGeometricConfirmed => "pure-geometric-confirmed",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Uncertified => "uncertified",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PurityReport {
    pub d: usize,
    pub car: CharVariety,
    /// `ext_pattern[s]` is true iff `Ext^s(M, D) ≠ 0`, for `s ∈ [0, 2d]`.
    pub ext_pattern: Vec<bool>,
    pub certified_codim: Option<usize>,
    pub component_codims: Option<Vec<i64>>,
    pub verdict: Verdict,
    /// Largest filtration degree met in the resolution.
    pub effective_bound: i64,
}

/// Ext sweep over `s ∈ [0, 2d]` and comparison with the component data.
pub fn purity_report(p: &WeylPresentation) -> Result<PurityReport> {
    let car = char_variety(p)?;
    if car.is_empty() {
        return Err(Error::Precondition("purity of the zero module".into()));
    }
    let top = 2 * p.d;
    let res = weyl::weyl_resolve(p, top as i64 + 1)?;
    let mut ext_pattern = Vec::with_capacity(top + 1);
    for s in 0..=top {
        let e = weyl::weyl_ext_from(&res, s)?;
        ext_pattern.push(!presentation_is_zero(&e)?);
    }
    let nonzero: Vec<usize> = (0..=top).filter(|&s| ext_pattern[s]).collect();
    if nonzero.is_empty() {
        return Err(Error::Internal("all Ext modules vanish for a nonzero module".into()));
    }
    let component_codims = car.component_codims();
    let (certified_codim, verdict) = if nonzero.len() == 1 {
        let r = nonzero[0];
        let v = match &component_codims {
            None => Verdict::PureCertified,
            Some(cs) if cs.iter().all(|&c| c == r as i64) => Verdict::PureGeometricConfirmed,
            Some(_) => Verdict::Inconsistent,
        };
        (Some(r), v)
    } else {
        (None, Verdict::Uncertified)
    };
    let effective_bound = res
        .res
        .degrees
        .iter()
        .flatten()
        .map(|x| x.abs())
        .max()
        .unwrap_or(0);
    Ok(PurityReport {
        d: p.d,
        car,
        ext_pattern,
        certified_codim,
        component_codims,
        verdict,
        effective_bound,
    })
}

/// Zero test for a presentation of either side.
pub fn presentation_is_zero(p: &WeylPresentation) -> Result<bool> {
    if p.rank() == 0 {
        return Ok(true);
    }
    let left = if p.side == Side::Right { weyl::swap_side(p) } else { p.clone() };
    let g = weyl::weyl_left_gb(&left)?;
    Ok(gb::is_full(&g.basis, left.rank()))
}

/// Checks `V(P) ⊆ Car(Ext^r(M, D))` for a component `P` of codim `r`.
pub fn component_ext_check(p: &WeylPresentation, component: &[usize]) -> Result<bool> {
    let car = char_variety(p)?;
    let comps = car
        .components
        .as_ref()
        .ok_or_else(|| Error::Precondition("characteristic ideal is not monomial".into()))?;
    let mut sorted = component.to_vec();
    sorted.sort();
    if !comps.contains(&sorted) {
        return Err(Error::Precondition("not a component of the characteristic variety".into()));
    }
    let r = sorted.len() as i64;
    let ext = weyl::transpose_side(&weyl::weyl_ext(p, r)?)?;
    let ext_car = char_variety(&ext)?;
    let ring = &car.ring;
    let prime: Vec<Polynomial> = sorted.iter().map(|&i| Polynomial::var(ring, i)).collect();
    let prime = IdealHandle::new(ring, prime)?;
    for g in ext_car.ideal.generators() {
        if !prime.radical_member(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `D(f) ∩ Car = ∅`, decided as `f ∈ √(char ideal)`.
pub fn localization_support_test(c: &CharVariety, f: &Polynomial) -> Result<bool> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous(f.to_string()));
    }
    c.ideal.radical_member(f)
}

/// Renames `xi<i>_m` (or `xi<i>_<m>`) to `xi<i>`; `t` variables are fixed.
pub fn level_relabel(field: Field, d: usize, m: u32, gens: &[&str]) -> Result<Vec<Polynomial>> {
    let target = PolyRing::cotangent(field, d);
    let mut names: Vec<String> = (1..=d).map(|i| format!("t{i}")).collect();
    names.extend((1..=d).map(|i| format!("xi{i}_m")));
    let source = PolyRing::new(field, names.clone(), MonomialOrder::cotangent(d));
    let numeric: Vec<String> = (1..=d).map(|i| format!("xi{i}_{m}")).collect();
    let mut out = Vec::new();
    for g in gens {
        let mut text = g.to_string();
        for ident in identifiers(g) {
            if numeric.contains(&ident) {
                continue;
            }
            if !names.contains(&ident) {
                return Err(Error::UndeclaredVariable(ident));
            }
        }
        for (i, n) in numeric.iter().enumerate() {
            text = replace_ident(&text, n, &names[d + i]);
        }
        let p = source.parse(&text)?;
        out.push(Polynomial::from_vector(&target, &p.v));
    }
    Ok(out)
}

fn identifiers(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in s.chars().chain(std::iter::once(' ')) {
        if c.is_ascii_alphanumeric() || c == '_' {
            cur.push(c);
        } else if !cur.is_empty() {
            if !cur.chars().next().unwrap().is_ascii_digit() {
                out.push(cur.clone());
            }
            cur.clear();
        }
    }
    out
}

fn replace_ident(s: &str, from: &str, to: &str) -> String {
    let mut out = String::new();
    let mut cur = String::new();
    for c in s.chars().chain(std::iter::once('\0')) {
        if c.is_ascii_alphanumeric() || c == '_' {
            cur.push(c);
            continue;
        }
        if cur == from {
            out.push_str(to);
        } else {
            out.push_str(&cur);
        }
        cur.clear();
        if c != '\0' {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> Field {
        Field::new(7).unwrap()
    }

    #[test]
    fn kummer_char_variety() {
        let p = WeylPresentation::cyclic(f7(), 1, &["t1*d1 - 2"]).unwrap();
        let c = char_variety(&p).unwrap();
        assert_eq!(c.ideal_strings().unwrap(), vec!["t1*xi1"]);
        assert_eq!(c.dim, 1);
        assert_eq!(
            c.component_names().unwrap(),
            vec![vec!["t1".to_string()], vec!["xi1".to_string()]]
        );
        assert!(holonomicity_report(&c).holonomic);
    }

    #[test]
    fn free_module_is_whole_space() {
        let p = WeylPresentation::free(f7(), 1, vec![0]);
        let c = char_variety(&p).unwrap();
        assert_eq!(c.dim, 2);
        let h = holonomicity_report(&c);
        assert!(h.bernstein_ok && !h.holonomic);
    }

    #[test]
    fn zero_module_is_empty() {
        let p = WeylPresentation::cyclic(f7(), 1, &["d1", "t1"]).unwrap();
        let c = char_variety(&p).unwrap();
        assert!(c.is_empty());
        assert!(holonomicity_report(&c).zero);
    }

    #[test]
    fn purity_of_delta_module() {
        let p = WeylPresentation::cyclic(f7(), 1, &["t1"]).unwrap();
        let r = purity_report(&p).unwrap();
        assert_eq!(r.ext_pattern, vec![false, true, false]);
        assert_eq!(r.verdict, Verdict::PureGeometricConfirmed);
    }

    #[test]
    fn rank_two_direct_sum_support() {
        let a = WeylPresentation::cyclic(f7(), 1, &["t1"]).unwrap();
        let b = WeylPresentation::cyclic(f7(), 1, &["d1"]).unwrap();
        let s = a.direct_sum(&b).unwrap();
        let c = char_variety(&s).unwrap();
        assert_eq!(c.ideal_strings().unwrap(), vec!["t1*xi1"]);
    }

    #[test]
    fn relabel_renames_level_variables() {
        let r = level_relabel(f7(), 2, 2, &["t1*xi1_m", "xi2_2"]).unwrap();
        let s: Vec<String> = r.iter().map(|p| p.to_string()).collect();
        assert_eq!(s, vec!["t1*xi1", "xi2"]);
        assert!(matches!(
            level_relabel(f7(), 1, 2, &["xi1"]),
            Err(Error::UndeclaredVariable(_))
        ));
    }

    #[test]
    fn localization_tests() {
        let ring = PolyRing::cotangent(f7(), 1);
        let c = CharVariety::from_ideal(&ring, 1, IdealHandle::parse(&ring, &["t1*xi1"]).unwrap(), vec![0]).unwrap();
        assert!(!localization_support_test(&c, &ring.parse("t1").unwrap()).unwrap());
        let pt = CharVariety::from_ideal(&ring, 1, IdealHandle::parse(&ring, &["t1", "xi1"]).unwrap(), vec![0]).unwrap();
        assert!(localization_support_test(&pt, &ring.parse("t1").unwrap()).unwrap());
        assert!(matches!(
            localization_support_test(&c, &ring.parse("xi1 + 1").unwrap()),
            Err(Error::NotHomogeneous(_))
        ));
    }
}
