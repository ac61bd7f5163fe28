//! Cotangent geometry: charts, the canonical 1-form, conormal ideals of
//! coordinate subvarieties, isotropy and Lagrangian tests, and the
//! containment of characteristic varieties of log-induced modules in the
//! union of conormals of the divisor strata.

use crate::algebra::Algebra;
use crate::charvar::{self, CharVariety};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gb;
use crate::ideal::{self, IdealHandle};
use crate::monomial::{ModuleOrder, Monomial, MonomialOrder};
use crate::poly::{PolyRing, Polynomial};
use crate::vector::{Term, Vector};
use crate::weyl::WeylPresentation;
use std::sync::Arc;

/// Coordinates `t_1..t_d, ξ_1..ξ_d` of `T*X`, with divisor components
/// `Z_i = V(t_i)` for `i ≤ r`.
#[derive(Debug, Clone)]
pub struct CotangentChart {
    pub d: usize,
    pub r: usize,
    pub ring: Arc<PolyRing>,
}

impl CotangentChart {
    pub fn new(field: Field, d: usize, r: usize) -> Result<Self> {
        if r > d {
            return Err(Error::DimensionMismatch(format!("{r} log components in dimension {d}")));
        }
        Ok(CotangentChart {
            d,
            r,
            ring: PolyRing::cotangent(field, d),
        })
    }

    pub fn t(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.ring, i)
    }

    pub fn xi(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.ring, self.d + i)
    }
}

/// `Σ dt_coeff[i] dt_i + Σ dxi_coeff[i] dξ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm {
    pub dt: Vec<Polynomial>,
    pub dxi: Vec<Polynomial>,
}

impl OneForm {
    pub fn is_zero(&self) -> bool {
        self.dt.iter().chain(&self.dxi).all(|p| p.is_zero())
    }

    /// As an element of the free module with basis `dt_1..dt_d, dξ_1..dξ_d`.
    pub fn to_vector(&self, ord: &ModuleOrder) -> Vector {
        let field = self.dt.first().or(self.dxi.first()).map(|p| p.ring.field);
        let mut terms = Vec::new();
        for (j, p) in self.dt.iter().chain(&self.dxi).enumerate() {
            for t in &p.v.terms {
                terms.push(Term {
                    m: t.m.clone(),
                    pos: j as u32,
                    c: t.c,
                });
            }
        }
        match field {
            Some(f) => Vector::from_terms(terms, f, ord),
            None => Vector::zero(),
        }
    }
}

impl std::fmt::Display for OneForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (i, p) in self.dt.iter().enumerate() {
            if !p.is_zero() {
                parts.push(format!("({p})*dt{}", i + 1));
            }
        }
        for (i, p) in self.dxi.iter().enumerate() {
            if !p.is_zero() {
                parts.push(format!("({p})*dxi{}", i + 1));
            }
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

/// `α = Σ ξ_i dt_i`.
pub fn canonical_one_form(chart: &CotangentChart) -> OneForm {
    OneForm {
        dt: (0..chart.d).map(|i| chart.xi(i)).collect(),
        dxi: (0..chart.d).map(|_| Polynomial::zero(&chart.ring)).collect(),
    }
}

/// `Z = V(t_j : j ∈ S)` (0-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConormalSpec {
    pub s: Vec<usize>,
}

/// `(t_j, j ∈ S; ξ_i, i ∉ S)`.
pub fn conormal_ideal(chart: &CotangentChart, z: &ConormalSpec) -> Result<IdealHandle> {
    if let Some(&j) = z.s.iter().find(|&&j| j >= chart.d) {
        return Err(Error::DimensionMismatch(format!("coordinate {} out of range", j + 1)));
    }
    let gens = (0..chart.d)
        .map(|i| if z.s.contains(&i) { chart.t(i) } else { chart.xi(i) })
        .collect();
    IdealHandle::new(&chart.ring, gens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Isotropy {
    Isotropic,
    NotIsotropic,
    Indeterminate,
}

impl Isotropy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Isotropy::Isotropic => "isotropic",
            Isotropy::NotIsotropic => "not-isotropic",
            Isotropy::Indeterminate => "indeterminate",
        }
    }

    fn and(self, other: Isotropy) -> Isotropy {
        use Isotropy::*;
        match (self, other) {
            (NotIsotropic, _) | (_, NotIsotropic) => NotIsotropic,
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            _ => Isotropic,
        }
    }
}

/// Outcome of the isotropy test on one irreducible piece.
#[derive(Debug, Clone)]
pub struct IsotropyCertificate {
    /// Generators of the piece tested.
    pub piece: Vec<String>,
    /// The Jacobian minor whose nonvanishing locus was used.
    pub minor: Option<String>,
    pub verdict: Isotropy,
}

#[derive(Debug, Clone)]
pub struct IsotropyResult {
    pub verdict: Isotropy,
    pub certificates: Vec<IsotropyCertificate>,
}

fn derivative(p: &Polynomial, l: usize) -> Polynomial {
    let f = p.ring.field;
    let terms: Vec<Term> = p
        .v
        .terms
        .iter()
        .filter(|t| t.m.0[l] > 0)
        .map(|t| {
            let mut m = t.m.clone();
            let e = m.0[l];
            m.0[l] -= 1;
            Term {
                m,
                pos: 0,
                c: f.mul(t.c, f.from_u64(e as u64)),
            }
        })
        .collect();
    Polynomial {
        ring: p.ring.clone(),
        v: Vector::from_terms(terms, f, &p.ring.ideal_order()),
    }
}

fn determinant(m: &[Vec<Polynomial>], ring: &Arc<PolyRing>) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::constant(ring, 1);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Polynomial::zero(ring);
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != c)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = m[0][c].mul(&determinant(&minor, ring)).unwrap();
        acc = if c % 2 == 0 {
            acc.add(&term).unwrap()
        } else {
            acc.sub(&term).unwrap()
        };
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Whether `α` vanishes on the open set `V(E) ∩ D(h)`, tested as membership
/// of `α` in `E·Ω + Σ R dg` after inverting `h` (extra variable `z`,
/// relation `1 - z h`).
fn form_vanishes_on(
    chart: &CotangentChart,
    basis: &[Polynomial],
    h: &Polynomial,
    alpha: &OneForm,
) -> Result<bool> {
    let n = chart.ring.nvars();
    let field = chart.ring.field;
    let alg = Algebra::commutative(field, n + 1);
    let ord = ModuleOrder::top(MonomialOrder::DegRevLex, vec![0; n]);
    let lift = |p: &Polynomial, pos: usize| -> Vec<Term> {
        p.v.terms
            .iter()
            .map(|t| {
                let mut m = t.m.clone();
                m.0.push(0);
                Term {
                    m,
                    pos: pos as u32,
                    c: t.c,
                }
            })
            .collect()
    };
    let mut gens = Vec::new();
    for g in basis {
        for l in 0..n {
            gens.push(Vector::from_terms(lift(g, l), field, &ord));
        }
        let mut dg = Vec::new();
        for l in 0..n {
            dg.extend(lift(&derivative(g, l), l));
        }
        gens.push(Vector::from_terms(dg, field, &ord));
    }
    let mut zh = lift(h, 0);
    for t in &mut zh {
        t.m.0[n] += 1;
        t.c = field.neg(t.c);
    }
    zh.push(Term {
        m: Monomial::one(n + 1),
        pos: 0,
        c: 1,
    });
    let local = Vector::from_terms(zh, field, &ModuleOrder::ideal(MonomialOrder::DegRevLex));
    for l in 0..n {
        gens.push(local.map_positions(field, &ord, |_| l as u32));
    }
    let mut a = Vec::new();
    for (j, p) in alpha.dt.iter().chain(&alpha.dxi).enumerate() {
        a.extend(lift(p, j));
    }
    let a = Vector::from_terms(a, field, &ord);
    let basis = gb::groebner(&alg, &gens, &ord)?;
    Ok(gb::reduce(&alg, &a, &basis, &ord).is_zero())
}

/// Isotropy of a single (assumed irreducible) piece.
fn isotropy_of_piece(chart: &CotangentChart, e: &IdealHandle) -> Result<IsotropyCertificate> {
    let basis = e.groebner()?;
    let piece: Vec<String> = basis.iter().map(|g| g.to_string()).collect();
    if basis.iter().any(|g| g.is_constant() && !g.is_zero()) {
        return Err(Error::Precondition("isotropy of the empty variety".into()));
    }
    let n = chart.ring.nvars();
    let dim = e.dim()?;
    let c = n as i64 - dim;
    let alpha = canonical_one_form(chart);
    if c == 0 {
        let one = Polynomial::constant(&chart.ring, 1);
        let v = form_vanishes_on(chart, &basis, &one, &alpha)?;
        return Ok(IsotropyCertificate {
            piece,
            minor: Some("1".into()),
            verdict: if v { Isotropy::Isotropic } else { Isotropy::NotIsotropic },
        });
    }
    let c = c as usize;
    let jac: Vec<Vec<Polynomial>> = basis
        .iter()
        .map(|g| (0..n).map(|l| derivative(g, l)).collect())
        .collect();
    for rows in combinations(basis.len(), c) {
        for cols in combinations(n, c) {
            let m: Vec<Vec<Polynomial>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&l| jac[r][l].clone()).collect())
                .collect();
            let h = determinant(&m, &chart.ring);
            if h.is_zero() || e.radical_member(&h)? {
                continue;
            }
            let v = form_vanishes_on(chart, &basis, &h, &alpha)?;
            return Ok(IsotropyCertificate {
                piece,
                minor: Some(h.to_string()),
                verdict: if v { Isotropy::Isotropic } else { Isotropy::NotIsotropic },
            });
        }
    }
    Ok(IsotropyCertificate {
        piece,
        minor: None,
        verdict: Isotropy::Indeterminate,
    })
}

fn prime_of(chart: &CotangentChart, comp: &[usize]) -> Result<IdealHandle> {
    IdealHandle::new(
        &chart.ring,
        comp.iter().map(|&i| Polynomial::var(&chart.ring, i)).collect(),
    )
}

/// Does `α` vanish on a dense open subset of `V(E)`? Monomial ideals are
/// tested component by component.
pub fn isotropy_test(e: &IdealHandle, chart: &CotangentChart) -> Result<IsotropyResult> {
    if e.is_unit()? {
        return Err(Error::Precondition("isotropy of the empty variety".into()));
    }
    let pieces: Vec<IdealHandle> = if e.is_monomial()? {
        e.monomial_components()?
            .iter()
            .map(|c| prime_of(chart, c))
            .collect::<Result<_>>()?
    } else {
        vec![e.clone()]
    };
    let mut verdict = Isotropy::Isotropic;
    let mut certificates = Vec::new();
    for p in &pieces {
        let cert = isotropy_of_piece(chart, p)?;
        verdict = verdict.and(cert.verdict);
        certificates.push(cert);
    }
    Ok(IsotropyResult {
        verdict,
        certificates,
    })
}

#[derive(Debug, Clone)]
pub struct LagrangianReport {
    pub dim: i64,
    /// Pure of codimension `d`; `None` when neither components nor an Ext
    /// certificate decide it.
    pub pure: Option<bool>,
    pub isotropic: Isotropy,
    /// `None` when indeterminate.
    pub lagrangian: Option<bool>,
    pub isotropy: IsotropyResult,
}

/// Isotropic and purely of codimension `d`. `certified_codim` is the codim
/// certified by Ext vanishing, if known.
pub fn lagrangian_test(
    e: &IdealHandle,
    chart: &CotangentChart,
    certified_codim: Option<usize>,
) -> Result<LagrangianReport> {
    let dim = e.dim()?;
    if dim < 0 {
        return Err(Error::Precondition("Lagrangian test of the empty variety".into()));
    }
    let d = chart.d;
    let pure = if e.is_monomial()? {
        Some(e.monomial_components()?.iter().all(|c| c.len() == d))
    } else if dim != d as i64 {
        Some(false)
    } else {
        certified_codim.map(|r| r == d)
    };
    let isotropy = isotropy_test(e, chart)?;
    let isotropic = isotropy.verdict;
    let lagrangian = match (pure, isotropic) {
        (Some(false), _) | (_, Isotropy::NotIsotropic) => Some(false),
        (Some(true), Isotropy::Isotropic) => Some(true),
        _ => None,
    };
    Ok(LagrangianReport {
        dim,
        pure,
        isotropic,
        lagrangian,
        isotropy,
    })
}

/// Lagrangian test for a characteristic variety.
pub fn lagrangian_test_car(
    c: &CharVariety,
    chart: &CotangentChart,
    certified_codim: Option<usize>,
) -> Result<LagrangianReport> {
    lagrangian_test(&c.ideal, chart, certified_codim)
}

/// `I(∪_{I ⊆ {1..r}} T*_{Z_I} X)`, by iterated intersection.
pub fn union_ideal(chart: &CotangentChart) -> Result<IdealHandle> {
    let mut acc: Option<IdealHandle> = None;
    for k in 0..=chart.r {
        for s in combinations(chart.r, k) {
            let c = conormal_ideal(chart, &ConormalSpec { s })?;
            acc = Some(match acc {
                None => c,
                Some(prev) => prev.intersect(&c)?,
            });
        }
    }
    Ok(acc.expect("the empty stratum set always contributes X"))
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub generator: String,
    pub member: bool,
    /// Smallest power of the generator found in the characteristic ideal.
    pub power: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct ContainmentReport {
    pub contained: bool,
    pub union_ideal: Vec<String>,
    pub car: CharVariety,
    pub witnesses: Vec<Witness>,
}

pub const WITNESS_POWER_LIMIT: u32 = 8;

/// `|Car(M)| ⊆ ∪_I T*_{Z_I} X`, decided generator by generator as radical
/// membership in the characteristic ideal.
pub fn log_containment_check(m: &WeylPresentation, chart: &CotangentChart) -> Result<ContainmentReport> {
    if chart.r == 0 && m.log.is_some_and(|l| l.r > 0) {
        return Err(Error::Precondition("chart declares no log components for a log-induced module".into()));
    }
    if m.d != chart.d {
        return Err(Error::DimensionMismatch(format!("module in d={}, chart in d={}", m.d, chart.d)));
    }
    let car = charvar::char_variety(m)?;
    let j = union_ideal(chart)?;
    let gens = j.groebner()?;
    let mut witnesses = Vec::new();
    let mut contained = true;
    for g in gens.iter() {
        let member = car.ideal.radical_member(g)?;
        let power = if member {
            car.ideal.power_witness(g, WITNESS_POWER_LIMIT)?
        } else {
            None
        };
        contained &= member;
        witnesses.push(Witness {
            generator: g.to_string(),
            member,
            power,
        });
    }
    Ok(ContainmentReport {
        contained,
        union_ideal: gens.iter().map(|g| g.to_string()).collect(),
        car,
        witnesses,
    })
}

/// Intersection of two ideals of the chart ring (exposed for tests).
pub fn intersect(chart: &CotangentChart, a: &IdealHandle, b: &IdealHandle) -> Result<IdealHandle> {
    let av: Vec<Vector> = a.generators().iter().map(|p| p.v.clone()).collect();
    let bv: Vec<Vector> = b.generators().iter().map(|p| p.v.clone()).collect();
    Ok(IdealHandle::from_vectors(&chart.ring, &ideal::intersect_raw(&chart.ring, &av, &bv)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(d: usize, r: usize) -> CotangentChart {
        CotangentChart::new(Field::new(7).unwrap(), d, r).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canonical_one_form(&chart(1, 0)).to_string(), "(xi1)*dt1");
        assert_eq!(
            canonical_one_form(&chart(2, 0)).to_string(),
            "(xi1)*dt1 + (xi2)*dt2"
        );
        assert!(canonical_one_form(&chart(0, 0)).is_zero());
    }

    #[test]
    fn conormal_ideals() {
        let c = chart(2, 0);
        let zero = conormal_ideal(&c, &ConormalSpec { s: vec![] }).unwrap();
        let mut s0 = zero.to_strings().unwrap();
        s0.sort();
        assert_eq!(s0, vec!["xi1", "xi2"]);
        let z = conormal_ideal(&c, &ConormalSpec { s: vec![1] }).unwrap();
        let mut s = z.to_strings().unwrap();
        s.sort();
        assert_eq!(s, vec!["t2", "xi1"]);
    }

    #[test]
    fn isotropy_verdicts() {
        let c = chart(1, 0);
        let e = IdealHandle::parse(&c.ring, &["xi1 - 1"]).unwrap();
        assert_eq!(isotropy_test(&e, &c).unwrap().verdict, Isotropy::NotIsotropic);
        let z = IdealHandle::parse(&c.ring, &["xi1"]).unwrap();
        assert_eq!(isotropy_test(&z, &c).unwrap().verdict, Isotropy::Isotropic);
        let curve = IdealHandle::parse(&c.ring, &["t1*xi1 - 1"]).unwrap();
        // α = ξ dt restricted to tξ = 1 is dt/t ≠ 0
        assert_eq!(isotropy_test(&curve, &c).unwrap().verdict, Isotropy::NotIsotropic);
    }

    #[test]
    fn lagrangian_examples() {
        let c = chart(1, 0);
        let e = IdealHandle::parse(&c.ring, &["t1*xi1"]).unwrap();
        assert_eq!(lagrangian_test(&e, &c, None).unwrap().lagrangian, Some(true));
        let c2 = chart(2, 0);
        let h = IdealHandle::parse(&c2.ring, &["xi1"]).unwrap();
        assert_eq!(lagrangian_test(&h, &c2, None).unwrap().lagrangian, Some(false));
    }

    #[test]
    fn union_for_one_log_component() {
        let c = chart(2, 1);
        let j = union_ideal(&c).unwrap();
        let mut s = j.to_strings().unwrap();
        s.sort();
        assert_eq!(s, vec!["t1*xi1", "xi2"]);
    }
}
