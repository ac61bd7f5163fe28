//! The level-0 ring of differential operators `F_p[t_1..t_d]⟨∂_1..∂_d⟩`
//! with its order filtration, presentations of left (and, through the
//! anti-involution, right) modules, resolutions, Ext and log-induced
//! modules.

use crate::algebra::Algebra;
use crate::complex::{self, FreeResolution};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gb;
use crate::monomial::{ModuleOrder, Monomial, MonomialOrder};
use crate::parse;
use crate::poly::{format_terms, PolyRing, Polynomial};
use crate::vector::{Term, Vector};
use std::fmt;
use std::sync::Arc;

/// Variable names `t1..td, d1..dd`.
pub fn weyl_names(d: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=d).map(|i| format!("t{i}")).collect();
    names.extend((1..=d).map(|i| format!("d{i}")));
    names
}

/// The order filtration as a weighted monomial order.
pub fn weyl_order(d: usize) -> MonomialOrder {
    MonomialOrder::cotangent(d)
}

/// Parses an operator; `l<i>` denotes the log derivation `t<i>*d<i>`.
pub fn parse_operator(field: Field, d: usize, text: &str) -> Result<Vector> {
    let alg = Algebra::weyl(field, d);
    let ord = ModuleOrder::ideal(weyl_order(d));
    let names = weyl_names(d);
    let n = 2 * d;
    parse::parse_expr(text, &alg, &ord, &|name| {
        if let Some(i) = names.iter().position(|x| x == name) {
            return Some(Vector::monomial(Monomial::var(n, i), 0, 1));
        }
        let i: usize = name.strip_prefix('l')?.parse().ok()?;
        if i == 0 || i > d {
            return None;
        }
        let mut m = Monomial::one(n);
        m.0[i - 1] = 1;
        m.0[d + i - 1] = 1;
        Some(Vector::monomial(m, 0, 1))
    })
}

pub fn format_operator(field: Field, d: usize, v: &Vector) -> String {
    format_terms(field, &weyl_names(d), v)
}

/// A differential operator in normal form `Σ c t^a ∂^b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub field: Field,
    pub d: usize,
    pub v: Vector,
}

impl WeylElement {
    pub fn parse(field: Field, d: usize, text: &str) -> Result<Self> {
        Ok(WeylElement {
            field,
            d,
            v: parse_operator(field, d, text)?,
        })
    }

    pub fn from_vector(field: Field, d: usize, v: Vector) -> Self {
        let v = v.map_positions(field, &ModuleOrder::ideal(weyl_order(d)), |_| 0);
        WeylElement { field, d, v }
    }

    pub fn t(field: Field, d: usize, i: usize) -> Self {
        Self::from_vector(field, d, Vector::monomial(Monomial::var(2 * d, i), 0, 1))
    }

    pub fn partial(field: Field, d: usize, i: usize) -> Self {
        Self::from_vector(field, d, Vector::monomial(Monomial::var(2 * d, d + i), 0, 1))
    }

    /// The log derivation `t_i ∂_i`.
    pub fn log_partial(field: Field, d: usize, i: usize) -> Self {
        Self::t(field, d, i).mul(&Self::partial(field, d, i)).unwrap()
    }

    pub fn algebra(&self) -> Algebra {
        Algebra::weyl(self.field, self.d)
    }

    fn ord(&self) -> ModuleOrder {
        ModuleOrder::ideal(weyl_order(self.d))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.field != other.field {
            return Err(Error::DimensionMismatch(format!(
                "operators over d={} and d={}",
                self.d, other.d
            )));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(WeylElement {
            field: self.field,
            d: self.d,
            v: self.v.right_mul(&self.algebra(), &other.v, &self.ord()),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(WeylElement {
            field: self.field,
            d: self.d,
            v: self.v.add(&other.v, self.field, &self.ord()),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(WeylElement {
            field: self.field,
            d: self.d,
            v: self.v.sub(&other.v, self.field, &self.ord()),
        })
    }

    /// Maximal total `∂`-degree of a term; `-1` for zero.
    pub fn order(&self) -> i64 {
        let w = crate::complex::grading(&weyl_order(self.d), 2 * self.d);
        self.v.weight(&w, &[0]).unwrap_or(-1)
    }

    /// Top-order part with `∂_i ↦ ξ_i`, in `k[t, ξ]`.
    pub fn principal_symbol(&self) -> Result<Polynomial> {
        if self.is_zero() {
            return Err(Error::ZeroOperator);
        }
        let ring = PolyRing::cotangent(self.field, self.d);
        let w = crate::complex::grading(&weyl_order(self.d), 2 * self.d);
        Ok(Polynomial::from_vector(&ring, &self.v.top_part(&w, &[0])))
    }

    pub fn anti_involution(&self) -> Self {
        WeylElement {
            field: self.field,
            d: self.d,
            v: self.v.anti_involution(&self.algebra(), &self.ord()),
        }
    }

    /// Action on a polynomial `f ∈ F_p[t]`, given as a Weyl vector in the
    /// `t` variables only.
    pub fn act(&self, f: &Vector) -> Vector {
        let field = self.field;
        let d = self.d;
        let ord = self.ord();
        let mut acc = Vector::zero();
        for term in &self.v.terms {
            // apply ∂^b then multiply by c t^a
            let mut g = f.clone();
            for i in 0..d {
                for _ in 0..term.m.0[d + i] {
                    g = differentiate(field, &g, i, &ord);
                }
            }
            let mut ta = Monomial::one(2 * d);
            ta.0[..d].copy_from_slice(&term.m.0[..d]);
            let h = Vector::from_terms(
                g.terms
                    .iter()
                    .map(|t| Term {
                        m: t.m.mul(&ta),
                        pos: 0,
                        c: field.mul(t.c, term.c),
                    })
                    .collect(),
                field,
                &ord,
            );
            acc = acc.add(&h, field, &ord);
        }
        acc
    }
}

fn differentiate(field: Field, f: &Vector, i: usize, ord: &ModuleOrder) -> Vector {
    Vector::from_terms(
        f.terms
            .iter()
            .filter(|t| t.m.0[i] > 0)
            .map(|t| {
                let mut m = t.m.clone();
                let e = m.0[i];
                m.0[i] -= 1;
                Term {
                    m,
                    pos: 0,
                    c: field.mul(t.c, field.from_u64(e as u64)),
                }
            })
            .collect(),
        field,
        ord,
    )
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_operator(self.field, self.d, &self.v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Records that a presentation was induced from a logarithmic connection
/// along `t_1 .. t_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogMarker {
    pub r: usize,
}

/// `D^n(shifts) / relations`. For a left module the relations generate a
/// left submodule; for a right module they generate a right submodule.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylPresentation {
    pub field: Field,
    pub d: usize,
    /// The `n` of each summand `D(n)`; its generator has filtration degree `-n`.
    pub shifts: Vec<i64>,
    pub relations: Vec<Vector>,
    pub side: Side,
    pub log: Option<LogMarker>,
}

impl WeylPresentation {
    pub fn new(field: Field, d: usize, shifts: Vec<i64>, relations: Vec<Vector>) -> Self {
        let ord = ModuleOrder::top(weyl_order(d), shifts.iter().map(|s| -s).collect());
        let relations = relations
            .iter()
            .map(|r| r.resort(field, &ord))
            .filter(|r| !r.is_zero())
            .collect();
        WeylPresentation {
            field,
            d,
            shifts,
            relations,
            side: Side::Left,
            log: None,
        }
    }

    /// `D / Σ D P_k` from operator strings.
    pub fn cyclic(field: Field, d: usize, ops: &[&str]) -> Result<Self> {
        let rels = ops
            .iter()
            .map(|s| parse_operator(field, d, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(field, d, vec![0], rels))
    }

    pub fn free(field: Field, d: usize, shifts: Vec<i64>) -> Self {
        Self::new(field, d, shifts, vec![])
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.shifts.iter().map(|s| -s).collect()
    }

    pub fn algebra(&self) -> Algebra {
        Algebra::weyl(self.field, self.d)
    }

    pub fn mono(&self) -> MonomialOrder {
        weyl_order(self.d)
    }

    pub fn order(&self) -> ModuleOrder {
        ModuleOrder::top(self.mono(), self.degrees())
    }

    /// Direct sum, with block-diagonal relations.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.d != other.d || self.field != other.field || self.side != other.side {
            return Err(Error::DimensionMismatch("direct sum of unlike presentations".into()));
        }
        let n = self.rank() as u32;
        let mut shifts = self.shifts.clone();
        shifts.extend(&other.shifts);
        let mut rels = self.relations.clone();
        let tmp = ModuleOrder::top(self.mono(), vec![]);
        for r in &other.relations {
            rels.push(r.map_positions(self.field, &tmp, |p| p + n));
        }
        let mut out = Self::new(self.field, self.d, shifts, rels);
        out.side = self.side;
        Ok(out)
    }

    /// Relation rows rendered entrywise.
    pub fn relation_strings(&self) -> Vec<Vec<String>> {
        self.relations
            .iter()
            .map(|r| {
                (0..self.rank())
                    .map(|j| format_operator(self.field, self.d, &r.component(j)))
                    .collect()
            })
            .collect()
    }
}

/// A left Gröbner basis together with the principal symbols of its elements.
#[derive(Debug, Clone)]
pub struct WeylGb {
    pub basis: Vec<Vector>,
    /// Symbols as elements of `k[t, ξ]^rank`.
    pub symbols: Vec<Vector>,
}

/// Left Gröbner basis of the relation module for the order filtration.
pub fn weyl_left_gb(p: &WeylPresentation) -> Result<WeylGb> {
    if p.side != Side::Left {
        return Err(Error::Precondition("left Gröbner basis of a right presentation".into()));
    }
    let basis = gb::groebner(&p.algebra(), &p.relations, &p.order())?;
    let symbols = symbols_of(&basis, p.d, &p.degrees());
    Ok(WeylGb { basis, symbols })
}

/// Top filtration-degree parts, read as commutative vectors.
pub fn symbols_of(basis: &[Vector], d: usize, degrees: &[i64]) -> Vec<Vector> {
    let w = crate::complex::grading(&weyl_order(d), 2 * d);
    basis.iter().map(|g| g.top_part(&w, degrees)).collect()
}

#[derive(Debug, Clone)]
pub struct WeylResolution {
    pub field: Field,
    pub d: usize,
    pub res: FreeResolution,
}

impl WeylResolution {
    pub fn shifts(&self) -> Vec<Vec<i64>> {
        self.res
            .degrees
            .iter()
            .map(|d| d.iter().map(|x| -x).collect())
            .collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.res.ranks()
    }

    pub fn compositions_vanish(&self) -> bool {
        complex::compositions_vanish(&Algebra::weyl(self.field, self.d), &weyl_order(self.d), &self.res)
    }

    /// Termwise principal symbols of the differentials.
    pub fn symbol_maps(&self) -> Vec<Vec<Vector>> {
        self.res
            .maps
            .iter()
            .enumerate()
            .map(|(s, m)| symbols_of(m, self.d, &self.res.degrees[s]))
            .collect()
    }
}

/// Strict resolution of a left presentation by shifted free modules.
pub fn weyl_resolve(p: &WeylPresentation, length_bound: i64) -> Result<WeylResolution> {
    if length_bound < 0 {
        return Err(Error::NegativeLength(length_bound));
    }
    if p.side != Side::Left {
        return Err(Error::Precondition("resolve a right presentation".into()));
    }
    let res = complex::resolve(
        &p.algebra(),
        &p.mono(),
        &p.degrees(),
        &p.relations,
        length_bound as usize,
    )?;
    Ok(WeylResolution {
        field: p.field,
        d: p.d,
        res,
    })
}

/// `Ext^s(M, D)` as a right presentation with its induced filtration.
pub fn weyl_ext(p: &WeylPresentation, s: i64) -> Result<WeylPresentation> {
    if s < 0 {
        return Err(Error::NegativeLength(s));
    }
    let res = weyl_resolve(p, s + 1)?;
    weyl_ext_from(&res, s as usize)
}

pub fn weyl_ext_from(res: &WeylResolution, s: usize) -> Result<WeylPresentation> {
    let alg = Algebra::weyl(res.field, res.d);
    let e = complex::ext(&alg, &weyl_order(res.d), &res.res, s)?;
    let left = WeylPresentation::new(res.field, res.d, e.degrees.iter().map(|x| -x).collect(), e.relations);
    Ok(swap_side(&left))
}

/// Applies the anti-involution `t ↦ t, ∂ ↦ -∂` to every relation and flips
/// the side tag.
pub fn swap_side(p: &WeylPresentation) -> WeylPresentation {
    let alg = p.algebra();
    let ord = p.order();
    WeylPresentation {
        field: p.field,
        d: p.d,
        shifts: p.shifts.clone(),
        relations: p.relations.iter().map(|r| r.anti_involution(&alg, &ord)).collect(),
        side: match p.side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        },
        log: p.log,
    }
}

/// Right presentation → left presentation.
pub fn transpose_side(p: &WeylPresentation) -> Result<WeylPresentation> {
    if p.side == Side::Left {
        return Err(Error::AlreadyLeft);
    }
    Ok(swap_side(p))
}

/// Square matrix over `F_p[t]`, entries as Weyl vectors in the `t` variables.
pub type TMatrix = Vec<Vec<Vector>>;

/// Result of [`log_induce`].
#[derive(Debug, Clone)]
pub struct LogInduced {
    pub presentation: WeylPresentation,
    /// Set when the induced actions fail to commute on the test truncation.
    pub integrability_warning: Option<String>,
}

pub const DEFAULT_INTEGRABILITY_TRUNCATION: u32 = 6;

/// `D^n` modulo `t_i∂_i e_j - Σ_k A_i[j,k] e_k` (`i ≤ r`) and
/// `∂_i e_j - Σ_k B_i[j,k] e_k` (`i > r`).
pub fn log_induce(
    field: Field,
    d: usize,
    n: usize,
    a: &[TMatrix],
    b: &[TMatrix],
    truncation: u32,
) -> Result<LogInduced> {
    let r = a.len();
    if r + b.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "{} log and {} plain matrices for d = {d}",
            r,
            b.len()
        )));
    }
    let mats: Vec<&TMatrix> = a.iter().chain(b.iter()).collect();
    for m in &mats {
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!("connection matrix is not {n}x{n}")));
        }
        for e in m.iter().flatten() {
            if e.terms.iter().any(|t| t.m.0[d..].iter().any(|&x| x > 0)) {
                return Err(Error::Precondition("connection entries must lie in F_p[t]".into()));
            }
        }
    }
    let ord = ModuleOrder::top(weyl_order(d), vec![0; n]);
    let mut rels = Vec::new();
    for (i, m) in mats.iter().enumerate() {
        let mut op = Monomial::one(2 * d);
        op.0[d + i] = 1;
        if i < r {
            op.0[i] = 1;
        }
        for j in 0..n {
            let mut terms = vec![Term {
                m: op.clone(),
                pos: j as u32,
                c: 1,
            }];
            for (k, entry) in m[j].iter().enumerate() {
                for t in &entry.terms {
                    terms.push(Term {
                        m: t.m.clone(),
                        pos: k as u32,
                        c: field.neg(t.c),
                    });
                }
            }
            rels.push(Vector::from_terms(terms, field, &ord));
        }
    }
    let mut presentation = WeylPresentation::new(field, d, vec![0; n], rels);
    presentation.log = Some(LogMarker { r });
    let integrability_warning = integrability_defect(field, d, n, r, &mats, truncation);
    Ok(LogInduced {
        presentation,
        integrability_warning,
    })
}

/// Applies the `i`-th derivation of the induced connection to `f e_j`.
fn connection_apply(
    field: Field,
    d: usize,
    r: usize,
    mats: &[&TMatrix],
    i: usize,
    v: &Vector,
    ord: &ModuleOrder,
) -> Vector {
    let alg = Algebra::weyl(field, d);
    let mut op = Monomial::one(2 * d);
    op.0[d + i] = 1;
    if i < r {
        op.0[i] = 1;
    }
    let opel = WeylElement::from_vector(field, d, Vector::monomial(op, 0, 1));
    let mut out = Vector::zero();
    for j in 0..mats[i].len() {
        let comp = v.component(j);
        let derived = opel.act(&comp).map_positions(field, ord, |_| j as u32);
        out = out.add(&derived, field, ord);
        // coefficient times the action on e_j; for t_i ∂_i this is f·A, for ∂_i f·B
        for (k, entry) in mats[i][j].iter().enumerate() {
            let prod = entry.left_mul(&alg, &comp, ord).map_positions(field, ord, |_| k as u32);
            out = out.add(&prod, field, ord);
        }
    }
    out
}

fn integrability_defect(
    field: Field,
    d: usize,
    n: usize,
    r: usize,
    mats: &[&TMatrix],
    truncation: u32,
) -> Option<String> {
    let ord = ModuleOrder::top(weyl_order(d), vec![0; n]);
    let w: Vec<u32> = (0..2 * d).map(|i| if i < d { 1 } else { 0 }).collect();
    let mut monos = Vec::new();
    for deg in 0..=truncation {
        for m in complex::monomials_with(&w, deg, 0, 2 * d) {
            monos.push(m);
        }
    }
    for i in 0..d {
        for k in (i + 1)..d {
            for m in &monos {
                for j in 0..n {
                    let v = Vector::monomial(m.clone(), j, 1);
                    let ik = connection_apply(field, d, r, mats, i, &connection_apply(field, d, r, mats, k, &v, &ord), &ord);
                    let ki = connection_apply(field, d, r, mats, k, &connection_apply(field, d, r, mats, i, &v, &ord), &ord);
                    if ik != ki {
                        return Some(format!(
                            "actions of directions {} and {} do not commute on {}·e{}",
                            i + 1,
                            k + 1,
                            crate::poly::format_monomial(&weyl_names(d), m),
                            j + 1
                        ));
                    }
                }
            }
        }
    }
    None
}

/// Convenience: the principal symbol ring `k[t, ξ]` for dimension `d`.
pub fn symbol_ring(field: Field, d: usize) -> Arc<PolyRing> {
    PolyRing::cotangent(field, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> Field {
        Field::new(7).unwrap()
    }

    fn op(d: usize, s: &str) -> WeylElement {
        WeylElement::parse(f7(), d, s).unwrap()
    }

    #[test]
    fn leibniz_products() {
        assert_eq!(op(1, "d1*t1").to_string(), "t1*d1 + 1");
        assert_eq!(op(1, "d1^2*t1"), op(1, "t1*d1^2 + 2*d1"));
        let f2 = Field::new(2).unwrap();
        let x = WeylElement::parse(f2, 1, "d1^2*t1").unwrap();
        assert_eq!(x.to_string(), "t1*d1^2");
    }

    #[test]
    fn log_variable_expands() {
        assert_eq!(op(2, "l2 - 3"), op(2, "t2*d2 - 3"));
        assert_eq!(WeylElement::log_partial(f7(), 2, 0), op(2, "t1*d1"));
    }

    #[test]
    fn principal_symbols() {
        assert_eq!(op(1, "t1*d1 - 2").principal_symbol().unwrap().to_string(), "t1*xi1");
        assert_eq!(op(1, "d1^2 + t1^3").principal_symbol().unwrap().to_string(), "xi1^2");
        assert_eq!(op(1, "d1*t1").principal_symbol().unwrap().to_string(), "t1*xi1");
        assert!(matches!(op(1, "0").principal_symbol(), Err(Error::ZeroOperator)));
    }

    #[test]
    fn gb_of_d_and_t_is_unit() {
        let p = WeylPresentation::cyclic(f7(), 1, &["d1", "t1"]).unwrap();
        let g = weyl_left_gb(&p).unwrap();
        assert_eq!(g.basis.len(), 1);
        assert!(g.basis[0].lead().unwrap().m.is_one());
    }

    #[test]
    fn koszul_shaped_resolution() {
        let p = WeylPresentation::cyclic(f7(), 2, &["d1", "d2"]).unwrap();
        let r = weyl_resolve(&p, 4).unwrap();
        assert_eq!(r.ranks(), vec![1, 2, 1]);
        assert_eq!(r.shifts(), vec![vec![0], vec![-1, -1], vec![-2]]);
        assert!(r.compositions_vanish());
    }

    #[test]
    fn ext_of_d_mod_dt() {
        let p = WeylPresentation::cyclic(f7(), 1, &["t1"]).unwrap();
        let e0 = weyl_ext(&p, 0).unwrap();
        assert_eq!(e0.rank(), 0);
        let e1 = weyl_ext(&p, 1).unwrap();
        assert_eq!(e1.side, Side::Right);
        let left = transpose_side(&e1).unwrap();
        let g = weyl_left_gb(&left).unwrap();
        assert_eq!(g.basis.len(), 1);
        assert_eq!(format_operator(f7(), 1, &g.basis[0]), "t1");
        assert!(matches!(transpose_side(&left), Err(Error::AlreadyLeft)));
    }

    #[test]
    fn kummer_log_induce() {
        let a = vec![vec![vec![parse_operator(f7(), 1, "2").unwrap()]]];
        let li = log_induce(f7(), 1, 1, &a, &[], DEFAULT_INTEGRABILITY_TRUNCATION).unwrap();
        assert!(li.integrability_warning.is_none());
        assert_eq!(li.presentation.relation_strings(), vec![vec!["t1*d1 - 2".to_string()]]);
    }

    #[test]
    fn non_integrable_connection_warns() {
        // ∂1 e = t2 e, ∂2 e = 0 is not flat: [∂2, ∂1] e = e
        let f = f7();
        let b1 = vec![vec![parse_operator(f, 2, "t2").unwrap()]];
        let b2 = vec![vec![parse_operator(f, 2, "0").unwrap()]];
        let li = log_induce(f, 2, 1, &[], &[b1, b2], 6).unwrap();
        assert!(li.integrability_warning.is_some());
    }

    #[test]
    fn action_matches_derivation() {
        let f = f7();
        let p = op(1, "d1*t1");
        let x2 = parse_operator(f, 1, "t1^2").unwrap();
        // ∂(t·t²) = 3t²
        assert_eq!(p.act(&x2), parse_operator(f, 1, "3*t1^2").unwrap());
    }
}
