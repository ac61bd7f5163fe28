//! Good filtered modules over a positively filtered ring, their morphisms,
//! strictness, induced filtrations, good resolutions, filtered Ext and
//! filtered complexes of vector spaces.
//!
//! Two rings are supported: a polynomial ring filtered by total degree and
//! the Weyl algebra filtered by the order of operators. In both cases the
//! filtration is given by a weight vector on the variables, `D_0` is the
//! polynomial ring in the weight-0 variables, and `gr D` is the commutative
//! polynomial ring with the same variables.

mod exact;
mod fcomplex;
mod level;
mod ops;
mod resolution;
mod strict;

pub use exact::{check_exact_triple, induced_ker_coker, ExactTripleReport, InducedKerCoker};
pub use fcomplex::{filtered_complex_homology, FilteredComplex, SubquotientWitness};
pub use resolution::{
    filtered_ext, good_resolution, DegreeRanks, FilteredExt, GoodResolution, GrResolutionReport,
    HomComparison,
};
pub use strict::{is_strict, StrictnessReport};

use crate::algebra::Algebra;
use crate::complex::{self, grading};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gb;
use crate::graded::GradedPresentation;
use crate::monomial::{ModuleOrder, MonomialOrder};
use crate::poly::{format_terms, PolyRing};
use crate::vector::{apply_map, Vector};
use crate::weyl::{self, WeylPresentation};
use std::sync::{Arc, OnceLock};

pub const DEFAULT_SLACK: i64 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilteredRing {
    /// `k[x_1..x_n]` filtered by total degree.
    Degree { field: Field, nvars: usize },
    /// `k[t]⟨∂⟩` in `d` variables filtered by order.
    Order { field: Field, d: usize },
}

impl FilteredRing {
    pub fn degree(field: Field, nvars: usize) -> Self {
        FilteredRing::Degree { field, nvars }
    }

    pub fn order(field: Field, d: usize) -> Self {
        FilteredRing::Order { field, d }
    }

    pub fn field(&self) -> Field {
        match *self {
            FilteredRing::Degree { field, .. } | FilteredRing::Order { field, .. } => field,
        }
    }

    pub fn nvars(&self) -> usize {
        match *self {
            FilteredRing::Degree { nvars, .. } => nvars,
            FilteredRing::Order { d, .. } => 2 * d,
        }
    }

    pub fn algebra(&self) -> Algebra {
        match *self {
            FilteredRing::Degree { field, nvars } => Algebra::commutative(field, nvars),
            FilteredRing::Order { field, d } => Algebra::weyl(field, d),
        }
    }

    pub fn mono(&self) -> MonomialOrder {
        match *self {
            FilteredRing::Degree { nvars, .. } => MonomialOrder::Weighted(vec![1; nvars]),
            FilteredRing::Order { d, .. } => weyl::weyl_order(d),
        }
    }

    pub fn weights(&self) -> Vec<u32> {
        grading(&self.mono(), self.nvars())
    }

    pub fn names(&self) -> Vec<String> {
        match *self {
            FilteredRing::Degree { nvars, .. } => (1..=nvars).map(|i| format!("x{i}")).collect(),
            FilteredRing::Order { d, .. } => weyl::weyl_names(d),
        }
    }

    /// `gr D` with the same weights as a grading.
    pub fn gr_ring(&self) -> Arc<PolyRing> {
        match *self {
            FilteredRing::Degree { field, .. } => PolyRing::new(field, self.names(), self.mono()),
            FilteredRing::Order { field, d } => weyl::symbol_ring(field, d),
        }
    }

    pub fn gr_algebra(&self) -> Algebra {
        Algebra::commutative(self.field(), self.nvars())
    }

    /// Parses a ring element.
    pub fn parse(&self, text: &str) -> Result<Vector> {
        match *self {
            FilteredRing::Degree { .. } => Ok(self.gr_ring().parse(text)?.v),
            FilteredRing::Order { field, d } => weyl::parse_operator(field, d, text),
        }
    }

    pub fn format(&self, v: &Vector) -> String {
        format_terms(self.field(), &self.names(), v)
    }
}

/// `(L, L_i) / R` with the image filtration, `L = ⊕ D(n_j)`.
#[derive(Debug, Clone)]
pub struct GoodFilteredModule {
    pub ring: FilteredRing,
    /// The `n` of each `D(n)`; its generator sits in filtration degree `-n`.
    pub shifts: Vec<i64>,
    pub relations: Vec<Vector>,
    gb: OnceLock<Vec<Vector>>,
}

impl PartialEq for GoodFilteredModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.shifts == other.shifts && self.relations == other.relations
    }
}

impl GoodFilteredModule {
    pub fn new(ring: FilteredRing, shifts: Vec<i64>, relations: Vec<Vector>) -> Self {
        let ord = ModuleOrder::top(ring.mono(), shifts.iter().map(|s| -s).collect());
        let relations = relations
            .iter()
            .map(|r| r.resort(ring.field(), &ord))
            .filter(|r| !r.is_zero())
            .collect();
        GoodFilteredModule {
            ring,
            shifts,
            relations,
            gb: OnceLock::new(),
        }
    }

    pub fn free(ring: FilteredRing, shifts: Vec<i64>) -> Self {
        Self::new(ring, shifts, vec![])
    }

    pub fn zero(ring: FilteredRing) -> Self {
        Self::new(ring, vec![], vec![])
    }

    /// `D / Σ D·P_k` from element strings.
    pub fn cyclic(ring: FilteredRing, gens: &[&str]) -> Result<Self> {
        let rels = gens.iter().map(|g| ring.parse(g)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ring, vec![0], rels))
    }

    pub fn from_weyl(p: &WeylPresentation) -> Self {
        Self::new(FilteredRing::order(p.field, p.d), p.shifts.clone(), p.relations.clone())
    }

    pub fn to_weyl(&self) -> Result<WeylPresentation> {
        match self.ring {
            FilteredRing::Order { field, d } => Ok(WeylPresentation::new(
                field,
                d,
                self.shifts.clone(),
                self.relations.clone(),
            )),
            FilteredRing::Degree { .. } => {
                Err(Error::ContextMismatch("module over a polynomial ring".into()))
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    /// Filtration degrees of the generators.
    pub fn degrees(&self) -> Vec<i64> {
        self.shifts.iter().map(|s| -s).collect()
    }

    pub fn order(&self) -> ModuleOrder {
        ModuleOrder::top(self.ring.mono(), self.degrees())
    }

    pub fn algebra(&self) -> Algebra {
        self.ring.algebra()
    }

    /// Reduced Gröbner basis of the relations for the filtration order.
    pub fn groebner(&self) -> Result<&[Vector]> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let g = gb::groebner(&self.algebra(), &self.relations, &self.order())?;
        Ok(self.gb.get_or_init(|| g))
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(gb::is_full(self.groebner()?, self.rank()))
    }

    /// Normal form of an element of `L`.
    pub fn normal_form(&self, v: &Vector) -> Result<Vector> {
        Ok(gb::reduce(&self.algebra(), v, self.groebner()?, &self.order()))
    }

    /// Filtration degree of an element of `L` (`i64::MIN` for zero).
    pub fn weight_of(&self, v: &Vector) -> i64 {
        complex::weight_of(v, &self.ring.weights(), &self.degrees())
    }

    /// Smallest `i` with the class of `v` in `M_i` (`None` if it is zero).
    pub fn filtration_degree(&self, v: &Vector) -> Result<Option<i64>> {
        let nf = self.normal_form(v)?;
        Ok((!nf.is_zero()).then(|| self.weight_of(&nf)))
    }

    /// Largest `|shift|` plus largest relation degree plus `slack`.
    pub fn effective_bound(&self, slack: i64) -> i64 {
        let max_shift = self.shifts.iter().map(|s| s.abs()).max().unwrap_or(0);
        let max_rel = self
            .relations
            .iter()
            .map(|r| self.weight_of(r))
            .max()
            .unwrap_or(0)
            .max(0);
        max_shift + max_rel + slack
    }

    /// Lowest degree in which the module can be nonzero.
    pub fn lowest_degree(&self) -> i64 {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    pub fn relation_strings(&self) -> Vec<Vec<String>> {
        self.relations
            .iter()
            .map(|r| (0..self.rank()).map(|j| self.ring.format(&r.component(j))).collect())
            .collect()
    }

    /// The symbols of a Gröbner basis of the relations, as elements of
    /// `gr L` over `gr D`.
    pub fn symbols(&self) -> Result<Vec<Vector>> {
        let w = self.ring.weights();
        let deg = self.degrees();
        Ok(self.groebner()?.iter().map(|g| g.top_part(&w, &deg)).collect())
    }
}

/// `gr M` as the cokernel of the symbols of a Gröbner basis.
pub fn gr_module(m: &GoodFilteredModule) -> Result<GradedPresentation> {
    Ok(GradedPresentation::new(
        &m.ring.gr_ring(),
        m.shifts.clone(),
        m.symbols()?,
    ))
}

/// `u: M → N`, given by the images in `L_N` of the generators of `L_M`,
/// stored as normal forms modulo the relations of `N`.
#[derive(Debug, Clone)]
pub struct FilteredMorphism {
    pub source: GoodFilteredModule,
    pub target: GoodFilteredModule,
    pub images: Vec<Vector>,
}

impl FilteredMorphism {
    /// Checks that the map is well defined on the quotients and that
    /// `u(M_i) ⊆ N_i`.
    pub fn new(
        source: GoodFilteredModule,
        target: GoodFilteredModule,
        images: Vec<Vector>,
    ) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::ContextMismatch("morphism between different rings".into()));
        }
        if images.len() != source.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                source.rank()
            )));
        }
        if let Some(bad) = images
            .iter()
            .flat_map(|v| v.terms.iter())
            .find(|t| t.pos as usize >= target.rank())
        {
            return Err(Error::DimensionMismatch(format!(
                "image component {} in a module of rank {}",
                bad.pos + 1,
                target.rank()
            )));
        }
        let alg = source.algebra();
        let tord = target.order();
        let images: Vec<Vector> = images
            .iter()
            .map(|v| target.normal_form(&v.resort(alg.field, &tord)))
            .collect::<Result<_>>()?;
        for r in source.relations.iter() {
            let img = apply_map(&alg, r, &images, &tord);
            if !target.normal_form(&img)?.is_zero() {
                return Err(Error::NotWellDefined(format!(
                    "a relation of the source maps to a nonzero element of degree {}",
                    target.weight_of(&target.normal_form(&img)?)
                )));
            }
        }
        let deg = source.degrees();
        for (j, v) in images.iter().enumerate() {
            if !v.is_zero() && target.weight_of(v) > deg[j] {
                return Err(Error::NotFiltered(format!(
                    "generator {} of degree {} maps to degree {}",
                    j + 1,
                    deg[j],
                    target.weight_of(v)
                )));
            }
        }
        Ok(FilteredMorphism {
            source,
            target,
            images,
        })
    }

    /// Images given as strings, one per source generator, entries
    /// separated by commas.
    pub fn parse(
        source: GoodFilteredModule,
        target: GoodFilteredModule,
        rows: &[Vec<&str>],
    ) -> Result<Self> {
        let ring = source.ring.clone();
        let ord = target.order();
        let images = rows
            .iter()
            .map(|row| {
                let entries = row.iter().map(|e| ring.parse(e)).collect::<Result<Vec<_>>>()?;
                Ok(Vector::from_entries(&entries, ring.field(), &ord))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, images)
    }

    pub fn identity(m: &GoodFilteredModule) -> Result<Self> {
        let nv = m.ring.nvars();
        Self::new(m.clone(), m.clone(), (0..m.rank()).map(|j| Vector::unit(nv, j)).collect())
    }

    pub fn zero(source: &GoodFilteredModule, target: &GoodFilteredModule) -> Result<Self> {
        Self::new(source.clone(), target.clone(), vec![Vector::zero(); source.rank()])
    }

    /// `e_j ↦ e_j` between two presentations of the same rank.
    pub fn on_generators(source: &GoodFilteredModule, target: &GoodFilteredModule) -> Result<Self> {
        if source.rank() != target.rank() {
            return Err(Error::DimensionMismatch("ranks differ".into()));
        }
        let nv = source.ring.nvars();
        Self::new(
            source.clone(),
            target.clone(),
            (0..source.rank()).map(|j| Vector::unit(nv, j)).collect(),
        )
    }

    /// `v ∘ self`.
    pub fn then(&self, v: &FilteredMorphism) -> Result<Self> {
        if !same_presentation(&self.target, &v.source) {
            return Err(Error::DimensionMismatch("morphisms are not composable".into()));
        }
        let alg = self.source.algebra();
        let ord = v.target.order();
        let images = self
            .images
            .iter()
            .map(|x| apply_map(&alg, x, &v.images, &ord))
            .collect();
        Self::new(self.source.clone(), v.target.clone(), images)
    }

    /// `gr u`: the degree-`δ_j` part of each image.
    pub fn gr_images(&self) -> Vec<Vector> {
        let w = self.source.ring.weights();
        let tdeg = self.target.degrees();
        let sdeg = self.source.degrees();
        self.images
            .iter()
            .enumerate()
            .map(|(j, v)| Vector {
                terms: v
                    .terms
                    .iter()
                    .filter(|t| t.m.weighted_degree(&w) + tdeg[t.pos as usize] == sdeg[j])
                    .cloned()
                    .collect(),
            })
            .collect()
    }

    pub fn image_strings(&self) -> Vec<Vec<String>> {
        self.images
            .iter()
            .map(|v| {
                (0..self.target.rank())
                    .map(|j| self.target.ring.format(&v.component(j)))
                    .collect()
            })
            .collect()
    }
}

pub(crate) fn same_presentation(a: &GoodFilteredModule, b: &GoodFilteredModule) -> bool {
    a == b
}

/// Two presentations of the same rank define the same filtered module
/// (with `e_j ↔ e_j`) iff the identity on generators is a strict
/// monomorphism in both directions.
pub fn same_filtered_module(a: &GoodFilteredModule, b: &GoodFilteredModule) -> Result<bool> {
    if a.rank() != b.rank() || a.ring != b.ring {
        return Ok(false);
    }
    for (x, y) in [(a, b), (b, a)] {
        let u = match FilteredMorphism::on_generators(x, y) {
            Ok(u) => u,
            Err(Error::NotFiltered(_)) | Err(Error::NotWellDefined(_)) => return Ok(false),
            Err(e) => return Err(e),
        };
        let r = is_strict(&u, DEFAULT_SLACK)?;
        if !r.strict_mono() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weyl1() -> FilteredRing {
        FilteredRing::order(Field::new(7).unwrap(), 1)
    }

    #[test]
    fn gr_of_cyclic_modules() {
        let m = GoodFilteredModule::cyclic(weyl1(), &["t1*d1 - 3"]).unwrap();
        assert_eq!(gr_module(&m).unwrap().relation_strings(), vec![vec!["t1*xi1"]]);
        let m = GoodFilteredModule::cyclic(weyl1(), &["d1"]).unwrap();
        assert_eq!(gr_module(&m).unwrap().relation_strings(), vec![vec!["xi1"]]);
        let free = GoodFilteredModule::free(weyl1(), vec![2]);
        let g = gr_module(&free).unwrap();
        assert_eq!(g.shifts, vec![2]);
        assert!(g.relations.is_empty());
    }

    #[test]
    fn morphism_checks() {
        let r = weyl1();
        let d = GoodFilteredModule::free(r.clone(), vec![0]);
        let dm1 = GoodFilteredModule::free(r.clone(), vec![-1]);
        assert!(FilteredMorphism::parse(dm1.clone(), d.clone(), &[vec!["d1"]]).is_ok());
        assert!(matches!(
            FilteredMorphism::parse(d.clone(), d.clone(), &[vec!["d1"]]),
            Err(Error::NotFiltered(_))
        ));
        let q = GoodFilteredModule::cyclic(r.clone(), &["d1"]).unwrap();
        assert!(matches!(
            FilteredMorphism::parse(q.clone(), d.clone(), &[vec!["1"]]),
            Err(Error::NotWellDefined(_))
        ));
        assert!(FilteredMorphism::parse(d, q, &[vec!["1"]]).is_ok());
    }

    #[test]
    fn filtration_degree_of_classes() {
        let m = GoodFilteredModule::cyclic(weyl1(), &["d1^2 - t1"]).unwrap();
        let x = m.ring.parse("d1^3").unwrap();
        // ∂³ ≡ ∂t = t∂ + 1, of order 1
        assert_eq!(m.filtration_degree(&x).unwrap(), Some(1));
    }
}
