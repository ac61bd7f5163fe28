//! Graded presentations over commutative polynomial rings, their free
//! resolutions and Ext modules.
//!
//! Shifts follow the usual twist convention: the generator of `R(n)` sits in
//! degree `-n`.

use crate::complex::{self, FreeResolution};
use crate::error::{Error, Result};
use crate::gb;
use crate::ideal;
use crate::monomial::ModuleOrder;
use crate::poly::{format_terms, PolyRing};
use crate::vector::Vector;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct GradedPresentation {
    pub ring: Arc<PolyRing>,
    pub shifts: Vec<i64>,
    /// Relation rows, elements of `R^rank`.
    pub relations: Vec<Vector>,
}

impl GradedPresentation {
    pub fn new(ring: &Arc<PolyRing>, shifts: Vec<i64>, relations: Vec<Vector>) -> Self {
        let ord = ModuleOrder::top(ring.order.clone(), shifts.iter().map(|s| -s).collect());
        let relations = relations
            .iter()
            .map(|r| r.resort(ring.field, &ord))
            .filter(|r| !r.is_zero())
            .collect();
        GradedPresentation {
            ring: ring.clone(),
            shifts,
            relations,
        }
    }

    /// `R / (gens)`.
    pub fn cyclic(ring: &Arc<PolyRing>, gens: &[Vector]) -> Self {
        Self::new(ring, vec![0], gens.to_vec())
    }

    pub fn free(ring: &Arc<PolyRing>, shifts: Vec<i64>) -> Self {
        Self::new(ring, shifts, vec![])
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.shifts.iter().map(|s| -s).collect()
    }

    pub fn order(&self) -> ModuleOrder {
        ModuleOrder::top(self.ring.order.clone(), self.degrees())
    }

    /// Every relation is homogeneous for the shifted grading.
    pub fn is_homogeneous(&self) -> bool {
        let w = self.ring.weights();
        let deg = self.degrees();
        self.relations.iter().all(|r| {
            let mut it = r
                .terms
                .iter()
                .map(|t| t.m.weighted_degree(&w) + deg[t.pos as usize]);
            match it.next() {
                None => true,
                Some(d0) => it.all(|d| d == d0),
            }
        })
    }

    pub fn groebner(&self) -> Result<Vec<Vector>> {
        gb::groebner(&self.ring.algebra(), &self.relations, &self.order())
    }

    /// Krull dimension of the module (`-1` for the zero module).
    pub fn dim(&self) -> Result<i64> {
        Ok(ideal::module_dim(&self.groebner()?, self.rank(), self.ring.nvars()))
    }

    /// Codimension, `None` for the zero module.
    pub fn codim(&self) -> Result<Option<i64>> {
        let d = self.dim()?;
        Ok((d >= 0).then(|| self.ring.nvars() as i64 - d))
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(gb::is_full(&self.groebner()?, self.rank()))
    }

    /// Relation rows rendered entrywise in the text syntax.
    pub fn relation_strings(&self) -> Vec<Vec<String>> {
        self.relations
            .iter()
            .map(|r| {
                (0..self.rank())
                    .map(|j| format_terms(self.ring.field, &self.ring.names, &r.component(j)))
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct GradedResolution {
    pub ring: Arc<PolyRing>,
    pub res: FreeResolution,
}

impl GradedResolution {
    /// Twists `n` of each free module (`R(n)` has its generator in degree `-n`).
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
        complex::compositions_vanish(&self.ring.algebra(), &self.ring.order, &self.res)
    }
}

/// Graded free resolution of `coker P` with at most `length_bound` maps.
pub fn comm_resolve(p: &GradedPresentation, length_bound: i64) -> Result<GradedResolution> {
    if length_bound < 0 {
        return Err(Error::NegativeLength(length_bound));
    }
    let res = complex::resolve(
        &p.ring.algebra(),
        &p.ring.order,
        &p.degrees(),
        &p.relations,
        length_bound as usize,
    )?;
    Ok(GradedResolution {
        ring: p.ring.clone(),
        res,
    })
}

#[derive(Debug, Clone)]
pub struct GradedExt {
    pub module: GradedPresentation,
    /// `None` when the Ext module is zero.
    pub codim: Option<i64>,
}

/// `Ext^r(coker P, R)` with its codimension.
pub fn comm_ext(p: &GradedPresentation, r: i64) -> Result<GradedExt> {
    if r < 0 {
        return Err(Error::NegativeLength(r));
    }
    let res = comm_resolve(p, r + 1)?;
    comm_ext_from(&res, r as usize)
}

pub fn comm_ext_from(res: &GradedResolution, r: usize) -> Result<GradedExt> {
    let e = complex::ext(&res.ring.algebra(), &res.ring.order, &res.res, r)?;
    let module = GradedPresentation::new(
        &res.ring,
        e.degrees.iter().map(|d| -d).collect(),
        e.relations,
    );
    let codim = module.codim()?;
    Ok(GradedExt { module, codim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::monomial::MonomialOrder;

    fn ring(n: usize) -> Arc<PolyRing> {
        let names = ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect();
        PolyRing::new(Field::new(7).unwrap(), names, MonomialOrder::DegRevLex)
    }

    #[test]
    fn principal_ideal_resolution() {
        let r = ring(1);
        let p = GradedPresentation::cyclic(&r, &[r.parse("x").unwrap().v]);
        let res = comm_resolve(&p, 3).unwrap();
        assert_eq!(res.ranks(), vec![1, 1]);
        assert_eq!(res.shifts(), vec![vec![0], vec![-1]]);
        let e1 = comm_ext(&p, 1).unwrap();
        assert_eq!(e1.codim, Some(1));
        assert_eq!(e1.module.relation_strings(), vec![vec!["x".to_string()]]);
        assert!(comm_ext(&p, 0).unwrap().codim.is_none());
    }

    #[test]
    fn free_module_has_no_higher_ext() {
        let r = ring(2);
        let p = GradedPresentation::free(&r, vec![0, 2]);
        assert_eq!(comm_resolve(&p, 2).unwrap().ranks(), vec![2]);
        let e0 = comm_ext(&p, 0).unwrap();
        assert_eq!(e0.module.rank(), 2);
        assert!(e0.module.relations.is_empty());
        assert!(comm_ext(&p, 1).unwrap().codim.is_none());
    }

    #[test]
    fn koszul_self_duality() {
        let r = ring(2);
        let p = GradedPresentation::cyclic(&r, &[r.parse("x").unwrap().v, r.parse("y").unwrap().v]);
        let res = comm_resolve(&p, 3).unwrap();
        assert_eq!(res.ranks(), vec![1, 2, 1]);
        assert!(res.compositions_vanish());
        let e2 = comm_ext(&p, 2).unwrap();
        assert_eq!(e2.codim, Some(2));
        assert_eq!(e2.module.rank(), 1);
        assert!(matches!(comm_resolve(&p, -1), Err(Error::NegativeLength(-1))));
    }
}
