//! Ideals of commutative polynomial rings: cached Gröbner bases, Krull
//! dimension, radical membership, monomial minimal primes, intersections.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::gb;
use crate::monomial::{ModuleOrder, Monomial, MonomialOrder};
use crate::poly::{PolyRing, Polynomial};
use crate::vector::{Term, Vector};
use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

/// Normal form of `f` modulo `basis` for `order`.
pub fn reduce(f: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Result<Polynomial> {
    for b in basis {
        if *b.ring != *f.ring {
            return Err(Error::ContextMismatch("reduce: basis ring differs".into()));
        }
    }
    let ord = ModuleOrder::ideal(order.clone());
    let field = f.ring.field;
    let basis: Vec<Vector> = basis
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| b.v.resort(field, &ord))
        .collect();
    let r = gb::reduce(&f.ring.algebra(), &f.v.resort(field, &ord), &basis, &ord);
    Ok(Polynomial::from_vector(&f.ring, &r))
}

/// Generators plus a compute-once cache of reduced Gröbner bases, one per
/// order requested.
#[derive(Debug)]
pub struct IdealHandle {
    pub ring: Arc<PolyRing>,
    gens: Vec<Polynomial>,
    cache: Mutex<Vec<(MonomialOrder, Arc<Vec<Polynomial>>)>>,
}

impl Clone for IdealHandle {
    fn clone(&self) -> Self {
        IdealHandle {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl IdealHandle {
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            if *g.ring != **ring {
                return Err(Error::ContextMismatch("ideal generator ring differs".into()));
            }
        }
        Ok(IdealHandle {
            ring: ring.clone(),
            gens,
            cache: Mutex::new(Vec::new()),
        })
    }

    pub fn parse(ring: &Arc<PolyRing>, gens: &[&str]) -> Result<Self> {
        let g = gens.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(ring, g)
    }

    pub fn from_vectors(ring: &Arc<PolyRing>, gens: &[Vector]) -> Self {
        let g = gens.iter().map(|v| Polynomial::from_vector(ring, v)).collect();
        Self::new(ring, g).expect("same ring")
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Replaces the generators and drops every cached basis.
    pub fn set_generators(&mut self, gens: Vec<Polynomial>) -> Result<()> {
        *self = Self::new(&self.ring, gens)?;
        Ok(())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    /// Reduced Gröbner basis for the ring's own order.
    pub fn groebner(&self) -> Result<Arc<Vec<Polynomial>>> {
        self.groebner_with(&self.ring.order)
    }

    pub fn groebner_with(&self, order: &MonomialOrder) -> Result<Arc<Vec<Polynomial>>> {
        // holding the lock while computing gives compute-once semantics
        let mut cache = self.cache.lock().unwrap();
        if let Some((_, b)) = cache.iter().find(|(o, _)| o == order) {
            return Ok(b.clone());
        }
        let ring = self.ring.with_order(order.clone());
        let ord = ModuleOrder::ideal(order.clone());
        let vs: Vec<Vector> = self.gens.iter().map(|g| g.v.clone()).collect();
        let basis = gb::groebner(&ring.algebra(), &vs, &ord)?;
        let polys: Vec<Polynomial> = basis
            .iter()
            .map(|v| Polynomial {
                ring: self.ring.clone(),
                v: v.clone(),
            })
            .collect();
        let polys = Arc::new(polys);
        cache.push((order.clone(), polys.clone()));
        Ok(polys)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        let b = self.groebner()?;
        Ok(reduce(f, &b, &self.ring.order)?.is_zero())
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner()?.iter().any(|g| g.is_constant()))
    }

    /// Krull dimension of `V(I)`; `-1` for the unit ideal.
    pub fn dim(&self) -> Result<i64> {
        let leads: Vec<Monomial> = self
            .groebner()?
            .iter()
            .map(|g| g.lead_monomial().unwrap().clone())
            .collect();
        Ok(dim_from_leads(&leads, self.ring.nvars()))
    }

    pub fn radical_member(&self, f: &Polynomial) -> Result<bool> {
        if *f.ring != *self.ring {
            return Err(Error::ContextMismatch("radical_member".into()));
        }
        let gens: Vec<Vector> = self.gens.iter().map(|g| g.v.clone()).collect();
        radical_member_raw(&self.ring, &gens, &f.v)
    }

    /// Smallest `k ≤ max` with `f^k ∈ I`, if any.
    pub fn power_witness(&self, f: &Polynomial, max: u32) -> Result<Option<u32>> {
        let mut p = f.clone();
        for k in 1..=max {
            if self.contains(&p)? {
                return Ok(Some(k));
            }
            p = p.mul(f)?;
        }
        Ok(None)
    }

    /// True iff the reduced Gröbner basis consists of monomials.
    pub fn is_monomial(&self) -> Result<bool> {
        Ok(self.groebner()?.iter().all(|g| g.is_monomial()))
    }

    /// Minimal primes of a monomial ideal as sorted variable-index sets.
    pub fn monomial_components(&self) -> Result<Vec<Vec<usize>>> {
        let b = self.groebner()?;
        let mut supports = Vec::new();
        for g in b.iter() {
            if !g.is_monomial() {
                return Err(Error::NonMonomial(g.to_string()));
            }
            supports.push(g.lead_monomial().unwrap().support());
        }
        Ok(minimal_primes(&supports))
    }

    pub fn intersect(&self, other: &IdealHandle) -> Result<IdealHandle> {
        let a: Vec<Vector> = self.gens.iter().map(|g| g.v.clone()).collect();
        let b: Vec<Vector> = other.gens.iter().map(|g| g.v.clone()).collect();
        let gens = intersect_raw(&self.ring, &a, &b)?;
        Ok(IdealHandle::from_vectors(&self.ring, &gens))
    }

    /// `V(self) ⊆ V(other)`, i.e. every generator of `other` lies in `√self`.
    pub fn variety_contained_in(&self, other: &IdealHandle) -> Result<bool> {
        for g in other.generators() {
            if !self.radical_member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same radical (same variety).
    pub fn same_variety(&self, other: &IdealHandle) -> Result<bool> {
        Ok(self.variety_contained_in(other)? && other.variety_contained_in(self)?)
    }

    pub fn to_strings(&self) -> Result<Vec<String>> {
        Ok(self.groebner()?.iter().map(|g| g.to_string()).collect())
    }
}

/// Maximal size of a variable subset containing the support of no leading
/// monomial; `-1` if some leading monomial is 1.
pub fn dim_from_leads(leads: &[Monomial], nvars: usize) -> i64 {
    if leads.iter().any(|m| m.is_one()) {
        return -1;
    }
    let masks: Vec<u64> = leads
        .iter()
        .map(|m| m.support().iter().fold(0u64, |acc, &i| acc | (1 << i)))
        .collect();
    let mut best = 0;
    for s in 0u64..(1 << nvars) {
        let size = s.count_ones() as i64;
        if size > best && masks.iter().all(|&mk| mk & !s != 0) {
            best = size;
        }
    }
    best
}

/// Dimension of `A^rank / U` from the leading terms of a Gröbner basis of
/// `U`: the maximum over positions of the dimension of the monomial ideal
/// at that position. `-1` for the zero module.
pub fn module_dim(basis: &[Vector], rank: usize, nvars: usize) -> i64 {
    (0..rank)
        .map(|j| {
            let leads: Vec<Monomial> = basis
                .iter()
                .filter_map(|g| g.lead())
                .filter(|l| l.pos as usize == j)
                .map(|l| l.m.clone())
                .collect();
            dim_from_leads(&leads, nvars)
        })
        .max()
        .unwrap_or(-1)
}

/// Minimal vertex covers of the supports, found by distributing variables
/// over generators and pruning non-minimal sets. Sorted lexicographically.
pub fn minimal_primes(supports: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
    for supp in supports {
        if supp.is_empty() {
            return Vec::new();
        }
        let mut next: Vec<BTreeSet<usize>> = Vec::new();
        for s in &sets {
            if supp.iter().any(|v| s.contains(v)) {
                next.push(s.clone());
            } else {
                for &v in supp {
                    let mut t = s.clone();
                    t.insert(v);
                    next.push(t);
                }
            }
        }
        next.sort();
        next.dedup();
        let pruned: Vec<BTreeSet<usize>> = next
            .iter()
            .filter(|s| !next.iter().any(|t| t != *s && t.is_subset(s)))
            .cloned()
            .collect();
        sets = pruned;
    }
    let mut out: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
    out.sort();
    out
}

fn extend_vector(v: &Vector, extra: usize) -> Vector {
    Vector {
        terms: v
            .terms
            .iter()
            .map(|t| {
                let mut m = t.m.clone();
                m.0.extend(std::iter::repeat_n(0, extra));
                Term {
                    m,
                    pos: t.pos,
                    c: t.c,
                }
            })
            .collect(),
    }
}

/// `f ∈ √(gens)` via `1 ∈ (gens) + (1 - z f)` in a ring with an extra
/// variable `z`.
pub fn radical_member_raw(ring: &PolyRing, gens: &[Vector], f: &Vector) -> Result<bool> {
    let n = ring.nvars();
    let field = ring.field;
    let alg = Algebra::commutative(field, n + 1);
    let ord = ModuleOrder::ideal(MonomialOrder::DegRevLex);
    let mut all: Vec<Vector> = gens.iter().map(|g| extend_vector(g, 1)).collect();
    let z = Vector::monomial(Monomial::var(n + 1, n), 0, 1);
    let zf = extend_vector(f, 1).left_mul(&alg, &z, &ord);
    let one = Vector::monomial(Monomial::one(n + 1), 0, 1);
    all.push(one.sub(&zf, field, &ord));
    let basis = gb::groebner(&alg, &all, &ord)?;
    Ok(gb::is_full(&basis, 1))
}

/// Generators of `I ∩ J` by eliminating `u` from `uI + (1-u)J`.
pub fn intersect_raw(ring: &PolyRing, a: &[Vector], b: &[Vector]) -> Result<Vec<Vector>> {
    let n = ring.nvars();
    let field = ring.field;
    let alg = Algebra::commutative(field, n + 1);
    let mut w = vec![0u32; n];
    w.push(1);
    let ord = ModuleOrder::ideal(MonomialOrder::Weighted(w));
    let u = Vector::monomial(Monomial::var(n + 1, n), 0, 1);
    let one_minus_u = Vector::monomial(Monomial::one(n + 1), 0, 1).sub(&u, field, &ord);
    let mut all = Vec::new();
    for g in a {
        all.push(extend_vector(g, 1).left_mul(&alg, &u, &ord));
    }
    for g in b {
        all.push(extend_vector(g, 1).left_mul(&alg, &one_minus_u, &ord));
    }
    let basis = gb::groebner(&alg, &all, &ord)?;
    let target = ring.ideal_order();
    Ok(basis
        .into_iter()
        .filter(|g| g.terms.iter().all(|t| t.m.0[n] == 0))
        .map(|g| {
            let terms = g
                .terms
                .into_iter()
                .map(|t| Term {
                    m: Monomial::from_exponents(&t.m.0[..n]),
                    pos: 0,
                    c: t.c,
                })
                .collect();
            Vector::from_terms(terms, field, &target)
        })
        .collect())
}
