//! A single filtration piece `L_i` of a filtered free module, as a free
//! module over `D_0` (the polynomial ring in the weight-0 variables).
//!
//! Monomials `x^a y^b e_l` with `a` in the weight-0 variables and `b` in the
//! positive-weight ones are the `D_0`-multiples of the basis element
//! `(y^b, l)`. Left multiplication by `y^b` followed by `D_0`-spans realizes
//! `D_k · g` for `k ≥ 0`.

use crate::algebra::Algebra;
use crate::complex::monomials_with;
use crate::error::Result;
use crate::gb;
use crate::monomial::{ModuleOrder, Monomial, MonomialOrder};
use crate::vector::{Term, Vector};
use std::collections::HashMap;

pub(crate) struct Level {
    pub alg: Algebra,
    pub w: Vec<u32>,
    pub i: i64,
    /// Only monomials of weight exactly `i` (graded pieces).
    pub exact: bool,
    zero_vars: Vec<usize>,
    index: HashMap<(Monomial, u32), usize>,
    pub d0: Algebra,
}

impl Level {
    pub fn new(alg: Algebra, w: &[u32], degrees: &[i64], i: i64, exact: bool) -> Self {
        let nv = w.len();
        let zero_vars: Vec<usize> = (0..nv).filter(|&k| w[k] == 0).collect();
        let mut index = HashMap::new();
        for (l, &dl) in degrees.iter().enumerate() {
            for b in multipliers(w, i - dl, exact) {
                let n = index.len();
                index.insert((b, l as u32), n);
            }
        }
        Level {
            alg,
            w: w.to_vec(),
            i,
            exact,
            d0: Algebra::commutative(alg.field, zero_vars.len()),
            zero_vars,
            index,
        }
    }

    pub fn rank(&self) -> usize {
        self.index.len()
    }

    pub fn d0_order(&self) -> ModuleOrder {
        ModuleOrder::top(MonomialOrder::DegRevLex, vec![0; self.rank()])
    }

    fn d0_pot(&self) -> ModuleOrder {
        ModuleOrder::pot(MonomialOrder::DegRevLex, self.rank())
    }

    /// Coordinates over `D_0`; `None` if a term lies outside the piece.
    pub fn convert(&self, v: &Vector) -> Option<Vector> {
        let nv = self.w.len();
        let mut terms = Vec::with_capacity(v.terms.len());
        for t in &v.terms {
            let mut b = t.m.clone();
            let mut a = Monomial::one(self.zero_vars.len());
            for (k, &z) in self.zero_vars.iter().enumerate() {
                a.0[k] = b.0[z];
                b.0[z] = 0;
            }
            debug_assert_eq!(b.nvars(), nv);
            let pos = *self.index.get(&(b, t.pos))?;
            terms.push(Term {
                m: a,
                pos: pos as u32,
                c: t.c,
            });
        }
        Some(Vector::from_terms(terms, self.alg.field, &self.d0_order()))
    }

    /// `D_0`-generators of `D_{i-s}·g` (or of the degree-`i` part of
    /// `gr D · g` when exact), where `s` is the degree of `g`.
    pub fn span_of(&self, g: &Vector, s: i64, ord: &ModuleOrder) -> Vec<Vector> {
        if g.is_zero() {
            return vec![];
        }
        multipliers(&self.w, self.i - s, self.exact)
            .iter()
            .map(|b| {
                let prod = g.left_mul_term(&self.alg, 1, b, ord);
                self.convert(&prod)
                    .expect("multiplier keeps the element inside the filtration piece")
            })
            .filter(|v| !v.is_zero())
            .collect()
    }

    pub fn groebner(&self, gens: &[Vector]) -> Result<Vec<Vector>> {
        gb::groebner(&self.d0, gens, &self.d0_order())
    }

    pub fn contains(&self, basis: &[Vector], v: &Vector) -> bool {
        gb::reduce(&self.d0, v, basis, &self.d0_order()).is_zero()
    }

    /// `D_0`-kernel of `e_k ↦ images[k]` modulo `rels`, projected to the
    /// source coordinates.
    pub fn preimage(&self, images: &[Vector], rels: &[Vector], source_rank: usize) -> Result<Vec<Vector>> {
        let m = images.len();
        let mut imgs = images.to_vec();
        imgs.extend(rels.iter().cloned());
        let zeros = vec![0; imgs.len()];
        let syz = gb::kernel(
            &self.d0,
            &imgs,
            self.rank(),
            &vec![0; self.rank()],
            &zeros,
            &MonomialOrder::DegRevLex,
        )?;
        let sord = ModuleOrder::top(MonomialOrder::DegRevLex, vec![0; source_rank]);
        Ok(syz
            .iter()
            .map(|v| {
                Vector::from_terms(
                    v.terms.iter().filter(|t| (t.pos as usize) < m).cloned().collect(),
                    self.alg.field,
                    &sord,
                )
            })
            .filter(|v| !v.is_zero())
            .collect())
    }

    /// The generated submodule is everything.
    pub fn spans(&self, gens: &[Vector]) -> Result<bool> {
        Ok(gb::is_full(&self.groebner(gens)?, self.rank()))
    }

    /// `D_0`-rank of the quotient of the piece by the span of `gens`.
    pub fn quotient_rank(&self, gens: &[Vector]) -> Result<usize> {
        let ord = self.d0_pot();
        let gens: Vec<Vector> = gens.iter().map(|g| g.resort(self.alg.field, &ord)).collect();
        let basis = gb::groebner(&self.d0, &gens, &ord)?;
        let mut led = vec![false; self.rank()];
        for g in &basis {
            led[g.lead().unwrap().pos as usize] = true;
        }
        Ok(led.iter().filter(|x| !**x).count())
    }
}

/// Monomials in the positive-weight variables of weight `k` (or `≤ k`).
pub(crate) fn multipliers(w: &[u32], k: i64, exact: bool) -> Vec<Monomial> {
    if k < 0 {
        return vec![];
    }
    let nv = w.len();
    if exact {
        return monomials_with(w, k as u32, 0, nv);
    }
    (0..=k as u32).flat_map(|j| monomials_with(w, j, 0, nv)).collect()
}
