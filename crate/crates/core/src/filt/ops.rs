//! Module operations shared by the filtered and the graded side: kernels of
//! maps between presented modules, containment and equality of submodules.

use crate::algebra::Algebra;
use crate::complex::weight_of;
use crate::error::Result;
use crate::gb;
use crate::monomial::{ModuleOrder, MonomialOrder};
use crate::vector::Vector;

/// A free module `A^n` with generator degrees, over one algebra and order.
#[derive(Debug, Clone)]
pub(crate) struct Free {
    pub alg: Algebra,
    pub mono: MonomialOrder,
    pub w: Vec<u32>,
    pub degrees: Vec<i64>,
}

impl Free {
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn order(&self) -> ModuleOrder {
        ModuleOrder::top(self.mono.clone(), self.degrees.clone())
    }

    pub fn weight(&self, v: &Vector) -> i64 {
        weight_of(v, &self.w, &self.degrees)
    }

    pub fn groebner(&self, gens: &[Vector]) -> Result<Vec<Vector>> {
        let ord = self.order();
        let gens: Vec<Vector> = gens
            .iter()
            .map(|g| g.resort(self.alg.field, &ord))
            .filter(|g| !g.is_zero())
            .collect();
        gb::groebner(&self.alg, &gens, &ord)
    }

    pub fn reduce(&self, v: &Vector, basis: &[Vector]) -> Vector {
        let ord = self.order();
        gb::reduce(&self.alg, &v.resort(self.alg.field, &ord), basis, &ord)
    }

    /// Every element of `vs` lies in the submodule with Gröbner basis `basis`.
    pub fn all_in(&self, vs: &[Vector], basis: &[Vector]) -> bool {
        vs.iter().all(|v| self.reduce(v, basis).is_zero())
    }

    /// `⟨a⟩ = ⟨b⟩`, given generators.
    pub fn same_submodule(&self, a: &[Vector], b: &[Vector]) -> Result<bool> {
        let ga = self.groebner(a)?;
        let gb_ = self.groebner(b)?;
        Ok(self.all_in(a, &gb_) && self.all_in(b, &ga))
    }

    /// Generators of `{x ∈ source : Σ x_k images_k ∈ ⟨target_rels⟩}`.
    pub fn preimage(
        &self,
        source: &Free,
        images: &[Vector],
        target_rels: &[Vector],
    ) -> Result<Vec<Vector>> {
        let m = images.len();
        let ord = self.order();
        let mut imgs: Vec<Vector> = images
            .iter()
            .map(|v| v.resort(self.alg.field, &ord))
            .collect();
        let mut src_deg = source.degrees.clone();
        for r in target_rels {
            imgs.push(r.resort(self.alg.field, &ord));
            src_deg.push(self.weight(r));
        }
        let syz = gb::kernel(&self.alg, &imgs, self.rank(), &self.degrees, &src_deg, &self.mono)?;
        let sord = source.order();
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

    /// `images ∪ rels` generate the whole free module.
    pub fn spans(&self, images: &[Vector], rels: &[Vector]) -> Result<bool> {
        let mut gens = images.to_vec();
        gens.extend(rels.iter().cloned());
        Ok(gb::is_full(&self.groebner(&gens)?, self.rank()))
    }
}
