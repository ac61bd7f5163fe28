//! Strictness of filtered morphisms.
//!
//! With `U` the submodule of `L_N` spanned by the images `u_j` and `R'` the
//! relations of `N`, put `W = U + R'`. Then `u` is strict iff
//! `W ∩ L_{N,i} ⊆ U_i + R'_i` for all `i`, where `U_i = Σ D_{i-δ_j} u_j`.
//! A Gröbner basis of `W` for the filtration order gives generators of
//! every `W ∩ L_{N,i}` (standard representations), so it suffices to test
//! each basis element in its own degree. The test is a membership problem
//! for finitely generated `D_0`-modules.
//!
//! The graded side (`gr u` mono / epi, the four-term sequence) is computed
//! independently over `gr D`.

use super::exact::{kernel_generators, kernel_module};
use super::level::Level;
use super::ops::Free;
use super::{FilteredMorphism, GoodFilteredModule};
use crate::error::Result;
use crate::gb;
use crate::vector::Vector;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct StrictnessReport {
    /// `u(M_i) = u(M) ∩ N_i` for every `i`.
    pub strict: bool,
    pub mono: bool,
    pub epi: bool,
    pub gr_mono: bool,
    pub gr_epi: bool,
    /// The strictness condition evaluated in each degree up to the bound.
    pub degree_flags: Vec<(i64, bool)>,
    /// `0 → gr ker u → gr M → gr N → gr coker u → 0` is exact.
    pub four_term_exact: bool,
    /// `im gr u = gr im u` as graded submodules of `gr N`.
    pub im_gr_is_gr_im: bool,
    /// An element of `u(M) ∩ N_i` outside `u(M_i)`, with `i`.
    pub witness: Option<(i64, Vector)>,
    pub effective_bound: i64,
}

impl StrictnessReport {
    pub fn strict_mono(&self) -> bool {
        self.strict && self.mono
    }

    pub fn strict_epi(&self) -> bool {
        self.strict && self.epi
    }

    /// Isomorphism of filtered modules.
    pub fn iso(&self) -> bool {
        self.strict && self.mono && self.epi
    }

    pub fn gr_iso(&self) -> bool {
        self.gr_mono && self.gr_epi
    }

    /// strict mono ⟺ gr mono, strict epi ⟺ gr epi, iso ⟺ gr iso.
    pub fn graded_equivalences_hold(&self) -> bool {
        self.strict_mono() == self.gr_mono
            && self.strict_epi() == self.gr_epi
            && self.iso() == self.gr_iso()
    }

    /// strict ⟺ four-term gr sequence exact, and strict ⟹ im gr = gr im.
    pub fn four_term_criterion_holds(&self) -> bool {
        self.strict == self.four_term_exact && (!self.strict || self.im_gr_is_gr_im)
    }

    /// The per-degree flags agree with the global verdict up to the bound.
    pub fn flags_agree(&self) -> bool {
        let all = self.degree_flags.iter().all(|(_, f)| *f);
        match &self.witness {
            None => all,
            Some((i, _)) if *i <= self.effective_bound => !all,
            Some(_) => true,
        }
    }
}

pub(crate) fn free_of(m: &GoodFilteredModule) -> Free {
    Free {
        alg: m.algebra(),
        mono: m.ring.mono(),
        w: m.ring.weights(),
        degrees: m.degrees(),
    }
}

pub(crate) fn gr_free_of(m: &GoodFilteredModule) -> Free {
    Free {
        alg: m.ring.gr_algebra(),
        ..free_of(m)
    }
}

/// `D_0`-Gröbner bases of `U_i + R'_i` in the pieces `L_{N,i}`.
pub(crate) struct ImagePieces<'a> {
    u: &'a FilteredMorphism,
    rels: Vec<Vector>,
    cache: BTreeMap<i64, (Level, Vec<Vector>)>,
}

impl<'a> ImagePieces<'a> {
    pub fn new(u: &'a FilteredMorphism) -> Result<Self> {
        Ok(ImagePieces {
            u,
            rels: u.target.groebner()?.to_vec(),
            cache: BTreeMap::new(),
        })
    }

    pub fn get(&mut self, i: i64) -> Result<&(Level, Vec<Vector>)> {
        if !self.cache.contains_key(&i) {
            let tgt = &self.u.target;
            let ft = free_of(tgt);
            let ord = ft.order();
            let level = Level::new(ft.alg, &ft.w, &ft.degrees, i, false);
            let sdeg = self.u.source.degrees();
            let mut gens = Vec::new();
            for (j, img) in self.u.images.iter().enumerate() {
                gens.extend(level.span_of(img, sdeg[j], &ord));
            }
            for h in &self.rels {
                gens.extend(level.span_of(h, ft.weight(h), &ord));
            }
            let basis = level.groebner(&gens)?;
            self.cache.insert(i, (level, basis));
        }
        Ok(&self.cache[&i])
    }
}

pub fn is_strict(u: &FilteredMorphism, slack: i64) -> Result<StrictnessReport> {
    let src = &u.source;
    let tgt = &u.target;
    let fs = free_of(src);
    let ft = free_of(tgt);
    let tord = ft.order();
    let gb_r = src.groebner()?.to_vec();
    let gb_rp = tgt.groebner()?.to_vec();
    let mut wgens = u.images.clone();
    wgens.extend(gb_rp.iter().cloned());
    let gb_w = ft.groebner(&wgens)?;
    let bound = src.effective_bound(slack).max(tgt.effective_bound(slack));

    let mut pieces = ImagePieces::new(u)?;
    let mut witness = None;
    for g in &gb_w {
        let i = ft.weight(g);
        let (level, basis) = pieces.get(i)?;
        let x = level.convert(g).expect("an element lies in its own filtration piece");
        if !level.contains(basis, &x) {
            witness = Some((i, g.clone()));
            break;
        }
    }
    let strict = witness.is_none();

    let lo = if tgt.rank() == 0 { 0 } else { tgt.lowest_degree() };
    let mut degree_flags = Vec::new();
    for i in lo..=bound {
        let (level, basis) = pieces.get(i)?;
        let mut ok = true;
        'outer: for g in gb_w.iter() {
            let wg = ft.weight(g);
            if wg > i {
                continue;
            }
            for x in level.span_of(g, wg, &tord) {
                if !level.contains(basis, &x) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        degree_flags.push((i, ok));
    }

    let kernel = ft.preimage(&fs, &u.images, &gb_rp)?;
    let mono = fs.all_in(&kernel, &gb_r);
    let epi = gb::is_full(&gb_w, tgt.rank());

    let gs = gr_free_of(src);
    let gt = gr_free_of(tgt);
    let gr_u = u.gr_images();
    let sig_r = src.symbols()?;
    let sig_rp = tgt.symbols()?;
    let sig_w: Vec<Vector> = gb_w
        .iter()
        .map(|g| g.top_part(&gt.w, &gt.degrees))
        .collect();
    let gb_sig_r = gs.groebner(&sig_r)?;
    let gb_sig_rp = gt.groebner(&sig_rp)?;
    let gr_kernel = gt.preimage(&gs, &gr_u, &gb_sig_rp)?;
    let gr_mono = gs.all_in(&gr_kernel, &gb_sig_r);
    let gr_epi = gt.spans(&gr_u, &gb_sig_rp)?;

    let mut im_gr = gr_u.clone();
    im_gr.extend(sig_rp.iter().cloned());
    let im_gr_is_gr_im = gt.same_submodule(&im_gr, &sig_w)?;

    // exactness at gr M and injectivity of gr ker u → gr M
    let (kgens, kdeg) = kernel_generators(u, &kernel)?;
    let sig_k: Vec<Vector> = kgens
        .iter()
        .map(|g| g.top_part(&gs.w, &gs.degrees))
        .collect();
    let mut lhs = gr_kernel.clone();
    lhs.extend(sig_r.iter().cloned());
    let mut rhs = sig_k.clone();
    rhs.extend(sig_r.iter().cloned());
    let exact_at_m = gs.same_submodule(&lhs, &rhs)?;
    let kmod = kernel_module(src, &kgens, &kdeg)?;
    let gk = gr_free_of(&kmod);
    let gk_rels = gk.groebner(&kmod.symbols()?)?;
    let incl_kernel = gs.preimage(&gk, &sig_k, &gb_sig_r)?;
    let injective = gk.all_in(&incl_kernel, &gk_rels);
    let four_term_exact = injective && exact_at_m && im_gr_is_gr_im;

    Ok(StrictnessReport {
        strict,
        mono,
        epi,
        gr_mono,
        gr_epi,
        degree_flags,
        four_term_exact,
        im_gr_is_gr_im,
        witness,
        effective_bound: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::field::Field;

    fn weyl1() -> FilteredRing {
        FilteredRing::order(Field::new(7).unwrap(), 1)
    }

    #[test]
    fn identity_is_strict_iso() {
        let m = GoodFilteredModule::cyclic(weyl1(), &["t1*d1 - 2"]).unwrap();
        let r = is_strict(&FilteredMorphism::identity(&m).unwrap(), DEFAULT_SLACK).unwrap();
        assert!(r.strict && r.iso() && r.gr_iso());
        assert!(r.graded_equivalences_hold() && r.four_term_criterion_holds() && r.flags_agree());
    }

    #[test]
    fn multiplication_by_d_is_strict_mono() {
        let r = weyl1();
        let src = GoodFilteredModule::free(r.clone(), vec![-1]);
        let tgt = GoodFilteredModule::free(r, vec![0]);
        let u = FilteredMorphism::parse(src, tgt, &[vec!["d1"]]).unwrap();
        let rep = is_strict(&u, DEFAULT_SLACK).unwrap();
        assert!(rep.strict_mono() && rep.gr_mono && !rep.epi);
        assert_eq!(u.gr_images()[0], u.images[0]);
        assert!(rep.graded_equivalences_hold());
    }

    #[test]
    fn shifted_multiplication_is_not_strict() {
        let r = weyl1();
        let src = GoodFilteredModule::free(r.clone(), vec![-2]);
        let tgt = GoodFilteredModule::free(r, vec![0]);
        let u = FilteredMorphism::parse(src, tgt, &[vec!["d1"]]).unwrap();
        let rep = is_strict(&u, DEFAULT_SLACK).unwrap();
        assert!(!rep.strict && rep.mono && !rep.gr_mono);
        assert_eq!(rep.witness.as_ref().unwrap().0, 1);
        assert!(rep.graded_equivalences_hold() && rep.four_term_criterion_holds() && rep.flags_agree());
    }

    #[test]
    fn quotient_map_is_strict_epi() {
        let r = weyl1();
        let l = GoodFilteredModule::free(r.clone(), vec![0]);
        let m = GoodFilteredModule::cyclic(r, &["d1^2 + t1"]).unwrap();
        let rep = is_strict(&FilteredMorphism::on_generators(&l, &m).unwrap(), DEFAULT_SLACK).unwrap();
        assert!(rep.strict_epi() && rep.gr_epi && !rep.mono);
        assert!(rep.four_term_criterion_holds());
    }

    #[test]
    fn degree_filtration_example() {
        // x ↦ x + y^2 from k[x,y](-1) is filtered only into degree 2
        let r = FilteredRing::degree(Field::new(5).unwrap(), 2);
        let src = GoodFilteredModule::free(r.clone(), vec![-2]);
        let tgt = GoodFilteredModule::cyclic(r, &["x2^2"]).unwrap();
        let u = FilteredMorphism::parse(src, tgt, &[vec!["x1 + x2^2"]]).unwrap();
        let rep = is_strict(&u, DEFAULT_SLACK).unwrap();
        // u(1) = x1 has degree 1 < 2
        assert!(!rep.strict);
        assert!(rep.graded_equivalences_hold() && rep.four_term_criterion_holds());
    }
}
