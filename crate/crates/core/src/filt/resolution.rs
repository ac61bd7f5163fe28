//! Good (strict) free resolutions and Ext with its induced filtration.

use super::level::Level;
use super::ops::Free;
use super::strict::{gr_free_of, is_strict};
use super::{gr_module, FilteredMorphism, FilteredRing, GoodFilteredModule};
use crate::complex::{self, FreeResolution};
use crate::error::{Error, Result};
use crate::graded::{self, GradedPresentation};
use crate::vector::{apply_map, Vector};
use crate::weyl::Side;

#[derive(Debug, Clone)]
pub struct GoodResolution {
    pub module: GoodFilteredModule,
    pub res: FreeResolution,
}

impl GoodResolution {
    pub fn ranks(&self) -> Vec<usize> {
        self.res.ranks()
    }

    /// Shifts `n` of the summands `D(n)` of each free module.
    pub fn shifts(&self) -> Vec<Vec<i64>> {
        self.res
            .degrees
            .iter()
            .map(|d| d.iter().map(|x| -x).collect())
            .collect()
    }

    pub fn free_module(&self, s: usize) -> GoodFilteredModule {
        GoodFilteredModule::free(self.module.ring.clone(), self.shifts()[s].clone())
    }

    /// `L_{s+1} → L_s`.
    pub fn differential(&self, s: usize) -> Result<FilteredMorphism> {
        FilteredMorphism::new(
            self.free_module(s + 1),
            self.free_module(s),
            self.res.maps[s].clone(),
        )
    }

    /// `L_0 → M`.
    pub fn augmentation(&self) -> Result<FilteredMorphism> {
        FilteredMorphism::on_generators(&self.free_module(0), &self.module)
    }

    /// Strictness of the augmentation and of every differential.
    pub fn strictness(&self, slack: i64) -> Result<Vec<bool>> {
        let mut out = vec![is_strict(&self.augmentation()?, slack)?.strict_epi()];
        for s in 0..self.res.length() {
            out.push(is_strict(&self.differential(s)?, slack)?.strict);
        }
        Ok(out)
    }

    /// Whether `gr L_• → gr M → 0` is an exact complex of graded modules.
    pub fn gr_report(&self, slack: i64) -> Result<GrResolutionReport> {
        let ring = &self.module.ring;
        let grm = gr_module(&self.module)?;
        let frees: Vec<Free> = (0..self.res.degrees.len())
            .map(|s| gr_free_of(&self.free_module(s)))
            .collect();
        let w = ring.weights();
        let sym: Vec<Vec<Vector>> = self
            .res
            .maps
            .iter()
            .enumerate()
            .map(|(s, imgs)| {
                imgs.iter()
                    .map(|v| v.top_part(&w, &self.res.degrees[s]))
                    .collect()
            })
            .collect();
        let resolves = match sym.first() {
            Some(first) => frees[0].same_submodule(first, &grm.relations)?,
            None => grm.relations.is_empty(),
        };
        let mut compositions_vanish = true;
        let mut exact_at = Vec::new();
        for s in 1..self.res.degrees.len() {
            let src = &frees[s];
            let tgt = &frees[s - 1];
            let kernel = tgt.preimage(src, &sym[s - 1], &[])?;
            let exact = if s < sym.len() {
                let tord = tgt.order();
                for v in &sym[s] {
                    if !apply_map(&tgt.alg, v, &sym[s - 1], &tord).is_zero() {
                        compositions_vanish = false;
                    }
                }
                let img = src.groebner(&sym[s])?;
                src.all_in(&kernel, &img)
            } else if self.res.complete {
                kernel.is_empty()
            } else {
                continue;
            };
            exact_at.push((s, exact));
        }
        Ok(GrResolutionReport {
            resolves_gr_module: resolves,
            compositions_vanish,
            exact_at,
            effective_bound: self.module.effective_bound(slack),
        })
    }
}

#[derive(Debug, Clone)]
pub struct GrResolutionReport {
    /// `coker(gr L_1 → gr L_0) = gr M`.
    pub resolves_gr_module: bool,
    pub compositions_vanish: bool,
    /// Exactness at `gr L_s` for each `s ≥ 1` that can be decided.
    pub exact_at: Vec<(usize, bool)>,
    pub effective_bound: i64,
}

impl GrResolutionReport {
    pub fn exact(&self) -> bool {
        self.resolves_gr_module && self.compositions_vanish && self.exact_at.iter().all(|(_, e)| *e)
    }
}

/// A strict free resolution with at most `length` differentials.
pub fn good_resolution(m: &GoodFilteredModule, length: i64) -> Result<GoodResolution> {
    if length < 0 {
        return Err(Error::NegativeLength(length));
    }
    let res = complex::resolve(
        &m.algebra(),
        &m.ring.mono(),
        &m.degrees(),
        &m.relations,
        length as usize,
    )?;
    Ok(GoodResolution {
        module: m.clone(),
        res,
    })
}

/// Degreewise `D_0`-ranks of two graded objects (the `k`-dimension when
/// `D_0` is the field).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeRanks {
    pub degree: i64,
    pub filtered: usize,
    pub graded: usize,
}

/// `gr Hom(L, D)` against `Hom_{gr D}(gr L, gr D)` for one free module.
#[derive(Debug, Clone)]
pub struct HomComparison {
    pub level: usize,
    pub ranks: Vec<DegreeRanks>,
}

impl HomComparison {
    pub fn agree(&self) -> bool {
        self.ranks.iter().all(|r| r.filtered == r.graded)
    }
}

#[derive(Debug, Clone)]
pub struct FilteredExt {
    /// `Ext^r(M, D)` with its induced good filtration. Over the Weyl algebra
    /// this is a right module, stored transposed as a left presentation.
    pub module: GoodFilteredModule,
    pub side: Side,
    /// `Ext^r_{gr D}(gr M, gr D)`, computed from a resolution of `gr M`.
    pub graded: GradedPresentation,
    /// Degreewise ranks of `gr^F Ext^r` against the graded Ext.
    pub ranks: Vec<DegreeRanks>,
    pub hom_comparisons: Vec<HomComparison>,
    /// The graded Ext vanishes, so the filtered one does too.
    pub graded_vanishes: bool,
    pub filtered_vanishes: bool,
    pub range: (i64, i64),
}

impl FilteredExt {
    /// Degreewise `gr^F Ext ≤ graded Ext`.
    pub fn subquotient_bound_holds(&self) -> bool {
        self.ranks.iter().all(|r| r.filtered <= r.graded)
    }

    pub fn vanishing_implication_holds(&self) -> bool {
        !self.graded_vanishes || self.filtered_vanishes
    }

    pub fn hom_comparisons_agree(&self) -> bool {
        self.hom_comparisons.iter().all(|h| h.agree())
    }

    /// Reported zero when the graded Ext vanishes.
    pub fn is_zero(&self) -> bool {
        self.graded_vanishes || self.filtered_vanishes
    }
}

/// `D_0`-rank of the degree-`i` part of `F/⟨gens⟩` for homogeneous `gens`.
fn graded_piece_rank(free: &Free, gens: &[Vector], i: i64) -> Result<usize> {
    let level = Level::new(free.alg, &free.w, &free.degrees, i, true);
    let ord = free.order();
    let mut span = Vec::new();
    for g in gens {
        if !g.is_zero() {
            span.extend(level.span_of(g, free.weight(g), &ord));
        }
    }
    level.quotient_rank(&span)
}

/// `D_0`-rank of `F_i / F_{i-1}` of a free filtered module over `D`.
fn free_piece_rank(ring: &FilteredRing, degrees: &[i64], i: i64) -> usize {
    let f = Level::new(ring.algebra(), &ring.weights(), degrees, i, false).rank();
    let g = Level::new(ring.algebra(), &ring.weights(), degrees, i - 1, false).rank();
    f - g
}

pub fn filtered_ext(m: &GoodFilteredModule, r: i64, slack: i64) -> Result<FilteredExt> {
    if r < 0 {
        return Err(Error::NegativeLength(r));
    }
    let ring = m.ring.clone();
    let res = good_resolution(m, r + 1)?;
    let p = complex::ext(&m.algebra(), &ring.mono(), &res.res, r as usize)?;
    let module = GoodFilteredModule::new(ring.clone(), p.degrees.iter().map(|d| -d).collect(), p.relations);

    let grm = gr_module(m)?;
    let gres = graded::comm_resolve(&grm, r + 1)?;
    let gext = graded::comm_ext_from(&gres, r as usize)?;
    let graded = gext.module;

    let gr_ext = gr_free_of(&module);
    let sym = module.symbols()?;
    let gr_graded = Free {
        alg: ring.gr_algebra(),
        mono: ring.mono(),
        w: ring.weights(),
        degrees: graded.degrees(),
    };
    let gsym: Vec<Vector> = graded
        .relations
        .iter()
        .map(|v| v.top_part(&gr_graded.w, &gr_graded.degrees))
        .collect();
    let degs: Vec<i64> = module.degrees().into_iter().chain(graded.degrees()).collect();
    let lo = degs.iter().copied().min().unwrap_or(0);
    let hi = module.effective_bound(slack).max(lo + slack);
    let mut ranks = Vec::new();
    for i in lo..=hi {
        ranks.push(DegreeRanks {
            degree: i,
            filtered: graded_piece_rank(&gr_ext, &sym, i)?,
            graded: graded_piece_rank(&gr_graded, &gsym, i)?,
        });
    }

    let mut hom_comparisons = Vec::new();
    for (s, deg) in res.res.degrees.iter().enumerate().take(r as usize + 2) {
        let dual: Vec<i64> = deg.iter().map(|x| -x).collect();
        let gr_hom = Free {
            alg: ring.gr_algebra(),
            mono: ring.mono(),
            w: ring.weights(),
            degrees: dual.clone(),
        };
        let lo = dual.iter().copied().min().unwrap_or(0);
        let hi = dual.iter().copied().max().unwrap_or(0) + slack;
        let mut rk = Vec::new();
        for i in lo..=hi {
            rk.push(DegreeRanks {
                degree: i,
                filtered: free_piece_rank(&ring, &dual, i),
                graded: graded_piece_rank(&gr_hom, &[], i)?,
            });
        }
        hom_comparisons.push(HomComparison { level: s, ranks: rk });
    }

    let graded_vanishes = graded.is_zero()?;
    let filtered_vanishes = module.is_zero()?;
    let side = match ring {
        FilteredRing::Order { .. } => Side::Right,
        FilteredRing::Degree { .. } => Side::Left,
    };
    Ok(FilteredExt {
        module,
        side,
        graded,
        ranks,
        hom_comparisons,
        graded_vanishes,
        filtered_vanishes,
        range: (lo, hi),
    })
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;
    use crate::field::Field;

    fn weyl(d: usize) -> FilteredRing {
        FilteredRing::order(Field::new(7).unwrap(), d)
    }

    #[test]
    fn resolutions_of_examples() {
        let m = GoodFilteredModule::cyclic(weyl(1), &["d1"]).unwrap();
        let res = good_resolution(&m, 4).unwrap();
        assert_eq!(res.shifts(), vec![vec![0], vec![-1]]);
        assert!(res.strictness(DEFAULT_SLACK).unwrap().iter().all(|x| *x));
        assert!(res.gr_report(DEFAULT_SLACK).unwrap().exact());

        let free = GoodFilteredModule::free(weyl(1), vec![0, 3]);
        assert_eq!(good_resolution(&free, 3).unwrap().ranks(), vec![2]);

        let k = GoodFilteredModule::cyclic(weyl(2), &["d1", "d2"]).unwrap();
        let res = good_resolution(&k, 5).unwrap();
        assert_eq!(res.shifts(), vec![vec![0], vec![-1, -1], vec![-2]]);
        assert!(res.gr_report(DEFAULT_SLACK).unwrap().exact());
        assert!(matches!(good_resolution(&k, -1), Err(Error::NegativeLength(-1))));
    }

    #[test]
    fn ext_of_delta_module() {
        let m = GoodFilteredModule::cyclic(weyl(1), &["t1"]).unwrap();
        let e1 = filtered_ext(&m, 1, DEFAULT_SLACK).unwrap();
        assert_eq!(e1.side, Side::Right);
        assert!(!e1.is_zero());
        let expected = GoodFilteredModule::cyclic(weyl(1), &["t1"]).unwrap();
        assert!(same_filtered_module(&e1.module, &expected).unwrap());
        assert!(e1.subquotient_bound_holds() && e1.hom_comparisons_agree());
        let e0 = filtered_ext(&m, 0, DEFAULT_SLACK).unwrap();
        assert!(e0.graded_vanishes && e0.is_zero() && e0.vanishing_implication_holds());
        let free = GoodFilteredModule::free(weyl(1), vec![0]);
        assert!(filtered_ext(&free, 1, DEFAULT_SLACK).unwrap().is_zero());
    }

    #[test]
    fn degree_filtration_ext() {
        let r = FilteredRing::degree(Field::new(5).unwrap(), 2);
        let m = GoodFilteredModule::cyclic(r, &["x1*x2 + x1", "x2^2"]).unwrap();
        for k in 0..3 {
            let e = filtered_ext(&m, k, DEFAULT_SLACK).unwrap();
            assert!(e.subquotient_bound_holds(), "Ext^{k}: {:?}", e.ranks);
            assert!(e.vanishing_implication_holds() && e.hom_comparisons_agree());
        }
    }
}
