mod common;

use charvar_core::charvar;
use charvar_core::filt::{filtered_ext, induced_ker_coker, is_strict, GoodFilteredModule, DEFAULT_SLACK};
use charvar_core::ideal::{self, IdealHandle};
use charvar_core::weyl::{WeylElement, WeylPresentation};
use charvar_core::{MonomialOrder, PolyRing, Polynomial};
use common::*;
use proptest::prelude::*;
use rand::Rng;
use std::sync::Arc;

fn poly_ring(p: u64, n: usize) -> Arc<PolyRing> {
    let names = (1..=n).map(|i| format!("x{i}")).collect();
    PolyRing::new(field(p), names, MonomialOrder::DegRevLex)
}

fn random_poly(rng: &mut Rng8, ring: &Arc<PolyRing>, max_deg: u32, terms: usize) -> Polynomial {
    let n = ring.nvars();
    let p = ring.field.p() as i64;
    let ts: Vec<(i64, Vec<u32>)> = (0..terms)
        .map(|_| {
            let mut e = vec![0; n];
            for _ in 0..rng.gen_range(0..=max_deg) {
                e[rng.gen_range(0..n)] += 1;
            }
            (rng.gen_range(1..p), e)
        })
        .collect();
    Polynomial::from_terms(ring, &ts)
}

fn random_weyl(rng: &mut Rng8, d: usize) -> WeylElement {
    let f = field(7);
    WeylElement::from_vector(f, d, random_operator(rng, f, d))
}

/// A polynomial in `t` only, as a vector in the Weyl variables.
fn random_t_poly(rng: &mut Rng8, d: usize) -> charvar_core::vector::Vector {
    let f = field(7);
    let ring = charvar_core::filt::FilteredRing::order(f, d);
    let v = random_vector(rng, &ring, 1, 0, 3);
    let ts = v
        .terms
        .into_iter()
        .map(|mut t| {
            for k in 0..d {
                t.m.0[k] += rng.gen_range(0..=2);
            }
            t
        })
        .collect();
    charvar_core::vector::Vector::from_terms(
        ts,
        f,
        &charvar_core::monomial::ModuleOrder::top(charvar_core::weyl::weyl_order(d), vec![0]),
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn normal_forms_are_canonical(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let ring = poly_ring([5, 7][(seed % 2) as usize], 1 + (seed % 3) as usize);
        let gens: Vec<Polynomial> = (0..rng.gen_range(1..=3)).map(|_| random_poly(&mut rng, &ring, 3, 3)).collect();
        let i = IdealHandle::new(&ring, gens.clone()).unwrap();
        let gb = i.groebner().unwrap();
        let ord = ring.order.clone();
        let f = random_poly(&mut rng, &ring, 4, 4);
        let r = ideal::reduce(&f, &gb, &ord).unwrap();
        prop_assert_eq!(&ideal::reduce(&r, &gb, &ord).unwrap(), &r);
        prop_assert!(i.contains(&f.sub(&r).unwrap()).unwrap());
        for g in &gens {
            prop_assert!(ideal::reduce(g, &gb, &ord).unwrap().is_zero());
        }
        let mut shuffled = gens.clone();
        shuffled.reverse();
        let j = IdealHandle::new(&ring, shuffled).unwrap();
        prop_assert_eq!(&*j.groebner().unwrap(), &*gb);
    }

    #[test]
    fn powers_lie_in_the_radical(seed in any::<u64>(), k in 1u32..4) {
        let mut rng = rng(seed);
        let ring = poly_ring(7, 2);
        let f = random_poly(&mut rng, &ring, 2, 2);
        let g = random_poly(&mut rng, &ring, 2, 2);
        let i = IdealHandle::new(&ring, vec![f.pow(k), g]).unwrap();
        prop_assert!(i.radical_member(&f).unwrap());
        let w = i.power_witness(&f, k).unwrap();
        prop_assert!(w.is_some_and(|e| e <= k));
    }

    #[test]
    fn weyl_multiplication_is_associative(seed in any::<u64>(), d in 1usize..3) {
        let mut rng = rng(seed);
        let (p, q, r) = (random_weyl(&mut rng, d), random_weyl(&mut rng, d), random_weyl(&mut rng, d));
        let left = p.mul(&q).unwrap().mul(&r).unwrap();
        let right = p.mul(&q.mul(&r).unwrap()).unwrap();
        prop_assert_eq!(left.to_string(), right.to_string());
    }

    #[test]
    fn products_act_as_compositions(seed in any::<u64>(), d in 1usize..3) {
        let mut rng = rng(seed);
        let (p, q) = (random_weyl(&mut rng, d), random_weyl(&mut rng, d));
        let f = random_t_poly(&mut rng, d);
        prop_assert_eq!(p.mul(&q).unwrap().act(&f), p.act(&q.act(&f)));
    }

    #[test]
    fn anti_involution_reverses_products(seed in any::<u64>(), d in 1usize..3) {
        let mut rng = rng(seed);
        let (p, q) = (random_weyl(&mut rng, d), random_weyl(&mut rng, d));
        prop_assert_eq!(p.anti_involution().anti_involution().to_string(), p.to_string());
        let lhs = p.mul(&q).unwrap().anti_involution();
        let rhs = q.anti_involution().mul(&p.anti_involution()).unwrap();
        prop_assert_eq!(lhs.to_string(), rhs.to_string());
    }

    #[test]
    fn symbols_are_multiplicative(seed in any::<u64>(), d in 1usize..3) {
        let mut rng = rng(seed);
        let (p, q) = (random_weyl(&mut rng, d), random_weyl(&mut rng, d));
        let pq = p.mul(&q).unwrap();
        prop_assert_eq!(pq.order(), p.order() + q.order());
        let expect = p.principal_symbol().unwrap().mul(&q.principal_symbol().unwrap()).unwrap();
        prop_assert_eq!(pq.principal_symbol().unwrap(), expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn strictness_matches_the_graded_side(seed in any::<u64>(), which in 0usize..2) {
        let mut rng = rng(seed);
        let (_, ring) = test_rings().swap_remove(which);
        let target = random_module(&mut rng, &ring);
        let u = random_into(&mut rng, &target);
        let r = is_strict(&u, DEFAULT_SLACK).unwrap();
        prop_assert!(r.graded_equivalences_hold(), "{:?}", r);
        prop_assert!(r.four_term_criterion_holds(), "{:?}", r);
        prop_assert!(r.flags_agree(), "{:?}", r);
    }

    #[test]
    fn strict_iff_coimage_to_image_is_iso(seed in any::<u64>(), which in 0usize..2) {
        let mut rng = rng(seed);
        let (_, ring) = test_rings().swap_remove(which);
        let target = random_module(&mut rng, &ring);
        let u = random_into(&mut rng, &target);
        let strict = is_strict(&u, DEFAULT_SLACK).unwrap().strict;
        let ick = induced_ker_coker(&u, DEFAULT_SLACK).unwrap();
        let canonical = is_strict(&ick.canonical, DEFAULT_SLACK).unwrap();
        prop_assert!(canonical.mono && canonical.epi);
        prop_assert_eq!(canonical.iso(), strict);
        prop_assert!(is_strict(&ick.ker_map, DEFAULT_SLACK).unwrap().strict_mono());
        prop_assert!(is_strict(&ick.im_map, DEFAULT_SLACK).unwrap().strict_mono());
        prop_assert!(is_strict(&ick.coim_map, DEFAULT_SLACK).unwrap().strict_epi());
        prop_assert!(is_strict(&ick.coker_map, DEFAULT_SLACK).unwrap().strict_epi());
    }

    #[test]
    fn composition_with_identity_is_neutral(seed in any::<u64>(), which in 0usize..2) {
        let mut rng = rng(seed);
        let (_, ring) = test_rings().swap_remove(which);
        let target = random_module(&mut rng, &ring);
        let u = random_into(&mut rng, &target);
        let left = charvar_core::filt::FilteredMorphism::identity(&u.source).unwrap().then(&u).unwrap();
        let right = u.then(&charvar_core::filt::FilteredMorphism::identity(&u.target).unwrap()).unwrap();
        prop_assert_eq!(&left.images, &u.images);
        prop_assert_eq!(&right.images, &u.images);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn filtered_ext_is_a_subquotient_of_graded_ext(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let f = field(7);
        let m = WeylPresentation::new(f, 1, vec![rng.gen_range(-1..=1)], vec![random_operator(&mut rng, f, 1)]);
        let gm = GoodFilteredModule::from_weyl(&m);
        for r in 0..=2 {
            let e = filtered_ext(&gm, r, DEFAULT_SLACK).unwrap();
            prop_assert!(e.subquotient_bound_holds(), "r={} {:?}", r, e.ranks);
            prop_assert!(e.vanishing_implication_holds());
            prop_assert!(e.hom_comparisons_agree());
        }
    }

    #[test]
    fn cyclic_modules_satisfy_bernstein(seed in any::<u64>(), d in 1usize..3) {
        let mut rng = rng(seed);
        let f = field(5);
        let m = WeylPresentation::new(f, d, vec![0], vec![random_operator(&mut rng, f, d)]);
        let car = charvar::char_variety(&m).unwrap();
        let rep = charvar::holonomicity_report(&car);
        prop_assert!(rep.zero || rep.bernstein_ok);
        // a single operator with nonzero symbol cuts a hypersurface
        prop_assert_eq!(car.dim, 2 * d as i64 - 1);
    }
}
