//! Randomized invariants across modules, driven by seeds so that proptest
//! shrinks over the seed.

use std::collections::BTreeMap;

use monodromy_lab::complexes::{homology_dims, Homology, OmegaChainMap};
use monodromy_lab::f2::{F2Matrix, F2Vector};
use monodromy_lab::models;
use monodromy_lab::morse::{build_morse_complex, continuation_map};
use monodromy_lab::omega::{Exponent, OmegaMatrix};
use monodromy_lab::random::{random_chain_complex, random_matching, random_simplicial_complex, random_wang_instance};
use monodromy_lab::seidel::{
    build_phi, check_lemma3, corollary2_injectivity, omega_boundary_preimage, run_dataset, Corollary2Verdict, Dataset,
    Direction, FilteredMap,
};
use monodromy_lab::synthetic::{synthetic_complex, synthetic_dataset};
use monodromy_lab::wang::{build_wang, monodromy_trivial_direct, monodromy_trivial_via_i, verify_wang_exactness};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn morse_homology_equals_cellular(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cx = random_simplicial_complex(&mut r, 60, 3);
        let d = random_matching(&mut r, cx.clone());
        let m = build_morse_complex(&d).unwrap();
        prop_assert_eq!(homology_dims(&m.complex), homology_dims(&cx.chain_complex()));
    }

    #[test]
    fn continuation_round_trip_is_identity_on_homology(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cx = random_simplicial_complex(&mut r, 40, 2);
        let a = random_matching(&mut r, cx.clone());
        let b = random_matching(&mut r, cx);
        let there = continuation_map(&b, &a).unwrap();
        let back = continuation_map(&a, &b).unwrap();
        let round = back.after(&there).unwrap();
        let h = Homology::compute(round.source());
        for k in round.source().degrees() {
            let m = round.induced(k, &h, &h);
            prop_assert_eq!(m.clone(), F2Matrix::identity(m.rows()));
        }
    }

    #[test]
    fn wang_exact_and_verdicts_agree(seed in any::<u64>()) {
        let (c, phi, phi_g) = random_wang_instance(&mut rng(seed), 30);
        let w = build_wang(c.clone(), c, phi, phi_g).unwrap();
        prop_assert!(verify_wang_exactness(&w).is_ok());
        if let Ok(direct) = monodromy_trivial_direct(&w) {
            prop_assert_eq!(direct.trivial, monodromy_trivial_via_i(&w).trivial);
        }
    }

    #[test]
    fn swapping_the_maps_keeps_the_cone(seed in any::<u64>()) {
        let (c, phi, phi_g) = random_wang_instance(&mut rng(seed), 30);
        let a = build_wang(c.clone(), c.clone(), phi.clone(), phi_g.clone()).unwrap();
        let b = build_wang(c.clone(), c, phi_g, phi).unwrap();
        prop_assert_eq!(a.cone, b.cone);
    }

    #[test]
    fn reordering_generators_keeps_homology(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_chain_complex(&mut r, 30);
        let perm: BTreeMap<i32, Vec<usize>> = c
            .degrees()
            .map(|k| {
                let mut p: Vec<usize> = (0..c.dim(k)).collect();
                p.shuffle(&mut r);
                (k, p)
            })
            .collect();
        prop_assert_eq!(homology_dims(&c.permuted(&perm)), homology_dims(&c));
    }

    #[test]
    fn cycle_bounds_iff_its_extension_bounds(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_chain_complex(&mut r, 25);
        let id = FilteredMap::identity(&c);
        let h = FilteredMap::zero(&c, &c, 1);
        let k = r.gen_range(c.min_degree()..=c.max_degree());
        let basis = c.boundary(k).kernel_basis();
        let mut z = F2Vector::zeros(c.dim(k));
        for b in &basis {
            if r.gen_bool(0.5) {
                z.add_assign(b);
            }
        }
        let lifted: Vec<_> = (0..z.len()).map(|i| monodromy_lab::omega::OmegaElement::from_bit(z.get(i))).collect();
        let bounds = c.boundary_preimage(k, &z).is_some();
        prop_assert_eq!(omega_boundary_preimage(&c, k, &lifted).is_some(), bounds);
        let report = corollary2_injectivity(&id, &id, &h, &c, &c, k, &z).unwrap();
        prop_assert!(report.replay_holds);
        let zero_class = matches!(report.verdict, Corollary2Verdict::ZeroClass { .. });
        prop_assert_eq!(zero_class, bounds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generated_datasets_pass_both_identities(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = synthetic_complex(&mut r);
        let ds = synthetic_dataset(&mut r, &c);
        let (outcome, maps) = run_dataset(&ds, &c);
        prop_assert!(outcome.all_pass(), "{:?}", outcome.first_failure());
        let maps = maps.unwrap();
        prop_assert!(maps.psi.provenance_consistent());
        prop_assert!(maps.big_h.provenance_consistent());
    }

    #[test]
    fn enlarging_epsilon_never_drops_entries(seed in any::<u64>(), extra in 1i64..200) {
        let mut r = rng(seed);
        let c = synthetic_complex(&mut r);
        let ds = synthetic_dataset(&mut r, &c);
        let mut g = ds.table(Direction::G).unwrap().clone();
        let small = build_phi(&g, &c, &c).unwrap();
        g.energy_caps.epsilon = Exponent::from_rational(
            g.energy_caps.epsilon.to_rational() + Exponent::new(extra, 100).to_rational(),
        );
        let large = build_phi(&g, &c, &c).unwrap();
        prop_assert!(small.provenance.keys().all(|k| large.provenance.contains_key(k)));
        prop_assert!(large.filtered.len() <= small.filtered.len());
    }

    #[test]
    fn entries_respect_the_cap(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = synthetic_complex(&mut r);
        let ds = synthetic_dataset(&mut r, &c);
        for d in [Direction::G, Direction::GInverse] {
            let t = ds.table(d).unwrap();
            let cap = t.energy_caps.window(d).cap;
            let f = build_phi(t, &c, &c).unwrap();
            for terms in f.provenance.values() {
                for term in terms {
                    prop_assert!(term.energy <= cap);
                }
            }
        }
    }

    #[test]
    fn negative_perturbations_never_change_the_gluing_verdict(seed in any::<u64>(), flip in any::<bool>()) {
        let mut r = rng(seed);
        let c = synthetic_complex(&mut r);
        let mut ds = synthetic_dataset(&mut r, &c);
        if flip {
            let positions = ds.positions();
            let (t, e) = positions[r.gen_range(0..positions.len())];
            ds = ds.flip_count(t, e);
        }
        let Some(maps) = run_dataset(&ds, &c).1 else { return Ok(()) };
        let before = check_lemma3(&maps.i_r, &maps.psi, &maps.h).unwrap();
        let perturbed = perturb(&mut r, &maps.psi.map);
        let psi = FilteredMap { map: perturbed, ..maps.psi.clone() };
        let after = check_lemma3(&maps.i_r, &psi, &maps.h).unwrap();
        prop_assert_eq!(before, after);
    }
}

/// Adds random matrices times strictly negative powers of `T`.
fn perturb(r: &mut ChaCha8Rng, f: &OmegaChainMap) -> OmegaChainMap {
    let mut mats = f.matrices().clone();
    for m in mats.values_mut() {
        for _ in 0..r.gen_range(1..=3) {
            let mut p = F2Matrix::zeros(m.rows(), m.cols());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    p.set(i, j, r.gen_bool(0.5));
                }
            }
            let e = Exponent::new(-r.gen_range(1..50), r.gen_range(1..20));
            *m = m.add(&OmegaMatrix::monomial_times(&p, &e)).unwrap();
        }
    }
    OmegaChainMap::new(f.source().clone(), f.target().clone(), f.shift(), mats).unwrap()
}

#[test]
fn trivial_dataset_over_every_model() {
    let caps = models::standard_caps();
    for d in [
        models::circle(),
        models::sphere(),
        models::torus_perfect(),
        models::klein_bottle(),
    ] {
        let c = models::morse(&d).complex;
        let ds: Dataset = models::trivial_dataset(&c, &caps);
        assert!(run_dataset(&ds, &c).0.all_pass());
    }
}
