//! Randomized cross-checks on seeded downset lattices. Every generated
//! lattice is distributive by construction, so both wedge methods apply
//! and must agree; the compositions are compared against their
//! definitional forms rather than against themselves.

use proptest::prelude::*;
use qlab_core::laws::{sampled_sandwich, WedgeCtx};
use qlab_core::limits::Limits;
use qlab_core::maps::{
    classify, compose_dot, compose_dot_definitional, phi, psi, psi_definitional, Sampler,
};
use qlab_core::wedge::{WedgeMethod, WedgeRelation};
use qlab_core::Lattice;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn downset_lattice(size: usize, prob_percent: u8, seed: u64) -> Arc<Lattice> {
    let limits = Limits::default();
    let p = f64::from(prob_percent) / 100.0;
    Arc::new(Lattice::from_random_poset(size, p, seed, &limits).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn both_wedge_methods_agree_on_random_downset_lattices(
        size in 1usize..=5,
        prob in 0u8..=100,
        seed in any::<u64>(),
    ) {
        let limits = Limits::default();
        let l = downset_lattice(size, prob, seed);
        prop_assert!(l.is_distributive);
        let oracle = WedgeRelation::wedge(&l, WedgeMethod::Oracle, &limits).unwrap();
        let fast = WedgeRelation::wedge(&l, WedgeMethod::Fast, &limits).unwrap();
        prop_assert_eq!(oracle.pairs(), fast.pairs());
        let co_oracle = WedgeRelation::co_wedge(&l, WedgeMethod::Oracle, &limits).unwrap();
        let co_fast = WedgeRelation::co_wedge(&l, WedgeMethod::Fast, &limits).unwrap();
        prop_assert_eq!(co_oracle.pairs(), co_fast.pairs());
        prop_assert!(oracle.check_axioms(&limits).ok());
        prop_assert!(co_oracle.check_axioms(&limits).ok());
    }

    #[test]
    fn sampled_pairs_never_break_the_sandwich(
        size in 1usize..=5,
        prob in 0u8..=100,
        seed in any::<u64>(),
        draw_seed in any::<u64>(),
    ) {
        let limits = Limits::default();
        let l = downset_lattice(size, prob, seed);
        let ctx = WedgeCtx::new(&l, &limits).unwrap();
        prop_assert!(sampled_sandwich(&l, &ctx, draw_seed, 16).unwrap().passed());
    }

    #[test]
    fn projections_are_idempotent_and_land_where_promised(
        size in 1usize..=5,
        prob in 0u8..=100,
        seed in any::<u64>(),
        draw_seed in any::<u64>(),
    ) {
        let limits = Limits::default();
        let l = downset_lattice(size, prob, seed);
        let ctx = WedgeCtx::new(&l, &limits).unwrap();
        let sampler = Sampler::new(&l).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(draw_seed);
        for _ in 0..8 {
            let f = sampler.draw(&mut rng);
            let p = psi(&f, &ctx.wedge).unwrap();
            prop_assert!(p.pointwise_leq(&f));
            prop_assert!(classify(&p).unwrap().sup_preserving);
            prop_assert_eq!(psi(&p, &ctx.wedge).unwrap(), p);

            let q = phi(&f, &ctx.co).unwrap();
            prop_assert!(f.pointwise_leq(&q));
            prop_assert!(classify(&q).unwrap().meet_preserving);
            prop_assert_eq!(phi(&q, &ctx.co).unwrap(), q.clone());
        }
    }

    #[test]
    fn fast_composition_matches_the_definitional_scan(
        size in 1usize..=4,
        prob in 0u8..=100,
        seed in any::<u64>(),
        draw_seed in any::<u64>(),
    ) {
        let limits = Limits::default();
        let l = downset_lattice(size, prob, seed);
        let w_fast = WedgeRelation::wedge(&l, WedgeMethod::Fast, &limits).unwrap();
        let w_oracle = WedgeRelation::wedge(&l, WedgeMethod::Oracle, &limits).unwrap();
        let sampler = Sampler::new(&l).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(draw_seed);
        for _ in 0..6 {
            let g = sampler.draw(&mut rng);
            let f = sampler.draw(&mut rng);
            let quick = compose_dot(&g, &f, &w_fast).unwrap();
            let slow = compose_dot_definitional(&g, &f, &w_oracle, &w_oracle).unwrap();
            prop_assert_eq!(quick, slow);
            let p_quick = psi(&f, &w_fast).unwrap();
            let p_slow = psi_definitional(&f, &w_oracle, &w_oracle).unwrap();
            prop_assert_eq!(p_quick, p_slow);
        }
    }

    #[test]
    fn lattice_files_survive_a_round_trip(
        size in 1usize..=5,
        prob in 0u8..=100,
        seed in any::<u64>(),
    ) {
        let limits = Limits::default();
        let l = downset_lattice(size, prob, seed);
        let file = qlab_core::files::LatticeFile::of(&l);
        let rebuilt = file.build(&limits).unwrap();
        prop_assert_eq!(qlab_core::files::LatticeFile::of(&rebuilt), file);
        prop_assert!(rebuilt.is_lattice && rebuilt.is_distributive);
    }
}
