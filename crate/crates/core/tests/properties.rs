use std::f64::consts::PI;

use num_complex::Complex64 as C;
use proptest::prelude::*;
use qpwalk_core::momentum::regrouped_block;
use qpwalk_core::revival::lipschitz_bound;
use qpwalk_core::{evolve, position_distribution, TimeRule, WalkParams, WalkState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(r: f64, pa: f64, pb: f64, field: f64, gauged: bool) -> WalkParams {
    let a = C::from_polar(r, pa);
    let b = C::from_polar((1.0 - r * r).sqrt(), pb);
    let rule = if gauged { TimeRule::GaugedSz } else { TimeRule::RxField };
    WalkParams::new(field, a, b).unwrap().time_rule(rule)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_preserves_norm(
        r in 0.0..1.0f64, pa in 0.0..6.3f64, pb in 0.0..6.3f64,
        field in -7.0..7.0f64, gauged: bool, seed: u64, t in 0u64..200,
    ) {
        let p = params(r, pa, pb, field, gauged);
        let psi = WalkState::random(&mut ChaCha8Rng::seed_from_u64(seed), -3, 3);
        let out = evolve(&psi, 1, t, &p);
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((position_distribution(&out).total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolution_commutes_with_translation(
        r in 0.0..1.0f64, pa in 0.0..6.3f64, pb in 0.0..6.3f64,
        field in -7.0..7.0f64, gauged: bool, seed: u64, t in 0u64..60, dx in -50i64..50,
    ) {
        let p = params(r, pa, pb, field, gauged);
        let psi = WalkState::random(&mut ChaCha8Rng::seed_from_u64(seed), -3, 3);
        let a = evolve(&psi.translated(dx), 1, t, &p);
        let b = evolve(&psi, 1, t, &p).translated(dx);
        prop_assert!(a.distance(&b) < 1e-12);
    }

    #[test]
    fn blocks_are_lipschitz_in_field(
        r in 0.0..1.0f64, pa in 0.0..6.3f64, pb in 0.0..6.3f64,
        field in 0.0..2.0 * PI, gap in -0.1..0.1f64, gauged: bool,
        k in 0.0..2.0 * PI, t in 1u64..=50,
    ) {
        let p = params(r, pa, pb, field, gauged);
        let q = p.with_field(field + gap);
        let d = (*regrouped_block(k, &p, t).matrix() - *regrouped_block(k, &q, t).matrix()).op_norm();
        prop_assert!(d <= lipschitz_bound(t, gap) + 1e-12);
    }

    #[test]
    fn blocks_are_unitary(
        r in 0.0..1.0f64, pa in 0.0..6.3f64, pb in 0.0..6.3f64,
        field in -7.0..7.0f64, gauged: bool, k in -10.0..10.0f64, t in 0u64..100,
    ) {
        let p = params(r, pa, pb, field, gauged);
        prop_assert!(regrouped_block(k, &p, t).matrix().unitarity_defect() < 1e-11);
    }
}
