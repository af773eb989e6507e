use std::f64::consts::PI;

use qpwalk_core::coins;
use qpwalk_core::number_theory::ContinuedFraction;
use qpwalk_core::revival::{irrational_revival_bound, revival_deviation, Sign};
use qpwalk_core::WalkParams;

#[test]
fn deviation_at_convergent_time_respects_bound() {
    let cf = ContinuedFraction::from_coefficients(&[15, 1000, 1, 1, 2, 1]).unwrap();
    let field = 2.0 * PI * cf.value_f64();
    let b = irrational_revival_bound(&cf, 1).unwrap();
    assert_eq!((b.n, b.d, b.time, b.sign), (1, 15, 30, Sign::Minus));

    let clean = WalkParams::with_coin(2.0 * PI / 15.0, coins::hadamard()).unwrap();
    let clean_dev = revival_deviation(&clean, b.time, b.sign);
    assert!((clean_dev - 2f64.powf(1.0 - 7.5)).abs() < 1e-9);

    let measured = revival_deviation(&clean.with_field(field), b.time, b.sign);
    assert!(measured <= clean_dev + b.lipschitz, "{measured} > {clean_dev} + {}", b.lipschitz);
    assert!(b.lipschitz < 4.0 * PI / 1000.0 * 1.1);
}

#[test]
fn golden_convergents_give_even_and_odd_revival_times() {
    let cf = ContinuedFraction::golden(20);
    for k in 2..15 {
        let b = irrational_revival_bound(&cf, k).unwrap();
        let d = b.d as u64;
        assert_eq!(b.time, if d % 2 == 1 { 2 * d } else { d });
        // Coefficient one gives no useful bound.
        assert!(b.leading >= PI);
    }
}
