//! Acceptance criteria. Every test writes one `[PASS]`/`[FAIL]` line to
//! stderr (bypassing the test harness capture) before asserting.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use nalgebra::Matrix2;
use qpwalk_cli::{run, Experiment, ExperimentConfig, FieldSpec, Format};
use qpwalk_core::gauge::{apply_gauge, electric_step, verify_gauge_equivalence, GaugePhase};
use qpwalk_core::momentum::{regrouped_block, trace_formula};
use qpwalk_core::noise::{noisy_evolve_trajectory, return_series, NoiseConfig, NoiseScale};
use qpwalk_core::number_theory::{golden_ratio, ContinuedFraction};
use qpwalk_core::revival::{alpha_tilde_sup, appendix_table, lipschitz_bound, revival_deviation, revival_report, AppendixCoin, Sign};
use qpwalk_core::{
    coins, evolve, position_distribution, return_probability, rotation_x, step, Mat2, TimeRule, WalkParams, WalkState,
    C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, ok: bool, detail: String) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[{tag}] criterion {id:>2} {name}: {detail}");
}

fn info(id: u32, detail: String) {
    let _ = writeln!(std::io::stderr(), "[INFO] criterion {id:>2} {detail}");
}

fn within(elapsed: Duration, secs: f64) -> (bool, String) {
    let s = elapsed.as_secs_f64();
    (s < secs, format!("{s:.2} s (limit {secs} s)"))
}

fn hadamard(field: f64) -> WalkParams {
    WalkParams::with_coin(field, coins::hadamard()).unwrap()
}

fn to_na(m: &Mat2) -> Matrix2<C64> {
    Matrix2::new(m.e[0][0], m.e[0][1], m.e[1][0], m.e[1][1])
}

#[test]
fn c01_trace_formula_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let m = rng.gen_range(1..=12u64);
        let n = loop {
            let n = rng.gen_range(1..=m);
            if num_integer::gcd(n, m) == 1 {
                break n;
            }
        };
        let mut z = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let mat = Mat2::new(z(), z(), z(), z());
        let r = rotation_x(2.0 * PI * n as f64 / m as f64);
        // Oracle: tr(M R^0 M R^1 ⋯ M R^{m-1}) with nalgebra.
        let (mm, rr) = (to_na(&mat), to_na(r.matrix()));
        let mut acc = Matrix2::<C64>::identity();
        let mut rp = Matrix2::<C64>::identity();
        for _ in 0..m {
            acc = acc * mm * rp;
            rp *= rr;
        }
        let got = trace_formula(&mat, &r, m).unwrap();
        worst = worst.max((got - acc.trace()).norm());
    }
    let (fast, time) = within(start.elapsed(), 1.0);
    let ok = worst <= 1e-9 && fast;
    report(1, "trace formula", ok, format!("max |formula - direct| = {worst:.2e} (tol 1e-9), {time}"));
    assert!(ok);
}

#[test]
fn c02_hadamard_revival_scaling() {
    let start = Instant::now();
    let ms = [6u64, 8, 10, 12, 14, 16];
    let mut pts = Vec::new();
    let mut factor_ok = true;
    let mut parts = Vec::new();
    for &m in &ms {
        let r = revival_report(&hadamard(2.0 * PI / m as f64), m);
        let law = 2f64.powf(1.0 - m as f64 / 2.0);
        let ratio = r.measured_deviation / law;
        factor_ok &= (0.5..=2.0).contains(&ratio);
        parts.push(format!("m={m}: {:.4} vs {:.4}", r.measured_deviation, law));
        pts.push((m as f64, r.measured_deviation.ln()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let target = -(2f64.ln()) / 2.0;
    let slope_ok = ((slope - target) / target).abs() <= 0.05;
    let (fast, time) = within(start.elapsed(), 10.0);
    let ok = factor_ok && slope_ok && fast;
    report(
        2,
        "Hadamard revival scaling",
        ok,
        format!("{}; slope {slope:.4} vs {target:.4}; {time}", parts.join(", ")),
    );
    info(2, format!("even m measured slope {slope:.4} = -(ln 2)/4 within {:.1e}", (slope + 2f64.ln() / 4.0).abs()));
    let odd: Vec<String> = [5u64, 7, 9, 11, 13, 15]
        .iter()
        .map(|&m| {
            let r = revival_report(&hadamard(2.0 * PI / m as f64), m);
            format!("m={m}: {:.3e}/{:.3e}", r.measured_deviation, 2f64.powf(1.0 - m as f64 / 2.0))
        })
        .collect();
    info(2, format!("odd m at t=2m, measured/2^(1-m/2): {}", odd.join(", ")));
    assert!(ok);
}

#[test]
fn c03_appendix_exactness() {
    let start = Instant::now();
    let rows = appendix_table(&[3, 4, 5, 6, 7, 8, 9, 10, 11, 12]);
    let mut bad = Vec::new();
    for r in &rows {
        let ok = match (r.coin, r.m % 2) {
            (AppendixCoin::Identity, 1) => (r.deviation - 2.0).abs() <= 1e-10,
            _ => r.deviation <= 1e-10,
        };
        if !ok {
            bad.push(format!("{} m={} deviation {:.3}", r.coin.name(), r.m, r.deviation));
        }
    }
    let (fast, time) = within(start.elapsed(), 5.0);
    let ok = bad.is_empty() && fast;
    let detail = if bad.is_empty() { format!("{} rows exact", rows.len()) } else { format!("off: {}", bad.join("; ")) };
    report(3, "appendix exactness", ok, format!("{detail}; {time}"));
    assert!(ok);
}

#[test]
fn c04_rational_refocus() {
    let start = Instant::now();
    let mut c = ExperimentConfig::defaults(Experiment::Evolve);
    c.field = FieldSpec::Rational { n: 1, m: 155 };
    c.t_max = 310;
    let rec = run(&c).unwrap();
    let expected_rows: usize = (0..=310).map(|t| 2 * t + 1).sum();
    let p_row = rec
        .rows
        .iter()
        .find(|r| r[0] == 310u64.into() && r[1] == 0i64.into())
        .map(|r| match r[2] {
            qpwalk_cli::Cell::Float(p) => p,
            _ => f64::NAN,
        })
        .unwrap();
    let (fast, time) = within(start.elapsed(), 30.0);
    let ok = p_row >= 0.999 && rec.rows.len() == expected_rows && fast;
    report(4, "refocusing at t = 2m", ok, format!("p(0, 310) = {p_row:.12}, grid rows {}; {time}", rec.rows.len()));
    assert!(ok);
}

#[test]
fn c05_no_revival_coin() {
    let start = Instant::now();
    let p = WalkParams::with_coin(2.0 * PI / 10.0, coins::no_revival()).unwrap();
    let sup = alpha_tilde_sup(&p);
    let dev = revival_deviation(&p, 20, Sign::Plus).min(revival_deviation(&p, 20, Sign::Minus));
    let (fast, time) = within(start.elapsed(), 5.0);
    let ok = (sup - 1.0).abs() <= 1e-9 && dev >= 0.5 && fast;
    report(5, "no-revival coin", ok, format!("sup|ã| = {sup:.12}, min over signs of deviation at t=20: {dev:.3}; {time}"));
    assert!(ok);
}

#[test]
fn c06_gauge_equivalence() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for phi in [2.0 * PI / 10.0, 2.0 * PI / 7.0, 2.0 * PI * golden_ratio()] {
        for coin in [coins::hadamard(), coins::no_revival()] {
            worst = worst.max(verify_gauge_equivalence(phi, &coin, 50, 20, 6));
        }
    }
    let (fast, time) = within(start.elapsed(), 10.0);
    let ok = worst <= 1e-10 && fast;
    report(6, "gauge equivalence", ok, format!("max deviation {worst:.2e} (tol 1e-10); {time}"));
    assert!(ok);
}

fn mean_p(field: f64, eps: f64, scale: NoiseScale, t: u64) -> f64 {
    let noise = NoiseConfig { epsilon: eps, scale, seed: 2014, ensemble_size: 100, ..Default::default() };
    return_series(&hadamard(field), &noise, t, &WalkState::spin_up_at_origin()).unwrap()[t as usize].mean
}

#[test]
fn c07_noise_thresholds() {
    let start = Instant::now();
    let field = 2.0 * PI / 100.0;
    let low = mean_p(field, 1e-4, NoiseScale::Turns, 100);
    let high = mean_p(field, 1e-3, NoiseScale::Turns, 100);
    let (fast, time) = within(start.elapsed(), 60.0);
    let ok = low >= 0.9 && high <= 0.5 && fast;
    report(
        7,
        "noise thresholds",
        ok,
        format!("ε in units of 2π: mean p(100) = {low:.3} (ε=1e-4, need ≥ 0.9), {high:.3} (ε=1e-3, need ≤ 0.5); {time}"),
    );
    info(
        7,
        format!(
            "ε in radians: mean p(100) = {:.3} (ε=1e-4), {:.3} (ε=1e-3)",
            mean_p(field, 1e-4, NoiseScale::Radians, 100),
            mean_p(field, 1e-3, NoiseScale::Radians, 100)
        ),
    );
    assert!(ok);
}

#[test]
fn c08_golden_localization() {
    let start = Instant::now();
    let params = hadamard(2.0 * PI * golden_ratio());
    let mut psi = WalkState::spin_up_at_origin();
    let (mut p_min, mut t_min, mut radius) = (1.0f64, 0u64, 0u64);
    for t in 1..=1000u64 {
        psi = step(&psi, t, &params);
        // Odd times cannot return to the origin.
        if t % 2 == 0 {
            let p = return_probability(&psi);
            if p < p_min {
                (p_min, t_min) = (p, t);
            }
        }
        radius = radius.max(position_distribution(&psi).support_radius(1e-4));
    }
    let noisy = mean_p(2.0 * PI * golden_ratio(), 1e-3, NoiseScale::Turns, 1000);
    let (fast, time) = within(start.elapsed(), 60.0);
    let ok = p_min >= 0.05 && radius <= 20 && noisy < p_min / 2.0 && fast;
    report(
        8,
        "golden localization",
        ok,
        format!(
            "min even-t p = {p_min:.3} at t={t_min}, radius (tail 1e-4) = {radius}, noisy mean p(1000) = {noisy:.3}; {time}"
        ),
    );
    assert!(ok);
}

#[test]
fn c09_lipschitz() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut worst_ratio = 0.0f64;
    let mut violations = 0;
    for _ in 0..2000 {
        let a = C64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..2.0 * PI));
        let b = C64::from_polar((1.0 - a.norm_sqr()).sqrt(), rng.gen_range(0.0..2.0 * PI));
        let rule = if rng.gen_bool(0.5) { TimeRule::RxField } else { TimeRule::GaugedSz };
        let phi = rng.gen_range(0.0..2.0 * PI);
        let phi2 = phi + rng.gen_range(-0.05..0.05);
        let t = rng.gen_range(1..=50u64);
        let k = rng.gen_range(0.0..2.0 * PI);
        let p = WalkParams::new(phi, a, b).unwrap().time_rule(rule);
        let d = (*regrouped_block(k, &p, t).matrix() - *regrouped_block(k, &p.with_field(phi2), t).matrix()).op_norm();
        let bound = lipschitz_bound(t, phi - phi2);
        if d > bound + 1e-12 {
            violations += 1;
        }
        worst_ratio = worst_ratio.max(d / bound);
    }
    let (fast, time) = within(start.elapsed(), 5.0);
    let ok = violations == 0 && fast;
    report(9, "Lipschitz bound", ok, format!("{violations} violations in 2000 samples, max ratio {worst_ratio:.3}; {time}"));
    assert!(ok);
}

#[test]
fn c10_continued_fractions() {
    let start = Instant::now();
    let cf = ContinuedFraction::golden(40);
    let (mut f0, mut f1) = (0u128, 1u128);
    let mut fib_ok = true;
    for k in 1..=40 {
        let c = cf.convergent(k).unwrap();
        fib_ok &= c.n == f1 && c.d == f0 + f1;
        (f0, f1) = (f1, f0 + f1);
    }
    // Irrationals stand-ins: 40-term expansions with random coefficients,
    // expanded exactly to depth 15.
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut checks_ok = true;
    for _ in 0..20 {
        let coeffs: Vec<u128> = (0..40).map(|_| rng.gen_range(1..=5)).collect();
        let deep = ContinuedFraction::from_coefficients(&coeffs).unwrap();
        let last = deep.convergent(40).unwrap();
        let cf = ContinuedFraction::from_ratio(last.n, last.d, 16).unwrap();
        checks_ok &= cf.coefficients() == &coeffs[..16];
        let checks = cf.approximation_check();
        checks_ok &= checks.len() == 15 && checks.iter().all(|&b| b);
    }
    let (fast, time) = within(start.elapsed(), 1.0);
    let ok = fib_ok && checks_ok && fast;
    report(10, "continued fractions", ok, format!("Fibonacci to depth 40: {fib_ok}, 20 approximation checks to depth 15: {checks_ok}; {time}"));
    assert!(ok);
}

#[test]
fn c11_unitarity_and_reproducibility() {
    let start = Instant::now();
    let t_max = 10_000u64;
    let psi = WalkState::spin_up_at_origin;
    let field = 2.0 * PI * golden_ratio();
    let rx = hadamard(field);
    let gauged = rx.time_rule(TimeRule::GaugedSz);
    let noise = NoiseConfig { epsilon: 1e-3, seed: 5, ..Default::default() };
    let handles = [
        std::thread::spawn(move || evolve(&psi(), 1, t_max, &rx).norm_sqr()),
        std::thread::spawn(move || evolve(&psi(), 1, t_max, &gauged).norm_sqr()),
        std::thread::spawn(move || noisy_evolve_trajectory(&psi(), t_max, &rx, &noise, 3).norm_sqr()),
        std::thread::spawn(move || {
            let e = (0..t_max).fold(psi(), |s, _| electric_step(&s, field, &coins::hadamard()));
            apply_gauge(&e, GaugePhase::new(field, t_max)).norm_sqr()
        }),
    ];
    let norms: Vec<f64> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    let norm_ok = norms.iter().all(|n| (n - 1.0).abs() <= 1e-9);

    let mut same = true;
    for e in [Experiment::NoiseSeries, Experiment::TraceCheck, Experiment::Evolve, Experiment::BlochTrace] {
        let mut c = ExperimentConfig::defaults(e);
        c.t_max = c.t_max.min(100);
        c.ensemble = 10;
        c.seed = 77;
        for f in [Format::Csv, Format::Json] {
            same &= run(&c).unwrap().render(f) == run(&c).unwrap().render(f);
        }
    }
    let (fast, time) = within(start.elapsed(), 30.0);
    let ok = norm_ok && same && fast;
    let worst = norms.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    report(
        11,
        "unitarity and reproducibility",
        ok,
        format!("max norm defect at t=1e4 over 4 walk types {worst:.2e}, identical bytes: {same}; {time}"),
    );
    assert!(ok);
}
