use std::f64::consts::PI;

use num_integer::Integer;
use qpwalk_core::momentum::{direct_product_trace, trace_formula};
use qpwalk_core::noise::{noise_bound, return_series, NoiseConfig};
use qpwalk_core::number_theory::ContinuedFraction;
use qpwalk_core::revival::{
    appendix_table, irrational_revival_bound, revival_deviation, revival_report, Parity, Sign,
};
use qpwalk_core::{
    bloch_vector, position_distribution, return_probability, rotation_x, step, BlochVector, Mat2, WalkParams, WalkState,
    C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ConfigError, Experiment, ExperimentConfig, FieldSpec};
use crate::record::{Cell, ExperimentRecord};

/// Tail mass outside `[-R, R]` that defines the support radius.
pub const SUPPORT_TAIL: f64 = 1e-4;
pub const TRACE_TOL: f64 = 1e-9;
pub const GAUGE_TOL: f64 = 1e-10;
pub const APPENDIX_TOL: f64 = 1e-10;

fn value_err(key: &'static str, e: impl ToString) -> ConfigError {
    ConfigError::Value { key, msg: e.to_string() }
}

fn walk_params(c: &ExperimentConfig, field: f64) -> Result<WalkParams, ConfigError> {
    Ok(WalkParams::with_coin(field, c.coin.unitary()?).map_err(|e| value_err("coin", e))?.time_rule(c.model))
}

fn sampled(t: u64, c: &ExperimentConfig) -> bool {
    t % c.every == 0 || t == c.t_max
}

fn sign_name(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "+",
        Sign::Minus => "-",
    }
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Odd => "odd",
        Parity::Even => "even",
    }
}

pub fn run(c: &ExperimentConfig) -> Result<ExperimentRecord, ConfigError> {
    match c.experiment {
        Experiment::Evolve => run_evolve(c),
        Experiment::RevivalScan => run_revival_scan(c),
        Experiment::TraceCheck => run_trace_check(c),
        Experiment::Cf => run_cf(c),
        Experiment::NoiseSeries => run_noise_series(c),
        Experiment::GaugeCheck => run_gauge_check(c),
        Experiment::AppendixTable => run_appendix_table(c),
        Experiment::BlochTrace => run_bloch_trace(c),
    }
}

/// Dense `p(x, t)` on `|x| ≤ t` from `|0, ↑⟩`.
pub fn run_evolve(c: &ExperimentConfig) -> Result<ExperimentRecord, ConfigError> {
    let params = walk_params(c, c.field.radians())?;
    let mut rec = ExperimentRecord::new(c, &["t", "x", "p"]);
    let mut psi = WalkState::spin_up_at_origin();
    let mut norm_defect = 0.0f64;
    let mut radius_max = 0u64;
    for t in 0..=c.t_max {
        if t > 0 {
            psi = step(&psi, t, &params);
        }
        norm_defect = norm_defect.max((psi.norm_sqr() - 1.0).abs());
        let dist = position_distribution(&psi);
        radius_max = radius_max.max(dist.support_radius(SUPPORT_TAIL));
        if sampled(t, c) {
            let r = t as i64;
            for x in -r..=r {
                rec.push(vec![t.into(), x.into(), dist.get(x).into()]);
            }
        }
    }
    let dist = position_distribution(&psi);
    rec.note("return_probability_final", return_probability(&psi));
    rec.note("support_radius_final", dist.support_radius(SUPPORT_TAIL));
    rec.note("support_radius_max", radius_max);
    rec.note("second_moment_final", dist.second_moment());
    rec.note("max_norm_defect", norm_defect);
    Ok(rec)
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return f64::NAN;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Rational field: deviations at `Φ = 2π/m` for each `m` in `ms`.
/// Irrational field: deviations at the revival times of the convergents
/// whose revival time is at most `tmax`.
pub fn run_revival_scan(c: &ExperimentConfig) -> Result<ExperimentRecord, ConfigError> {
    match c.field {
        FieldSpec::Rational { .. } => revival_scan_rational(c),
        _ => revival_scan_convergents(c),
    }
}

fn revival_scan_rational(c: &ExperimentConfig) -> Result<ExperimentRecord, ConfigError> {
    let mut rec = ExperimentRecord::new(
        c,
        &[
            "m",
            "parity",
            "revival_time",
            "sign",
            "deviation",
            "detected_sign",
            "detected_deviation",
            "alpha_sup",
            "predicted_scale",
            "power_law",
        ],
    );
    let (mut even, mut odd) = (Vec::new(), Vec::new());
    for &m in &c.ms {
        let params = walk_params(c, 2.0 * PI / m as f64)?;
        let r = revival_report(&params, m);
        rec.push(vec![
            m.into(),
            parity_name(r.parity).into(),
            r.revival_time.into(),
            sign_name(r.sign).into(),
            r.measured_deviation.into(),
            sign_name(r.detected_sign).into(),
            r.detected_deviation.into(),
            r.alpha_sup.into(),
            r.predicted_scale.into(),
            2f64.powf(1.0 - m as f64 / 2.0).into(),
        ]);
        if r.measured_deviation > 0.0 {
            let p = (m as f64, r.measured_deviation.ln());
            match r.parity {
                Parity::Even => even.push(p),
                Parity::Odd => odd.push(p),
            }
        }
    }
    rec.note("log_slope_even", slope(&even));
    rec.note("log_slope_odd", slope(&odd));
    rec.note("power_law_slope", -(2f64.ln()) / 2.0);
    Ok(rec)
}

fn expansion(field: &FieldSpec, depth: usize) -> Result<ContinuedFraction, ConfigError> {
    match *field {
        FieldSpec::Golden => Ok(ContinuedFraction::golden(depth)),
        FieldSpec::Rational { n, m } => {
            let n = n.rem_euclid(m as i64) as u128;
            ContinuedFraction::from_ratio(n, m as u128, depth).map_err(|e| value_err("field", e))
        }
        FieldSpec::Real(x) => ContinuedFraction::expand(x.rem_euclid(1.0), depth).map_err(|e| value_err("field", e)),
    }
}

fn revival_scan_convergents(c: &ExperimentConfig) -> Result<ExperimentRecord, ConfigError> {
    let cf = expansion(&c.field, c.depth)?;
    let params = walk_params(c, c.field.radians())?;
    let mut rec = ExperimentRecord::new(
        c,
        &["k", "n", "d", "next_coefficient", "revival_time", "sign", "deviation", "leading_bound", "lipschitz_bound"],
    );
    for k in 1..cf.depth() {
        let Ok(b) = irrational_revival_bound(&cf, k) else { break };
        if b.time > c.t_max {
            break;
        }
        let dev = revival_deviation(&params, b.time, b.sign);
        rec.push(vec![
            k.into(),
            b.n.into(),
            b.d.into(),
            b.next_coefficient.into(),
            b.time.into(),
            sign_name(b.sign).into(),
            dev.into(),
            b.leading.into(),
            b.lipschitz.into(),
        ]);
    }
    rec.note("convergents", rec.rows.len());
    Ok(rec)
}

pub fn run_trace_check(c: &ExperimentConfig) -> Result<ExperimentRecord, ConfigError> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut rec = ExperimentRecord::new(
        c,
        &["trial", "m", "n", "direct_re", "direct_im", "formula_re", "formula_im", "residual"],
    );
    let mut worst = 0.0f64;
    for trial in 0..c.trials {
        let m = rng.gen_range(1..=12u64);
        let n = loop {
            let n = rng.gen_range(0..m.max(2));
            if m == 1 || n.gcd(&m) == 1 {
                break n % m;
            }
        };
        let mut entry = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let mat = Mat2::new(entry(), entry(), entry(), entry());
        let r = rotation_x(2.0 * PI * n as f64 / m as f64);
        let direct = direct_product_trace(&mat, r.matrix(), m);
        let formula = trace_formula(&mat, &r, m).map_err(|e| value_err("trials", e))?;
        let residual = (formula - direct).norm() / direct.norm().max(1.0);
        worst = worst.max(residual);
        rec.push(vec![
            trial.into(),
            m.into(),
            n.into(),
            direct.re.into(),
            direct.im.into(),
            formula.re.into(),
            formula.im.into(),
            residual.into(),
        ]);
    }
    rec.note("max_residual", worst);
    rec.note("tolerance", TRACE_TOL);
    rec.passed = Some(worst < TRACE_TOL);
    Ok(rec)
}

pub fn run_cf(c: &ExperimentConfig) -> Result<ExperimentRecord, ConfigError> {
    let cf = expansion(&c.field, c.depth)?;
    let checks = cf.approximation_check();
    let mut rec = ExperimentRecord::new(c, &["k", "coefficient", "n", "d", "error", "bound", "holds"]);
    for k in 1..=cf.depth() {
        let conv = cf.convergent(k).expect("k within depth");
        let (bound, holds) = match cf.coefficient(k + 1) {
            Some(next) => (
                Cell::Float(1.0 / (next as f64 * (conv.d as f64).powi(2))),
                Cell::Bool(checks[k - 1]),
            ),
            None => (Cell::Text(String::new()), Cell::Text(String::new())),
        };
        rec.push(vec![
            k.into(),
            cf.coefficient(k).expect("k within depth").into(),
            conv.n.into(),
            conv.d.into(),
            cf.approximation_error(k).unwrap_or(f64::NAN).into(),
            bound,
            holds,
        ]);
    }
    let class = cf.classify();
    rec.note("termination", format!("{:?}", cf.termination()));
    rec.note("class", class.class.name());
    rec.note("depth", class.depth);
    rec.note("all_checks_hold", checks.iter().all(|&b| b));
    Ok(rec)
}

pub fn run_noise_series(c: &ExperimentConfig) -> Result<ExperimentRecord, ConfigError> {
    let params = walk_params(c, c.field.radians())?;
    let mut rec = ExperimentRecord::new(c, &["epsilon", "t", "mean", "min", "max", "single"]);
    let initial = WalkState::spin_up_at_origin();
    for &eps in &c.epsilons {
        let noise = NoiseConfig {
            epsilon: eps,
            distribution: c.noise_dist,
            scale: c.noise_scale,
            seed: c.seed,
            ensemble_size: c.ensemble,
        };
        let series = return_series(&params, &noise, c.t_max, &initial).map_err(|e| value_err("epsilon", e))?;
        for s in series.iter().filter(|s| sampled(s.t, c)) {
            rec.push(vec![eps.into(), s.t.into(), s.mean.into(), s.min.into(), s.max.into(), s.single.into()]);
        }
        let last = series.last().expect("series contains t = 0");
        rec.note(format!("mean_final[{eps:e}]"), last.mean);
        if let FieldSpec::Rational { m, .. } = c.field {
            let b = noise_bound(m, noise.amplitude_radians(), 0.0);
            rec.note(format!("bound_leading[{eps:e}]"), b.leading);
        }
    }
    Ok(rec)
}

pub fn run_gauge_check(c: &ExperimentConfig) -> Result<ExperimentRecord, ConfigError> {
    let coin = c.coin.unitary()?;
    walk_params(c, 0.0)?;
    let phi = c.field.radians();
    let dev = qpwalk_core::gauge::verify_gauge_equivalence(phi, &coin, c.t_max, c.trials, c.seed);
    let mut rec = ExperimentRecord::new(c, &["field_radians", "tmax", "trials", "max_deviation"]);
    rec.push(vec![phi.into(), c.t_max.into(), c.trials.into(), dev.into()]);
    rec.note("max_deviation", dev);
    rec.note("tolerance", GAUGE_TOL);
    rec.passed = Some(dev <= GAUGE_TOL);
    Ok(rec)
}

pub fn run_appendix_table(c: &ExperimentConfig) -> Result<ExperimentRecord, ConfigError> {
    let mut rec = ExperimentRecord::new(
        c,
        &["coin", "m", "parity", "revival_time", "sign", "deviation", "expected", "residual", "holds"],
    );
    let mut all = true;
    for row in appendix_table(&c.ms) {
        let holds = row.residual() <= APPENDIX_TOL;
        all &= holds;
        rec.push(vec![
            row.coin.name().into(),
            row.m.into(),
            parity_name(Parity::of(row.m)).into(),
            row.revival_time.into(),
            sign_name(row.sign).into(),
            row.deviation.into(),
            row.expected.into(),
            row.residual().into(),
            holds.into(),
        ]);
    }
    rec.note("tolerance", APPENDIX_TOL);
    rec.passed = Some(all);
    Ok(rec)
}

/// Bloch vector of the `x = 0` spinor over time, with the distance to the
/// initial vector.
pub fn run_bloch_trace(c: &ExperimentConfig) -> Result<ExperimentRecord, ConfigError> {
    let params = walk_params(c, c.field.radians())?;
    let mut rec = ExperimentRecord::new(c, &["t", "sx", "sy", "sz", "r", "return_distance"]);
    let mut psi = WalkState::spin_up_at_origin();
    let b0 = bloch_vector(&psi, 0);
    let window = (c.t_max / 10).max(1);
    let mut nearest = f64::INFINITY;
    let mut window_min = f64::INFINITY;
    let mut max_r = 0.0f64;
    for t in 0..=c.t_max {
        if t > 0 {
            psi = step(&psi, t, &params);
        }
        let b: BlochVector = bloch_vector(&psi, 0);
        let d = b.distance(&b0);
        max_r = max_r.max(b.norm());
        if t > 0 {
            nearest = nearest.min(d);
            window_min = window_min.min(d);
            if t % window == 0 || t == c.t_max {
                rec.note(format!("nearest_return[{}..{}]", t.saturating_sub(window) + 1, t), window_min);
                window_min = f64::INFINITY;
            }
        }
        if sampled(t, c) {
            rec.push(vec![t.into(), b.x.into(), b.y.into(), b.z.into(), b.norm().into(), d.into()]);
        }
    }
    rec.note("nearest_return", nearest);
    rec.note("max_r", max_r);
    Ok(rec)
}
