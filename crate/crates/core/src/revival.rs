//! Operator-norm revival deviations `‖W^{[t,1]} ∓ 1‖`, measured as the
//! supremum over quasi-momenta of the 2×2 block deviation.
//!
//! For a field `2πn/m` the regrouped walk revives at `t = 2m` (odd `m`,
//! towards `-1`) or `t = m` (even `m`, towards `-(-1)^{m/2}`). From the
//! dispersion relation the exact per-momentum deviation is
//!
//! * odd `m`:  `2 |ã|^m |cos(mθ)| ≤ 2 |ã|^m`
//! * even `m`: `(2 |ã|^m (1 ± cos(mθ)))^{1/2} ≤ 2 |ã|^{m/2}`
//!
//! so the even case converges with half the exponent of the odd case.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{coins, Mat2};
use crate::momentum::{regrouped_block, regrouped_tilde};
use crate::number_theory::ContinuedFraction;
use crate::walk::WalkParams;

/// Sign of the identity a revival approaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(m: u64) -> Self {
        if m % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// `‖U - sign·1‖`.
pub fn operator_deviation(u: &Mat2, sign: Sign) -> f64 {
    (*u - Mat2::identity().scale(sign.value().into())).op_norm()
}

/// Coarse momentum grid plus golden-section refinement of the largest
/// local maxima.
///
/// With at least eight grid points per oscillation of the integrand the
/// refined supremum is accurate to well below `1e-6` absolute.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumGrid {
    pub points: usize,
    pub candidates: usize,
    pub tolerance: f64,
}

impl Default for MomentumGrid {
    fn default() -> Self {
        MomentumGrid { points: 1024, candidates: 8, tolerance: 1e-10 }
    }
}

impl MomentumGrid {
    /// Grid resolving the `~steps/2` oscillations of a `steps`-step product.
    pub fn for_steps(steps: u64) -> Self {
        MomentumGrid { points: 1024.max(8 * steps as usize), ..Default::default() }
    }
}

fn golden_section_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// `(k*, sup_k f(k))` over one Brillouin zone `[0, 2π)`.
pub fn sup_over_momentum<F>(f: F, grid: &MomentumGrid) -> (f64, f64)
where
    F: Fn(f64) -> f64 + Sync,
{
    let n = grid.points.max(3);
    let dk = 2.0 * PI / n as f64;
    let values: Vec<f64> = (0..n).into_par_iter().map(|j| f(j as f64 * dk)).collect();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&j| {
            let v = values[j];
            v >= values[(j + n - 1) % n] && v >= values[(j + 1) % n]
        })
        .collect();
    peaks.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    peaks.truncate(grid.candidates.max(1));
    let coarse = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(j, &v)| (j as f64 * dk, v))
        .unwrap();
    peaks
        .par_iter()
        .map(|&j| {
            let k = j as f64 * dk;
            golden_section_max(&f, k - dk, k + dk, grid.tolerance)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(coarse, |best, cand| if cand.1 > best.1 { cand } else { best })
}

/// `sup_k ‖W^{[steps,1]}(k) - sign·1‖`, the operator norm of the
/// regrouped walk minus `±1` on the whole lattice.
pub fn revival_deviation(params: &WalkParams, steps: u64, target: Sign) -> f64 {
    let grid = MomentumGrid::for_steps(steps);
    sup_over_momentum(|k| operator_deviation(regrouped_block(k, params, steps).matrix(), target), &grid).1
}

/// `sup_k |ã(k)|` of the walk's coin.
pub fn alpha_tilde_sup(params: &WalkParams) -> f64 {
    sup_over_momentum(|k| regrouped_tilde(k, params).alpha.norm(), &MomentumGrid::default()).1
}

/// Revival time `2m` (odd) or `m` (even).
pub fn revival_time(m: u64) -> u64 {
    match Parity::of(m) {
        Parity::Odd => 2 * m,
        Parity::Even => m,
    }
}

/// `-1` for odd `m`; `-(-1)^{m/2}` for even `m`.
pub fn revival_sign(m: u64) -> Sign {
    match Parity::of(m) {
        Parity::Odd => Sign::Minus,
        Parity::Even if (m / 2) % 2 == 1 => Sign::Plus,
        Parity::Even => Sign::Minus,
    }
}

/// Upper bound on the revival deviation from `sup_k |ã|`: `2ᾱ^m` for odd
/// `m`, `2ᾱ^{m/2}` for even `m`.
pub fn predicted_scale(alpha_sup: f64, m: u64) -> f64 {
    match Parity::of(m) {
        Parity::Odd => 2.0 * alpha_sup.powi(m as i32),
        Parity::Even => 2.0 * alpha_sup.powf(m as f64 / 2.0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RevivalReport {
    pub m: u64,
    pub parity: Parity,
    pub revival_time: u64,
    /// Sign the theory predicts.
    pub sign: Sign,
    /// Deviation from `sign·1`.
    pub measured_deviation: f64,
    /// Sign that minimizes the deviation.
    pub detected_sign: Sign,
    pub detected_deviation: f64,
    pub alpha_sup: f64,
    pub predicted_scale: f64,
}

impl RevivalReport {
    pub fn sign_matches(&self) -> bool {
        self.sign == self.detected_sign
    }
}

/// Measures the revival of `params` at the revival time belonging to
/// denominator `m`, against both signs.
pub fn revival_report(params: &WalkParams, m: u64) -> RevivalReport {
    let time = revival_time(m);
    let sign = revival_sign(m);
    let plus = revival_deviation(params, time, Sign::Plus);
    let minus = revival_deviation(params, time, Sign::Minus);
    let (detected_sign, detected_deviation) = if plus <= minus { (Sign::Plus, plus) } else { (Sign::Minus, minus) };
    let measured_deviation = if sign == Sign::Plus { plus } else { minus };
    let alpha_sup = alpha_tilde_sup(params);
    RevivalReport {
        m,
        parity: Parity::of(m),
        revival_time: time,
        sign,
        measured_deviation,
        detected_sign,
        detected_deviation,
        alpha_sup,
        predicted_scale: predicted_scale(alpha_sup, m),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AppendixCoin {
    Identity,
    ISigmaY,
}

impl AppendixCoin {
    pub fn name(self) -> &'static str {
        match self {
            AppendixCoin::Identity => "identity",
            AppendixCoin::ISigmaY => "i-sigma-y",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AppendixRow {
    pub coin: AppendixCoin,
    pub m: u64,
    pub revival_time: u64,
    pub sign: Sign,
    pub deviation: f64,
    pub expected: f64,
}

impl AppendixRow {
    pub fn residual(&self) -> f64 {
        (self.deviation - self.expected).abs()
    }
}

/// Revival deviations of the two exactly solvable coins `C = 1` and
/// `C = iσ_y` at `Φ = 2π/m`. Exact values: `C = 1` gives 0 for even `m`
/// and 2 for odd `m`; `C = iσ_y` gives 0 for both parities.
pub fn appendix_table(ms: &[u64]) -> Vec<AppendixRow> {
    let mut rows = Vec::new();
    for coin in [AppendixCoin::Identity, AppendixCoin::ISigmaY] {
        let c = match coin {
            AppendixCoin::Identity => coins::identity(),
            AppendixCoin::ISigmaY => coins::i_sigma_y(),
        };
        for &m in ms {
            let params = WalkParams::with_coin(2.0 * PI / m as f64, c).expect("named coins are valid");
            let time = revival_time(m);
            let sign = revival_sign(m);
            let expected = match (coin, Parity::of(m)) {
                (AppendixCoin::Identity, Parity::Odd) => 2.0,
                _ => 0.0,
            };
            rows.push(AppendixRow { coin, m, revival_time: time, sign, deviation: revival_deviation(&params, time, sign), expected });
        }
    }
    rows
}

/// `t(t+1)/2 · |ΔΦ|`, the bound on `‖W_Φ^{[t,1]} - W_{Φ'}^{[t,1]}‖`.
pub fn lipschitz_bound(t: u64, field_gap: f64) -> f64 {
    let t = t as f64;
    t * (t + 1.0) / 2.0 * field_gap.abs()
}

/// Revival prediction attached to the `k`-th convergent `n_k/d_k` of
/// `Φ/(2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IrrationalBound {
    pub k: usize,
    pub n: u128,
    pub d: u128,
    pub next_coefficient: u128,
    pub time: u64,
    pub sign: Sign,
    /// `4π/c_{k+1}` (odd `d_k`) or `π/c_{k+1}` (even `d_k`).
    pub leading: f64,
    /// Full Lipschitz term `t(t+1)/2 · 2π/(c_{k+1} d_k²)`; exceeds
    /// `leading` by `O(1/d_k)`.
    pub lipschitz: f64,
}

pub fn irrational_revival_bound(cf: &ContinuedFraction, k: usize) -> Result<IrrationalBound> {
    let conv = cf
        .convergent(k)
        .ok_or_else(|| Error::InvalidParameter(format!("convergent {k} is beyond the expansion depth {}", cf.depth())))?;
    let c = cf
        .coefficient(k + 1)
        .ok_or_else(|| Error::InvalidParameter(format!("coefficient {} is beyond the expansion depth {}", k + 1, cf.depth())))?;
    let d = u64::try_from(conv.d).map_err(|_| Error::InvalidParameter("denominator exceeds 64 bits".into()))?;
    let time = revival_time(d);
    let leading = match Parity::of(d) {
        Parity::Odd => 4.0 * PI / c as f64,
        Parity::Even => PI / c as f64,
    };
    let gap = 2.0 * PI / (c as f64 * (d as f64).powi(2));
    Ok(IrrationalBound {
        k,
        n: conv.n,
        d: conv.d,
        next_coefficient: c,
        time,
        sign: revival_sign(d),
        leading,
        lipschitz: lipschitz_bound(time, gap),
    })
}
