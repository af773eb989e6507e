//! Momentum-space blocks of the translation-invariant walk, the trace
//! formula for `tr(M R⁰ M R¹ ⋯ M R^{m-1})`, and the dispersion relation of
//! the regrouped walk `W^{[m,1]}`.
//!
//! Fourier convention: `ψ̂(k) = Σ_x e^{ikx} ψ(x)`, under which the shift
//! becomes `S(k) = diag(e^{ik}, e^{-ik})`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Unitary2, C64};
use crate::walk::{TimeRule, WalkParams};

/// Deviation from `R^m = 1` (and `det R = 1`) tolerated by the trace formula.
pub const ROTATION_ORDER_TOL: f64 = 1e-10;

/// Overshoot of `|cos ω|` past 1 that is still treated as rounding.
pub const ARCCOS_CLAMP_TOL: f64 = 1e-9;

/// A walk block at quasi-momentum `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumBlock {
    pub k: f64,
    pub block: Unitary2,
}

/// Diagonal entries `(ã, δ̃)` of `B M B†` in the eigenbasis `B` of the
/// rotation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TildePair {
    pub alpha: C64,
    pub delta: C64,
}

pub fn shift_momentum(k: f64) -> Unitary2 {
    Unitary2::from_mat_unchecked(Mat2::diag(C64::from_polar(1.0, k), C64::from_polar(1.0, -k)))
}

/// Block of the single step `W(t)` at field `field`.
pub fn momentum_step(k: f64, t: u64, params: &WalkParams, field: f64) -> Unitary2 {
    let pre = params.prefactor(t, field);
    match params.rule() {
        TimeRule::RxField => shift_momentum(k) * pre * params.coin(),
        TimeRule::GaugedSz => params.coin() * pre * shift_momentum(k),
    }
}

/// `W^{[m,1]}(k) = W(m)(k) ⋯ W(1)(k)`, later steps to the left.
pub fn regrouped_block(k: f64, params: &WalkParams, m: u64) -> Unitary2 {
    (1..=m).fold(Unitary2::identity(), |acc, t| momentum_step(k, t, params, params.field()) * acc)
}

/// Like [`regrouped_block`] with a per-step field: `fields[i]` drives step
/// `t = i + 1`.
pub fn regrouped_block_with_fields(k: f64, params: &WalkParams, fields: &[f64]) -> Unitary2 {
    fields
        .iter()
        .enumerate()
        .fold(Unitary2::identity(), |acc, (i, &f)| momentum_step(k, i as u64 + 1, params, f) * acc)
}

/// `B = (1/√2)[[1, 1], [1, -1]]`, the eigenbasis of `R_x`.
pub fn hadamard_basis() -> Mat2 {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    Mat2::new(h, h, h, -h)
}

pub fn tilde_pair_in_basis(m: &Mat2, basis: &Mat2) -> TildePair {
    let t = *basis * *m * basis.adjoint();
    TildePair { alpha: t.e[0][0], delta: t.e[1][1] }
}

/// `(ã, δ̃)` of `M` in the `R_x` eigenbasis: `2ã = α+β+γ+δ`,
/// `2δ̃ = α-β-γ+δ`.
pub fn tilde_pair(m: &Mat2) -> TildePair {
    tilde_pair_in_basis(m, &hadamard_basis())
}

/// Closed form of `ã(k)` for `M = C S(k)`:
/// `|a| cos(arg a + k) + i |b| sin(arg b - k)`.
pub fn alpha_tilde(a: C64, b: C64, k: f64) -> C64 {
    C64::new(a.norm() * (a.arg() + k).cos(), b.norm() * (b.arg() - k).sin())
}

/// `(ã, δ̃)` entering the trace of the regrouped walk at momentum `k`.
///
/// For `W(t) = S R_x(tΦ) C` the trace reduces (by cyclicity and `R^m = 1`)
/// to the trace formula with `M = C S(k)` in the `R_x` eigenbasis; for the
/// gauged rule `M = S(k) C` in the standard basis.
pub fn regrouped_tilde(k: f64, params: &WalkParams) -> TildePair {
    let c = *params.coin().matrix();
    let s = *shift_momentum(k).matrix();
    match params.rule() {
        TimeRule::RxField => tilde_pair(&(c * s)),
        TimeRule::GaugedSz => tilde_pair_in_basis(&(s * c), &Mat2::identity()),
    }
}

/// `tr(M R⁰ M R¹ ⋯ M R^{m-1})` by explicit multiplication.
pub fn direct_product_trace(m: &Mat2, r: &Mat2, period: u64) -> C64 {
    let mut acc = Mat2::identity();
    let mut r_pow = Mat2::identity();
    for _ in 0..period {
        acc = acc * *m * r_pow;
        r_pow = r_pow * *r;
    }
    acc.trace()
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Checks `det R = 1` and that `R` has order exactly `period`.
pub fn check_rotation_order(r: &Unitary2, period: u64) -> Result<()> {
    let err = |reason: String| Err(Error::RotationOrder { order: period, reason });
    if period == 0 {
        return err("period must be positive".into());
    }
    let det_dev = (r.matrix().det() - 1.0).norm();
    if det_dev > ROTATION_ORDER_TOL {
        return err(format!("det R deviates from 1 by {det_dev:e}"));
    }
    let id = Mat2::identity();
    let dev = r.pow(period).matrix().max_abs_diff(&id);
    if dev > ROTATION_ORDER_TOL {
        return err(format!("R^{period} deviates from the identity by {dev:e}"));
    }
    for p in prime_factors(period) {
        if r.pow(period / p).matrix().max_abs_diff(&id) <= ROTATION_ORDER_TOL {
            return err(format!("R^{} is already the identity", period / p));
        }
    }
    Ok(())
}

/// Trace formula: `τ_m = ã^m + δ̃^m` for odd `m`, and
/// `τ_m = -(ã^m + δ̃^m) + 2(-1)^{m/2}((ãδ̃)^{m/2} - det(M)^{m/2})` for even
/// `m`, with `(ã, δ̃)` taken in the eigenbasis of `R`.
///
/// `R` must lie in SU(2) and have order exactly `m`; `M` is arbitrary.
pub fn trace_formula(m: &Mat2, r: &Unitary2, period: u64) -> Result<C64> {
    check_rotation_order(r, period)?;
    let tp = tilde_pair_in_basis(m, &r.eigenbasis());
    Ok(trace_from_tilde(&tp, m.det(), period))
}

pub(crate) fn trace_from_tilde(tp: &TildePair, det: C64, period: u64) -> C64 {
    let n = period as u32;
    let (a, d) = (tp.alpha, tp.delta);
    if period % 2 == 1 {
        a.powu(n) + d.powu(n)
    } else {
        let half = n / 2;
        let sign = if half % 2 == 0 { 1.0 } else { -1.0 };
        -(a.powu(n) + d.powu(n)) + 2.0 * sign * ((a * d).powu(half) - det.powu(half))
    }
}

/// Checks that `field = 2π n / period` with `gcd(n, period) = 1`.
pub fn check_commensurate(field: f64, period: u64) -> Result<i64> {
    let ratio = field * period as f64 / (2.0 * PI);
    let n = ratio.round();
    let coprime = (n as i64).rem_euclid(period as i64).gcd(&(period as i64)) == 1 || period == 1;
    if (ratio - n).abs() > 1e-9 || !coprime {
        return Err(Error::FieldNotCommensurate { field, period });
    }
    Ok(n as i64)
}

/// Right-hand side of `cos ω(k)` for the regrouped walk with period `m`:
///
/// * odd `m`:  `|ã|^m cos(mθ)`
/// * even `m`: `-|ã|^m cos(mθ) + (-1)^{m/2+1} (1 - |ã|^m)`
///
/// where `ã = |ã| e^{iθ}`; `|ã|^m cos(mθ)` is taken as 0 when `ã = 0`.
pub fn cos_omega(tp: &TildePair, period: u64) -> f64 {
    let r = tp.alpha.norm();
    let x = r.powi(period as i32);
    let osc = if r == 0.0 { 0.0 } else { x * (period as f64 * tp.alpha.arg()).cos() };
    if period % 2 == 1 {
        osc
    } else {
        let sign = if (period / 2) % 2 == 0 { -1.0 } else { 1.0 };
        -osc + sign * (1.0 - x)
    }
}

/// Eigenphases `(ω₊, ω₋) = (arccos c, -arccos c)` of `W^{[m,1]}(k)` for a
/// field `2πn/m`.
pub fn dispersion(k: f64, params: &WalkParams, period: u64) -> Result<(f64, f64)> {
    check_commensurate(params.field(), period)?;
    let c = cos_omega(&regrouped_tilde(k, params), period);
    if c.abs() > 1.0 + ARCCOS_CLAMP_TOL || !c.is_finite() {
        return Err(Error::DispersionOutOfRange(c));
    }
    let w = c.clamp(-1.0, 1.0).acos();
    Ok((w, -w))
}
