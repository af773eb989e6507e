//! State vectors on a finite window of the integer lattice and the
//! time-dependent walk `W(t) = S · R_x(tΦ) · C`.

use std::ops::RangeInclusive;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{coin_entries, make_coin, rotation_x, rotation_z, Spinor, Unitary2, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Internal spin label; `Up` (s = +1) moves right under the shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn value(self) -> i64 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

/// Wave function `ψ(x, s)` on the window `[x_min, x_max]`. Amplitudes
/// outside the window are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkState {
    x_min: i64,
    amps: Vec<Spinor>,
}

impl WalkState {
    pub fn localized(x: i64, spinor: Spinor) -> Self {
        WalkState { x_min: x, amps: vec![spinor] }
    }

    /// `|0⟩ ⊗ (1, 0)`, the default initial state.
    pub fn spin_up_at_origin() -> Self {
        WalkState::localized(0, [C64::new(1.0, 0.0), ZERO])
    }

    pub fn from_amplitudes(x_min: i64, amps: Vec<Spinor>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidParameter("state window must contain at least one site".into()));
        }
        Ok(WalkState { x_min, amps })
    }

    /// Normalized state with independent complex Gaussian amplitudes on
    /// `[x_lo, x_hi]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, x_lo: i64, x_hi: i64) -> Self {
        assert!(x_lo <= x_hi, "empty window");
        let mut gauss = || {
            // Box-Muller
            let u: f64 = rng.gen_range(f64::EPSILON..1.0);
            let v: f64 = rng.gen();
            C64::from_polar((-2.0 * u.ln()).sqrt(), 2.0 * std::f64::consts::PI * v)
        };
        let amps = (x_lo..=x_hi).map(|_| [gauss(), gauss()]).collect();
        WalkState { x_min: x_lo, amps }.normalized()
    }

    pub fn x_min(&self) -> i64 {
        self.x_min
    }

    pub fn x_max(&self) -> i64 {
        self.x_min + self.amps.len() as i64 - 1
    }

    pub fn window(&self) -> RangeInclusive<i64> {
        self.x_min()..=self.x_max()
    }

    pub fn amplitudes(&self) -> &[Spinor] {
        &self.amps
    }

    pub fn spinor(&self, x: i64) -> Spinor {
        if x < self.x_min {
            return [ZERO; 2];
        }
        self.amps.get((x - self.x_min) as usize).copied().unwrap_or([ZERO; 2])
    }

    pub fn amplitude(&self, x: i64, s: Spin) -> C64 {
        self.spinor(x)[s.index()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|v| v[0].norm_sqr() + v[1].norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            for v in &mut self.amps {
                v[0] /= n;
                v[1] /= n;
            }
        }
        self
    }

    pub fn scaled(&self, c: C64) -> Self {
        let amps = self.amps.iter().map(|v| [v[0] * c, v[1] * c]).collect();
        WalkState { x_min: self.x_min, amps }
    }

    pub fn translated(&self, dx: i64) -> Self {
        WalkState { x_min: self.x_min + dx, amps: self.amps.clone() }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &WalkState) -> C64 {
        let lo = self.x_min.max(other.x_min);
        let hi = self.x_max().min(other.x_max());
        (lo..=hi)
            .map(|x| {
                let (u, v) = (self.spinor(x), other.spinor(x));
                u[0].conj() * v[0] + u[1].conj() * v[1]
            })
            .sum()
    }

    /// `‖self - other‖` over the union of both windows.
    pub fn distance(&self, other: &WalkState) -> f64 {
        let lo = self.x_min.min(other.x_min);
        let hi = self.x_max().max(other.x_max());
        (lo..=hi)
            .map(|x| {
                let (u, v) = (self.spinor(x), other.spinor(x));
                (u[0] - v[0]).norm_sqr() + (u[1] - v[1]).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Applies a site-dependent 2×2 operation in place.
    pub(crate) fn for_each_site(&mut self, mut f: impl FnMut(i64, &mut Spinor)) {
        let x0 = self.x_min;
        for (i, v) in self.amps.iter_mut().enumerate() {
            f(x0 + i as i64, v);
        }
    }

    pub(crate) fn apply_local(&mut self, u: &Unitary2) {
        for v in &mut self.amps {
            *v = u.apply(v);
        }
    }

    /// The shift `S|x, s⟩ = |x + s, s⟩`; the window grows by one site on
    /// each side.
    pub(crate) fn shifted(&self) -> WalkState {
        let mut out = Vec::new();
        self.shift_into(&mut out);
        WalkState { x_min: self.x_min - 1, amps: out }
    }

    /// Shift into a reused buffer. Amplitudes below `FLUSH` are set to zero:
    /// localized tails otherwise decay into subnormals, which are far slower
    /// to multiply.
    fn shift_into(&self, out: &mut Vec<Spinor>) {
        let n = self.amps.len();
        out.clear();
        out.resize(n + 2, [ZERO; 2]);
        for (i, v) in self.amps.iter().enumerate() {
            out[i + 2][0] = flush(v[0]);
            out[i][1] = flush(v[1]);
        }
    }

    fn step_in_place(&mut self, t: u64, params: &WalkParams, field: f64, buf: &mut Vec<Spinor>) {
        match params.time_rule {
            TimeRule::RxField => {
                self.apply_local(&(params.prefactor(t, field) * params.coin));
                self.shift_into(buf);
            }
            TimeRule::GaugedSz => {
                self.shift_into(buf);
                let local = params.coin * params.prefactor(t, field);
                for v in buf.iter_mut() {
                    *v = local.apply(v);
                }
            }
        }
        std::mem::swap(&mut self.amps, buf);
        self.x_min -= 1;
    }
}

const FLUSH: f64 = 1e-300;

fn flush(z: C64) -> C64 {
    C64::new(if z.re.abs() < FLUSH { 0.0 } else { z.re }, if z.im.abs() < FLUSH { 0.0 } else { z.im })
}

/// How the coin depends on the step index `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeRule {
    /// `W(t) = S · R_x(tΦ) · C`.
    RxField,
    /// `W(t) = C · e^{-iΦ(t-1)σ_z} · S`, the gauge image of the electric walk.
    GaugedSz,
}

/// Field, coin and time rule defining the step operators `W(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkParams {
    field: f64,
    coin_a: C64,
    coin_b: C64,
    coin: Unitary2,
    time_rule: TimeRule,
}

impl WalkParams {
    pub fn new(field: f64, a: C64, b: C64) -> Result<Self> {
        if !field.is_finite() {
            return Err(Error::InvalidParameter(format!("field must be finite, got {field}")));
        }
        let coin = make_coin(a, b)?;
        Ok(WalkParams { field, coin_a: a, coin_b: b, coin, time_rule: TimeRule::RxField })
    }

    /// From a coin matrix of the form `[[a, b], [-b*, a*]]`.
    pub fn with_coin(field: f64, coin: Unitary2) -> Result<Self> {
        let (a, b) = coin_entries(coin.matrix())?;
        WalkParams::new(field, a, b)
    }

    pub fn time_rule(mut self, rule: TimeRule) -> Self {
        self.time_rule = rule;
        self
    }

    pub fn with_field(&self, field: f64) -> Self {
        WalkParams { field, ..*self }
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn coin(&self) -> Unitary2 {
        self.coin
    }

    pub fn coin_a(&self) -> C64 {
        self.coin_a
    }

    pub fn coin_b(&self) -> C64 {
        self.coin_b
    }

    pub fn rule(&self) -> TimeRule {
        self.time_rule
    }

    /// The time-dependent spin factor of step `t` at the given field.
    pub fn prefactor(&self, t: u64, field: f64) -> Unitary2 {
        match self.time_rule {
            TimeRule::RxField => rotation_x(t as f64 * field),
            TimeRule::GaugedSz => rotation_z(-(t as f64 - 1.0) * field),
        }
    }
}

/// One step `W(t)` at the configured field.
pub fn step(state: &WalkState, t: u64, params: &WalkParams) -> WalkState {
    step_with_field(state, t, params, params.field)
}

/// One step `W(t)` with the field replaced by `field` for this step only.
pub fn step_with_field(state: &WalkState, t: u64, params: &WalkParams, field: f64) -> WalkState {
    let mut s = state.clone();
    s.step_in_place(t, params, field, &mut Vec::new());
    s
}

/// `W(t_to) ⋯ W(t_from) ψ`; the empty product (`t_to < t_from`) is the
/// identity.
pub fn evolve(state: &WalkState, t_from: u64, t_to: u64, params: &WalkParams) -> WalkState {
    let mut s = state.clone();
    let mut buf = Vec::new();
    for t in t_from..=t_to {
        s.step_in_place(t, params, params.field, &mut buf);
    }
    s
}

/// `p(x) = Σ_s |ψ(x, s)|²` on the state's window.
#[derive(Clone, Debug, PartialEq)]
pub struct PositionDistribution {
    x_min: i64,
    probs: Vec<f64>,
}

impl PositionDistribution {
    pub fn get(&self, x: i64) -> f64 {
        if x < self.x_min {
            return 0.0;
        }
        self.probs.get((x - self.x_min) as usize).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs.iter().enumerate().map(move |(i, &p)| (self.x_min + i as i64, p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn x_min(&self) -> i64 {
        self.x_min
    }

    pub fn x_max(&self) -> i64 {
        self.x_min + self.probs.len() as i64 - 1
    }

    /// Smallest `R ≥ 0` with `P(|x| > R) ≤ tail`.
    pub fn support_radius(&self, tail: f64) -> u64 {
        let reach = self.x_min.unsigned_abs().max(self.x_max().unsigned_abs());
        let mut outside = self.total();
        // Walk R upward, peeling off the mass at ±R.
        for r in 0..=reach {
            let r_i = r as i64;
            outside -= self.get(r_i);
            if r > 0 {
                outside -= self.get(-r_i);
            }
            if outside <= tail {
                return r;
            }
        }
        reach
    }

    /// `Σ_x x² p(x)`.
    pub fn second_moment(&self) -> f64 {
        self.iter().map(|(x, p)| (x as f64).powi(2) * p).sum()
    }
}

pub fn position_distribution(state: &WalkState) -> PositionDistribution {
    let probs = state.amps.iter().map(|v| v[0].norm_sqr() + v[1].norm_sqr()).collect();
    PositionDistribution { x_min: state.x_min, probs }
}

/// Probability of finding the walker at the origin.
pub fn return_probability(state: &WalkState) -> f64 {
    let v = state.spinor(0);
    v[0].norm_sqr() + v[1].norm_sqr()
}

/// `|⟨reference|state⟩|²`.
pub fn fidelity(state: &WalkState, reference: &WalkState) -> f64 {
    reference.inner(state).norm_sqr()
}

/// `(⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩)` of an unnormalized spinor; the length equals
/// the spinor's squared norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn from_spinor(v: &Spinor) -> Self {
        let cross = v[0].conj() * v[1];
        BlochVector { x: 2.0 * cross.re, y: 2.0 * cross.im, z: v[0].norm_sqr() - v[1].norm_sqr() }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2)).sqrt()
    }
}

pub fn bloch_vector(state: &WalkState, x: i64) -> BlochVector {
    BlochVector::from_spinor(&state.spinor(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::coins;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn hadamard(field: f64) -> WalkParams {
        WalkParams::with_coin(field, coins::hadamard()).unwrap()
    }

    #[test]
    fn free_right_mover() {
        let p = WalkParams::new(0.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let s = step(&WalkState::spin_up_at_origin(), 1, &p);
        assert_abs_diff_eq!(s.amplitude(1, Spin::Up).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-15);
        assert_eq!(s.window(), -1..=1);
    }

    #[test]
    fn single_hadamard_step() {
        // C (1, 0) = (1/√2, -1/√2): right-mover +1/√2, left-mover -1/√2.
        let s = step(&WalkState::spin_up_at_origin(), 1, &hadamard(0.0));
        assert_abs_diff_eq!(s.amplitude(1, Spin::Up).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(-1, Spin::Down).re, -FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(1, Spin::Down).norm(), 0.0);
        let d = position_distribution(&s);
        assert_abs_diff_eq!(d.get(-1), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.get(1), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.get(0), 0.0);
    }

    #[test]
    fn empty_product_is_identity() {
        let s = WalkState::spin_up_at_origin();
        assert_eq!(evolve(&s, 1, 0, &hadamard(1.0)), s);
    }

    #[test]
    fn rational_field_is_periodic() {
        let m = 7;
        let p = hadamard(2.0 * PI * 3.0 / m as f64);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let psi = WalkState::random(&mut rng, -2, 2);
        let twice = evolve(&evolve(&psi, 1, m, &p), 1, m, &p);
        let straight = evolve(&psi, 1, 2 * m, &p);
        assert!(twice.distance(&straight) < 1e-12);
    }

    #[test]
    fn step_operator_period_on_basis_states() {
        let m = 10u64;
        let p = hadamard(2.0 * PI / m as f64);
        for spin in [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]] {
            let e = WalkState::localized(0, spin);
            for t in 1..=3 * m {
                assert!(step(&e, t, &p).distance(&step(&e, t + m, &p)) < 1e-12);
            }
        }
    }

    #[test]
    fn support_grows_by_one_per_side() {
        let p = hadamard(0.3);
        let mut s = WalkState::spin_up_at_origin();
        for t in 1..=25 {
            s = step(&s, t, &p);
            assert_eq!(s.window(), -(t as i64)..=(t as i64));
        }
    }

    #[test]
    fn hadamard_even_period_revives_state() {
        // ‖W^{[10,1]} - 1‖ = 2·2^{-10/4} on every state.
        let p = hadamard(2.0 * PI / 10.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let psi = WalkState::random(&mut rng, -3, 3);
            let out = evolve(&psi, 1, 10, &p);
            assert!(out.distance(&psi) <= 2.0 * 2f64.powf(-2.5) + 1e-12);
        }
    }

    #[test]
    fn distribution_and_return_probability() {
        let s = WalkState::spin_up_at_origin();
        let d = position_distribution(&s);
        assert_eq!(d.iter().collect::<Vec<_>>(), vec![(0, 1.0)]);
        assert_eq!(return_probability(&s), 1.0);
        assert_eq!(fidelity(&s, &s), 1.0);
        let moved = evolve(&s, 1, 4, &hadamard(0.4));
        assert_abs_diff_eq!(position_distribution(&moved).total(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn support_radius_counts_tail_mass() {
        let amps = vec![
            [c(0.1, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0)],
            [c((0.98f64).sqrt(), 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.1, 0.0)],
        ];
        let d = position_distribution(&WalkState::from_amplitudes(-2, amps).unwrap());
        assert_eq!(d.support_radius(0.05), 0);
        assert_eq!(d.support_radius(0.005), 2);
    }

    #[test]
    fn bloch_vectors() {
        let up = WalkState::spin_up_at_origin();
        assert_eq!(bloch_vector(&up, 0), BlochVector { x: 0.0, y: 0.0, z: 1.0 });
        let h = FRAC_1_SQRT_2;
        let plus = WalkState::localized(0, [c(h, 0.0), c(h, 0.0)]);
        let b = bloch_vector(&plus, 0);
        assert_abs_diff_eq!(b.x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.y, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.z, 0.0, epsilon = 1e-15);
        assert_eq!(bloch_vector(&plus, 5).norm(), 0.0);
        // Sub-normalized spinors sit inside the ball.
        let half = WalkState::localized(0, [c(0.5, 0.0), c(0.0, 0.5)]);
        assert_abs_diff_eq!(bloch_vector(&half, 0).norm(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn gauged_rule_first_step_is_coin_after_shift() {
        let p = hadamard(0.9).time_rule(TimeRule::GaugedSz);
        let s = step(&WalkState::spin_up_at_origin(), 1, &p);
        // S moves spin-up to x = 1, then C (1, 0) = (1/√2, -1/√2) there.
        assert_abs_diff_eq!(s.amplitude(1, Spin::Up).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(1, Spin::Down).re, -FRAC_1_SQRT_2, epsilon = 1e-15);
    }
}
