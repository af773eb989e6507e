//! Electric walk `W^E = e^{iΦx̂} C S` and the diagonal gauge
//! `G_{x,t} = e^{-iΦtx}` relating it to the translation invariant walk
//! `W(t) = C e^{-iΦ(t-1)σ_z} S`:
//!
//! `W(t) ⋯ W(1) = G_t (W^E)^t G_0`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{Unitary2, C64};
use crate::walk::{step, TimeRule, WalkParams, WalkState};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaugePhase {
    pub phi: f64,
    pub t: u64,
}

impl GaugePhase {
    pub fn new(phi: f64, t: u64) -> Self {
        GaugePhase { phi, t }
    }

    pub fn at(&self, x: i64) -> C64 {
        C64::from_polar(1.0, -self.phi * self.t as f64 * x as f64)
    }
}

/// Shift, then coin, then `e^{iΦx}` at each site.
pub fn electric_step(state: &WalkState, phi: f64, coin: &Unitary2) -> WalkState {
    let mut s = state.shifted();
    s.for_each_site(|x, v| {
        let ph = C64::from_polar(1.0, phi * x as f64);
        let w = coin.apply(v);
        *v = [w[0] * ph, w[1] * ph];
    });
    s
}

pub fn apply_gauge(state: &WalkState, g: GaugePhase) -> WalkState {
    let mut s = state.clone();
    if g.t == 0 {
        return s;
    }
    s.for_each_site(|x, v| {
        let ph = g.at(x);
        *v = [v[0] * ph, v[1] * ph];
    });
    s
}

fn gauged_params(phi: f64, coin: &Unitary2) -> WalkParams {
    WalkParams::with_coin(phi, *coin)
        .expect("coin must have the form [[a, b], [-b*, a*]]")
        .time_rule(TimeRule::GaugedSz)
}

/// `W(t) = C e^{-iΦ(t-1)σ_z} S`.
///
/// # Panics
/// If `coin` is not of the form `[[a, b], [-b*, a*]]`.
pub fn gauged_step(state: &WalkState, t: u64, phi: f64, coin: &Unitary2) -> WalkState {
    step(state, t, &gauged_params(phi, coin))
}

/// Largest distance, over `trials` random states supported on `[-5, 5]` and
/// all times `1..=t`, between `W(s) ⋯ W(1) ψ` and `G_s (W^E)^s G_0 ψ`.
pub fn verify_gauge_equivalence(phi: f64, coin: &Unitary2, t: u64, trials: usize, seed: u64) -> f64 {
    let params = gauged_params(phi, coin);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let psi = WalkState::random(&mut rng, -5, 5);
        let mut lhs = psi.clone();
        let mut electric = apply_gauge(&psi, GaugePhase::new(phi, 0));
        for s in 1..=t {
            lhs = step(&lhs, s, &params);
            electric = electric_step(&electric, phi, coin);
            let rhs = apply_gauge(&electric, GaugePhase::new(phi, s));
            worst = worst.max(lhs.distance(&rhs));
        }
    }
    worst
}
