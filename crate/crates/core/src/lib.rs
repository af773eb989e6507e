//! Coined quantum walks on the line with a time-dependent coin
//! `W(t) = S · R_x(tΦ) · C`.
//!
//! Rotations use the full angle: `R_x(φ) = exp(iφσ_x)`, so `R_x(2πn/m)` has
//! order exactly `m` when `gcd(n, m) = 1`. Momentum is `ψ̂(k) = Σ_x e^{ikx} ψ(x)`,
//! under which the shift becomes `diag(e^{ik}, e^{-ik})`.

pub mod error;
pub mod gauge;
pub mod linalg;
pub mod momentum;
pub mod noise;
pub mod number_theory;
pub mod revival;
pub mod walk;

pub use error::{Error, Result};
pub use linalg::{coins, make_coin, rotation_x, rotation_y, rotation_z, Mat2, Spinor, Unitary2, C64};
pub use walk::{
    bloch_vector, evolve, fidelity, position_distribution, return_probability, step, step_with_field, BlochVector,
    PositionDistribution, Spin, TimeRule, WalkParams, WalkState,
};
