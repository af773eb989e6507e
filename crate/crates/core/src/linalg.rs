//! 2×2 complex matrices and the spin-space unitaries built from them.
//!
//! Rotations use the full-angle convention `R_n(φ) = exp(iφ σ_n)`, so that
//! `R_x(2π n/m)` has order exactly `m` whenever `gcd(n, m) = 1`. The
//! half-angle convention only reaches `R^m = -1` and breaks the exact
//! periodicity the revival analysis needs for even `m`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// A two-component spinor `(ψ₊, ψ₋)`.
pub type Spinor = [C64; 2];

/// Entrywise tolerance for `U U† = 1` on validated unitaries.
pub const UNITARY_TOL: f64 = 1e-12;

/// Tolerance on `|a|² + |b|² = 1` for user-supplied coin entries.
pub const COIN_NORM_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// A general 2×2 complex matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub e: [[C64; 2]; 2],
}

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2 { e: [[a, b], [c, d]] }
    }

    pub const fn identity() -> Self {
        Mat2::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Mat2::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn diag(a: C64, d: C64) -> Self {
        Mat2::new(a, ZERO, ZERO, d)
    }

    pub fn scale(&self, s: C64) -> Self {
        let e = &self.e;
        Mat2::new(e[0][0] * s, e[0][1] * s, e[1][0] * s, e[1][1] * s)
    }

    pub fn adjoint(&self) -> Self {
        let e = &self.e;
        Mat2::new(e[0][0].conj(), e[1][0].conj(), e[0][1].conj(), e[1][1].conj())
    }

    pub fn trace(&self) -> C64 {
        self.e[0][0] + self.e[1][1]
    }

    pub fn det(&self) -> C64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn frobenius_sqr(&self) -> f64 {
        self.e.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// Spectral norm (largest singular value), from the eigenvalues of
    /// `M†M = [[p, q], [q*, r]]`. Avoids the cancellation in
    /// `F² - 4|det|²` when the singular values nearly coincide.
    pub fn op_norm(&self) -> f64 {
        let [[a, b], [c, d]] = self.e;
        let p = a.norm_sqr() + c.norm_sqr();
        let r = b.norm_sqr() + d.norm_sqr();
        let q = a.conj() * b + c.conj() * d;
        let half_gap = (p - r) / 2.0;
        ((p + r) / 2.0 + half_gap.hypot(q.norm())).sqrt()
    }

    pub fn apply(&self, v: &Spinor) -> Spinor {
        let e = &self.e;
        [e[0][0] * v[0] + e[0][1] * v[1], e[1][0] * v[0] + e[1][1] * v[1]]
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut result = Mat2::identity();
        let mut base = *self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            n >>= 1;
        }
        result
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        self.e
            .iter()
            .flatten()
            .zip(other.e.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation of `M M†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.adjoint()).max_abs_diff(&Mat2::identity())
    }

    /// Eigenvalues of the matrix, unordered.
    pub fn eigenvalues(&self) -> (C64, C64) {
        let half = self.trace() / 2.0;
        let root = (half * half - self.det()).sqrt();
        (half + root, half - root)
    }
}

impl Default for Mat2 {
    fn default() -> Self {
        Mat2::identity()
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, r: Mat2) -> Mat2 {
        let (a, b) = (&self.e, &r.e);
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, r: Mat2) -> Mat2 {
        let (a, b) = (&self.e, &r.e);
        Mat2::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, r: Mat2) -> Mat2 {
        self + (-r)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        self.scale(-ONE)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.e;
        write!(f, "[[{}, {}], [{}, {}]]", e[0][0], e[0][1], e[1][0], e[1][1])
    }
}

/// A 2×2 unitary. Products of unitaries stay unitary up to rounding, so
/// only externally supplied matrices are validated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2(Mat2);

impl Unitary2 {
    pub fn new(m: Mat2) -> Result<Self> {
        let defect = m.unitarity_defect();
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Unitary2(m))
    }

    pub(crate) const fn from_mat_unchecked(m: Mat2) -> Self {
        Unitary2(m)
    }

    pub const fn identity() -> Self {
        Unitary2(Mat2::identity())
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat2 {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Unitary2(self.0.adjoint())
    }

    pub fn pow(&self, n: u64) -> Self {
        Unitary2(self.0.pow(n))
    }

    pub fn apply(&self, v: &Spinor) -> Spinor {
        self.0.apply(v)
    }

    /// Unitary `B` with `B R B†` diagonal; the rows of `B` are the
    /// conjugated eigenvectors of `R`. Returns the identity when `R` is
    /// already diagonal (including the degenerate case `R ∝ 1`).
    pub fn eigenbasis(&self) -> Mat2 {
        let e = &self.0.e;
        let (l1, _) = self.0.eigenvalues();
        let off = e[0][1].norm().max(e[1][0].norm());
        if off < 1e-15 {
            return Mat2::identity();
        }
        let v = if e[0][1].norm() >= e[1][0].norm() {
            [e[0][1], l1 - e[0][0]]
        } else {
            [l1 - e[1][1], e[1][0]]
        };
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        let v = [v[0] / n, v[1] / n];
        // Second eigenvector is orthogonal for a normal matrix.
        let w = [-v[1].conj(), v[0].conj()];
        Mat2::new(v[0].conj(), v[1].conj(), w[0].conj(), w[1].conj())
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, r: Unitary2) -> Unitary2 {
        Unitary2(self.0 * r.0)
    }
}

impl Mul<Mat2> for Unitary2 {
    type Output = Mat2;

    fn mul(self, r: Mat2) -> Mat2 {
        self.0 * r
    }
}

impl Mul<Unitary2> for Mat2 {
    type Output = Mat2;

    fn mul(self, r: Unitary2) -> Mat2 {
        self * r.0
    }
}

impl From<Unitary2> for Mat2 {
    fn from(u: Unitary2) -> Mat2 {
        u.0
    }
}

pub fn sigma_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> Mat2 {
    Mat2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> Mat2 {
    Mat2::diag(ONE, -ONE)
}

/// `R_x(φ) = exp(iφσ_x) = [[cos φ, i sin φ], [i sin φ, cos φ]]`.
pub fn rotation_x(angle: f64) -> Unitary2 {
    let (s, c) = angle.sin_cos();
    Unitary2(Mat2::new(C64::new(c, 0.0), C64::new(0.0, s), C64::new(0.0, s), C64::new(c, 0.0)))
}

/// `R_y(θ) = exp(iθσ_y) = [[cos θ, sin θ], [-sin θ, cos θ]]`.
///
/// `R_y(π/4)` is the coin with `a = b = 1/√2`, `R_y(π/2) = iσ_y`.
pub fn rotation_y(angle: f64) -> Unitary2 {
    let (s, c) = angle.sin_cos();
    Unitary2(Mat2::new(C64::new(c, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0), C64::new(c, 0.0)))
}

/// `R_z(φ) = exp(iφσ_z) = diag(e^{iφ}, e^{-iφ})`.
pub fn rotation_z(angle: f64) -> Unitary2 {
    Unitary2(Mat2::diag(C64::from_polar(1.0, angle), C64::from_polar(1.0, -angle)))
}

/// The special-unitary coin `[[a, b], [-b*, a*]]`.
pub fn make_coin(a: C64, b: C64) -> Result<Unitary2> {
    let norm = a.norm_sqr() + b.norm_sqr();
    if !norm.is_finite() || (norm - 1.0).abs() > COIN_NORM_TOL {
        return Err(Error::CoinNotNormalized(norm));
    }
    Ok(Unitary2(Mat2::new(a, b, -b.conj(), a.conj())))
}

/// Reads `(a, b)` back off a matrix of coin form, if it is one.
pub fn coin_entries(u: &Mat2) -> Result<(C64, C64)> {
    let e = &u.e;
    let (a, b) = (e[0][0], e[0][1]);
    let form = (e[1][0] + b.conj()).norm().max((e[1][1] - a.conj()).norm());
    if form > 1e-10 {
        return Err(Error::NotCoinForm);
    }
    let norm = a.norm_sqr() + b.norm_sqr();
    if (norm - 1.0).abs() > COIN_NORM_TOL {
        return Err(Error::CoinNotNormalized(norm));
    }
    Ok((a, b))
}

/// Named coins used throughout the analysis.
pub mod coins {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    /// `a = b = 1/√2`, i.e. `R_y(π/4)`.
    pub fn hadamard() -> Unitary2 {
        make_coin(C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)).unwrap()
    }

    pub fn identity() -> Unitary2 {
        Unitary2::identity()
    }

    /// `iσ_y = [[0, 1], [-1, 0]]`, i.e. `R_y(π/2)`.
    pub fn i_sigma_y() -> Unitary2 {
        make_coin(ZERO, ONE).unwrap()
    }

    /// `a = i/√2, b = 1/√2`: `sup_k |ã(k)| = 1`, no revivals predicted.
    pub fn no_revival() -> Unitary2 {
        make_coin(C64::new(0.0, FRAC_1_SQRT_2), C64::new(FRAC_1_SQRT_2, 0.0)).unwrap()
    }
}
