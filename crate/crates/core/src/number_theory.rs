//! Continued-fraction expansion of `x = Φ/(2π) ∈ (0, 1)` and its
//! convergents `n_k/d_k`.
//!
//! The expansion runs in exact rational arithmetic. A float input is first
//! converted to the dyadic rational it represents; two guards then stop the
//! expansion where the float no longer determines further coefficients:
//!
//! * the Gauss-map remainder drops below `1e-14` (next coefficient above
//!   `1e14`): the input is taken as rational within precision;
//! * `|x - n_k/d_k|` drops below `1e-14`: precision limit.
//!
//! Convergents are kept in `u128`; the golden ratio overflows only past
//! depth 180. Deeper expansions stop with [`Termination::Overflow`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Residual guard for float input.
pub const RESIDUAL_GUARD: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub n: u128,
    pub d: u128,
}

impl Convergent {
    pub fn value(&self) -> f64 {
        self.n as f64 / self.d as f64
    }
}

/// Why an expansion stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// The exact rational input is fully expanded.
    Exact,
    /// The remaining fractional part is below the residual guard.
    RationalWithinPrecision,
    /// The convergent matches the float input to within the residual guard.
    PrecisionLimited,
    /// The requested depth was reached.
    DepthReached,
    /// A coefficient or continuant no longer fits in 128 bits.
    Overflow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldClass {
    Rational,
    BoundedCoefficients,
    UnboundedCoefficients,
}

impl FieldClass {
    pub fn name(self) -> &'static str {
        match self {
            FieldClass::Rational => "rational",
            FieldClass::BoundedCoefficients => "bounded-coefficients",
            FieldClass::UnboundedCoefficients => "unbounded-coefficients",
        }
    }
}

/// Classification together with the depth it was made at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: FieldClass,
    pub depth: usize,
}

/// `x = [0; c_1, c_2, ...]` with convergents `n_k/d_k`, `k = 1, 2, ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedFraction {
    value: BigRational,
    coefficients: Vec<u128>,
    convergents: Vec<Convergent>,
    termination: Termination,
}

struct Recurrence {
    prev: (u128, u128),
    prev2: (u128, u128),
}

impl Recurrence {
    fn new() -> Self {
        // (n_0, d_0) = (0, 1), (n_{-1}, d_{-1}) = (1, 0)
        Recurrence { prev: (0, 1), prev2: (1, 0) }
    }

    fn push(&mut self, c: u128) -> Option<Convergent> {
        let n = c.checked_mul(self.prev.0)?.checked_add(self.prev2.0)?;
        let d = c.checked_mul(self.prev.1)?.checked_add(self.prev2.1)?;
        self.prev2 = self.prev;
        self.prev = (n, d);
        Some(Convergent { n, d })
    }
}

fn guard() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(100_000_000_000_000u64))
}

fn ratio(n: u128, d: u128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl ContinuedFraction {
    /// Expands a float `x ∈ (0, 1)` to at most `depth` coefficients.
    pub fn expand(x: f64, depth: usize) -> Result<Self> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::OutOfUnitInterval(x.to_string()));
        }
        let value = BigRational::from_float(x).expect("finite float");
        Ok(Self::expand_rational(value, depth, true))
    }

    /// Expands the exact rational `p/q ∈ (0, 1)`.
    pub fn from_ratio(p: u128, q: u128, depth: usize) -> Result<Self> {
        if p == 0 || p >= q {
            return Err(Error::OutOfUnitInterval(format!("{p}/{q}")));
        }
        Ok(Self::expand_rational(ratio(p, q), depth, false))
    }

    /// A truncated expansion given by its coefficients `c_1, c_2, ...`.
    /// The value is the finite continued fraction; the termination is
    /// [`Termination::DepthReached`], i.e. the coefficients are read as the
    /// head of an infinite expansion.
    pub fn from_coefficients(coefficients: &[u128]) -> Result<Self> {
        if coefficients.is_empty() || coefficients.contains(&0) {
            return Err(Error::ContinuedFraction("coefficients must be non-empty and positive".into()));
        }
        let mut rec = Recurrence::new();
        let mut convergents = Vec::with_capacity(coefficients.len());
        for &c in coefficients {
            let conv = rec.push(c).ok_or_else(|| Error::ContinuedFraction("continuant exceeds 128 bits".into()))?;
            convergents.push(conv);
        }
        let last = convergents.last().unwrap();
        Ok(ContinuedFraction {
            value: ratio(last.n, last.d),
            coefficients: coefficients.to_vec(),
            convergents,
            termination: Termination::DepthReached,
        })
    }

    /// `(√5 - 1)/2 = [0; 1, 1, 1, ...]` to the given depth (at most 180).
    /// The stored value is the 170th convergent, within `1e-70` of the
    /// golden ratio, so errors of the listed convergents are exact for all
    /// practical purposes.
    pub fn golden(depth: usize) -> Self {
        let deep = Self::from_coefficients(&vec![1; depth.max(170)]).expect("golden continuants fit in 128 bits up to depth 180");
        let mut cf = Self::from_coefficients(&vec![1; depth.max(1)]).expect("shorter than the deep expansion");
        cf.value = deep.value;
        cf
    }

    fn expand_rational(value: BigRational, depth: usize, float_input: bool) -> Self {
        let mut num = value.numer().clone();
        let mut den = value.denom().clone();
        let mut rec = Recurrence::new();
        let mut coefficients = Vec::new();
        let mut convergents = Vec::new();
        let mut termination = Termination::DepthReached;
        let guard = guard();
        while coefficients.len() < depth {
            if num.is_zero() {
                termination = Termination::Exact;
                break;
            }
            let c = &den / &num;
            let rem = &den % &num;
            let Some(c) = c.to_u128() else {
                termination = Termination::Overflow;
                break;
            };
            let Some(conv) = rec.push(c) else {
                termination = Termination::Overflow;
                break;
            };
            coefficients.push(c);
            convergents.push(conv);
            den = std::mem::replace(&mut num, rem);
            if float_input && !num.is_zero() {
                if BigRational::new(num.clone(), den.clone()) < guard {
                    termination = Termination::RationalWithinPrecision;
                    break;
                }
                if (&value - ratio(conv.n, conv.d)).abs() < guard {
                    termination = Termination::PrecisionLimited;
                    break;
                }
            }
        }
        if termination == Termination::DepthReached && num.is_zero() {
            termination = Termination::Exact;
        }
        ContinuedFraction { value, coefficients, convergents, termination }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn value_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    pub fn coefficients(&self) -> &[u128] {
        &self.coefficients
    }

    /// `c_k`, 1-based.
    pub fn coefficient(&self, k: usize) -> Option<u128> {
        k.checked_sub(1).and_then(|i| self.coefficients.get(i).copied())
    }

    pub fn convergents(&self) -> &[Convergent] {
        &self.convergents
    }

    /// `n_k/d_k`, 1-based.
    pub fn convergent(&self, k: usize) -> Option<Convergent> {
        k.checked_sub(1).and_then(|i| self.convergents.get(i).copied())
    }

    pub fn depth(&self) -> usize {
        self.coefficients.len()
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    /// `|x - n_k/d_k|`.
    pub fn approximation_error(&self, k: usize) -> Option<f64> {
        let c = self.convergent(k)?;
        (&self.value - ratio(c.n, c.d)).abs().to_f64()
    }

    /// For every `k` with `c_{k+1}` available: whether
    /// `|x - n_k/d_k| < 1/(c_{k+1} d_k²)`, evaluated exactly.
    pub fn approximation_check(&self) -> Vec<bool> {
        (1..self.depth())
            .map(|k| {
                let conv = self.convergents[k - 1];
                let c = self.coefficients[k];
                let err = (&self.value - ratio(conv.n, conv.d)).abs();
                let d = BigInt::from(conv.d);
                let bound = BigRational::new(BigInt::one(), BigInt::from(c) * &d * &d);
                err < bound
            })
            .collect()
    }

    /// Heuristic at the computed depth: rational if the expansion
    /// terminated; otherwise unbounded when the largest coefficient in the
    /// second half exceeds twice the largest in the first half, bounded
    /// when not.
    pub fn classify(&self) -> Classification {
        let depth = self.depth();
        let class = match self.termination {
            Termination::Exact | Termination::RationalWithinPrecision => FieldClass::Rational,
            _ => {
                let half = depth / 2;
                let head = self.coefficients[..half].iter().copied().max().unwrap_or(0);
                let tail = self.coefficients[half..].iter().copied().max().unwrap_or(0);
                if depth >= 2 && tail > head.saturating_mul(2) {
                    FieldClass::UnboundedCoefficients
                } else {
                    FieldClass::BoundedCoefficients
                }
            }
        };
        Classification { class, depth }
    }
}

/// Float expansion of `x = Φ/(2π)`; see [`ContinuedFraction::expand`].
pub fn cf_expand(x: f64, depth: usize) -> Result<ContinuedFraction> {
    ContinuedFraction::expand(x, depth)
}

pub fn approximation_check(cf: &ContinuedFraction) -> Vec<bool> {
    cf.approximation_check()
}

pub fn classify_field(cf: &ContinuedFraction) -> Classification {
    cf.classify()
}

/// `(√5 - 1)/2`.
pub fn golden_ratio() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}
