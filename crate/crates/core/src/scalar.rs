//! Numeric modes for payoffs and probabilities.
//!
//! A game is either exact (arbitrary-precision rationals) or approximate
//! (`f64`). Every algorithm in the crate is generic over [`Scalar`]; the
//! tolerance hooks return zero for the exact mode, so comparisons made
//! through the helpers below are exact there.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact payoff type. Always reduced, denominator positive.
pub type Rational = BigRational;

/// Residual slack accepted on linear feasibility constraints in float mode.
pub const FEASIBILITY_EPS: f64 = 1e-9;
/// Regret below which a float profile counts as an equilibrium.
pub const NASH_EPS: f64 = 1e-8;
/// Slack on the probability sum of a float mixture.
pub const MIXTURE_SUM_EPS: f64 = 1e-12;
const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    Rational,
    Float,
}

impl Display for NumericMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NumericMode::Rational => write!(f, "rational"),
            NumericMode::Float => write!(f, "float"),
        }
    }
}

pub trait Scalar: Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static {
    const MODE: NumericMode;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_int(value: i64) -> Self {
        Self::from_ratio(value, 1)
    }

    fn to_f64(&self) -> f64;

    fn is_finite_value(&self) -> bool;

    /// Slack on LFP residuals and best-response ties.
    fn feasibility_tolerance() -> Self;

    fn nash_tolerance() -> Self;

    /// Smallest magnitude accepted as a simplex or elimination pivot.
    fn pivot_tolerance() -> Self;

    /// Slack on the probability sum of a mixture.
    fn mixture_tolerance() -> Self;

    /// Token written to the canonical game file.
    fn to_token(&self) -> String;
}

impl Scalar for Rational {
    const MODE: NumericMode = NumericMode::Rational;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn feasibility_tolerance() -> Self {
        Self::zero()
    }

    fn nash_tolerance() -> Self {
        Self::zero()
    }

    fn pivot_tolerance() -> Self {
        Self::zero()
    }

    fn mixture_tolerance() -> Self {
        Self::zero()
    }

    fn to_token(&self) -> String {
        self.to_string()
    }
}

impl Scalar for f64 {
    const MODE: NumericMode = NumericMode::Float;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn feasibility_tolerance() -> Self {
        FEASIBILITY_EPS
    }

    fn nash_tolerance() -> Self {
        NASH_EPS
    }

    fn pivot_tolerance() -> Self {
        PIVOT_EPS
    }

    fn mixture_tolerance() -> Self {
        MIXTURE_SUM_EPS
    }

    fn to_token(&self) -> String {
        // Debug keeps a decimal point or exponent and round-trips bit-exactly.
        format!("{:?}", self)
    }
}

/// `a >= b` up to the feasibility tolerance.
pub fn weakly_exceeds<T: Scalar>(a: &T, b: &T) -> bool {
    a.clone() + T::feasibility_tolerance() >= *b
}

/// `a > b` by more than the feasibility tolerance.
pub fn strictly_exceeds<T: Scalar>(a: &T, b: &T) -> bool {
    a.clone() > b.clone() + T::feasibility_tolerance()
}

pub(crate) fn max_of<'a, T: Scalar>(values: impl IntoIterator<Item = &'a T>) -> Option<T> {
    values.into_iter().fold(None, |best: Option<T>, v| match best {
        Some(b) if b >= *v => Some(b),
        _ => Some(v.clone()),
    })
}
