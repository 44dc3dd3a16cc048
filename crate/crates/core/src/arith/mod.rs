//! Exact number algebra: rationals, quadratic irrationals, continued
//! fractions and the integer Möbius transforms that connect them.

mod cf;
mod moebius;
mod quadratic;
mod rational;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use cf::{rational_cf, ContinuedFraction};
pub use moebius::{period_matrix, solve_periodic, MoebiusTransform};
pub use quadratic::QuadraticIrrational;
pub use rational::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("malformed rational {0:?}")]
    BadRational(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by zero")]
    ZeroDivision,
    #[error("partial quotient does not fit in 64 bits")]
    Overflow,
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

/// A value that is either rational or a real quadratic irrational.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Number {
    Rational(Rational),
    Quadratic(QuadraticIrrational),
}

impl Number {
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Number::Rational(r) => Some(r),
            Number::Quadratic(_) => None,
        }
    }

    pub fn as_quadratic(&self) -> Option<&QuadraticIrrational> {
        match self {
            Number::Quadratic(q) => Some(q),
            Number::Rational(_) => None,
        }
    }

    pub fn into_quadratic(self) -> Option<QuadraticIrrational> {
        match self {
            Number::Quadratic(q) => Some(q),
            Number::Rational(_) => None,
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        match self {
            Number::Rational(x) => x.cmp(r),
            Number::Quadratic(q) => q.cmp_rational(r),
        }
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Number {
        match self {
            Number::Rational(x) => Number::Rational(Rational::one() - x),
            Number::Quadratic(q) => Number::Quadratic(q.neg().add_rational(&Rational::one())),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Rational(x) => x.to_f64(),
            Number::Quadratic(q) => q.to_f64(),
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Rational(r) => write!(f, "{r}"),
            Number::Quadratic(q) => write!(f, "{q}"),
        }
    }
}

/// `1 / (m + x)` for `m >= 1` and `x` in `[0, 1)`.
///
/// Quadratic inputs stay over the same radicand.
pub fn backsubstitute(m: u64, x: &Number) -> Number {
    assert!(m >= 1, "partial quotients are positive");
    let m = Rational::from_integer(m);
    match x {
        Number::Rational(r) => Number::Rational((m + r).recip().expect("m + x >= 1")),
        Number::Quadratic(q) => Number::Quadratic(q.add_rational(&m).recip()),
    }
}

impl Serialize for Number {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Number::Rational(r) => r.serialize(serializer),
            Number::Quadratic(q) => q.serialize(serializer),
        }
    }
}

/// JSON integers: plain numbers when they fit in an `i64`, decimal strings
/// otherwise, so consumers without bignum parsing still read small values.
pub mod json_int {
    use super::*;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer};

    pub fn serialize<S: Serializer>(n: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
        match n.to_i64() {
            Some(v) => serializer.serialize_i64(v),
            None => serializer.collect_str(n),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BigInt, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Int(v) => Ok(BigInt::from(v)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
