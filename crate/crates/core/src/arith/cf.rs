use std::fmt;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{backsubstitute, solve_periodic, ArithError, Number, Rational};

/// A continued fraction `[0; a_1, a_2, …]` for a value in `[0, 1)`.
///
/// An empty `period` means the expansion is finite and `preperiod` holds all
/// of its terms. Both constructors canonicalize, so equal values have equal
/// representations:
///
/// * finite expansions never end in `1` (except the single-term `[1]`);
/// * periodic expansions use the shortest period and the shortest preperiod.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct ContinuedFraction {
    preperiod: Vec<u64>,
    period: Vec<u64>,
}

fn check_terms(terms: &[u64]) -> Result<(), ArithError> {
    if terms.contains(&0) {
        return Err(ArithError::Domain("partial quotients must be >= 1".into()));
    }
    Ok(())
}

/// Shortest word whose repetition gives `period`.
pub(crate) fn minimal_period(period: &[u64]) -> Vec<u64> {
    let n = period.len();
    for len in 1..=n {
        if n % len == 0 && period.chunks(len).all(|c| c == &period[..len]) {
            return period[..len].to_vec();
        }
    }
    period.to_vec()
}

impl ContinuedFraction {
    pub fn finite(terms: Vec<u64>) -> Result<Self, ArithError> {
        check_terms(&terms)?;
        let mut terms = terms;
        if terms.len() >= 2 && terms.last() == Some(&1) {
            terms.pop();
            *terms.last_mut().expect("len >= 1") += 1;
        }
        Ok(ContinuedFraction { preperiod: terms, period: Vec::new() })
    }

    pub fn periodic(preperiod: Vec<u64>, period: Vec<u64>) -> Result<Self, ArithError> {
        if period.is_empty() {
            return Err(ArithError::Domain("empty period".into()));
        }
        check_terms(&preperiod)?;
        check_terms(&period)?;
        let mut period = minimal_period(&period);
        let mut preperiod = preperiod;
        // [.., x; (.., x)] == [..; (x, ..)]
        while let (Some(p), Some(q)) = (preperiod.last(), period.last()) {
            if p != q {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        Ok(ContinuedFraction { preperiod, period })
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    /// Number of partial quotients after the leading 0 for a finite
    /// expansion; `None` for a periodic one.
    pub fn len_finite(&self) -> Option<usize> {
        self.is_finite().then_some(self.preperiod.len())
    }

    /// The exact value: a rational for finite expansions, a quadratic
    /// irrational for periodic ones.
    pub fn value(&self) -> Number {
        let mut x = if self.is_finite() {
            Number::Rational(Rational::zero())
        } else {
            Number::Quadratic(solve_periodic(&self.period).expect("canonical period is nonempty"))
        };
        for &m in self.preperiod.iter().rev() {
            x = backsubstitute(m, &x);
        }
        x
    }

    /// The first `n` partial quotients, unrolling the period as needed.
    pub fn head(&self, n: usize) -> Vec<u64> {
        self.preperiod.iter().chain(self.period.iter().cycle()).take(n).copied().collect()
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[0")?;
        let mut sep = "; ";
        for t in &self.preperiod {
            write!(f, "{sep}{t}")?;
            sep = ", ";
        }
        if !self.period.is_empty() {
            write!(f, "{sep}(")?;
            for (i, t) in self.period.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{t}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "]")
    }
}

/// Finite continued fraction of a rational in `[0, 1)`, by the Euclidean
/// algorithm.
pub fn rational_cf(x: &Rational) -> Result<ContinuedFraction, ArithError> {
    if !x.in_unit() {
        return Err(ArithError::Domain(format!("{x} is outside [0, 1)")));
    }
    let mut terms = Vec::new();
    let (mut p, mut q) = (x.numer().clone(), x.denom().clone());
    while !p.is_zero() {
        let (a, rem) = q.div_rem(&p);
        terms.push(a.to_u64().ok_or(ArithError::Overflow)?);
        q = p;
        p = rem;
    }
    ContinuedFraction::finite(terms)
}
