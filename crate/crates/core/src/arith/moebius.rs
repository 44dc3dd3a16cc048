use std::cmp::Ordering;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{ArithError, Number, QuadraticIrrational, Rational};

/// Integer matrix `(A, B; C, D)` acting as `x ↦ (A·x + B) / (C·x + D)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MoebiusTransform {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl MoebiusTransform {
    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1)
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        MoebiusTransform { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    /// `x ↦ 1 / (m + x)`.
    pub fn step(m: u64) -> Self {
        MoebiusTransform {
            a: BigInt::zero(),
            b: BigInt::one(),
            c: BigInt::one(),
            d: BigInt::from(m),
        }
    }

    pub fn determinant(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn apply(&self, x: &Rational) -> Result<Rational, ArithError> {
        let a = Rational::from_integer(self.a.clone());
        let b = Rational::from_integer(self.b.clone());
        let c = Rational::from_integer(self.c.clone());
        let d = Rational::from_integer(self.d.clone());
        let den = c * x + d;
        Ok((a * x + b) * den.recip()?)
    }
}

impl Mul<&MoebiusTransform> for &MoebiusTransform {
    type Output = MoebiusTransform;

    fn mul(self, rhs: &MoebiusTransform) -> MoebiusTransform {
        MoebiusTransform {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

/// Product of step matrices over one period, first term outermost, so that
/// a purely periodic continued fraction satisfies `x = M(x)`.
pub fn period_matrix(period: &[u64]) -> Result<MoebiusTransform, ArithError> {
    if period.is_empty() {
        return Err(ArithError::Domain("empty period".into()));
    }
    if period.contains(&0) {
        return Err(ArithError::Domain("partial quotients must be >= 1".into()));
    }
    Ok(period
        .iter()
        .fold(MoebiusTransform::identity(), |acc, &m| &acc * &MoebiusTransform::step(m)))
}

/// Value of the purely periodic continued fraction `[0; (period)]`: the root
/// in `(0, 1)` of `C·x² + (D − A)·x − B = 0`.
pub fn solve_periodic(period: &[u64]) -> Result<QuadraticIrrational, ArithError> {
    let m = period_matrix(period)?;
    if !m.c.is_positive() {
        return Err(ArithError::Internal(format!("period matrix has C = {}", m.c)));
    }
    let lin = &m.d - &m.a;
    let disc = &lin * &lin + BigInt::from(4) * &m.b * &m.c;
    let two_c = BigInt::from(2) * &m.c;
    let zero = Rational::zero();
    let one = Rational::one();
    let mut inside = Vec::new();
    for sign in [1i64, -1] {
        let root = QuadraticIrrational::canonical(-lin.clone(), BigInt::from(sign), two_c.clone(), disc.clone())?;
        let q = match root {
            Number::Quadratic(q) => q,
            Number::Rational(r) => {
                return Err(ArithError::Internal(format!("periodic expansion has rational root {r}")))
            }
        };
        if q.cmp_rational(&zero) == Ordering::Greater && q.cmp_rational(&one) == Ordering::Less {
            inside.push(q);
        }
    }
    match inside.len() {
        1 => Ok(inside.pop().expect("one root")),
        n => Err(ArithError::Internal(format!("{n} roots of the period equation in (0, 1)"))),
    }
}
