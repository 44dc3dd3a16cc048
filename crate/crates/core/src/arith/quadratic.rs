use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{json_int, ArithError, Number, Rational};

/// A real quadratic irrational `(a + b·√d) / c` in canonical form.
///
/// Canonical means `d` is squarefree and at least 2, `b != 0`, `c > 0` and
/// `gcd(a, b, c) = 1`. With those constraints two values are equal exactly
/// when their coefficients are, so the derived `PartialEq` is value
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticIrrational {
    #[serde(with = "json_int")]
    a: BigInt,
    #[serde(with = "json_int")]
    b: BigInt,
    #[serde(with = "json_int")]
    c: BigInt,
    #[serde(with = "json_int")]
    d: BigInt,
}

// Trial division stops here; whatever cofactor is left is treated as
// squarefree unless it is itself a perfect square.
const TRIAL_DIVISION_LIMIT: u64 = 1 << 22;

/// Splits `n > 0` as `k² · rest` with `rest` squarefree.
pub(crate) fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(n.is_positive());
    let mut n = n.clone();
    let mut k = BigInt::one();
    let mut rest = BigInt::one();
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp * &bp > n {
            break;
        }
        let mut e = 0u32;
        while n.is_multiple_of(&bp) {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            k *= bp.pow(e / 2);
            if e % 2 == 1 {
                rest *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // No prime factor up to the cube root survives, so the cofactor is 1,
    // a prime, a product of two distinct primes, or a prime square.
    let s = n.sqrt();
    if n > BigInt::one() && &s * &s == n {
        k *= s;
    } else {
        rest *= n;
    }
    (k, rest)
}

impl QuadraticIrrational {
    /// Canonicalizes `(a + b·√d) / c`. Returns a [`Number::Rational`] when the
    /// radical vanishes (`b = 0` or `d` a perfect square).
    pub fn canonical(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Number, ArithError> {
        if c.is_zero() {
            return Err(ArithError::ZeroDivision);
        }
        if d.is_negative() {
            return Err(ArithError::Domain(format!("negative radicand {d}")));
        }
        if b.is_zero() || d.is_zero() {
            return Ok(Number::Rational(Rational::new(a, c)));
        }
        let (k, d) = square_part(&d);
        let b = b * k;
        if d.is_one() {
            return Ok(Number::Rational(Rational::new(a + b, c)));
        }
        let (mut a, mut b, mut c) = (a, b, c);
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(Number::Quadratic(QuadraticIrrational { a, b, c, d }))
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// Sign of `x + y·√d` for integers; `d` is not a perfect square, so the
    /// result is `Equal` only when both are zero.
    fn sign_of(x: &BigInt, y: &BigInt, d: &BigInt) -> Ordering {
        let zero = BigInt::zero();
        match (x.cmp(&zero), y.cmp(&zero)) {
            (Ordering::Equal, s) => s,
            (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Less) => (x * x).cmp(&(y * y * d)),
            (Ordering::Less, Ordering::Greater) => (y * y * d).cmp(&(x * x)),
        }
    }

    /// Exact comparison against a rational, without floating point.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        // (a + b√d)/c - p/q has the sign of (a·q - p·c) + b·q·√d since c, q > 0.
        let x = &self.a * r.denom() - r.numer() * &self.c;
        let y = &self.b * r.denom();
        Self::sign_of(&x, &y, &self.d)
    }

    pub fn cmp_quadratic(&self, other: &QuadraticIrrational) -> Ordering {
        if self.d == other.d {
            let x = &self.a * &other.c - &other.a * &self.c;
            let y = &self.b * &other.c - &other.b * &self.c;
            return Self::sign_of(&x, &y, &self.d);
        }
        // Different radicals: compare through a separating rational. Bisect on
        // dyadic bounds until the intervals split; distinct values always do.
        let mut bits = 64u64;
        loop {
            let (lo1, hi1) = self.dyadic_bounds(bits);
            let (lo2, hi2) = other.dyadic_bounds(bits);
            if hi1 <= lo2 {
                return Ordering::Less;
            }
            if hi2 <= lo1 {
                return Ordering::Greater;
            }
            bits *= 2;
        }
    }

    /// Rationals `lo < x < hi` with `hi - lo <= 2^-bits` (roughly).
    pub fn dyadic_bounds(&self, bits: u64) -> (Rational, Rational) {
        // x·c·2^bits = a·2^bits + b·√(d·4^bits)
        let scale = BigInt::one() << bits;
        let root = (&self.d * &scale * &scale).sqrt();
        let base = &self.a * &scale;
        let (lo_num, hi_num) = if self.b.is_positive() {
            (&base + &self.b * &root, &base + &self.b * (&root + 1))
        } else {
            (&base + &self.b * (&root + 1), &base + &self.b * &root)
        };
        let den = &self.c * &scale;
        (Rational::new(lo_num, den.clone()), Rational::new(hi_num, den))
    }

    /// `self + r`.
    pub fn add_rational(&self, r: &Rational) -> QuadraticIrrational {
        let a = &self.a * r.denom() + r.numer() * &self.c;
        let b = &self.b * r.denom();
        let c = &self.c * r.denom();
        Self::canonical(a, b, c, self.d.clone())
            .expect("valid radicand")
            .into_quadratic()
            .expect("adding a rational keeps the radical")
    }

    /// `1 / self`; never zero since the value is irrational.
    pub fn recip(&self) -> QuadraticIrrational {
        // c / (a + b√d) = c·(a - b√d) / (a² - b²·d)
        let a = &self.c * &self.a;
        let b = -(&self.c * &self.b);
        let c = &self.a * &self.a - &self.b * &self.b * &self.d;
        Self::canonical(a, b, c, self.d.clone())
            .expect("valid radicand")
            .into_quadratic()
            .expect("reciprocal keeps the radical")
    }

    pub fn neg(&self) -> QuadraticIrrational {
        QuadraticIrrational { a: -&self.a, b: -&self.b, c: self.c.clone(), d: self.d.clone() }
    }

    pub fn floor(&self) -> BigInt {
        // a + b√d lies strictly inside (n, n + 1) with n = a + floor(b√d), and
        // dividing an open unit interval by a positive integer c cannot cross
        // an integer other than at n/c.
        let root = (&self.b * &self.b * &self.d).sqrt();
        let floor_radical = if self.b.is_positive() { root } else { -root - 1 };
        (&self.a + floor_radical).div_floor(&self.c)
    }

    pub fn to_f64(&self) -> f64 {
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let c = self.c.to_f64().unwrap_or(f64::NAN);
        (a + b * d.sqrt()) / c
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.b.sign() == Sign::Minus { '-' } else { '+' };
        write!(f, "({}{}{}*sqrt({}))/{}", self.a, op, self.b.abs(), self.d, self.c)
    }
}

impl fmt::Debug for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
