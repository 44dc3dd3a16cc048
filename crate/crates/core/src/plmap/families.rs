use super::{MapError, PLCircleMap};
use crate::arith::Rational;

/// The rigid rotation `t ↦ t + θ mod 1`.
pub fn rotation(theta: &Rational) -> Result<PLCircleMap, MapError> {
    if !theta.in_unit() {
        return Err(MapError::Domain(format!("rotation angle {theta} is outside [0, 1)")));
    }
    PLCircleMap::from_mod1_pieces(vec![(Rational::zero(), Rational::one(), theta.clone())])
}

/// The involution `f_q` swapping `[0, 1/(q+1))` and `[1/(q+1), 1)` with
/// slopes `q` and `1/q`.
pub fn family_fq(q: &Rational) -> Result<PLCircleMap, MapError> {
    if !q.is_positive() {
        return Err(MapError::Domain(format!("f_q needs q > 0, got {q}")));
    }
    let split = (q + Rational::one()).recip()?;
    PLCircleMap::from_mod1_pieces(vec![
        (Rational::zero(), q.clone(), split.clone()),
        (split, q.recip()?, Rational::zero()),
    ])
}

/// `f_{q,r} = R_r ∘ f_q`.
pub fn family_fqr(q: &Rational, r: &Rational) -> Result<PLCircleMap, MapError> {
    Ok(rotation(r)?.compose(&family_fq(q)?))
}

/// The two-piece map `φ_{a,b}` together with its slope data.
#[derive(Clone, Debug)]
pub struct Boshernitzan {
    pub map: PLCircleMap,
    /// `(1 − b)/a`, the slope of the first piece.
    pub k1: Rational,
    /// `b/(1 − a)`, the slope of the second piece.
    pub k2: Rational,
}

impl Boshernitzan {
    /// `log k1 / (log k1 − log k2)`, the known rotation number, as a float.
    pub fn expected_rotation(&self) -> f64 {
        let (l1, l2) = (self.k1.to_f64().ln(), self.k2.to_f64().ln());
        l1 / (l1 - l2)
    }
}

pub fn family_boshernitzan(a: &Rational, b: &Rational) -> Result<Boshernitzan, MapError> {
    if !a.is_positive() || !b.is_positive() || a + b >= Rational::one() {
        return Err(MapError::Domain(format!("need 0 < a, b and a + b < 1, got a = {a}, b = {b}")));
    }
    let one = Rational::one();
    let k1 = (&one - b) / a;
    let k2 = b / (&one - a);
    let map = PLCircleMap::from_mod1_pieces(vec![
        (Rational::zero(), k1.clone(), b.clone()),
        (a.clone(), k2.clone(), Rational::zero()),
    ])?;
    Ok(Boshernitzan { map, k1, k2 })
}
