use crate::arith::Rational;
use crate::plmap::PLCircleMap;

/// `F̃ⁿ(0)/n` over the exact lift orbit, with the classical error bound
/// `1/n` for circle homeomorphisms.
pub fn rotation_number_estimate(f: &PLCircleMap, n: u64) -> (Rational, Rational) {
    assert!(n >= 1, "need at least one iterate");
    let one = Rational::one();
    let mut wraps = 0u64;
    let mut x = Rational::zero();
    for _ in 0..n {
        x = f.evaluate_lift(&x);
        // F maps [0, 1) into [F(0), F(0) + 1) ⊂ [0, 2)
        if x >= one {
            x -= &one;
            wraps += 1;
        }
    }
    let n = Rational::from_integer(n);
    ((Rational::from_integer(wraps) + x) / &n, one / n)
}
