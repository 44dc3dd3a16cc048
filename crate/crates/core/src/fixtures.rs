//! Built-in maps with known rotation numbers.

use crate::arith::{rat, Rational};
use crate::plmap::{PLCircleMap, PLIntervalMap};

/// Pieces written as `slope·t + intercept` on `[left, next left)`.
fn affine(pieces: &[((i64, i64), (i64, i64), (i64, i64))]) -> Vec<(Rational, Rational, Rational)> {
    pieces
        .iter()
        .map(|&(l, s, b)| {
            let (left, slope) = (rat(l.0, l.1), rat(s.0, s.1));
            let value = &slope * &left + rat(b.0, b.1);
            (left, slope, value)
        })
        .collect()
}

/// The three-piece map with slopes `3/2, 2/3, 1` whose renormalization has
/// period 2; its rotation number is `√2 − 1`.
pub fn theorem_main() -> PLCircleMap {
    PLCircleMap::from_mod1_pieces(affine(&[
        ((0, 1), (3, 2), (3, 8)),
        ((1, 4), (2, 3), (7, 12)),
        ((5, 8), (1, 1), (-5, 8)),
    ]))
    .expect("fixture is valid")
}

/// The renormalization of [`theorem_main`].
pub fn theorem_main_star() -> PLCircleMap {
    PLCircleMap::from_mod1_pieces(affine(&[
        ((0, 1), (2, 3), (4, 9)),
        ((1, 3), (3, 2), (1, 6)),
        ((5, 9), (1, 1), (-5, 9)),
    ]))
    .expect("fixture is valid")
}

/// First generator of the obstruction pair.
pub fn paper_g() -> PLIntervalMap {
    PLIntervalMap::from_pieces(affine(&[
        ((0, 1), (3, 2), (0, 1)),
        ((1, 3), (2, 3), (5, 18)),
        ((11, 24), (1, 1), (1, 8)),
        ((5, 8), (2, 3), (1, 3)),
    ]))
    .expect("fixture is valid")
}

/// Second generator of the obstruction pair.
pub fn paper_h() -> PLIntervalMap {
    PLIntervalMap::from_pieces(affine(&[
        ((0, 1), (27, 8), (0, 1)),
        ((1, 54), (9, 4), (1, 48)),
        ((1, 4), (1, 1), (1, 3)),
        ((7, 12), (16, 81), (779, 972)),
        ((95, 96), (8, 27), (19, 27)),
    ]))
    .expect("fixture is valid")
}

/// Seed point for [`paper_g`], [`paper_h`].
pub fn paper_seed() -> Rational {
    rat(1, 4)
}
