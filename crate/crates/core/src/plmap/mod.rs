//! Piecewise-linear homeomorphisms of the circle and of the unit interval,
//! with exact rational data.
//!
//! Circle maps are stored through their lift `F`, normalized so that
//! `F(0)` lies in `[0, 1)`. Every constructor returns the canonical form,
//! in which adjacent pieces always have different slopes. Two maps are
//! equal exactly when their piece lists are.

mod circle;
mod families;
mod interval;
mod json;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ArithError, Rational};

pub use circle::{rescale_from_interval, FixedComponent, PLCircleMap};
pub use families::{family_boshernitzan, family_fq, family_fqr, rotation, Boshernitzan};
pub use interval::PLIntervalMap;
pub use json::{MapFile, PieceSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map has no pieces")]
    Empty,
    #[error("non-monotone piece endpoints: {0}")]
    NonMonotone(String),
    #[error("piece {index} has non-positive slope {slope}")]
    NonpositiveSlope { index: usize, slope: Rational },
    #[error("not a bijection: {0}")]
    NotBijective(String),
    #[error("no continuous lift exists at piece {index}")]
    DiscontinuousCircleMap { index: usize },
    #[error("interval map is discontinuous at piece {index}")]
    Discontinuous { index: usize },
    #[error("endpoint not fixed: {0}")]
    EndpointNotFixed(String),
    #[error("bad rational in field {field}: {value:?}")]
    BadRational { field: String, value: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("malformed map file: {0}")]
    Format(String),
}

impl From<ArithError> for MapError {
    fn from(e: ArithError) -> Self {
        match e {
            ArithError::BadRational(s) => MapError::BadRational { field: "value".into(), value: s },
            other => MapError::Domain(other.to_string()),
        }
    }
}

/// One affine piece `t ↦ value + slope·(t − left)` running up to the next
/// piece's `left` (or to 1).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Piece {
    pub left: Rational,
    pub slope: Rational,
    pub value: Rational,
}

impl Piece {
    pub fn new(left: Rational, slope: Rational, value: Rational) -> Self {
        Piece { left, slope, value }
    }

    /// Evaluates with a single reduction at the end, which matters when
    /// `t` carries a large denominator.
    pub fn at(&self, t: &Rational) -> Rational {
        let (p, q) = (t.numer(), t.denom());
        let (sn, sd) = (self.slope.numer(), self.slope.denom());
        let (ln, ld) = (self.left.numer(), self.left.denom());
        let (vn, vd) = (self.value.numer(), self.value.denom());
        let sdld = sd * ld;
        let numer = vn * &sdld * q + vd * sn * (p * ld - ln * q);
        Rational::new(numer, vd * sdld * q)
    }
}

/// Breakpoints of a circle map: the points of `(0, 1)` where the map, read
/// as a function into `[0, 1)`, stops being affine. Sorted, no duplicates.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct BreakpointSet(Vec<Rational>);

impl BreakpointSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rational> {
        self.0.iter()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        self.0.binary_search(t).is_ok()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }
}

/// Index of the piece whose half-open domain contains `t`. Pieces are
/// sorted by `left` and the first starts at or before `t`.
pub(crate) fn locate(pieces: &[Piece], t: &Rational) -> usize {
    pieces.partition_point(|p| &p.left <= t).saturating_sub(1)
}

/// Builds pieces on `[0, 1)` from a superset of the true knots and an
/// evaluator that is affine between consecutive knots. Adjacent pieces with
/// equal slope are merged.
pub(crate) fn pieces_from_knots(mut knots: Vec<Rational>, eval: impl Fn(&Rational) -> Rational) -> Vec<Piece> {
    knots.sort();
    knots.dedup();
    debug_assert!(knots.first().is_some_and(Rational::is_zero));
    let values: Vec<Rational> = knots.iter().map(&eval).collect();
    let end = eval(&Rational::one());
    let mut out: Vec<Piece> = Vec::with_capacity(knots.len());
    for (i, (left, value)) in knots.iter().zip(&values).enumerate() {
        let (right, right_value) = match knots.get(i + 1) {
            Some(r) => (r.clone(), values[i + 1].clone()),
            None => (Rational::one(), end.clone()),
        };
        let slope = (right_value - value) / (right - left);
        if out.last().is_some_and(|p| p.slope == slope) {
            continue;
        }
        out.push(Piece::new(left.clone(), slope, value.clone()));
    }
    out
}

pub(crate) fn max_bits(pieces: &[Piece]) -> u64 {
    pieces
        .iter()
        .map(|p| p.left.bits().max(p.slope.bits()).max(p.value.bits()))
        .max()
        .unwrap_or(0)
}

/// Common structural checks on piece lists: nonempty, lefts start at 0 and
/// strictly increase inside `[0, 1)`, slopes positive.
pub(crate) fn check_layout(specs: &[(Rational, Rational)]) -> Result<(), MapError> {
    let Some((first, _)) = specs.first() else {
        return Err(MapError::Empty);
    };
    if !first.is_zero() {
        return Err(MapError::NonMonotone(format!("first piece starts at {first}, not 0")));
    }
    for (i, (left, slope)) in specs.iter().enumerate() {
        if left >= &Rational::one() {
            return Err(MapError::NonMonotone(format!("piece {i} starts at {left} >= 1")));
        }
        if i > 0 && left <= &specs[i - 1].0 {
            return Err(MapError::NonMonotone(format!(
                "piece {i} starts at {left}, not after {}",
                specs[i - 1].0
            )));
        }
        if !slope.is_positive() {
            return Err(MapError::NonpositiveSlope { index: i, slope: slope.clone() });
        }
    }
    Ok(())
}

/// Right endpoint of piece `i`.
pub(crate) fn right_of(pieces: &[Piece], i: usize) -> Rational {
    pieces.get(i + 1).map(|p| p.left.clone()).unwrap_or_else(Rational::one)
}
