use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::{check_layout, locate, max_bits, pieces_from_knots, right_of, BreakpointSet, MapError, Piece};
use crate::arith::Rational;

/// An orientation-preserving PL homeomorphism of the circle `[0, 1)`.
///
/// Stored as its lift `F`: piece `i` covers `[t_i, t_{i+1})` with
/// `F(t) = v_i + λ_i·(t − t_i)`, where `t_0 = 0`, `v_0 ∈ [0, 1)`,
/// the lift is continuous, all slopes are positive, and `F(1) = v_0 + 1`.
/// The circle map is `F mod 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLCircleMap {
    pieces: Vec<Piece>,
}

/// A maximal connected set of fixed points.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FixedComponent {
    Point { at: Rational },
    /// Closed arc from `start` counterclockwise to `end`; wraps past 0 when
    /// `end < start`.
    Arc { start: Rational, end: Rational },
    Circle,
}

impl FixedComponent {
    /// A point of the component.
    pub fn representative(&self) -> Rational {
        match self {
            FixedComponent::Point { at } => at.clone(),
            FixedComponent::Arc { start, .. } => start.clone(),
            FixedComponent::Circle => Rational::zero(),
        }
    }
}

impl PLCircleMap {
    /// Builds a circle map from mod-1 piece formulas `(left, slope, value at
    /// left)`, inferring the integer shifts that make the lift continuous.
    pub fn from_mod1_pieces(specs: Vec<(Rational, Rational, Rational)>) -> Result<Self, MapError> {
        let layout: Vec<(Rational, Rational)> = specs.iter().map(|(l, s, _)| (l.clone(), s.clone())).collect();
        check_layout(&layout)?;
        let n = specs.len();
        let right = |i: usize| if i + 1 < n { specs[i + 1].0.clone() } else { Rational::one() };

        let total = (0..n).fold(Rational::zero(), |acc, i| acc + &specs[i].1 * (right(i) - &specs[i].0));
        if total != Rational::one() {
            return Err(MapError::NotBijective(format!("piece images have total length {total}, not 1")));
        }

        let mut pieces = Vec::with_capacity(n);
        let mut value = specs[0].2.fract();
        for (i, (left, slope, given)) in specs.iter().enumerate() {
            if i > 0 && !(&value - given).is_integer() {
                return Err(MapError::DiscontinuousCircleMap { index: i });
            }
            let end = &value + slope * (right(i) - left);
            pieces.push(Piece::new(left.clone(), slope.clone(), value));
            value = end;
        }
        Ok(Self::from_lift_pieces(pieces))
    }

    /// Normalizes `F(0)` into `[0, 1)` and merges equal-slope neighbours.
    /// The pieces must already describe a valid lift.
    pub(crate) fn from_lift_pieces(mut pieces: Vec<Piece>) -> Self {
        let shift = Rational::from_integer(pieces[0].value.floor());
        if !shift.is_zero() {
            for p in &mut pieces {
                p.value -= &shift;
            }
        }
        let mut merged: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if merged.last().is_some_and(|q| q.slope == p.slope) {
                continue;
            }
            merged.push(p);
        }
        PLCircleMap { pieces: merged }
    }

    pub fn identity() -> Self {
        PLCircleMap { pieces: vec![Piece::new(Rational::zero(), Rational::one(), Rational::zero())] }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Lift pieces in canonical form.
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn slopes(&self) -> impl Iterator<Item = &Rational> {
        self.pieces.iter().map(|p| &p.slope)
    }

    /// Largest numerator or denominator bit length in the piece data.
    pub fn max_bits(&self) -> u64 {
        max_bits(&self.pieces)
    }

    fn lift_end(&self, i: usize) -> Rational {
        let p = &self.pieces[i];
        p.at(&right_of(&self.pieces, i))
    }

    pub fn evaluate_lift(&self, t: &Rational) -> Rational {
        let n = t.floor();
        let u = t - Rational::from_integer(n.clone());
        let p = &self.pieces[locate(&self.pieces, &u)];
        p.at(&u) + Rational::from_integer(n)
    }

    pub fn evaluate(&self, t: &Rational) -> Result<Rational, MapError> {
        if !t.in_unit() {
            return Err(MapError::Domain(format!("{t} is outside [0, 1)")));
        }
        Ok(self.evaluate_lift(t).fract())
    }

    /// `F⁻¹(y)` for the lift.
    pub fn inverse_lift(&self, y: &Rational) -> Rational {
        let v0 = &self.pieces[0].value;
        let n: BigInt = (y - v0).floor();
        let shift = Rational::from_integer(n);
        let y = y - &shift;
        let i = self.pieces.partition_point(|p| p.value <= y).saturating_sub(1);
        let p = &self.pieces[i];
        &p.left + (&y - &p.value) / &p.slope + shift
    }

    pub fn inverse(&self) -> Self {
        let mut knots = vec![Rational::zero()];
        knots.extend(self.pieces.iter().map(|p| p.value.fract()));
        Self::from_lift_pieces(pieces_from_knots(knots, |y| self.inverse_lift(y)))
    }

    /// `t ↦ self(g(t))`.
    pub fn compose(&self, g: &PLCircleMap) -> Self {
        let mut knots: Vec<Rational> = g.pieces.iter().map(|p| p.left.clone()).collect();
        for (i, p) in g.pieces.iter().enumerate() {
            let (w0, w1) = (&p.value, g.lift_end(i));
            let mut n = w0.floor();
            while n <= w1.floor() {
                let base = Rational::from_integer(n.clone());
                for q in &self.pieces {
                    let y = &q.left + &base;
                    if w0 < &y && y < w1 {
                        knots.push(&p.left + (&y - w0) / &p.slope);
                    }
                }
                n += 1;
            }
        }
        Self::from_lift_pieces(pieces_from_knots(knots, |t| self.evaluate_lift(&g.evaluate_lift(t))))
    }

    /// `self` composed with itself `n` times; the identity for `n = 0`.
    pub fn iterate(&self, n: u64) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Affine pieces of the circle map itself (values in `[0, 1)`), split at
    /// the point where the lift crosses an integer.
    pub fn mod1_pieces(&self) -> Vec<Piece> {
        let mut out = Vec::with_capacity(self.pieces.len() + 1);
        for (i, p) in self.pieces.iter().enumerate() {
            let end = self.lift_end(i);
            let k = Rational::from_integer(p.value.floor() + 1);
            out.push(Piece::new(p.left.clone(), p.slope.clone(), p.value.fract()));
            if k < end {
                let u = &p.left + (&k - &p.value) / &p.slope;
                out.push(Piece::new(u, p.slope.clone(), Rational::zero()));
            }
        }
        out
    }

    /// Slope changes of the lift plus the wrap point where `F` hits 1.
    pub fn breakpoints(&self) -> BreakpointSet {
        let mut pts: Vec<Rational> = self.pieces.iter().skip(1).map(|p| p.left.clone()).collect();
        if !self.pieces[0].value.is_zero() {
            pts.push(self.inverse_lift(&Rational::one()));
        }
        pts.sort();
        pts.dedup();
        BreakpointSet(pts)
    }

    /// Circle points, 0 included, where the one-sided slopes differ.
    pub fn slope_discontinuities(&self) -> usize {
        let first = &self.pieces[0].slope;
        let last = &self.pieces[self.pieces.len() - 1].slope;
        (self.pieces.len() - 1) + usize::from(first != last)
    }

    pub fn fixed_points(&self) -> Vec<FixedComponent> {
        // Closed runs [start, end] of solutions to F(t) − t ∈ {0, 1}.
        let mut runs: Vec<(Rational, Rational)> = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let right = right_of(&self.pieces, i);
            let one = Rational::one();
            for k in [Rational::zero(), Rational::one()] {
                let hit = if p.slope == one {
                    (&p.value - &p.left == k).then(|| (p.left.clone(), right.clone()))
                } else {
                    let t = (&k - &p.value + &p.slope * &p.left) / (&p.slope - &one);
                    t.in_half_open(&p.left, &right).then(|| (t.clone(), t))
                };
                if let Some((s, e)) = hit {
                    match runs.last_mut() {
                        Some(last) if last.1 == s => last.1 = e,
                        _ => runs.push((s, e)),
                    }
                }
            }
        }
        let one = Rational::one();
        if runs.len() == 1 && runs[0].0.is_zero() && runs[0].1 == one {
            return vec![FixedComponent::Circle];
        }
        if runs.len() >= 2 && runs[runs.len() - 1].1 == one && runs[0].0.is_zero() {
            let (_, first_end) = runs.remove(0);
            let last = runs.last_mut().expect("len >= 1");
            last.1 = first_end;
        }
        runs.into_iter()
            .map(|(s, e)| if s == e { FixedComponent::Point { at: s } } else { FixedComponent::Arc { start: s, end: e } })
            .collect()
    }

    pub fn has_fixed_point(&self) -> bool {
        !self.fixed_points().is_empty()
    }
}

impl fmt::Debug for PLCircleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLCircleMap[")?;
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {}, {})", p.left, p.slope, p.value)?;
        }
        write!(f, "]")
    }
}

/// Conjugates a PL bijection of `[a, b)`, given as mod-`[a, b)` pieces
/// `(left, slope, value at left)`, by the chart `t ↦ (t − a)/(b − a)`.
pub fn rescale_from_interval(
    a: &Rational,
    b: &Rational,
    specs: &[(Rational, Rational, Rational)],
) -> Result<PLCircleMap, MapError> {
    if a >= b {
        return Err(MapError::Domain(format!("empty interval [{a}, {b})")));
    }
    let len = b - a;
    let chart = |t: &Rational| (t - a) / &len;
    let rescaled = specs
        .iter()
        .map(|(l, s, v)| (chart(l), s.clone(), chart(v)))
        .collect();
    PLCircleMap::from_mod1_pieces(rescaled)
}
