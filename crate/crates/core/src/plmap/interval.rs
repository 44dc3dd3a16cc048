use std::fmt;

use super::{check_layout, locate, pieces_from_knots, right_of, MapError, Piece};
use crate::arith::Rational;

/// An orientation-preserving PL homeomorphism of `[0, 1]` fixing both ends.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLIntervalMap {
    pieces: Vec<Piece>,
}

impl PLIntervalMap {
    /// Validates `(left, slope, value at left)` pieces.
    pub fn from_pieces(specs: Vec<(Rational, Rational, Rational)>) -> Result<Self, MapError> {
        let layout: Vec<_> = specs.iter().map(|(l, s, _)| (l.clone(), s.clone())).collect();
        check_layout(&layout)?;
        if !specs[0].2.is_zero() {
            return Err(MapError::EndpointNotFixed(format!("F(0) = {}", specs[0].2)));
        }
        let mut pieces: Vec<Piece> = Vec::with_capacity(specs.len());
        for (i, (left, slope, value)) in specs.into_iter().enumerate() {
            if let Some(prev) = pieces.last() {
                if prev.at(&left) != value {
                    return Err(MapError::Discontinuous { index: i });
                }
            }
            pieces.push(Piece::new(left, slope, value));
        }
        let end = pieces[pieces.len() - 1].at(&Rational::one());
        if end != Rational::one() {
            return Err(MapError::EndpointNotFixed(format!("F(1) = {end}")));
        }
        Ok(Self::merged(pieces))
    }

    fn merged(pieces: Vec<Piece>) -> Self {
        let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if out.last().is_some_and(|q| q.slope == p.slope) {
                continue;
            }
            out.push(p);
        }
        PLIntervalMap { pieces: out }
    }

    pub fn identity() -> Self {
        PLIntervalMap { pieces: vec![Piece::new(Rational::zero(), Rational::one(), Rational::zero())] }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    fn at(&self, t: &Rational) -> Rational {
        self.pieces[locate(&self.pieces, t)].at(t)
    }

    pub fn evaluate(&self, t: &Rational) -> Result<Rational, MapError> {
        if t.is_negative() || t > &Rational::one() {
            return Err(MapError::Domain(format!("{t} is outside [0, 1]")));
        }
        Ok(self.at(t))
    }

    fn inverse_at(&self, y: &Rational) -> Rational {
        let i = self.pieces.partition_point(|p| &p.value <= y).saturating_sub(1);
        let p = &self.pieces[i];
        &p.left + (y - &p.value) / &p.slope
    }

    pub fn inverse(&self) -> Self {
        let knots = self.pieces.iter().map(|p| p.value.clone()).collect();
        Self::merged(pieces_from_knots(knots, |y| self.inverse_at(y)))
    }

    /// `t ↦ self(g(t))`.
    pub fn compose(&self, g: &PLIntervalMap) -> Self {
        let mut knots: Vec<Rational> = g.pieces.iter().map(|p| p.left.clone()).collect();
        for (i, p) in g.pieces.iter().enumerate() {
            let end = p.at(&right_of(&g.pieces, i));
            for q in &self.pieces {
                if p.value < q.left && q.left < end {
                    knots.push(&p.left + (&q.left - &p.value) / &p.slope);
                }
            }
        }
        Self::merged(pieces_from_knots(knots, |t| self.at(&g.at(t))))
    }
}

impl fmt::Debug for PLIntervalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLIntervalMap[")?;
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {}, {})", p.left, p.slope, p.value)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::fixtures::{paper_g, paper_h};

    #[test]
    fn paper_pair_values() {
        assert_eq!(paper_g().evaluate(&rat(1, 4)).unwrap(), rat(3, 8));
        assert_eq!(paper_h().evaluate(&rat(1, 4)).unwrap(), rat(7, 12));
        assert_eq!(paper_g().pieces().len(), 4);
        assert_eq!(paper_h().pieces().len(), 5);
    }

    #[test]
    fn inverse_and_compose() {
        let (g, h) = (paper_g(), paper_h());
        assert_eq!(g.compose(&g.inverse()), PLIntervalMap::identity());
        assert_eq!(h.inverse().compose(&h), PLIntervalMap::identity());
        let gh = g.compose(&h);
        for t in [rat(0, 1), rat(1, 7), rat(1, 4), rat(2, 3), rat(1, 1)] {
            assert_eq!(gh.evaluate(&t).unwrap(), g.evaluate(&h.evaluate(&t).unwrap()).unwrap());
        }
    }

    #[test]
    fn validation() {
        let id = PLIntervalMap::from_pieces(vec![(rat(0, 1), rat(1, 1), rat(0, 1))]).unwrap();
        assert_eq!(id, PLIntervalMap::identity());
        assert!(matches!(
            PLIntervalMap::from_pieces(vec![(rat(0, 1), rat(1, 1), rat(1, 4))]),
            Err(MapError::EndpointNotFixed(_))
        ));
        assert!(matches!(
            PLIntervalMap::from_pieces(vec![(rat(0, 1), rat(2, 1), rat(0, 1))]),
            Err(MapError::EndpointNotFixed(_))
        ));
        assert!(matches!(
            PLIntervalMap::from_pieces(vec![(rat(0, 1), rat(2, 1), rat(0, 1)), (rat(1, 2), rat(1, 1), rat(1, 2))]),
            Err(MapError::Discontinuous { index: 1 })
        ));
        assert!(matches!(
            PLIntervalMap::from_pieces(vec![(rat(0, 1), rat(0, 1), rat(0, 1))]),
            Err(MapError::NonpositiveSlope { .. })
        ));
        assert!(PLIntervalMap::identity().evaluate(&rat(3, 2)).is_err());
    }
}
