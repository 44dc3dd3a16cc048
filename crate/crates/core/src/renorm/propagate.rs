//! Interval propagation: push a family of affine segments through a PL step
//! map until each lands in a target window.

use crate::arith::Rational;
use crate::plmap::{locate, right_of, Piece};

/// `t ↦ img_lo + slope·(t − dom_lo)` on `[dom_lo, dom_hi)`, reached after
/// `count` applications of the step map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Segment {
    pub dom_lo: Rational,
    pub dom_hi: Rational,
    pub img_lo: Rational,
    pub slope: Rational,
    pub count: u64,
}

impl Segment {
    pub fn identity(lo: Rational, hi: Rational) -> Self {
        Segment { img_lo: lo.clone(), dom_lo: lo, dom_hi: hi, slope: Rational::one(), count: 0 }
    }

    pub fn img_hi(&self) -> Rational {
        &self.img_lo + &self.slope * (&self.dom_hi - &self.dom_lo)
    }

    fn dom_at(&self, y: &Rational) -> Rational {
        &self.dom_lo + (y - &self.img_lo) / &self.slope
    }

    /// Splits at image point `y` if it falls strictly inside the image.
    fn split_at(self, y: &Rational) -> (Segment, Option<Segment>) {
        if &self.img_lo < y && y < &self.img_hi() {
            let mid = self.dom_at(y);
            let right = Segment {
                dom_lo: mid.clone(),
                dom_hi: self.dom_hi.clone(),
                img_lo: y.clone(),
                slope: self.slope.clone(),
                count: self.count,
            };
            (Segment { dom_hi: mid, ..self }, Some(right))
        } else {
            (self, None)
        }
    }

    /// Composes with one application of `step` (pieces covering `[0, 1)`,
    /// each affine into `[0, 1]`), splitting where `step` changes formula.
    pub fn apply(&self, step: &[Piece]) -> Vec<Segment> {
        let (y0, y1) = (&self.img_lo, self.img_hi());
        let mut out = Vec::new();
        let mut i = locate(step, y0);
        while i < step.len() && step[i].left < y1 {
            let piece = &step[i];
            let lo = if &piece.left > y0 { piece.left.clone() } else { y0.clone() };
            let hi = right_of(step, i).min(y1.clone());
            out.push(Segment {
                dom_lo: self.dom_at(&lo),
                dom_hi: self.dom_at(&hi),
                img_lo: piece.at(&lo),
                slope: &self.slope * &piece.slope,
                count: self.count + 1,
            });
            i += 1;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum PropagateError {
    Steps,
    Bits(u64),
}

/// Iterates `step` on every segment until its image lies in `[lo, hi)`
/// after at least `min_count` applications. `budget` caps the total number
/// of segment applications and is decremented in place; `max_bits` caps the
/// size of segment endpoints and slopes.
pub(crate) fn propagate(
    initial: Vec<Segment>,
    step: &[Piece],
    lo: &Rational,
    hi: &Rational,
    min_count: u64,
    budget: &mut u64,
    max_bits: u64,
) -> Result<Vec<Segment>, PropagateError> {
    let mut work = initial;
    let mut retired = Vec::new();
    while let Some(seg) = work.pop() {
        let (a, rest) = seg.split_at(lo);
        let mut parts = Vec::with_capacity(3);
        for p in [Some(a), rest].into_iter().flatten() {
            let (b, c) = p.split_at(hi);
            parts.push(b);
            parts.extend(c);
        }
        for part in parts {
            if part.count >= min_count && lo <= &part.img_lo && part.img_hi() <= *hi {
                retired.push(part);
            } else {
                if *budget == 0 {
                    return Err(PropagateError::Steps);
                }
                let bits = part.dom_lo.bits().max(part.img_lo.bits()).max(part.slope.bits());
                if bits > max_bits {
                    return Err(PropagateError::Bits(bits));
                }
                *budget -= 1;
                work.extend(part.apply(step));
            }
        }
    }
    Ok(retired)
}

/// Checks that the images of `segs` tile `[lo, hi)` with no gap or overlap.
pub(crate) fn images_tile(segs: &[Segment], lo: &Rational, hi: &Rational) -> bool {
    let mut spans: Vec<(Rational, Rational)> = segs.iter().map(|s| (s.img_lo.clone(), s.img_hi())).collect();
    spans.sort();
    let mut at = lo.clone();
    for (a, b) in spans {
        if a != at {
            return false;
        }
        at = b;
    }
    at == *hi
}
