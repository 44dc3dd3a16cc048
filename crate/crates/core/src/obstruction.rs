//! F-obstruction certificates for pairs of interval homeomorphisms.
//!
//! Given `g, h` fixing `0` and `1` and a seed `s` with
//! `s < g(s) < h(s) < g(h(s)) = h(g(s))`, the map
//! `γ(t) = h^{-ℓ(t)}(g(t))` (least `ℓ(t) ≥ 0` landing back in `[s, h(s))`)
//! is a PL circle homeomorphism of `[s, h(s))`. An irrational rotation
//! number for `γ` certifies that `⟨g, h⟩` does not embed in Thompson's
//! group F.

use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{QuadraticIrrational, Rational};
use crate::plmap::{rescale_from_interval, MapError, PLCircleMap, PLIntervalMap, Piece};
use crate::renorm::propagate::{images_tile, propagate, PropagateError, Segment};
use crate::renorm::{rotation_number_exact, Budgets, RenormError, RotationNumber};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("seed chain fails: {0}")]
    PreconditionFailed(String),
    #[error("g(h(s)) = {gh} but h(g(s)) = {hg}")]
    CommutationFailed { gh: Rational, hg: Rational },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("gamma is not a bijection: {0}")]
    NotBijective(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Renorm(#[from] RenormError),
}

/// A pair of interval maps with a seed, validated against the chain
/// `s < g(s) < h(s) < g(h(s)) = h(g(s))`.
#[derive(Clone, Debug)]
pub struct ObstructionInput {
    g: PLIntervalMap,
    h: PLIntervalMap,
    s: Rational,
}

impl ObstructionInput {
    pub fn new(g: PLIntervalMap, h: PLIntervalMap, s: Rational) -> Result<Self, ObstructionError> {
        if !(s.is_positive() && s < Rational::one()) {
            return Err(ObstructionError::PreconditionFailed(format!("s = {s} is not in (0, 1)")));
        }
        let gs = g.evaluate(&s)?;
        let hs = h.evaluate(&s)?;
        let ghs = g.evaluate(&hs)?;
        let hgs = h.evaluate(&gs)?;
        if !(s < gs && gs < hs && hs < ghs) {
            return Err(ObstructionError::PreconditionFailed(format!(
                "need s < g(s) < h(s) < g(h(s)), got {s}, {gs}, {hs}, {ghs}"
            )));
        }
        if ghs != hgs {
            return Err(ObstructionError::CommutationFailed { gh: ghs, hg: hgs });
        }
        Ok(ObstructionInput { g, h, s })
    }

    pub fn g(&self) -> &PLIntervalMap {
        &self.g
    }

    pub fn h(&self) -> &PLIntervalMap {
        &self.h
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    /// The chain `(s, g(s), h(s), g(h(s)))`.
    pub fn chain(&self) -> [Rational; 4] {
        let gs = self.g.evaluate(&self.s).expect("validated");
        let hs = self.h.evaluate(&self.s).expect("validated");
        let ghs = self.g.evaluate(&hs).expect("validated");
        [self.s.clone(), gs, hs, ghs]
    }
}

/// `γ` on `[lo, hi) = [s, h(s))` together with its conjugate on `[0, 1)`.
#[derive(Clone, Debug)]
pub struct Gamma {
    pub lo: Rational,
    pub hi: Rational,
    /// `(left, slope, value at left)` with values in `[lo, hi)`.
    pub pieces: Vec<Piece>,
    /// `ℓ` on each piece.
    pub return_times: Vec<u64>,
    pub rescaled: PLCircleMap,
}

pub fn gamma_map(input: &ObstructionInput, budget: u64) -> Result<Gamma, ObstructionError> {
    let lo = input.s.clone();
    let hi = input.h.evaluate(&lo)?;
    let after_g: Vec<Segment> = Segment::identity(lo.clone(), hi.clone())
        .apply(input.g.pieces())
        .into_iter()
        .map(|seg| Segment { count: 0, ..seg })
        .collect();
    let step = input.h.inverse();
    let mut remaining = budget;
    let mut segs = propagate(after_g, step.pieces(), &lo, &hi, 0, &mut remaining, u64::MAX).map_err(|e| match e {
        PropagateError::Steps => ObstructionError::BudgetExceeded(format!("gamma propagation exceeds {budget} steps")),
        PropagateError::Bits(_) => unreachable!("no bit limit"),
    })?;
    segs.sort_by(|a, b| a.dom_lo.cmp(&b.dom_lo));
    if !images_tile(&segs, &lo, &hi) {
        return Err(ObstructionError::NotBijective(format!("images do not tile [{lo}, {hi})")));
    }
    let pieces: Vec<Piece> =
        segs.iter().map(|seg| Piece::new(seg.dom_lo.clone(), seg.slope.clone(), seg.img_lo.clone())).collect();
    let specs: Vec<_> = pieces.iter().map(|p| (p.left.clone(), p.slope.clone(), p.value.clone())).collect();
    let rescaled = rescale_from_interval(&lo, &hi, &specs)?;
    let return_times = segs.iter().map(|seg| seg.count).collect();
    Ok(Gamma { lo, hi, pieces, return_times, rescaled })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObstructionVerdict {
    /// `γ` has the given irrational rotation number.
    Obstruction(QuadraticIrrational),
    /// `γ` has a rational rotation number.
    NotEstablished(Rational),
    Undetermined { partial_cf: Vec<u64>, lo: Rational, hi: Rational },
}

impl ObstructionVerdict {
    pub fn to_json_value(&self) -> Value {
        match self {
            ObstructionVerdict::Obstruction(q) => json!({
                "verdict": "obstruction",
                "rotation": RotationNumber::Quadratic(q.clone()).to_json_value(),
            }),
            ObstructionVerdict::NotEstablished(r) => json!({
                "verdict": "not_established",
                "rotation": RotationNumber::Rational(r.clone()).to_json_value(),
            }),
            ObstructionVerdict::Undetermined { partial_cf, lo, hi } => json!({
                "verdict": "undetermined",
                "partial_cf": partial_cf,
                "interval": [lo, hi],
            }),
        }
    }
}

/// Classifies the pair by the exact rotation number of the rescaled `γ`.
pub fn is_f_obstruction(
    input: &ObstructionInput,
    budgets: &Budgets,
) -> Result<(ObstructionVerdict, Gamma), ObstructionError> {
    let gamma = gamma_map(input, budgets.orbit_budget)?;
    let result = rotation_number_exact(&gamma.rescaled, budgets)?;
    let verdict = match result.rotation {
        RotationNumber::Quadratic(q) => ObstructionVerdict::Obstruction(q),
        RotationNumber::Rational(r) => ObstructionVerdict::NotEstablished(r),
        RotationNumber::Undetermined { partial_cf, lo, hi, .. } => {
            ObstructionVerdict::Undetermined { partial_cf, lo, hi }
        }
    };
    Ok((verdict, gamma))
}
