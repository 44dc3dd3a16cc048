//! Renormalization of circle maps and the exact rotation numbers it yields.
//!
//! For a map `f` without fixed points, set `r = f(0)`. Every `t` in
//! `[0, r)` comes back to `[0, r)` under `f⁻¹` after `ℓ(t) > 0` steps, and
//! the first-return map `t ↦ f^{-ℓ(t)}(t)`, rescaled by `1/r`, is again a
//! circle map `f*`. The return time of 0 is `m_f`; return times only take
//! the values `m_f` and `m_f + 1`, switching at `s = f^{m_f}(r)`.
//!
//! Because `rot(f) = 1/(m_f + rot(f*))`, iterating `f ↦ f*` reads off the
//! continued fraction of `rot(f)` one partial quotient per step. The
//! iteration stops when a stage has a fixed point (rational rotation
//! number) or revisits an earlier stage exactly (periodic continued
//! fraction, hence a quadratic irrational).

mod estimate;
pub(crate) mod propagate;
mod trace;

use serde::Serialize;
use thiserror::Error;

use crate::arith::Rational;
use crate::plmap::{FixedComponent, PLCircleMap, Piece};
use propagate::{images_tile, propagate, PropagateError, Segment};

pub use estimate::rotation_number_estimate;
pub use trace::{
    renorm_trace, rotation_number_exact, Budgets, RenormTrace, RotationNumber, RotationResult, Stage, TraceOutcome,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenormError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("map has a fixed point")]
    HasFixedPoint,
    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
}

/// One renormalization step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReturnData {
    /// `f(0)`.
    pub r: Rational,
    /// Return time of 0.
    pub m: u64,
    /// `f^m(r)`; return time is `m` on `[0, s)` and `m + 1` on `[s, r)`.
    pub s: Rational,
    /// First-return map of `f⁻¹` on `[0, r)`, as `(left, slope, value)`
    /// pieces with values in `[0, r)`.
    #[serde(skip)]
    pub return_map: Vec<Piece>,
    /// Return time on each piece of `return_map`.
    #[serde(skip)]
    pub return_times: Vec<u64>,
    /// `return_map` conjugated to `[0, 1)`.
    #[serde(skip)]
    pub fstar: PLCircleMap,
}

impl ReturnData {
    /// Evaluates the return map at `t ∈ [0, r)`.
    pub fn return_at(&self, t: &Rational) -> Rational {
        let i = crate::plmap::locate(&self.return_map, t);
        self.return_map[i].at(t)
    }
}

/// Minimal `m > 0` with `f^{-m}(0) ∈ [0, f(0))`, by walking the backward
/// orbit of 0.
pub fn return_time_zero(f: &PLCircleMap, budget: u64) -> Result<u64, RenormError> {
    return_time_bounded(f, budget, u64::MAX)
}

fn return_time_bounded(f: &PLCircleMap, budget: u64, max_bits: u64) -> Result<u64, RenormError> {
    let r = f.evaluate_lift(&Rational::zero());
    if r.is_zero() {
        return Err(RenormError::HasFixedPoint);
    }
    let mut x = Rational::zero();
    for m in 1..=budget {
        x = f.inverse_lift(&x).fract();
        if x < r {
            return Ok(m);
        }
        if x.bits() > max_bits {
            return Err(RenormError::BudgetExceeded(format!("backward orbit of 0 exceeds {max_bits} bits")));
        }
    }
    Err(RenormError::BudgetExceeded(format!("return time of 0 exceeds {budget} steps")))
}

/// Computes the first-return map of `f⁻¹` on `[0, f(0))` and its rescaling
/// `f*`. `budget` caps both the backward orbit of 0 and the total number of
/// segment applications.
pub fn first_return(f: &PLCircleMap, budget: u64) -> Result<ReturnData, RenormError> {
    first_return_bounded(f, budget, u64::MAX)
}

/// [`first_return`], giving up once an intermediate number needs more than
/// `max_bits` bits.
pub fn first_return_bounded(f: &PLCircleMap, budget: u64, max_bits: u64) -> Result<ReturnData, RenormError> {
    if f.has_fixed_point() {
        return Err(RenormError::HasFixedPoint);
    }
    let zero = Rational::zero();
    let r = f.evaluate(&zero).expect("0 is in the domain");
    let m = return_time_bounded(f, budget, max_bits)?;

    let step = f.inverse().mod1_pieces();
    let mut remaining = budget;
    let initial = vec![Segment::identity(zero.clone(), r.clone())];
    let mut segs = propagate(initial, &step, &zero, &r, 1, &mut remaining, max_bits).map_err(|e| match e {
        PropagateError::Steps => {
            RenormError::BudgetExceeded(format!("first-return propagation exceeds {budget} applications"))
        }
        PropagateError::Bits(bits) => {
            RenormError::BudgetExceeded(format!("first-return propagation needs {bits} bits, limit {max_bits}"))
        }
    })?;
    segs.sort_by(|a, b| a.dom_lo.cmp(&b.dom_lo));

    let mut s = r.clone();
    for _ in 0..m {
        s = f.evaluate(&s).expect("orbit stays in [0, 1)");
    }
    if s.is_zero() || s > r {
        return Err(RenormError::InternalAssertion(format!("split point s = {s} outside (0, r] with r = {r}")));
    }
    for seg in &segs {
        let ok = if seg.count == m {
            seg.dom_hi <= s
        } else if seg.count == m + 1 {
            seg.dom_lo >= s
        } else {
            false
        };
        if !ok {
            return Err(RenormError::InternalAssertion(format!(
                "return time {} on [{}, {}) breaks the {{m, m+1}} = {{{m}, {}}} dichotomy at s = {s}",
                seg.count,
                seg.dom_lo,
                seg.dom_hi,
                m + 1
            )));
        }
    }
    if !images_tile(&segs, &zero, &r) {
        return Err(RenormError::InternalAssertion("return images do not tile [0, r)".into()));
    }

    let return_map: Vec<Piece> =
        segs.iter().map(|seg| Piece::new(seg.dom_lo.clone(), seg.slope.clone(), seg.img_lo.clone())).collect();
    let return_times = segs.iter().map(|seg| seg.count).collect();
    let fstar = PLCircleMap::from_mod1_pieces(
        segs.iter().map(|seg| (&seg.dom_lo / &r, seg.slope.clone(), &seg.img_lo / &r)).collect(),
    )
    .map_err(|e| RenormError::InternalAssertion(format!("rescaled return map is invalid: {e}")))?;

    Ok(ReturnData { r, m, s, return_map, return_times, fstar })
}

/// `f*`: the identity if `f` has a fixed point, otherwise the rescaled
/// first-return map.
pub fn renormalize(f: &PLCircleMap, budget: u64) -> Result<PLCircleMap, RenormError> {
    if f.has_fixed_point() {
        return Ok(PLCircleMap::identity());
    }
    Ok(first_return(f, budget)?.fstar)
}

/// Period of the periodic orbits of the map that produced `prev`, given
/// that `prev.fstar` has fixed points.
pub fn final_period(prev: &ReturnData, fixed: &[FixedComponent]) -> Result<u64, RenormError> {
    if fixed.is_empty() {
        return Err(RenormError::InternalAssertion("renormalized map has no fixed point".into()));
    }
    let period_at = |t: &Rational| if &(&prev.r * t) < &prev.s { prev.m } else { prev.m + 1 };
    let mut periods = Vec::new();
    for c in fixed {
        match c {
            FixedComponent::Point { at } => periods.push(period_at(at)),
            FixedComponent::Arc { start, end } => {
                periods.push(period_at(start));
                periods.push(period_at(end));
            }
            FixedComponent::Circle => {
                if prev.s != prev.r {
                    return Err(RenormError::InternalAssertion(
                        "identity return map with two return times".into(),
                    ));
                }
                periods.push(prev.m);
            }
        }
    }
    let p = periods[0];
    if periods.iter().any(|&q| q != p) {
        return Err(RenormError::InternalAssertion(format!("fixed components disagree on the period: {periods:?}")));
    }
    Ok(p)
}
