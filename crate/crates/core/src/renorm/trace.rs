use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use super::{final_period, first_return_bounded, rotation_number_estimate, RenormError, ReturnData};
use crate::arith::{ContinuedFraction, Number, QuadraticIrrational, Rational};
use crate::plmap::{FixedComponent, PLCircleMap};

/// Limits for one trace computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    /// Maximum number of renormalization steps.
    pub max_stages: usize,
    /// Cap on backward-orbit steps and segment applications, per stage.
    pub orbit_budget: u64,
    /// Largest numerator or denominator bit size allowed in a stage map.
    pub max_bits: u64,
    /// Orbit length for the fallback estimate when the trace is undecided.
    pub estimate_iters: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { max_stages: 1000, orbit_budget: 10_000_000, max_bits: 1 << 16, estimate_iters: 10_000 }
    }
}

/// One map `g_k` of the trace, with what was computed from it.
#[derive(Clone, Debug)]
pub struct Stage {
    pub map: PLCircleMap,
    /// Present when `g_k` was renormalized.
    pub return_data: Option<ReturnData>,
    /// Nonempty exactly when `g_k` has fixed points.
    pub fixed: Vec<FixedComponent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceOutcome {
    /// `g_stage` has a fixed point; `final_period` is the orbit period of
    /// `g_{stage-1}` (absent when `stage = 0`).
    Terminated { stage: usize, final_period: Option<u64> },
    /// `g_first = g_repeat` exactly.
    Cycle { first: usize, repeat: usize },
    BudgetExceeded { reason: String },
}

#[derive(Clone, Debug)]
pub struct RenormTrace {
    pub stages: Vec<Stage>,
    /// `m_0, m_1, …`, one per renormalized stage.
    pub quotients: Vec<u64>,
    pub outcome: TraceOutcome,
}

impl RenormTrace {
    pub fn stage_count(&self) -> usize {
        self.stages.len()
    }

    pub fn cycle_length(&self) -> Option<usize> {
        match self.outcome {
            TraceOutcome::Cycle { first, repeat } => Some(repeat - first),
            _ => None,
        }
    }

    /// Largest bit size over all stage maps.
    pub fn max_bits(&self) -> u64 {
        self.stages.iter().map(|s| s.map.max_bits()).max().unwrap_or(0)
    }

    /// Every slope appearing in the stages of a detected cycle.
    pub fn cycle_slopes(&self) -> Option<BTreeSet<Rational>> {
        let TraceOutcome::Cycle { first, repeat } = self.outcome else {
            return None;
        };
        Some(self.stages[first..repeat].iter().flat_map(|s| s.map.slopes().cloned()).collect())
    }

    /// Smallest and largest slope over all stages.
    pub fn slope_range(&self) -> (Rational, Rational) {
        let mut slopes = self.stages.iter().flat_map(|s| s.map.slopes());
        let first = slopes.next().expect("trace has a stage").clone();
        slopes.fold((first.clone(), first), |(lo, hi), s| (lo.min(s.clone()), hi.max(s.clone())))
    }

    pub fn to_json_value(&self) -> Value {
        let stages: Vec<Value> = self
            .stages
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let mut v = json!({
                    "index": k,
                    "pieces": s.map.piece_count(),
                    "breakpoints": s.map.breakpoints().len(),
                    "max_bits": s.map.max_bits(),
                    "fixed_point": !s.fixed.is_empty(),
                });
                if let Some(rd) = &s.return_data {
                    v["m"] = json!(rd.m);
                    v["r_bits"] = json!(rd.r.bits());
                }
                v
            })
            .collect();
        let (lo, hi) = self.slope_range();
        let mut v = json!({
            "outcome": self.outcome,
            "quotients": self.quotients,
            "stage_count": self.stage_count(),
            "max_bits": self.max_bits(),
            "slope_range": [lo, hi],
            "stages": stages,
        });
        if let Some(slopes) = self.cycle_slopes() {
            v["cycle_slopes"] = json!(slopes);
        }
        v
    }
}

/// Iterates `g ↦ g*` from `f` until a stage has a fixed point, a stage
/// repeats exactly, or a budget runs out.
pub fn renorm_trace(f: &PLCircleMap, budgets: &Budgets) -> Result<RenormTrace, RenormError> {
    let mut stages: Vec<Stage> = Vec::new();
    let mut quotients = Vec::new();
    let mut seen: HashMap<PLCircleMap, usize> = HashMap::new();
    let mut g = f.clone();
    let outcome = loop {
        let k = stages.len();
        let fixed = g.fixed_points();
        if !fixed.is_empty() {
            let final_period = match stages.last() {
                Some(prev) => Some(final_period(prev.return_data.as_ref().expect("renormalized stage"), &fixed)?),
                None => None,
            };
            stages.push(Stage { map: g, return_data: None, fixed });
            break TraceOutcome::Terminated { stage: k, final_period };
        }
        if let Some(&first) = seen.get(&g) {
            stages.push(Stage { map: g, return_data: None, fixed });
            break TraceOutcome::Cycle { first, repeat: k };
        }
        if k >= budgets.max_stages {
            stages.push(Stage { map: g, return_data: None, fixed });
            break TraceOutcome::BudgetExceeded { reason: format!("stage limit {} reached", budgets.max_stages) };
        }
        if g.max_bits() > budgets.max_bits {
            let reason = format!("stage {k} needs {} bits, limit {}", g.max_bits(), budgets.max_bits);
            stages.push(Stage { map: g, return_data: None, fixed });
            break TraceOutcome::BudgetExceeded { reason };
        }
        match first_return_bounded(&g, budgets.orbit_budget, budgets.max_bits) {
            Ok(rd) => {
                seen.insert(g.clone(), k);
                quotients.push(rd.m);
                let next = rd.fstar.clone();
                stages.push(Stage { map: g, return_data: Some(rd), fixed });
                g = next;
            }
            Err(RenormError::BudgetExceeded(reason)) => {
                stages.push(Stage { map: g, return_data: None, fixed });
                break TraceOutcome::BudgetExceeded { reason: format!("stage {k}: {reason}") };
            }
            Err(e) => return Err(e),
        }
    };
    Ok(RenormTrace { stages, quotients, outcome })
}

/// An exactly classified rotation number, or what is known when the trace
/// did not finish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RotationNumber {
    Rational(Rational),
    Quadratic(QuadraticIrrational),
    Undetermined {
        /// Leading partial quotients established before the budget ran out.
        partial_cf: Vec<u64>,
        estimate: Rational,
        lo: Rational,
        hi: Rational,
    },
}

impl RotationNumber {
    pub fn value(&self) -> Option<Number> {
        match self {
            RotationNumber::Rational(r) => Some(Number::Rational(r.clone())),
            RotationNumber::Quadratic(q) => Some(Number::Quadratic(q.clone())),
            RotationNumber::Undetermined { .. } => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RotationNumber::Rational(_) => "rational",
            RotationNumber::Quadratic(_) => "quadratic",
            RotationNumber::Undetermined { .. } => "undetermined",
        }
    }

    pub fn is_undetermined(&self) -> bool {
        matches!(self, RotationNumber::Undetermined { .. })
    }

    pub fn to_json_value(&self) -> Value {
        match self {
            RotationNumber::Rational(r) => json!({"kind": "rational", "value": r}),
            RotationNumber::Quadratic(q) => {
                let mut v = serde_json::to_value(q).expect("serializes");
                v["kind"] = json!("quadratic");
                v
            }
            RotationNumber::Undetermined { partial_cf, estimate, lo, hi } => json!({
                "kind": "undetermined",
                "partial_cf": partial_cf,
                "estimate": estimate,
                "interval": [lo, hi],
            }),
        }
    }
}

impl fmt::Display for RotationNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotationNumber::Rational(r) => write!(f, "{r}"),
            RotationNumber::Quadratic(q) => write!(f, "{q}"),
            RotationNumber::Undetermined { lo, hi, .. } => write!(f, "undetermined in [{lo}, {hi}]"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RotationResult {
    pub rotation: RotationNumber,
    /// The continued fraction when the rotation number was determined.
    pub cf: Option<ContinuedFraction>,
    pub trace: RenormTrace,
}

impl RotationResult {
    /// Rotation number fields, plus `cf` and the partial-quotient count of a
    /// finite expansion (`cf_terms`).
    pub fn to_json_value(&self) -> Value {
        let mut v = self.rotation.to_json_value();
        if let Some(cf) = &self.cf {
            v["cf"] = json!(cf);
            if let Some(n) = cf.len_finite() {
                v["cf_terms"] = json!(n);
            }
        }
        v["stages"] = json!(self.trace.stage_count());
        v
    }
}

/// Runs the trace and turns its outcome into an exact rotation number.
pub fn rotation_number_exact(f: &PLCircleMap, budgets: &Budgets) -> Result<RotationResult, RenormError> {
    let trace = renorm_trace(f, budgets)?;
    let q = &trace.quotients;
    let (rotation, cf) = match &trace.outcome {
        TraceOutcome::Terminated { stage: 0, .. } => {
            (RotationNumber::Rational(Rational::zero()), Some(ContinuedFraction::default()))
        }
        TraceOutcome::Terminated { stage, final_period } => {
            let mut terms = q[..stage - 1].to_vec();
            terms.push(final_period.expect("stage > 0 has a period"));
            let cf = ContinuedFraction::finite(terms).map_err(internal)?;
            let value = cf.value().as_rational().cloned().ok_or_else(|| internal("finite CF is not rational"))?;
            (RotationNumber::Rational(value), Some(cf))
        }
        TraceOutcome::Cycle { first, repeat } => {
            let cf = ContinuedFraction::periodic(q[..*first].to_vec(), q[*first..*repeat].to_vec())
                .map_err(internal)?;
            let value = cf.value().into_quadratic().ok_or_else(|| internal("periodic CF is rational"))?;
            (RotationNumber::Quadratic(value), Some(cf))
        }
        TraceOutcome::BudgetExceeded { .. } => {
            let (estimate, err) = rotation_number_estimate(f, budgets.estimate_iters);
            let rotation = RotationNumber::Undetermined {
                partial_cf: q.clone(),
                lo: &estimate - &err,
                hi: &estimate + &err,
                estimate,
            };
            (rotation, None)
        }
    };
    Ok(RotationResult { rotation, cf, trace })
}

fn internal(e: impl fmt::Display) -> RenormError {
    RenormError::InternalAssertion(e.to_string())
}
