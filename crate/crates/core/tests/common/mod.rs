//! Random map generation and the invariant checks shared by the property
//! suite and the acceptance harness.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use rotlab::arith::rat;
use rotlab::fixtures::{paper_g, paper_h, paper_seed, theorem_main, theorem_main_star};
use rotlab::obstruction::{gamma_map, ObstructionInput};
use rotlab::plmap::{family_fqr, rotation};
use rotlab::renorm::{first_return, rotation_number_estimate, RotationResult, TraceOutcome};
use rotlab::{rotation_number_exact, Budgets, Number, PLCircleMap, Rational, RotationNumber};

pub const CASES: u32 = 500;

/// Budgets small enough that a runaway sample stays cheap.
pub fn sample_budgets() -> Budgets {
    Budgets { max_stages: 200, orbit_budget: 200_000, max_bits: 4096, estimate_iters: 100 }
}

fn sorted_points(den: u32, count: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::btree_set(1..den, count.min(den as usize - 1)).prop_map(move |set| {
        let mut pts = vec![Rational::zero()];
        pts.extend(set.into_iter().map(|k| rat(k as i64, den as i64)));
        pts
    })
}

/// Circle maps with at most four pieces: breakpoints and target points on
/// grids of denominator at most 20, shifted by an offset on the target grid.
pub fn circle_map() -> impl Strategy<Value = PLCircleMap> {
    (0usize..4, 2u32..=20, 2u32..=20)
        .prop_flat_map(|(cuts, dx, dy)| (sorted_points(dx, cuts), sorted_points(dy, cuts), 0..dy, Just(dy)))
        .prop_map(|(xs, ys, shift, dy)| {
            let n = xs.len().min(ys.len());
            let (xs, ys) = (&xs[..n], &ys[..n]);
            let theta = rat(shift as i64, dy as i64);
            let specs = (0..n)
                .map(|i| {
                    let x1 = xs.get(i + 1).cloned().unwrap_or_else(Rational::one);
                    let y1 = ys.get(i + 1).cloned().unwrap_or_else(Rational::one);
                    let slope = (&y1 - &ys[i]) / (&x1 - &xs[i]);
                    (xs[i].clone(), slope, (&ys[i] + &theta).fract())
                })
                .collect();
            PLCircleMap::from_mod1_pieces(specs).expect("generated map is valid")
        })
}

/// Points of `[0, 1)` on a grid of denominator at most 20.
pub fn unit_point() -> impl Strategy<Value = Rational> {
    (1i64..=20).prop_flat_map(|q| (0..q, Just(q))).prop_map(|(p, q)| rat(p, q))
}

/// Maps with exactly known rotation numbers, by name.
pub fn fixtures() -> Vec<(&'static str, PLCircleMap, Number)> {
    let sqrt = |a: i64, b: i64, c: i64, d: i64| {
        rotlab::QuadraticIrrational::canonical(a.into(), b.into(), c.into(), d.into()).unwrap()
    };
    let gamma = gamma_map(&ObstructionInput::new(paper_g(), paper_h(), paper_seed()).unwrap(), 1_000_000)
        .unwrap()
        .rescaled;
    vec![
        ("theorem-main", theorem_main(), sqrt(-1, 1, 1, 2)),
        ("theorem-main-star", theorem_main_star(), sqrt(-1, 1, 1, 2)),
        ("fqr-2/3-1/5", family_fqr(&rat(2, 3), &rat(1, 5)).unwrap(), sqrt(0, 1, 2, 2)),
        ("fqr-3/7-1/10", family_fqr(&rat(3, 7), &rat(1, 10)).unwrap(), sqrt(-1, 1, 2, 5)),
        ("rotation-2/5", rotation(&rat(2, 5)).unwrap(), Number::Rational(rat(2, 5))),
        ("fqr-1/3-0", family_fqr(&rat(1, 3), &Rational::zero()).unwrap(), Number::Rational(rat(1, 2))),
        ("paper-gh", gamma, sqrt(-1, 1, 1, 2)),
    ]
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

/// Whether `exact` lies within `err` of `est`. The orbit average tends to
/// the translation number in `[0, 1]`, which is `1` when `rot = 0`.
pub fn within(exact: &Number, est: &Rational, err: &Rational) -> bool {
    let close = |x: &Number| x.cmp_rational(&(est - err)).is_ge() && x.cmp_rational(&(est + err)).is_le();
    close(exact) || (exact.as_rational().is_some_and(Rational::is_zero) && close(&Number::Rational(Rational::one())))
}

pub fn check_round_trips(f: &PLCircleMap, g: &PLCircleMap, t: &Rational) -> Result<(), TestCaseError> {
    let finv = f.inverse();
    ensure(f.compose(&finv).is_identity(), || format!("f∘f⁻¹ ≠ id for {f:?}"))?;
    ensure(finv.compose(f).is_identity(), || format!("f⁻¹∘f ≠ id for {f:?}"))?;
    ensure(&finv.inverse() == f, || format!("(f⁻¹)⁻¹ ≠ f for {f:?}"))?;
    let fg = f.compose(g);
    let direct = f.evaluate(&g.evaluate(t).unwrap()).unwrap();
    ensure(fg.evaluate(t).unwrap() == direct, || format!("(f∘g)({t}) ≠ f(g({t}))"))?;
    ensure(fg.inverse() == g.inverse().compose(&finv), || "(f∘g)⁻¹ ≠ g⁻¹∘f⁻¹".into())?;
    ensure(finv.evaluate(&f.evaluate(t).unwrap()).unwrap() == *t, || format!("f⁻¹(f({t})) ≠ {t}"))
}

pub fn check_lift_law(f: &PLCircleMap, t: &Rational, k: i64) -> Result<(), TestCaseError> {
    let shift = Rational::from_integer(k);
    let lhs = f.evaluate_lift(&(t + &shift));
    ensure(lhs == f.evaluate_lift(t) + shift, || format!("F(t + {k}) ≠ F(t) + {k} at t = {t}"))?;
    let v0 = f.evaluate_lift(&Rational::zero());
    ensure(!v0.is_negative() && v0 < Rational::one(), || format!("F(0) = {v0} outside [0, 1)"))?;
    ensure(f.evaluate_lift(t) >= v0, || "lift not monotone".into())
}

pub fn check_estimator(f: &PLCircleMap, exact: &Number, n: u64) -> Result<(), TestCaseError> {
    let (est, err) = rotation_number_estimate(f, n);
    ensure(within(exact, &est, &err), || format!("estimate {est} misses {exact} by more than 1/{n}"))
}

pub fn check_breakpoints(f: &PLCircleMap) -> Result<(), TestCaseError> {
    if f.has_fixed_point() {
        return Ok(());
    }
    let rd = first_return(f, sample_budgets().orbit_budget)
        .map_err(|e| TestCaseError::fail(format!("first return failed: {e}")))?;
    let (before, after) = (f.breakpoints().len(), rd.fstar.breakpoints().len());
    ensure(after <= before, || format!("|B_f*| = {after} > |B_f| = {before} for {f:?}"))
}

/// `a_1 = m_f` whenever the expansion is read from at least two stages.
pub fn check_cf_head(res: &RotationResult) -> Result<(), TestCaseError> {
    let (Some(cf), Some(&m0)) = (&res.cf, res.trace.quotients.first()) else {
        return Ok(());
    };
    let head = cf.head(1);
    match res.trace.outcome {
        TraceOutcome::Terminated { stage: 1, final_period: Some(p) } => {
            ensure(head == [p] && (p == m0 || p == m0 + 1), || format!("cf {cf} with m_f = {m0}"))
        }
        _ => ensure(head == [m0], || format!("cf {cf} does not start with m_f = {m0}")),
    }
}

pub fn check_conjugation(f: &PLCircleMap, res: &RotationResult) -> Result<(), TestCaseError> {
    if res.rotation.is_undetermined() {
        return Ok(());
    }
    let r = rotation(&rat(1, 7)).unwrap();
    let g = r.compose(f).compose(&r.inverse());
    let other = rotation_number_exact(&g, &sample_budgets()).map_err(|e| TestCaseError::fail(e.to_string()))?;
    if other.rotation.is_undetermined() {
        return Ok(());
    }
    ensure(other.rotation == res.rotation, || format!("rot changed under conjugation: {} vs {}", res.rotation, other.rotation))
}

pub fn check_inverse_rotation(f: &PLCircleMap, res: &RotationResult) -> Result<(), TestCaseError> {
    let RotationNumber::Quadratic(q) = &res.rotation else {
        return Ok(());
    };
    let inv = rotation_number_exact(&f.inverse(), &sample_budgets()).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let Some(got) = inv.rotation.value() else {
        return Ok(());
    };
    let expected = Number::Quadratic(q.clone()).one_minus();
    ensure(got == expected, || format!("rot(f⁻¹) = {got}, expected 1 − {q}"))
}

/// A rational `p/q` with `q ≤ 12` is witnessed by a point with
/// `F^q(x) ≡ x + p` (mod `q`); the trace takes at most `⌈2 log₂ q⌉ + 1` steps.
pub fn check_rational(f: &PLCircleMap, res: &RotationResult) -> Result<(), TestCaseError> {
    let RotationNumber::Rational(v) = &res.rotation else {
        return Ok(());
    };
    let q = v.denom().clone();
    let qn: u64 = q.clone().try_into().expect("small denominator");
    let steps = res.trace.quotients.len() as u64;
    let mut bound = 0u64;
    while (1u128 << bound) < (qn as u128) * (qn as u128) {
        bound += 1;
    }
    ensure(steps <= bound + 1, || format!("{steps} steps for rot = {v}, bound {}", bound + 1))?;
    if qn > 12 {
        return Ok(());
    }
    let fq = f.iterate(qn);
    let fixed = fq.fixed_points();
    ensure(!fixed.is_empty(), || format!("f^{qn} has no fixed point though rot = {v}"))?;
    let x = fixed[0].representative();
    let mut y = x.clone();
    for _ in 0..qn {
        y = f.evaluate_lift(&y);
    }
    let tau = (&y - &x) / Rational::from_integer(q);
    ensure(tau.fract() == *v, || format!("F^{qn}({x}) = {y}, translation {tau} is not {v} mod 1"))
}
