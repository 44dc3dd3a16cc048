//! Parameter sweeps over the family `f_{q,r} = R_r ∘ f_q`.
//!
//! Only `q < 1` is swept: `f_{1/q,r}` is conjugate to a member with
//! parameter `q`, so the other half of the family adds nothing new.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Rational;
use crate::plmap::family_fqr;
use crate::renorm::{rotation_number_exact, Budgets, RotationNumber};

/// Reduced fractions with denominator at most `max_den`, ascending. With
/// `open_unit` they lie in `(0, 1)`; otherwise `0` and `1` are included.
pub fn enumerate_fractions(max_den: u64, open_unit: bool) -> Vec<Rational> {
    let mut out = Vec::new();
    if !open_unit {
        out.push(Rational::zero());
        out.push(Rational::one());
    }
    for q in 2..=max_den {
        for p in 1..q {
            if p.gcd(&q) == 1 {
                out.push(Rational::new(p, q));
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub q: Rational,
    pub r: Rational,
    /// `rational`, `quadratic` or `undetermined`.
    pub kind: String,
    pub value: String,
    pub cf_preperiod: Vec<u64>,
    pub cf_period: Vec<u64>,
    pub stages: usize,
    pub max_bits: u64,
    /// Wall-clock time, recorded only when timings are requested.
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub q: Rational,
    pub has_irrational: bool,
    /// Periodic parts of the quadratic records, each as its least rotation.
    pub distinct_period_parts: BTreeSet<Vec<u64>>,
    pub counts: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub q_max_den: u64,
    pub r_max_den: u64,
    /// Restricts the sweep to these `q` values when nonempty.
    pub q_only: Vec<Rational>,
    pub budgets: Budgets,
    pub jobs: usize,
    pub timings: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { q_max_den: 9, r_max_den: 60, q_only: Vec::new(), budgets: Budgets::default(), jobs: 1, timings: false }
    }
}

/// Lexicographically least rotation of a word.
pub fn least_rotation(word: &[u64]) -> Vec<u64> {
    (0..word.len().max(1))
        .map(|k| word[k.min(word.len())..].iter().chain(&word[..k.min(word.len())]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

fn record(q: &Rational, r: &Rational, budgets: &Budgets, timings: bool) -> ScanRecord {
    let start = Instant::now();
    let mut rec = ScanRecord {
        q: q.clone(),
        r: r.clone(),
        kind: "undetermined".into(),
        value: String::new(),
        cf_preperiod: Vec::new(),
        cf_period: Vec::new(),
        stages: 0,
        max_bits: 0,
        elapsed_ms: None,
    };
    let outcome = family_fqr(q, r)
        .map_err(|e| e.to_string())
        .and_then(|f| rotation_number_exact(&f, budgets).map_err(|e| e.to_string()));
    match outcome {
        Ok(res) => {
            rec.kind = res.rotation.kind().into();
            rec.value = match &res.rotation {
                RotationNumber::Undetermined { estimate, .. } => estimate.to_string(),
                other => other.to_string(),
            };
            if let Some(cf) = &res.cf {
                rec.cf_preperiod = cf.preperiod().to_vec();
                rec.cf_period = cf.period().to_vec();
            } else if let RotationNumber::Undetermined { partial_cf, .. } = &res.rotation {
                rec.cf_preperiod = partial_cf.clone();
            }
            rec.stages = res.trace.stage_count();
            rec.max_bits = res.trace.max_bits();
        }
        Err(e) => rec.value = format!("error: {e}"),
    }
    if timings {
        rec.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    rec
}

/// Computes every grid point on a pool of `config.jobs` threads. Records
/// come back sorted by `(q, r)` whatever the execution order.
pub fn scan(config: &ScanConfig) -> Result<(Vec<ScanRecord>, Vec<ScanSummary>), rayon::ThreadPoolBuildError> {
    let qs = if config.q_only.is_empty() { enumerate_fractions(config.q_max_den, true) } else { config.q_only.clone() };
    let rs = enumerate_fractions(config.r_max_den, true);
    let grid: Vec<(&Rational, &Rational)> = qs.iter().flat_map(|q| rs.iter().map(move |r| (q, r))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.jobs.max(1)).build()?;
    let mut records: Vec<ScanRecord> =
        pool.install(|| grid.par_iter().map(|(q, r)| record(q, r, &config.budgets, config.timings)).collect());
    records.sort_by(|a, b| (&a.q, &a.r).cmp(&(&b.q, &b.r)));
    let summaries = summarize(&records);
    Ok((records, summaries))
}

pub fn summarize(records: &[ScanRecord]) -> Vec<ScanSummary> {
    let mut by_q: BTreeMap<Rational, ScanSummary> = BTreeMap::new();
    for rec in records {
        let entry = by_q.entry(rec.q.clone()).or_insert_with(|| ScanSummary {
            q: rec.q.clone(),
            has_irrational: false,
            distinct_period_parts: BTreeSet::new(),
            counts: BTreeMap::new(),
        });
        *entry.counts.entry(rec.kind.clone()).or_default() += 1;
        if rec.kind == "quadratic" {
            entry.has_irrational = true;
            entry.distinct_period_parts.insert(least_rotation(&rec.cf_period));
        }
    }
    by_q.into_values().collect()
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

/// Writes the records as CSV with columns
/// `q,r,kind,value,cf_preperiod,cf_period,stages,max_bits,elapsed_ms`.
pub fn write_csv<W: Write>(records: &[ScanRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["q", "r", "kind", "value", "cf_preperiod", "cf_period", "stages", "max_bits", "elapsed_ms"])?;
    for rec in records {
        w.write_record([
            rec.q.to_string(),
            rec.r.to_string(),
            rec.kind.clone(),
            rec.value.clone(),
            join(&rec.cf_preperiod),
            join(&rec.cf_period),
            rec.stages.to_string(),
            rec.max_bits.to_string(),
            rec.elapsed_ms.map(|ms| ms.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
