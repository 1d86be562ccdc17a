//! Sweep driver: runs the configured suites over a prime range and
//! collects one [`BoundCheck`] row per (p, instance).

pub mod config;
pub mod suites;
pub mod writer;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds;
use crate::field::PrimeContext;
use crate::report::BoundCheck;
use crate::structure::r_plus_interval_set;

pub use config::SweepConfig;
pub use suites::{find_suite, SuiteSpec, SUITES};
pub use writer::{write_reports, CSV_HEADER};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("probe window h = {h_raw} < 1 for p = {p}, C = {c}")]
    DegenerateH { p: u64, c: f64, h_raw: i64 },
}

impl HarnessError {
    /// 2 for configuration problems, 3 for i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::DegenerateH { .. } => 2,
            HarnessError::Io(_) | HarnessError::Csv(_) | HarnessError::Json(_) => 3,
        }
    }
}

/// One output row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub suite: String,
    pub check: BoundCheck,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub rows: Vec<Row>,
    /// rows whose pass flag is false
    pub failures: usize,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        if self.failures > 0 {
            1
        } else {
            0
        }
    }
}

/// Runs every configured suite. Rows are ordered by suite (config order),
/// then p, then emission order, independent of the thread count.
pub fn run_suite(cfg: &SweepConfig) -> Result<RunSummary, HarnessError> {
    cfg.validate()?;
    let specs: Vec<&'static SuiteSpec> = cfg
        .suites
        .iter()
        .map(|n| find_suite(n).expect("validated"))
        .collect();
    let mut per_suite = Vec::new();
    let mut all_primes = BTreeSet::new();
    for spec in &specs {
        let primes: BTreeSet<u64> = cfg.suite_primes(spec)?.into_iter().collect();
        all_primes.extend(primes.iter().copied());
        per_suite.push(primes);
    }
    let primes: Vec<u64> = all_primes.into_iter().collect();

    let work = || -> Result<Vec<Vec<Vec<Row>>>, HarnessError> {
        primes
            .par_iter()
            .map(|&p| {
                let ctx = PrimeContext::new(p).map_err(|e| HarnessError::Config(e.to_string()))?;
                specs
                    .iter()
                    .zip(&per_suite)
                    .map(|(spec, ps)| {
                        if !ps.contains(&p) {
                            return Ok(Vec::new());
                        }
                        let checks = (spec.run)(&ctx, &suites::Params::new(cfg, spec))?;
                        Ok(checks
                            .into_iter()
                            .map(|check| Row {
                                suite: spec.name.to_string(),
                                check,
                            })
                            .collect())
                    })
                    .collect()
            })
            .collect()
    };
    let by_prime = match cfg.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| HarnessError::Config(e.to_string()))?
            .install(work)?,
        None => work()?,
    };

    let mut rows = Vec::new();
    for suite_idx in 0..specs.len() {
        for prime_rows in &by_prime {
            rows.extend(prime_rows[suite_idx].iter().cloned());
        }
    }
    let failures = rows.iter().filter(|r| r.check.failed()).count();
    Ok(RunSummary { rows, failures })
}

/// Probe window h = round(½ log p - log(C log p)).
pub fn probe_window(p: u64, c: f64) -> i64 {
    let l = (p as f64).log2();
    (0.5 * l - (c * l).log2()).round() as i64
}

/// |R⁺_{[h]}| at the probe window, against √p log p. The random-model count
/// (p-1)/2^{h+1} is recorded in the params.
pub fn optimality_probe(ctx: &PrimeContext, c: f64) -> Result<BoundCheck, HarnessError> {
    let p = ctx.p();
    let h_raw = probe_window(p, c);
    if h_raw < 1 {
        return Err(HarnessError::DegenerateH { p, c, h_raw });
    }
    Ok(probe_at(ctx, c, h_raw as u64, h_raw, false))
}

pub(crate) fn probe_at(
    ctx: &PrimeContext,
    c: f64,
    h: u64,
    h_raw: i64,
    clamped: bool,
) -> BoundCheck {
    let p = ctx.p();
    let value = r_plus_interval_set(ctx, h).len();
    let expected = (p - 1) as f64 / 2f64.powi(h as i32 + 1);
    BoundCheck::report(
        p,
        "optimality_probe",
        value as i128,
        bounds::sqrt_p_log_p(p),
        "interval-shift-optimality",
    )
    .with_params(format!(
        "c={c};h={h};h_raw={h_raw};clamped={clamped};expected={expected}"
    ))
}

/// |R⁺_{[h]}| against the general bound and, for h >= 2 log p, the
/// long-window bound.
pub fn r_plus_interval(ctx: &PrimeContext, h: u64, c: f64) -> (BoundCheck, Option<BoundCheck>) {
    let p = ctx.p();
    let value = r_plus_interval_set(ctx, h).len() as i128;
    let general = BoundCheck::report(
        p,
        "r_plus_interval",
        value,
        bounds::interval_intersection_rhs(p, h, c),
        "interval-shift-intersection",
    )
    .with_params(format!("h={h};c={c}"));
    let long = (h as f64 >= 2.0 * ctx.log2p()).then(|| {
        BoundCheck::report(
            p,
            "r_plus_interval_long",
            value,
            bounds::interval_intersection_rhs_long(p, h),
            "interval-shift-intersection-long",
        )
        .with_params(format!("h={h}"))
    });
    (general, long)
}
