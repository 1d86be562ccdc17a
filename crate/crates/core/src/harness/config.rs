//! Flat `key = value` sweep configuration.
//!
//! ```text
//! primes.lo = 100
//! primes.hi = 500
//! suites = weil, charsum
//! seed = 7
//! suite.weil.patterns = 200
//! suite.probe.primes = 10007, 20011
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use super::suites::{find_suite, SuiteSpec};
use super::HarnessError;
use crate::field::{is_prime, primes_in_range};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepConfig {
    pub primes: Option<(u64, u64)>,
    pub suites: Vec<String>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    /// suite -> param -> raw value
    pub params: BTreeMap<String, BTreeMap<String, String>>,
}

fn config_err(line: usize, msg: impl std::fmt::Display) -> HarnessError {
    HarnessError::Config(format!("line {line}: {msg}"))
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, HarnessError> {
    v.parse()
        .map_err(|_| config_err(line, format!("bad value {v:?} for {key}")))
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut cfg = SweepConfig::default();
        let (mut lo, mut hi) = (None, None);
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| config_err(line, "expected key = value"))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "primes.lo" => lo = Some(parse_num::<u64>(line, key, value)?),
                "primes.hi" => hi = Some(parse_num::<u64>(line, key, value)?),
                "suites" => {
                    cfg.suites = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(String::from)
                        .collect();
                    for s in &cfg.suites {
                        if find_suite(s).is_none() {
                            return Err(config_err(line, format!("unknown suite {s:?}")));
                        }
                    }
                }
                "seed" => cfg.seed = Some(parse_num(line, key, value)?),
                "jobs" => cfg.jobs = Some(parse_num(line, key, value)?),
                "out" => cfg.out = Some(PathBuf::from(value)),
                _ => {
                    let rest = key
                        .strip_prefix("suite.")
                        .ok_or_else(|| config_err(line, format!("unknown key {key:?}")))?;
                    let (suite, param) = rest
                        .split_once('.')
                        .ok_or_else(|| config_err(line, format!("unknown key {key:?}")))?;
                    let spec = find_suite(suite)
                        .ok_or_else(|| config_err(line, format!("unknown suite {suite:?}")))?;
                    if param != "primes" && !spec.params.iter().any(|(name, _)| *name == param) {
                        return Err(config_err(
                            line,
                            format!("suite {suite} has no parameter {param:?}"),
                        ));
                    }
                    cfg.params
                        .entry(suite.to_string())
                        .or_default()
                        .insert(param.to_string(), value.to_string());
                }
            }
        }
        cfg.primes = match (lo, hi) {
            (Some(lo), Some(hi)) if lo <= hi => Some((lo, hi)),
            (Some(lo), Some(hi)) => {
                return Err(HarnessError::Config(format!(
                    "primes.lo = {lo} > primes.hi = {hi}"
                )))
            }
            (None, None) => None,
            _ => {
                return Err(HarnessError::Config(
                    "primes.lo and primes.hi must be given together".to_string(),
                ))
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks that do not depend on the order of keys.
    pub fn validate(&self) -> Result<(), HarnessError> {
        for name in &self.suites {
            let spec = find_suite(name)
                .ok_or_else(|| HarnessError::Config(format!("unknown suite {name:?}")))?;
            if spec.randomized && self.seed.is_none() {
                return Err(HarnessError::Config(format!(
                    "suite {name} is randomized and needs a seed"
                )));
            }
            self.suite_primes(spec)?;
            for (param, _) in spec.params {
                self.param_raw(name, param)
                    .parse::<ParamValue>()
                    .map_err(|_| {
                        HarnessError::Config(format!("bad value for suite.{name}.{param}"))
                    })?;
            }
        }
        if self.jobs == Some(0) {
            return Err(HarnessError::Config("jobs must be positive".to_string()));
        }
        Ok(())
    }

    /// Explicit `suite.<name>.primes`, else the global range.
    pub fn suite_primes(&self, spec: &SuiteSpec) -> Result<Vec<u64>, HarnessError> {
        if let Some(list) = self.params.get(spec.name).and_then(|m| m.get("primes")) {
            let mut out = Vec::new();
            for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let p: u64 = item
                    .parse()
                    .map_err(|_| HarnessError::Config(format!("bad prime {item:?}")))?;
                if p < 3 || !is_prime(p) {
                    return Err(HarnessError::Config(format!("{p} is not an odd prime")));
                }
                out.push(p);
            }
            out.sort_unstable();
            out.dedup();
            return Ok(out);
        }
        let (lo, hi) = self.primes.ok_or_else(|| {
            HarnessError::Config(format!("suite {} needs primes.lo/primes.hi", spec.name))
        })?;
        Ok(primes_in_range(lo.max(3), hi))
    }

    pub fn param_raw(&self, suite: &str, param: &str) -> String {
        if let Some(v) = self.params.get(suite).and_then(|m| m.get(param)) {
            return v.clone();
        }
        find_suite(suite)
            .and_then(|s| s.params.iter().find(|(n, _)| *n == param))
            .map(|(_, d)| d.to_string())
            .unwrap_or_default()
    }
}

/// A parameter is a comma-separated list of numbers, possibly empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamValue(pub Vec<f64>);

impl std::str::FromStr for ParamValue {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().map_err(|_| ()))
            .collect::<Result<Vec<_>, _>>()
            .map(ParamValue)
    }
}
