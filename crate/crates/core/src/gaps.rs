//! Run statistics of R and N, packing numbers S(h) and S(A), and the
//! consecutive-pair coverage length.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::bounds;
use crate::field::PrimeContext;
use crate::fpset::{FpSet, SetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PackingError {
    #[error("window length {h} outside 1..={p}")]
    BadWindow { h: u64, p: u64 },
    #[error("exact packing needs |T| <= {cap}, got {size}")]
    ExactTooLarge { size: usize, cap: usize },
    #[error("pattern set is empty")]
    EmptyPattern,
    #[error("no pair of consecutive {0} exists")]
    NoPair(&'static str),
    #[error(transparent)]
    Set(#[from] SetError),
}

/// Longest-run statistics. `maxrun_n` is d(p), the longest stretch without a
/// residue; `d_star` is the larger of the two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapStats {
    pub p: u64,
    pub maxrun_r: u64,
    pub maxrun_n: u64,
    pub d_star: u64,
    pub histogram_r: BTreeMap<u64, u64>,
    pub histogram_n: BTreeMap<u64, u64>,
}

pub fn gap_stats(ctx: &PrimeContext) -> GapStats {
    let histogram = |set: &FpSet| {
        let mut h = BTreeMap::new();
        for run in set.runs().runs {
            *h.entry(run.len).or_insert(0) += 1;
        }
        h
    };
    let histogram_r = histogram(ctx.residues());
    let histogram_n = histogram(ctx.nonresidues());
    let longest = |h: &BTreeMap<u64, u64>| h.keys().next_back().copied().unwrap_or(0);
    let (maxrun_r, maxrun_n) = (longest(&histogram_r), longest(&histogram_n));
    GapStats {
        p: ctx.p(),
        maxrun_r,
        maxrun_n,
        d_star: maxrun_r.max(maxrun_n),
        histogram_r,
        histogram_n,
    }
}

/// Whether packed windows may wrap through p-1 -> 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Wrap {
    #[default]
    Cyclic,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetPackingMode {
    Exact,
    Greedy,
}

/// Size cap on the candidate set for exact S(A).
pub const EXACT_CANDIDATE_CAP: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingResult {
    pub value: usize,
    /// Translates S with S ∔ pattern ⊆ target.
    pub witness: FpSet,
    pub target: String,
    /// False when the value is only a greedy lower bound.
    pub exact: bool,
}

/// Starts x with x, x+1, ..., x+h-1 all in `target`.
pub fn window_starts(target: &FpSet, h: u64, wrap: Wrap) -> FpSet {
    let p = target.p();
    if target.is_full() {
        return match wrap {
            Wrap::Cyclic => FpSet::full(p),
            Wrap::Linear => FpSet::interval(p, 0, p - h + 1),
        };
    }
    // forward run length from each position, computed backwards from a
    // non-member so that cyclic runs are counted in full
    let cut = target.complement().min().expect("non-full");
    let mut run = vec![0u64; p as usize];
    for off in 1..=p {
        let x = ((cut + p - off) % p) as usize;
        if target.contains(x as u64) {
            run[x] = 1 + run[(x + 1) % p as usize];
        }
    }
    FpSet::from_predicate(p, |x| {
        run[x as usize] >= h && (wrap == Wrap::Cyclic || x + h <= p)
    })
}

fn verify_packing(witness: &FpSet, pattern: &FpSet, target: &FpSet) {
    let sum = witness.sumset(pattern).expect("same field");
    assert_eq!(
        sum.len(),
        witness.len() * pattern.len(),
        "packing witness is not a direct sum"
    );
    assert!(sum.is_subset(target), "packing witness leaves the target");
}

/// S(h): the largest S with S ∔ {0, ..., h-1} ⊆ target.
pub fn s_of_h(target: &FpSet, h: u64, label: &str) -> Result<PackingResult, PackingError> {
    s_of_h_with(target, h, label, Wrap::Cyclic)
}

pub fn s_of_h_with(
    target: &FpSet,
    h: u64,
    label: &str,
    wrap: Wrap,
) -> Result<PackingResult, PackingError> {
    let p = target.p();
    if h < 1 || h > p {
        return Err(PackingError::BadWindow { h, p });
    }
    let starts = window_starts(target, h, wrap);
    let wraps = starts.iter().any(|x| x + h > p);
    let witness = if !wraps {
        linear_greedy(&starts, h)
    } else {
        cyclic_packing(&starts, h)
    };
    verify_packing(&witness, &FpSet::interval(p, 0, h), target);
    Ok(PackingResult {
        value: witness.len(),
        witness,
        target: label.to_string(),
        exact: true,
    })
}

/// Earliest-feasible-start greedy on a line; optimal for equal lengths.
fn linear_greedy(starts: &FpSet, h: u64) -> FpSet {
    let mut out = FpSet::empty(starts.p());
    let mut free_from = 0u64;
    for x in starts.iter() {
        if x >= free_from {
            out.insert(x);
            free_from = x + h;
        }
    }
    out
}

/// Greedy around the circle from every anchor among the first h positions
/// of one maximal run of starts. Distinct runs of window starts are more
/// than h apart, which is what makes a single run enough.
fn cyclic_packing(starts: &FpSet, h: u64) -> FpSet {
    let p = starts.p();
    let n = 2 * p as usize;
    let mut next = vec![u64::MAX; n + 1];
    for i in (0..n).rev() {
        next[i] = if starts.contains(i as u64 % p) {
            i as u64
        } else {
            next[i + 1]
        };
    }
    let run = starts.runs().runs[0];
    let greedy = |anchor: u64, mut record: Option<&mut FpSet>| {
        let mut count = 1usize;
        if let Some(r) = record.as_deref_mut() {
            r.insert(anchor);
        }
        let mut cur = anchor + h;
        while (cur as usize) < n {
            let j = next[cur as usize];
            if j == u64::MAX || j + h > anchor + p {
                break;
            }
            count += 1;
            if let Some(r) = record.as_deref_mut() {
                r.insert(j % p);
            }
            cur = j + h;
        }
        count
    };
    let mut best = (0usize, run.start);
    for off in 0..run.len.min(h) {
        let anchor = (run.start + off) % p;
        let c = greedy(anchor, None);
        if c > best.0 {
            best = (c, anchor);
        }
    }
    let mut witness = FpSet::empty(p);
    greedy(best.1, Some(&mut witness));
    witness
}

/// S(A): the largest S with S ∔ A ⊆ target. Two candidates x, y clash iff
/// x - y ∈ (A - A) \ {0}.
pub fn s_of_set(
    target: &FpSet,
    pattern: &FpSet,
    mode: SetPackingMode,
    label: &str,
) -> Result<PackingResult, PackingError> {
    let p = target.p();
    if pattern.p() != p {
        return Err(SetError::ModulusMismatch(p, pattern.p()).into());
    }
    if pattern.is_empty() {
        return Err(PackingError::EmptyPattern);
    }
    let elems = pattern.to_vec();
    let cand = FpSet::from_predicate(p, |x| elems.iter().all(|&a| target.contains((x + a) % p)));
    let mut diffs = pattern.difference_set(pattern)?;
    diffs.remove(0);
    let cand: Vec<u64> = cand.to_vec();
    let clash = |x: u64, y: u64| diffs.contains((x + p - y) % p);

    let (chosen, exact) = match mode {
        SetPackingMode::Exact => {
            if cand.len() > EXACT_CANDIDATE_CAP {
                return Err(PackingError::ExactTooLarge {
                    size: cand.len(),
                    cap: EXACT_CANDIDATE_CAP,
                });
            }
            let adj: Vec<u64> = (0..cand.len())
                .map(|i| {
                    (0..cand.len())
                        .filter(|&j| j != i && clash(cand[i], cand[j]))
                        .fold(0u64, |m, j| m | 1 << j)
                })
                .collect();
            let all = if cand.len() == 64 {
                u64::MAX
            } else {
                (1u64 << cand.len()) - 1
            };
            let mask = max_independent_set(&adj, all);
            let chosen: Vec<u64> = (0..cand.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| cand[i])
                .collect();
            (chosen, true)
        }
        SetPackingMode::Greedy => {
            let mut chosen: Vec<u64> = Vec::new();
            for &x in &cand {
                if chosen.iter().all(|&y| !clash(x, y)) {
                    chosen.push(x);
                }
            }
            (chosen, false)
        }
    };
    let witness = FpSet::from_elements(p, chosen);
    verify_packing(&witness, pattern, target);
    Ok(PackingResult {
        value: witness.len(),
        witness,
        target: label.to_string(),
        exact,
    })
}

/// Maximum independent set of a graph on at most 64 vertices given as
/// adjacency bitmasks, restricted to `candidates`. Returns the vertex mask.
pub fn max_independent_set(adj: &[u64], candidates: u64) -> u64 {
    fn go(adj: &[u64], cand: u64, cur: u64, best: &mut u64) {
        if cand == 0 {
            if cur.count_ones() > best.count_ones() {
                *best = cur;
            }
            return;
        }
        if cur.count_ones() + cand.count_ones() <= best.count_ones() {
            return;
        }
        let v = (0..64)
            .filter(|&v| cand >> v & 1 == 1)
            .max_by_key(|&v| (adj[v] & cand).count_ones())
            .expect("nonempty");
        if adj[v] & cand == 0 {
            // maximum degree is zero: everything left is independent
            go(adj, 0, cur | cand, best);
            return;
        }
        let bit = 1u64 << v;
        go(adj, cand & !bit & !adj[v], cur | bit, best);
        go(adj, cand & !bit, cur, best);
    }
    let mut best = 0u64;
    go(adj, candidates, 0, &mut best);
    best
}

/// A step-one interval {start, ..., start + len - 1} mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub start: u64,
    pub len: u64,
}

impl Interval {
    pub fn to_set(self, p: u64) -> FpSet {
        FpSet::interval(p, self.start, self.len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalPacking {
    pub result: PackingResult,
    /// 16 |I| h² < p log² p
    pub hypothesis_holds: bool,
}

/// S^{R ∩ I}(h).
pub fn local_s_of_h(
    ctx: &PrimeContext,
    interval: Interval,
    h: u64,
) -> Result<LocalPacking, PackingError> {
    let target = ctx.residues().intersection(&interval.to_set(ctx.p()));
    let result = s_of_h(&target, h, "R∩I")?;
    Ok(LocalPacking {
        result,
        hypothesis_holds: bounds::local_hypothesis(ctx.p(), interval.len.min(ctx.p()), h),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairCoverage {
    /// Least h such that every window s+1..s+h holds x, x+1 ∈ R.
    pub h_r: u64,
    pub h_n: u64,
    pub h_min: u64,
}

/// One more than the largest cyclic gap between consecutive pair positions.
pub fn consecutive_pair_coverage(ctx: &PrimeContext) -> Result<PairCoverage, PackingError> {
    let p = ctx.p();
    let coverage = |set: &FpSet, name: &'static str| {
        let starts: Vec<u64> = set.iter().filter(|&x| set.contains((x + 1) % p)).collect();
        if starts.is_empty() {
            return Err(PackingError::NoPair(name));
        }
        let mut gap = starts[0] + p - starts[starts.len() - 1];
        for w in starts.windows(2) {
            gap = gap.max(w[1] - w[0]);
        }
        Ok(gap + 1)
    };
    let h_r = coverage(ctx.residues(), "residues")?;
    let h_n = coverage(ctx.nonresidues(), "non-residues")?;
    Ok(PairCoverage {
        h_r,
        h_n,
        h_min: h_r.max(h_n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::primes_in_range;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    #[test]
    fn gap_stats_examples() {
        let g = gap_stats(&ctx(7));
        assert_eq!((g.maxrun_r, g.maxrun_n), (2, 2));
        let g = gap_stats(&ctx(23));
        assert_eq!(g.maxrun_n, 4);
        let g = gap_stats(&ctx(3));
        assert_eq!((g.maxrun_r, g.maxrun_n, g.d_star), (1, 1, 1));
    }

    #[test]
    fn histograms_account_for_every_element() {
        for p in primes_in_range(3, 3000) {
            let g = gap_stats(&ctx(p));
            for hist in [&g.histogram_r, &g.histogram_n] {
                let total: u64 = hist.iter().map(|(l, c)| l * c).sum();
                assert_eq!(total, (p - 1) / 2);
            }
        }
    }

    #[test]
    fn s_of_h_examples() {
        let c = ctx(7);
        let r = c.residues();
        let one = s_of_h(r, 1, "R").unwrap();
        assert_eq!((one.value, one.witness.to_vec()), (3, vec![1, 2, 4]));
        let two = s_of_h(r, 2, "R").unwrap();
        assert_eq!((two.value, two.witness.to_vec()), (1, vec![1]));
        assert_eq!(s_of_h(r, 3, "R").unwrap().value, 0);
        assert_eq!(
            s_of_h(r, 0, "R").unwrap_err(),
            PackingError::BadWindow { h: 0, p: 7 }
        );
        assert!(s_of_h(r, 8, "R").is_err());
    }

    #[test]
    fn full_and_wrapping_targets() {
        let full = FpSet::full(13);
        for h in 1..=13 {
            assert_eq!(s_of_h(&full, h, "F").unwrap().value as u64, 13 / h);
        }
        // {11,12,0,1,2} ∪ {5,6}: only the wrapping run fits h = 5
        let t = FpSet::from_elements(13, [11, 12, 0, 1, 2, 5, 6]);
        assert_eq!(s_of_h(&t, 5, "t").unwrap().value, 1);
        assert_eq!(s_of_h_with(&t, 5, "t", Wrap::Linear).unwrap().value, 0);
        assert_eq!(s_of_h(&t, 2, "t").unwrap().value, 3);
    }

    #[test]
    fn s_of_set_examples() {
        let c = ctx(7);
        let r = c.residues();
        let zero = FpSet::from_elements(7, [0]);
        assert_eq!(
            s_of_set(r, &zero, SetPackingMode::Exact, "R")
                .unwrap()
                .value,
            3
        );
        let pair = FpSet::from_elements(7, [0, 1]);
        assert_eq!(
            s_of_set(r, &pair, SetPackingMode::Exact, "R")
                .unwrap()
                .value,
            1
        );
        assert_eq!(
            s_of_set(r, &FpSet::empty(7), SetPackingMode::Exact, "R").unwrap_err(),
            PackingError::EmptyPattern
        );
        let big = ctx(211);
        assert!(s_of_set(big.residues(), &zero, SetPackingMode::Greedy, "R").is_err());
        let zero = FpSet::from_elements(211, [0]);
        assert!(matches!(
            s_of_set(big.residues(), &zero, SetPackingMode::Exact, "R"),
            Err(PackingError::ExactTooLarge { .. })
        ));
        let greedy = s_of_set(big.residues(), &zero, SetPackingMode::Greedy, "R").unwrap();
        assert_eq!(greedy.value, 105);
        assert!(!greedy.exact);
    }

    #[test]
    fn local_examples() {
        let c = ctx(23);
        let whole = local_s_of_h(&c, Interval { start: 1, len: 22 }, 2).unwrap();
        assert_eq!(
            whole.result.value,
            s_of_h(c.residues(), 2, "R").unwrap().value
        );
        // 10 and 11 are both non-residues mod 23
        let none = local_s_of_h(&c, Interval { start: 10, len: 2 }, 1).unwrap();
        assert_eq!(none.result.value, 0);
        // R ∩ [1,12] = {1,2,3,4,6,8,9,12}: windows of 2 are {1,2},{3,4},{8,9}
        let lo = local_s_of_h(&c, Interval { start: 1, len: 12 }, 2).unwrap();
        assert_eq!(lo.result.value, 3);
        assert!(lo.hypothesis_holds == (16.0 * 12.0 * 4.0 < 23.0 * 23f64.log2().powi(2)));
    }

    fn coverage_oracle(ctx: &PrimeContext, set: &FpSet) -> Option<u64> {
        let p = ctx.p();
        (2..=p + 1).find(|&h| {
            (0..p).all(|s| (s + 1..s + h).any(|x| set.contains(x % p) && set.contains((x + 1) % p)))
        })
    }

    #[test]
    fn pair_coverage_matches_window_scan() {
        for p in primes_in_range(7, 400) {
            let c = ctx(p);
            let cov = consecutive_pair_coverage(&c).unwrap();
            assert_eq!(Some(cov.h_r), coverage_oracle(&c, c.residues()), "p={p}");
            assert_eq!(Some(cov.h_n), coverage_oracle(&c, c.nonresidues()), "p={p}");
            assert!(cov.h_min >= 2);
        }
        // mod 23 residue pairs start at 1, 2, 3, 8, 12: largest gap 12 -> 1
        let cov = consecutive_pair_coverage(&ctx(23)).unwrap();
        assert_eq!(cov.h_r, 13);
        assert_eq!(
            consecutive_pair_coverage(&ctx(5)).unwrap_err(),
            PackingError::NoPair("residues")
        );
    }

    #[test]
    fn max_independent_set_small_graphs() {
        // path on 5 vertices: {0, 2, 4}
        let adj = [0b00010, 0b00101, 0b01010, 0b10100, 0b01000];
        assert_eq!(max_independent_set(&adj, 0b11111), 0b10101);
        // triangle
        let adj = [0b110, 0b101, 0b011];
        assert_eq!(max_independent_set(&adj, 0b111).count_ones(), 1);
        assert_eq!(max_independent_set(&[], 0), 0);
    }
}
