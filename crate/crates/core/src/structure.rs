//! Generalized arithmetic progressions in R, Plünnecke growth of iterated
//! sumsets, the [d]·W ⊆ A - A search, and the quantities built from
//! shifted residue intersections.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds;
use crate::energy::{additive_energy, rep_counts, RepOp};
use crate::field::{mul_mod, PrimeContext};
use crate::fpset::{FpSet, SetError};
use crate::gaps::Interval;
use crate::report::BoundCheck;
use crate::shifted::{shifted_intersection_add, shifted_intersection_mul, ShiftError};

/// Enumeration cap on Π h_j.
pub const GAP_ELEMENT_CAP: u128 = 10_000_000;
/// Modulus cap for the all-steps progression scan.
pub const AP_SCAN_CAP: u64 = 50_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("GAP has {0} index tuples, over the enumeration cap")]
    TooLargeGap(u128),
    #[error("p = {0} is over the progression scan cap")]
    TooLarge(u64),
    #[error("set is empty")]
    EmptyA,
    #[error("shift list is empty")]
    EmptyShifts,
    #[error("unsupported parameter: {0}")]
    BadParameter(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("malformed GAP literal: {0}")]
    Parse(String),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Shift(#[from] ShiftError),
}

/// {base + Σ step_j x_j : 0 <= x_j < len_j} in F_p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapDescriptor {
    pub p: u64,
    pub base: u64,
    /// (step, len) pairs
    pub legs: Vec<(u64, u64)>,
}

impl GapDescriptor {
    pub fn rank(&self) -> usize {
        self.legs.len()
    }

    /// Π len_j.
    pub fn volume(&self) -> u128 {
        self.legs.iter().map(|&(_, h)| h as u128).product()
    }
}

/// `p=<int>; base=<int>; legs=(step,len);(step,len);...`
impl fmt::Display for GapDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}; base={}; legs=", self.p, self.base)?;
        for (i, (step, len)) in self.legs.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "({step},{len})")?;
        }
        Ok(())
    }
}

impl FromStr for GapDescriptor {
    type Err = StructureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || StructureError::Parse(s.to_string());
        let mut parts = s.trim().splitn(3, ';');
        let mut field = |key: &str| -> Result<String, StructureError> {
            let part = parts.next().ok_or_else(bad)?.trim();
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            if k.trim() != key {
                return Err(bad());
            }
            Ok(v.trim().to_string())
        };
        let p: u64 = field("p")?.parse().map_err(|_| bad())?;
        let base: u64 = field("base")?.parse().map_err(|_| bad())?;
        let legs_text = field("legs")?;
        let mut legs = Vec::new();
        for leg in legs_text
            .split(';')
            .map(str::trim)
            .filter(|l| !l.is_empty())
        {
            let inner = leg
                .strip_prefix('(')
                .and_then(|l| l.strip_suffix(')'))
                .ok_or_else(bad)?;
            let (step, len) = inner.split_once(',').ok_or_else(bad)?;
            let step: u64 = step.trim().parse().map_err(|_| bad())?;
            let len: u64 = len.trim().parse().map_err(|_| bad())?;
            if len == 0 || step.is_multiple_of(p) {
                return Err(bad());
            }
            legs.push((step % p, len));
        }
        if p == 0 || base >= p {
            return Err(bad());
        }
        Ok(Self { p, base, legs })
    }
}

/// The element set of a GAP.
pub fn gap_elements(g: &GapDescriptor) -> Result<FpSet, StructureError> {
    let volume = g.volume();
    if volume > GAP_ELEMENT_CAP {
        return Err(StructureError::TooLargeGap(volume));
    }
    let p = g.p;
    let mut set = FpSet::from_elements(p, [g.base]);
    for &(step, len) in &g.legs {
        set = set.sumset(&FpSet::progression(p, 0, step, len))?;
    }
    Ok(set)
}

/// Every index tuple gives a distinct element.
pub fn is_proper(g: &GapDescriptor) -> Result<bool, StructureError> {
    let volume = g.volume();
    if volume > g.p as u128 {
        return Ok(false);
    }
    Ok(gap_elements(g)?.len() as u128 == volume)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ApInR {
    pub len: u64,
    pub step: u64,
    pub base: u64,
}

/// Longest arithmetic progression inside R over all nonzero steps. Steps λ
/// and -λ give the same progressions, so λ <= (p-1)/2 is scanned.
pub fn max_ap_in_r(ctx: &PrimeContext) -> Result<ApInR, StructureError> {
    let p = ctx.p();
    if p > AP_SCAN_CAP {
        return Err(StructureError::TooLarge(p));
    }
    let chi = ctx.chi_table();
    let best = (1..=(p - 1) / 2)
        .into_par_iter()
        .map(|step| {
            // walk 0, λ, 2λ, ... which visits every element; start right
            // after 0, which is never in R
            let mut best = ApInR {
                len: 0,
                step,
                base: 0,
            };
            let (mut len, mut start) = (0u64, 0u64);
            let mut x = 0u64;
            for _ in 0..p {
                x += step;
                if x >= p {
                    x -= p;
                }
                if chi[x as usize] == 1 {
                    if len == 0 {
                        start = x;
                    }
                    len += 1;
                    if len > best.len || (len == best.len && start < best.base) {
                        best.len = len;
                        best.base = start;
                    }
                } else {
                    len = 0;
                }
            }
            best
        })
        .reduce_with(|a, b| {
            if (b.len, std::cmp::Reverse(b.step)) > (a.len, std::cmp::Reverse(a.step)) {
                b
            } else {
                a
            }
        })
        .unwrap_or(ApInR {
            len: 0,
            step: 1,
            base: 0,
        });
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSearch {
    pub gap: GapDescriptor,
    pub size: u64,
    /// Always true: the search certifies a lower bound only.
    pub best_found: bool,
    pub check: BoundCheck,
}

fn grow_gap(ctx: &PrimeContext, mut g: GapDescriptor) -> GapDescriptor {
    let r = ctx.residues();
    let inside = |g: &GapDescriptor| {
        gap_elements(g).is_ok_and(|set| set.is_subset(r) && set.len() as u128 == g.volume())
    };
    if !inside(&g) {
        return g;
    }
    loop {
        let mut best: Option<(u128, GapDescriptor)> = None;
        for j in 0..g.legs.len() {
            let mut next = g.clone();
            next.legs[j].1 += 1;
            if inside(&next) {
                let v = next.volume();
                if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                    best = Some((v, next));
                }
            }
        }
        match best {
            Some((_, next)) => g = next,
            None => return g,
        }
    }
}

/// Largest proper GAP of the given rank found inside R by restarted greedy
/// growth from random (base, steps). Deterministic in `seed`. Rank 1 uses
/// the exact progression scan when p is within its cap.
pub fn search_gap_in_r(
    ctx: &PrimeContext,
    rank: usize,
    budget: u64,
    seed: u64,
) -> Result<GapSearch, StructureError> {
    if !(1..=3).contains(&rank) {
        return Err(StructureError::BadParameter(format!(
            "rank {rank} not in 1..=3"
        )));
    }
    let p = ctx.p();
    let gap = if rank == 1 && p <= AP_SCAN_CAP {
        let ap = max_ap_in_r(ctx)?;
        GapDescriptor {
            p,
            base: ap.base,
            legs: vec![(ap.step, ap.len.max(1))],
        }
    } else {
        let residues = ctx.residues().to_vec();
        // best progression found so far seeds the first leg of odd trials
        let seed_leg = if p <= AP_SCAN_CAP {
            let ap = max_ap_in_r(ctx)?;
            (ap.base, ap.step, ap.len)
        } else {
            let runs = ctx.residues().runs();
            let r = runs
                .runs
                .iter()
                .max_by_key(|r| (r.len, std::cmp::Reverse(r.start)))
                .copied()
                .expect("R is nonempty");
            (r.start, 1, r.len)
        };
        let candidates: Vec<GapDescriptor> = (0..budget.max(1))
            .into_par_iter()
            .map(|trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(trial);
                let mut legs: Vec<(u64, u64)> =
                    (0..rank).map(|_| (rng.random_range(1..p), 1)).collect();
                let base = if trial % 2 == 0 {
                    legs[0] = (seed_leg.1, seed_leg.2);
                    seed_leg.0
                } else {
                    residues[rng.random_range(0..residues.len())]
                };
                grow_gap(ctx, GapDescriptor { p, base, legs })
            })
            .collect();
        let mut best: Option<GapDescriptor> = None;
        for g in candidates {
            let ok = gap_elements(&g)
                .is_ok_and(|s| s.is_subset(ctx.residues()) && s.len() as u128 == g.volume());
            if ok && best.as_ref().is_none_or(|b| g.volume() > b.volume()) {
                best = Some(g);
            }
        }
        best.unwrap_or(GapDescriptor {
            p,
            base: residues[0],
            legs: vec![(1, 1); rank],
        })
    };
    let elements = gap_elements(&gap)?;
    assert!(elements.is_subset(ctx.residues()) && is_proper(&gap)?);
    let size = elements.len() as u64;
    let check = BoundCheck::report(
        p,
        "gap_in_residues",
        size as i128,
        bounds::gap_in_residues_rhs(p, rank as u32),
        "gap-in-residues",
    )
    .with_params(format!(
        "rank={rank};budget={budget};seed={seed};best_found=true;gap={gap}"
    ));
    Ok(GapSearch {
        gap,
        size,
        best_found: true,
        check,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlunneckeEntry {
    pub n: u32,
    pub m: u32,
    pub size: usize,
    /// K^{n+m} |A|
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoublingStats {
    pub p: u64,
    pub card: usize,
    pub sumset_card: usize,
    pub k_plus: f64,
    pub entries: Vec<PlunneckeEntry>,
}

impl DoublingStats {
    pub fn to_checks(&self) -> Vec<BoundCheck> {
        self.entries
            .iter()
            .map(|e| {
                BoundCheck::report(
                    self.p,
                    "iterated_sumset",
                    e.size as i128,
                    e.rhs,
                    "plunnecke",
                )
                .with_exact_pass(e.pass)
                .with_params(format!(
                    "n={};m={};card={};sumset_card={}",
                    e.n, e.m, self.card, self.sumset_card
                ))
            })
            .collect()
    }
}

/// |nA - mA| against (|A+A|/|A|)^{n+m} |A|, decided in exact integers as
/// |nA - mA| |A|^{n+m-1} <= |A+A|^{n+m}.
pub fn doubling_stats(a: &FpSet, pairs: &[(u32, u32)]) -> Result<DoublingStats, StructureError> {
    if a.is_empty() {
        return Err(StructureError::EmptyA);
    }
    let card = a.len();
    let sumset_card = a.sumset(a)?.len();
    let k_plus = sumset_card as f64 / card as f64;
    let entries = pairs
        .iter()
        .filter(|&&(n, m)| n + m >= 1)
        .map(|&(n, m)| {
            let size = a.iterated(n, m).len();
            let e = n + m;
            let lhs = BigUint::from(size) * BigUint::from(card).pow(e - 1);
            let rhs_exact = BigUint::from(sumset_card).pow(e);
            PlunneckeEntry {
                n,
                m,
                size,
                rhs: k_plus.powi(e as i32) * card as f64,
                pass: lhs <= rhs_exact,
            }
        })
        .collect();
    Ok(DoublingStats {
        p: a.p(),
        card,
        sumset_card,
        k_plus,
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InclusionMode {
    /// d = 2 only: every anchor pair at once, through the buckets of a2 - 2a1.
    Exact,
    /// Random anchor tuples in A^d.
    Sampled { trials: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultInclusion {
    pub a_star: u64,
    /// W - a_star, so that j·w ∈ A - A for every j in 1..=d and w in W.
    pub w: FpSet,
    pub d: u32,
    pub k_plus: f64,
    /// |A| / K^{3d-3}
    pub bound_target: f64,
    /// |W| >= |A| / K^{3d-3}, exactly.
    pub meets_bound: bool,
    /// [d]·W ⊆ A - A, re-verified.
    pub inclusion_holds: bool,
}

fn anchored_w(a: &FpSet, anchors: &[u64]) -> FpSet {
    let p = a.p();
    let b1 = anchors[0];
    let mut w = FpSet::empty(p);
    for a1 in a.iter() {
        let diff = (a1 + p - b1) % p;
        let ok = anchors.iter().enumerate().skip(1).all(|(i, &bj)| {
            let j = i as u64 + 1;
            a.contains((bj + mul_mod(j, diff, p)) % p)
        });
        if ok {
            w.insert(diff);
        }
    }
    w
}

/// Finds a_* and W with [d]·(W) ⊆ A - A, W large.
pub fn mult_inclusion_search(
    a: &FpSet,
    d: u32,
    mode: InclusionMode,
    seed: u64,
) -> Result<MultInclusion, StructureError> {
    if a.is_empty() {
        return Err(StructureError::EmptyA);
    }
    if d < 2 {
        return Err(StructureError::BadParameter(format!("d = {d} < 2")));
    }
    let p = a.p();
    let elems = a.to_vec();
    let (a_star, w) = match mode {
        InclusionMode::Exact => {
            if d != 2 {
                return Err(StructureError::BadParameter(
                    "exact mode needs d = 2".to_string(),
                ));
            }
            // bucket v collects a1 with 2a1 + v ∈ A
            let mut counts = vec![0u64; p as usize];
            for &a1 in &elems {
                let two = mul_mod(2, a1, p);
                for &a2 in &elems {
                    counts[((a2 + p - two) % p) as usize] += 1;
                }
            }
            let (v, _) = counts
                .iter()
                .enumerate()
                .fold(
                    (0usize, 0u64),
                    |acc, (v, &c)| if c > acc.1 { (v, c) } else { acc },
                );
            let v = v as u64;
            let b1 = elems
                .iter()
                .copied()
                .find(|&a1| a.contains((mul_mod(2, a1, p) + v) % p))
                .expect("argmax bucket is nonempty");
            let b2 = (mul_mod(2, b1, p) + v) % p;
            (b1, anchored_w(a, &[b1, b2]))
        }
        InclusionMode::Sampled { trials } => {
            let best = (0..trials.max(1))
                .into_par_iter()
                .map(|trial| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(trial);
                    let anchors: Vec<u64> = (0..d)
                        .map(|_| elems[rng.random_range(0..elems.len())])
                        .collect();
                    (trial, anchors[0], anchored_w(a, &anchors))
                })
                .reduce_with(|x, y| {
                    if y.2.len() > x.2.len() || (y.2.len() == x.2.len() && y.0 < x.0) {
                        y
                    } else {
                        x
                    }
                })
                .expect("at least one trial");
            (best.1, best.2)
        }
    };
    let sumset_card = a.sumset(a)?.len();
    let k_plus = sumset_card as f64 / a.len() as f64;
    let e = 3 * d - 3;
    let bound_target = a.len() as f64 / k_plus.powi(e as i32);
    let meets_bound = BigUint::from(w.len()) * BigUint::from(sumset_card).pow(e)
        >= BigUint::from(a.len()).pow(e + 1);
    let diffs = a.difference_set(a)?;
    let inclusion_holds =
        (1..=d as u64).all(|j| w.iter().all(|x| diffs.contains(mul_mod(j, x, p))));
    assert!(inclusion_holds, "[d]·W ⊄ A - A");
    Ok(MultInclusion {
        a_star,
        w,
        d,
        k_plus,
        bound_target,
        meets_bound,
        inclusion_holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CapInverse {
    pub max_value: u64,
    pub lambda: Option<u64>,
    pub card_b: usize,
}

/// max_{λ ≠ 0} |B ∩ λ B^{-1}| for B = A⁺_S, which is the largest
/// representation count of B·B away from 0.
pub fn as_cap_inv(a: &FpSet, shifts: &[u64]) -> Result<CapInverse, StructureError> {
    if shifts.is_empty() {
        return Err(StructureError::EmptyShifts);
    }
    let mut b = shifted_intersection_add(a, shifts);
    let card_b = b.len();
    b.remove(0);
    let counts = rep_counts(&b, &b, RepOp::Mul)?;
    let (max_value, lambda) = match counts.max_nonzero() {
        Some((l, c)) if c > 0 => (c, Some(l)),
        _ => (0, None),
    };
    Ok(CapInverse {
        max_value,
        lambda,
        card_b,
    })
}

/// [`as_cap_inv`] against |A| |S|^{-c}.
pub fn as_cap_inv_check(a: &FpSet, shifts: &[u64], c: f64) -> Result<BoundCheck, StructureError> {
    let cap = as_cap_inv(a, shifts)?;
    let rhs = a.len() as f64 * (shifts.len() as f64).powf(-c);
    Ok(BoundCheck::report(
        a.p(),
        "shifted_cap_inverse",
        cap.max_value as i128,
        rhs,
        "shifted-cap-inverse",
    )
    .with_params(format!(
        "k={};c={c};card_b={};lambda={}",
        shifts.len(),
        cap.card_b,
        cap.lambda.map_or(String::from("none"), |l| l.to_string())
    )))
}

/// E⁺(A^×_S) against |A|²|B|²/p + |B|^{3/2}|A|^{3/2}|S|^{-1/2}, B = A^×_S.
pub fn energy_of_times_set(a: &FpSet, shifts: &[u64]) -> Result<BoundCheck, StructureError> {
    let b = shifted_intersection_mul(a, shifts)?;
    let energy = additive_energy(&b, &b)?.value;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let rhs = if b.is_empty() {
        0.0
    } else {
        na * na * nb * nb / a.p() as f64
            + nb.powf(1.5) * na.powf(1.5) / (shifts.len().max(1) as f64).sqrt()
    };
    Ok(BoundCheck::report(
        a.p(),
        "times_set_energy",
        energy as i128,
        rhs,
        "times-set-energy",
    )
    .with_params(format!(
        "k={};card_a={};card_b={}",
        shifts.len(),
        a.len(),
        b.len()
    )))
}

/// |R⁺_T| for T = (H+X) ∪ (H+X)^{-1}, against √p log p / |H|^c. Requires
/// |X| >= log p and H + X ⊆ R.
pub fn r_plus_hx_inv(
    ctx: &PrimeContext,
    h: Interval,
    x: &FpSet,
    c: f64,
) -> Result<BoundCheck, StructureError> {
    let p = ctx.p();
    if (x.len() as f64) < ctx.log2p() {
        return Err(StructureError::HypothesisFailed(format!(
            "|X| = {} < log p = {:.3}",
            x.len(),
            ctx.log2p()
        )));
    }
    let hx = h.to_set(p).sumset(x)?;
    if !hx.is_subset(ctx.residues()) {
        return Err(StructureError::HypothesisFailed(
            "H + X not inside R".to_string(),
        ));
    }
    let shifts = hx.union(&hx.invert()).to_vec();
    let value = shifted_intersection_add(ctx.residues(), &shifts).len();
    let rhs = bounds::sqrt_p_log_p(p) / (h.len.max(1) as f64).powf(c);
    Ok(BoundCheck::report(
        p,
        "r_plus_sum_and_inverse",
        value as i128,
        rhs,
        "residue-shifts-by-sum-and-inverse",
    )
    .with_params(format!(
        "h_start={};h_len={};card_x={};shifts={};c={c}",
        h.start,
        h.len,
        x.len(),
        shifts.len()
    )))
}

/// R⁺_{[h]} = R ∩ (R-1) ∩ ... ∩ (R-h).
pub fn r_plus_interval_set(ctx: &PrimeContext, h: u64) -> FpSet {
    let shifts: Vec<u64> = (1..=h).collect();
    shifted_intersection_add(ctx.residues(), &shifts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuzsaCover {
    pub h: u64,
    pub x: FpSet,
    pub r_plus_card: usize,
    /// R⁺_{[h]} ⊆ [0,h) - [0,h) + X
    pub covered: bool,
    /// 2h|X| >= |R⁺_{[h]}|
    pub size_bound: bool,
}

impl RuzsaCover {
    pub fn check(&self) -> bool {
        self.covered && self.size_bound
    }
}

/// Greedy maximal X ⊆ R⁺_{[h]} with X ∔ [0,h) direct, and the covering it
/// induces.
pub fn ruzsa_cover(ctx: &PrimeContext, h: u64) -> RuzsaCover {
    let p = ctx.p();
    let h = h.max(1);
    let rp = r_plus_interval_set(ctx, h);
    let mut x = FpSet::empty(p);
    let mut used = FpSet::empty(p);
    for y in rp.iter() {
        if (0..h).all(|j| !used.contains((y + j) % p)) {
            x.insert(y);
            for j in 0..h {
                used.insert((y + j) % p);
            }
        }
    }
    let window = FpSet::interval(p, 0, h.min(p));
    let diffs = window.difference_set(&window).expect("same field");
    let covered = rp.is_subset(&diffs.sumset(&x).expect("same field"));
    let size_bound = 2 * h as u128 * x.len() as u128 >= rp.len() as u128;
    RuzsaCover {
        h,
        x,
        r_plus_card: rp.len(),
        covered,
        size_bound,
    }
}
