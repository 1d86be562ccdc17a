//! The suite catalog. Each suite maps one prime to a list of rows.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{ParamValue, SweepConfig};
use super::{optimality_probe, probe_at, r_plus_interval, HarnessError};
use crate::bounds;
use crate::charsum::{
    complete_quadratic_sum, max_quadratic_run, quadratic_bound_rhs, quadratic_chi_table,
    scan_quadratic_windows, split_window, PieceKind, QuadraticScan, SplitVariant,
};
use crate::energy::{cs_energy_check, energy_lemma_experiment, Sign};
use crate::field::{Class, PrimeContext};
use crate::fpset::FpSet;
use crate::gaps::{
    consecutive_pair_coverage, gap_stats, local_s_of_h, s_of_h, s_of_set, Interval, SetPackingMode,
    EXACT_CANDIDATE_CAP,
};
use crate::report::BoundCheck;
use crate::shifted::{q_set, weil_check, ShiftPattern};
use crate::structure::{
    as_cap_inv_check, doubling_stats, energy_of_times_set, max_ap_in_r, mult_inclusion_search,
    r_plus_hx_inv, ruzsa_cover, search_gap_in_r, InclusionMode, AP_SCAN_CAP,
};

type SuiteFn = fn(&PrimeContext, &Params) -> Result<Vec<BoundCheck>, HarnessError>;

pub struct SuiteSpec {
    pub name: &'static str,
    /// (parameter, default); every suite also accepts `primes`
    pub params: &'static [(&'static str, &'static str)],
    pub randomized: bool,
    pub summary: &'static str,
    pub run: SuiteFn,
}

pub static SUITES: &[SuiteSpec] = &[
    SuiteSpec {
        name: "weil",
        params: &[("patterns", "200"), ("max_k", "8")],
        randomized: true,
        summary: "shifted residue/non-residue intersections against p/2^{k+1} + k√p",
        run: suite_weil,
    },
    SuiteSpec {
        name: "gaps",
        params: &[],
        randomized: false,
        summary: "longest runs in R and N; d(p) against p^{1/4} log p",
        run: suite_gaps,
    },
    SuiteSpec {
        name: "charsum",
        params: &[("samples", "20"), ("exhaustive_max_p", "500")],
        randomized: true,
        summary: "sums of χ((x+a)(x+a+1)) against h(1 - 1/(2d_*)) + 4; complete sum",
        run: suite_charsum,
    },
    SuiteSpec {
        name: "splitting",
        params: &[("hs", "8,16,32")],
        randomized: false,
        summary: "piece-count identities of the two window splittings",
        run: suite_splitting,
    },
    SuiteSpec {
        name: "packing",
        params: &[("c", "1"), ("hs", "")],
        randomized: false,
        summary: "S(h) for R, N and Q_{0,1} against the distribution bound",
        run: suite_packing,
    },
    SuiteSpec {
        name: "rplus",
        params: &[("c", "1"), ("hs", "")],
        randomized: false,
        summary: "|R⁺_{[h]}| against the general and long-window bounds",
        run: suite_rplus,
    },
    SuiteSpec {
        name: "probe",
        params: &[("cs", "1,4,16")],
        randomized: false,
        summary: "|R⁺_{[h]}| at h = round(½ log p - log(C log p)) against √p log p",
        run: suite_probe,
    },
    SuiteSpec {
        name: "covering",
        params: &[("hs", "2,4,8,16")],
        randomized: false,
        summary: "greedy Ruzsa covering of R⁺_{[h]}",
        run: suite_covering,
    },
    SuiteSpec {
        name: "energy",
        params: &[("sets", "10"), ("size", "30")],
        randomized: true,
        summary: "Cauchy-Schwarz energy and Plünnecke inequalities on random sets",
        run: suite_energy,
    },
    SuiteSpec {
        name: "primeenergy",
        params: &[("h", "64"), ("h_star", "16"), ("constant", "16")],
        randomized: false,
        summary: "multiplicative energy of primes against S ∔ [0,h)",
        run: suite_prime_energy,
    },
    SuiteSpec {
        name: "times",
        params: &[("k", "32"), ("h", "8"), ("c", "0.5")],
        randomized: true,
        summary: "E⁺(R^×_S) and max |R⁺_{[h]} ∩ λ(R⁺_{[h]})^{-1}|",
        run: suite_times,
    },
    SuiteSpec {
        name: "rrstar",
        params: &[("h", "2"), ("c", "0.5")],
        randomized: false,
        summary: "|R⁺| over (H+X) ∪ (H+X)^{-1} against √p log p / |H|^c",
        run: suite_rrstar,
    },
    SuiteSpec {
        name: "quadrun",
        params: &[("as", "0")],
        randomized: false,
        summary: "longest window with (x+a)(x+a+1) ∈ R against p^{1/4} log p",
        run: suite_quadrun,
    },
    SuiteSpec {
        name: "pairs",
        params: &[],
        randomized: false,
        summary: "least h forcing consecutive residues and non-residues",
        run: suite_pairs,
    },
    SuiteSpec {
        name: "gapsearch",
        params: &[("ranks", "1,2"), ("budget", "50")],
        randomized: true,
        summary: "largest proper GAP found inside R (lower bound)",
        run: suite_gapsearch,
    },
    SuiteSpec {
        name: "inclusion",
        params: &[("instances", "5"), ("max_len", "64")],
        randomized: true,
        summary: "[2]·W ⊆ A - A with |W| >= |A|/K³ on intervals and pairs of intervals",
        run: suite_inclusion,
    },
    SuiteSpec {
        name: "local",
        params: &[("h", "4"), ("len", "")],
        randomized: false,
        summary: "S^{R∩I}(h) for I = [1, len] against √p log² p / h²",
        run: suite_local,
    },
    SuiteSpec {
        name: "growth",
        params: &[],
        randomized: false,
        summary: "longest AP A in R: 3A-2A ⊆ R, |A| vs p^{13/40}, S(4A-4A) vs p/|A|³",
        run: suite_growth,
    },
];

pub fn find_suite(name: &str) -> Option<&'static SuiteSpec> {
    SUITES.iter().find(|s| s.name == name)
}

/// Typed access to one suite's parameters.
pub struct Params<'a> {
    cfg: &'a SweepConfig,
    spec: &'a SuiteSpec,
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

impl<'a> Params<'a> {
    pub fn new(cfg: &'a SweepConfig, spec: &'a SuiteSpec) -> Self {
        Self { cfg, spec }
    }

    pub fn list(&self, name: &str) -> Vec<f64> {
        self.cfg
            .param_raw(self.spec.name, name)
            .parse::<ParamValue>()
            .map(|v| v.0)
            .unwrap_or_default()
    }

    pub fn opt_f64(&self, name: &str) -> Option<f64> {
        self.list(name).first().copied()
    }

    pub fn f64(&self, name: &str) -> f64 {
        self.opt_f64(name).unwrap_or(0.0)
    }

    pub fn u64(&self, name: &str) -> u64 {
        self.f64(name).max(0.0) as u64
    }

    pub fn u64_list(&self, name: &str) -> Vec<u64> {
        self.list(name)
            .into_iter()
            .map(|x| x.max(0.0) as u64)
            .collect()
    }

    /// Generator for this (suite, p): the seed mixed with the suite name,
    /// one stream per prime.
    pub fn rng(&self, p: u64) -> ChaCha8Rng {
        let seed = self.cfg.seed.unwrap_or(0) ^ fnv1a(self.spec.name);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(p);
        rng
    }
}

fn random_class(rng: &mut ChaCha8Rng) -> Class {
    if rng.random_bool(0.5) {
        Class::R
    } else {
        Class::N
    }
}

fn random_set(rng: &mut ChaCha8Rng, p: u64, size: usize) -> FpSet {
    let size = size.min(p as usize);
    FpSet::from_elements(
        p,
        sample(rng, p as usize, size).into_iter().map(|x| x as u64),
    )
}

fn suite_weil(ctx: &PrimeContext, params: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    let mut rng = params.rng(p);
    let max_k = params.u64("max_k").clamp(1, (p - 1).min(62));
    let mut rows = Vec::new();
    for _ in 0..params.u64("patterns") {
        let k = rng.random_range(1..=max_k) as usize;
        let shifts: Vec<u64> = sample(&mut rng, (p - 1) as usize, k)
            .into_iter()
            .map(|x| x as u64 + 1)
            .collect();
        let classes: Vec<Class> = (0..=k).map(|_| random_class(&mut rng)).collect();
        let pattern = ShiftPattern::new(p, shifts, classes)
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        rows.push(weil_check(ctx, &pattern));
    }
    Ok(rows)
}

fn suite_gaps(ctx: &PrimeContext, _: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    let g = gap_stats(ctx);
    let rhs = bounds::burgess_rhs(p);
    Ok(vec![
        BoundCheck::report(
            p,
            "max_nonresidue_run",
            g.maxrun_n as i128,
            rhs,
            "residue-gap",
        ),
        BoundCheck::report(p, "max_residue_run", g.maxrun_r as i128, rhs, "residue-gap"),
        BoundCheck::report(p, "d_star", g.d_star as i128, rhs, "residue-gap"),
    ])
}

fn scan_row(p: u64, d_star: u64, scan: &QuadraticScan, extra: &str) -> BoundCheck {
    BoundCheck::report(
        p,
        "quadratic_char_sum",
        scan.worst_abs as i128,
        quadratic_bound_rhs(scan.worst_h, d_star),
        "quadratic-char-sum",
    )
    .with_exact_pass(scan.failures == 0)
    .with_params(format!(
        "a={};s={};h={};d_star={d_star};failures={}{extra}",
        scan.a, scan.s, scan.worst_h, scan.failures
    ))
}

fn suite_charsum(ctx: &PrimeContext, params: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    let d_star = gap_stats(ctx).d_star;
    let table = quadratic_chi_table(ctx);
    let mut rows = Vec::new();
    if p > 3 {
        let total = complete_quadratic_sum(ctx);
        rows.push(
            BoundCheck::report(
                p,
                "complete_quadratic_sum",
                total as i128,
                -1.0,
                "complete-quadratic-sum",
            )
            .with_exact_pass(total == -1),
        );
    }
    if p <= params.u64("exhaustive_max_p") {
        let scans: Vec<QuadraticScan> = (0..p)
            .into_par_iter()
            .flat_map_iter(|a| {
                let table = &table;
                (0..p).map(move |s| scan_quadratic_windows(table, d_star, a, s))
            })
            .collect();
        let failures: u64 = scans.iter().map(|s| s.failures).sum();
        let worst = scans.iter().fold(
            scans[0],
            |w, s| if s.worst_ratio > w.worst_ratio { *s } else { w },
        );
        let merged = QuadraticScan { failures, ..worst };
        rows.push(scan_row(p, d_star, &merged, ";exhaustive=true"));
    } else {
        let mut rng = params.rng(p);
        for _ in 0..params.u64("samples") {
            let (a, s) = (rng.random_range(0..p), rng.random_range(0..p));
            rows.push(scan_row(
                p,
                d_star,
                &scan_quadratic_windows(&table, d_star, a, s),
                "",
            ));
        }
    }
    Ok(rows)
}

fn suite_splitting(ctx: &PrimeContext, params: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    let d_star = gap_stats(ctx).d_star;
    let mut rows = Vec::new();
    for h in params.u64_list("hs") {
        if h == 0 || h > p {
            continue;
        }
        let (mut windows, mut skipped) = (0u64, 0u64);
        let (mut first_fail, mut second_fail) = (0u64, 0u64);
        let mut max_alt = 0u64;
        for s in 0..p {
            let first = split_window(ctx, s, h, SplitVariant::First);
            if first.contains_zero {
                skipped += 1;
                continue;
            }
            windows += 1;
            if first.identity_holds() != Some(true) {
                first_fail += 1;
            }
            let second = split_window(ctx, s, h, SplitVariant::Second);
            let n = (second.n_r + second.n_n) as i64;
            let slack = second.chi_sum - second.alternating_form();
            let pure_ok = second
                .pieces
                .iter()
                .all(|q| q.kind == PieceKind::Alternating || q.len >= 2);
            if second.identity_holds() != Some(true)
                || (n - second.s_alt as i64).abs() > 1
                || !(0..=2).contains(&slack)
                || !pure_ok
            {
                second_fail += 1;
            }
            max_alt = max_alt.max(second.max_alternating());
        }
        let params = format!("h={h};windows={windows};skipped_zero={skipped}");
        rows.push(
            BoundCheck::report(
                p,
                "first_splitting_failures",
                first_fail as i128,
                0.0,
                "first-splitting",
            )
            .with_exact_pass(first_fail == 0)
            .with_params(params.clone()),
        );
        rows.push(
            BoundCheck::report(
                p,
                "second_splitting_failures",
                second_fail as i128,
                0.0,
                "second-splitting",
            )
            .with_exact_pass(second_fail == 0)
            .with_params(params.clone()),
        );
        rows.push(
            BoundCheck::report(
                p,
                "max_alternating_piece",
                max_alt as i128,
                (2 * d_star) as f64,
                "second-splitting",
            )
            .with_exact_pass(max_alt <= 2 * d_star)
            .with_params(format!("{params};d_star={d_star}")),
        );
    }
    Ok(rows)
}

fn default_hs(p: u64, c: f64) -> Vec<u64> {
    let h0 = bounds::min_admissible_h(p, c);
    let mut hs = vec![h0, h0 + 2, 2 * h0];
    hs.retain(|&h| h >= 1 && h <= p);
    hs.dedup();
    hs
}

fn hs_or_default(params: &Params, p: u64, c: f64) -> Vec<u64> {
    let hs = params.u64_list("hs");
    if hs.is_empty() {
        default_hs(p, c)
    } else {
        hs.into_iter().filter(|&h| h >= 1 && h <= p).collect()
    }
}

fn suite_packing(ctx: &PrimeContext, params: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    let c = params.f64("c");
    let q = q_set(ctx, 0, 1, Class::R).map_err(|e| HarnessError::Config(e.to_string()))?;
    let mut rows = Vec::new();
    for h in hs_or_default(params, p, c) {
        let (dt, dc) = (bounds::delta_table(p, h), bounds::delta_closed(p, h));
        assert!(
            dt <= 2.0 * dc && dc <= 2.0 * dt,
            "δ forms disagree at p={p} h={h}"
        );
        for (label, target) in [("R", ctx.residues()), ("N", ctx.nonresidues()), ("Q01", &q)] {
            let res = s_of_h(target, h, label).map_err(|e| HarnessError::Config(e.to_string()))?;
            rows.push(
                BoundCheck::report(
                    p,
                    &format!("packing_{label}"),
                    res.value as i128,
                    bounds::packing_rhs(p, h, c),
                    "packing-distribution",
                )
                .with_params(format!(
                    "h={h};c={c};delta_table={dt};delta_closed={dc};threshold={}",
                    bounds::window_threshold(p, c)
                )),
            );
        }
    }
    Ok(rows)
}

fn suite_rplus(ctx: &PrimeContext, params: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    let c = params.f64("c");
    let mut hs = params.u64_list("hs");
    if hs.is_empty() {
        let l = ctx.log2p().ceil() as u64;
        hs = vec![1, bounds::min_admissible_h(p, c), 2 * l];
        hs.sort_unstable();
        hs.dedup();
    }
    let mut rows = Vec::new();
    for h in hs.into_iter().filter(|&h| h >= 1 && h < p) {
        let (general, long) = r_plus_interval(ctx, h, c);
        rows.push(general);
        rows.extend(long);
    }
    Ok(rows)
}

fn suite_probe(ctx: &PrimeContext, params: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let mut rows = Vec::new();
    for c in params.list("cs") {
        match optimality_probe(ctx, c) {
            Ok(row) => rows.push(row),
            Err(HarnessError::DegenerateH { h_raw, .. }) => {
                rows.push(probe_at(ctx, c, 1, h_raw, true));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

fn suite_covering(ctx: &PrimeContext, params: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    Ok(params
        .u64_list("hs")
        .into_iter()
        .filter(|&h| h >= 1 && h < p)
        .map(|h| {
            let cover = ruzsa_cover(ctx, h);
            BoundCheck::report(
                p,
                "ruzsa_cover",
                cover.r_plus_card as i128,
                (2 * h as usize * cover.x.len()) as f64,
                "ruzsa-covering",
            )
            .with_exact_pass(cover.check())
            .with_params(format!(
                "h={h};card_x={};covered={}",
                cover.x.len(),
                cover.covered
            ))
        })
        .collect())
}

fn suite_energy(ctx: &PrimeContext, params: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    let mut rng = params.rng(p);
    let size = params.u64("size") as usize;
    let mut rows = Vec::new();
    for _ in 0..params.u64("sets") {
        let na = rng.random_range(1..=size.max(1));
        let nb = rng.random_range(1..=size.max(1));
        let a = random_set(&mut rng, p, na);
        let b = random_set(&mut rng, p, nb);
        for sign in [Sign::Plus, Sign::Minus] {
            rows.push(
                cs_energy_check(&a, &b, sign).map_err(|e| HarnessError::Config(e.to_string()))?,
            );
        }
        let stats = doubling_stats(&a, &[(1, 1), (2, 1), (2, 2)])
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        rows.extend(stats.to_checks());
    }
    Ok(rows)
}

fn prime_energy_row(
    ctx: &PrimeContext,
    h: u64,
    h_star: u64,
    constant: f64,
    mode: &str,
) -> Result<Option<BoundCheck>, HarnessError> {
    let p = ctx.p();
    if h == 0 || h_star == 0 || 8 * h * h_star >= p {
        return Ok(None);
    }
    let packing =
        s_of_h(ctx.residues(), h, "R").map_err(|e| HarnessError::Config(e.to_string()))?;
    let exp = energy_lemma_experiment(ctx, h, h_star, &packing.witness, constant)
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let params_text = format!(
        "{};mode={mode};within_constant={}",
        exp.check.params, exp.within_constant
    );
    Ok(Some(exp.check.with_params(params_text)))
}

/// The configured (h, h_*) halved until 8 h_* h < p, and an automatic row at
/// h = longest residue run, where the packing S is nonempty.
fn suite_prime_energy(
    ctx: &PrimeContext,
    params: &Params,
) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    let constant = params.f64("constant");
    let (mut h, mut h_star) = (params.u64("h").max(1), params.u64("h_star").max(1));
    h_star = h_star.min(h);
    while 8 * h * h_star >= p && h > 1 {
        h = (h / 2).max(1);
        h_star = (h_star / 2).max(1).min(h);
    }
    let mut rows = Vec::new();
    rows.extend(prime_energy_row(ctx, h, h_star, constant, "configured")?);
    let h_auto = gap_stats(ctx).maxrun_r;
    let h_star_auto = h_auto.min((p - 1) / (8 * h_auto.max(1)));
    if (h_auto, h_star_auto) != (h, h_star) {
        rows.extend(prime_energy_row(
            ctx,
            h_auto,
            h_star_auto,
            constant,
            "auto",
        )?);
    }
    Ok(rows)
}

fn suite_times(ctx: &PrimeContext, params: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    let mut rng = params.rng(p);
    let residues = ctx.residues().to_vec();
    let k = (params.u64("k") as usize).min(residues.len());
    let shifts: Vec<u64> = sample(&mut rng, residues.len(), k)
        .into_iter()
        .map(|i| residues[i])
        .collect();
    let mut rows = vec![energy_of_times_set(ctx.residues(), &shifts)
        .map_err(|e| HarnessError::Config(e.to_string()))?];
    let h = params.u64("h").clamp(1, p - 1);
    let interval: Vec<u64> = (1..=h).collect();
    rows.push(
        as_cap_inv_check(ctx.residues(), &interval, params.f64("c"))
            .map_err(|e| HarnessError::Config(e.to_string()))?,
    );
    Ok(rows)
}

fn suite_rrstar(ctx: &PrimeContext, params: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    let h = params.u64("h").clamp(1, p - 1);
    let inner: Vec<u64> = (1..h).collect();
    let pool = crate::shifted::shifted_intersection_add(ctx.residues(), &inner);
    let need = ctx.log2p().ceil() as usize;
    let x = FpSet::from_elements(p, pool.iter().take(need));
    match r_plus_hx_inv(ctx, Interval { start: 0, len: h }, &x, params.f64("c")) {
        Ok(row) => Ok(vec![row]),
        Err(crate::structure::StructureError::HypothesisFailed(_)) => Ok(Vec::new()),
        Err(e) => Err(HarnessError::Config(e.to_string())),
    }
}

fn suite_quadrun(ctx: &PrimeContext, params: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    Ok(params
        .u64_list("as")
        .into_iter()
        .map(|a| max_quadratic_run(ctx, a).check)
        .collect())
}

fn suite_pairs(ctx: &PrimeContext, _: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    if p < 7 {
        return Ok(Vec::new());
    }
    match consecutive_pair_coverage(ctx) {
        Ok(cov) => Ok(vec![BoundCheck::report(
            p,
            "pair_coverage",
            cov.h_min as i128,
            bounds::pair_coverage_rhs(p),
            "consecutive-pair-coverage",
        )
        .with_params(format!(
            "h_r={};h_n={};eta={}",
            cov.h_r,
            cov.h_n,
            bounds::PAIR_COVERAGE_ETA
        ))]),
        Err(_) => Ok(Vec::new()),
    }
}

fn suite_gapsearch(ctx: &PrimeContext, params: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let seed = params.rng(ctx.p()).random::<u64>();
    params
        .u64_list("ranks")
        .into_iter()
        .map(|rank| {
            search_gap_in_r(ctx, rank as usize, params.u64("budget"), seed)
                .map(|g| g.check)
                .map_err(|e| HarnessError::Config(e.to_string()))
        })
        .collect()
}

fn suite_inclusion(ctx: &PrimeContext, params: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    let mut rng = params.rng(p);
    let max_len = params.u64("max_len").clamp(1, p / 4 + 1);
    let mut rows = Vec::new();
    for i in 0..params.u64("instances") {
        let len = rng.random_range(1..=max_len);
        let start = rng.random_range(0..p);
        let mut a = FpSet::interval(p, start, len);
        let shape = if i % 2 == 1 {
            let len2 = rng.random_range(1..=max_len);
            a = a.union(&FpSet::interval(p, rng.random_range(0..p), len2));
            "two_intervals"
        } else {
            "interval"
        };
        let m = mult_inclusion_search(&a, 2, InclusionMode::Exact, 0)
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        rows.push(
            BoundCheck::report(
                p,
                "mult_inclusion_w",
                m.w.len() as i128,
                m.bound_target,
                "mult-inclusion",
            )
            .with_exact_pass(m.meets_bound && m.inclusion_holds)
            .with_params(format!(
                "shape={shape};card_a={};k_plus={};a_star={};lower_bound=true",
                a.len(),
                m.k_plus,
                m.a_star
            )),
        );
    }
    Ok(rows)
}

fn suite_local(ctx: &PrimeContext, params: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    let h = params.u64("h").clamp(1, p);
    let len = params
        .opt_f64("len")
        .map_or(p / 4, |l| l as u64)
        .clamp(1, p);
    let local = local_s_of_h(ctx, Interval { start: 1, len }, h)
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    Ok(vec![BoundCheck::report(
        p,
        "local_packing",
        local.result.value as i128,
        bounds::local_packing_rhs(p, h, 1.0),
        "local-packing",
    )
    .with_params(format!(
        "h={h};len={len};hypothesis={}",
        local.hypothesis_holds
    ))])
}

fn suite_growth(ctx: &PrimeContext, _: &Params) -> Result<Vec<BoundCheck>, HarnessError> {
    let p = ctx.p();
    let (base, step, len) = if p <= AP_SCAN_CAP {
        let ap = max_ap_in_r(ctx).map_err(|e| HarnessError::Config(e.to_string()))?;
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
    let a = FpSet::progression(p, base, step, len);
    let hypothesis = a.iterated(3, 2).is_subset(ctx.residues());
    let pattern = a.iterated(4, 4);
    let t_size = FpSet::from_predicate(p, |x| {
        pattern.iter().all(|y| ctx.residues().contains((x + y) % p))
    })
    .len();
    let mode = if t_size <= EXACT_CANDIDATE_CAP {
        SetPackingMode::Exact
    } else {
        SetPackingMode::Greedy
    };
    let packing = s_of_set(ctx.residues(), &pattern, mode, "R")
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let common = format!("base={base};step={step};len={len};three_minus_two_in_r={hypothesis}");
    Ok(vec![
        BoundCheck::report(
            p,
            "small_doubling_set_size",
            len as i128,
            (p as f64).powf(13.0 / 40.0),
            "small-doubling-set",
        )
        .with_params(common.clone()),
        BoundCheck::report(
            p,
            "packing_of_4a_minus_4a",
            packing.value as i128,
            p as f64 / (len as f64).powi(3),
            "small-doubling-set",
        )
        .with_params(format!("{common};exact={}", packing.exact)),
    ])
}
