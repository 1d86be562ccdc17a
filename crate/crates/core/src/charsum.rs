//! Legendre-symbol sums over windows, the two interval splittings of a
//! window, and the longest window on which (x+a)(x+a+1) stays a residue.

use serde::Serialize;

use crate::bounds;
use crate::field::PrimeContext;
use crate::fpset::FpSet;
use crate::gaps::gap_stats;
use crate::report::BoundCheck;

/// Σ_{x=s+1}^{s+h} χ(x), indices mod p.
pub fn char_sum_interval(ctx: &PrimeContext, s: u64, h: u64) -> i64 {
    let p = ctx.p();
    let chi = ctx.chi_table();
    (1..=h)
        .map(|j| chi[((s % p + j) % p) as usize] as i64)
        .sum()
}

/// t -> χ(t(t+1)).
pub fn quadratic_chi_table(ctx: &PrimeContext) -> Vec<i8> {
    let p = ctx.p();
    (0..p)
        .map(|t| ctx.legendre(ctx.mul(t, (t + 1) % p)))
        .collect()
}

/// Σ_{x=0}^{p-1} χ(x(x+1)).
pub fn complete_quadratic_sum(ctx: &PrimeContext) -> i64 {
    quadratic_chi_table(ctx).iter().map(|&v| v as i64).sum()
}

/// Exact form of |Σ| <= h(1 - 1/(2d)) + 4, cleared of denominators.
pub fn quadratic_bound_holds(abs_sum: u64, h: u64, d_star: u64) -> bool {
    let d = d_star as u128;
    abs_sum as u128 * 2 * d <= h as u128 * (2 * d - 1) + 8 * d
}

pub fn quadratic_bound_rhs(h: u64, d_star: u64) -> f64 {
    h as f64 * (1.0 - 1.0 / (2.0 * d_star as f64)) + 4.0
}

/// |Σ_{x=s+1}^{s+h} χ((x+a)(x+a+1))| against h(1 - 1/(2 d_*)) + 4.
pub fn char_sum_quadratic(ctx: &PrimeContext, a: u64, s: u64, h: u64) -> BoundCheck {
    let d_star = gap_stats(ctx).d_star;
    char_sum_quadratic_with(ctx, d_star, a, s, h)
}

/// As [`char_sum_quadratic`] with d_*(p) supplied by the caller.
pub fn char_sum_quadratic_with(
    ctx: &PrimeContext,
    d_star: u64,
    a: u64,
    s: u64,
    h: u64,
) -> BoundCheck {
    let p = ctx.p();
    let base = (s % p + a % p) % p;
    let sum: i64 = (1..=h)
        .map(|j| {
            let t = (base + j) % p;
            ctx.legendre(ctx.mul(t, (t + 1) % p)) as i64
        })
        .sum();
    let value = sum.unsigned_abs();
    BoundCheck::report(
        p,
        "quadratic_char_sum",
        value as i128,
        quadratic_bound_rhs(h, d_star),
        "quadratic-char-sum",
    )
    .with_exact_pass(quadratic_bound_holds(value, h, d_star))
    .with_params(format!("a={a};s={s};h={h};d_star={d_star}"))
}

/// Worst window among all h in 1..=p for a fixed start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticScan {
    pub a: u64,
    pub s: u64,
    /// h with the largest |Σ| / rhs
    pub worst_h: u64,
    pub worst_abs: u64,
    pub worst_ratio: f64,
    pub failures: u64,
}

/// Checks the quadratic bound for every h in 1..=p in one prefix scan.
/// `table` is [`quadratic_chi_table`].
pub fn scan_quadratic_windows(table: &[i8], d_star: u64, a: u64, s: u64) -> QuadraticScan {
    let p = table.len() as u64;
    let base = (s % p + a % p) % p;
    let mut sum = 0i64;
    let mut out = QuadraticScan {
        a,
        s,
        worst_h: 0,
        worst_abs: 0,
        worst_ratio: -1.0,
        failures: 0,
    };
    let mut t = base;
    for h in 1..=p {
        t += 1;
        if t == p {
            t = 0;
        }
        sum += table[t as usize] as i64;
        let abs = sum.unsigned_abs();
        if !quadratic_bound_holds(abs, h, d_star) {
            out.failures += 1;
        }
        let ratio = abs as f64 / quadratic_bound_rhs(h, d_star);
        if ratio > out.worst_ratio {
            out.worst_ratio = ratio;
            out.worst_h = h;
            out.worst_abs = abs;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SplitVariant {
    /// maximal runs of residues and non-residues
    First,
    /// runs of length >= 2 kept pure, the rest grouped into alternating pieces
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PieceKind {
    R,
    N,
    Alternating,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub start: u64,
    pub len: u64,
    pub kind: PieceKind,
}

/// A partition of the window s+1..s+h into pieces, in window order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub variant: SplitVariant,
    pub s: u64,
    pub h: u64,
    pub n_r: u64,
    pub n_n: u64,
    /// Alternating slots: every alternating piece, plus every empty slot
    /// between two adjacent pure pieces (second variant only).
    pub s_alt: u64,
    pub pieces: Vec<Piece>,
    /// Σ_{x=s+1}^{s+h-1} χ(x(x+1)): the pairs internal to the window.
    pub chi_sum: i64,
    /// Σ_{x=s+1}^{s+h} χ(x(x+1)), which also pairs s+h with s+h+1.
    pub full_sum: i64,
    pub contains_zero: bool,
}

impl SplittingReport {
    fn pure_total(&self) -> i64 {
        self.pieces
            .iter()
            .filter(|q| matches!(q.kind, PieceKind::R | PieceKind::N))
            .map(|q| q.len as i64)
            .sum()
    }

    /// The value of the sum predicted from the piece counts alone:
    /// h - 2(n_R + n_N) + 1 for the first variant,
    /// -h + 2Σ|pure| - 2(n'_R + n'_N) + 1 for the second.
    pub fn predicted_sum(&self) -> i64 {
        let h = self.h as i64;
        let n = (self.n_r + self.n_n) as i64;
        match self.variant {
            SplitVariant::First => h - 2 * n + 1,
            SplitVariant::Second => -h + 2 * self.pure_total() - 2 * n + 1,
        }
    }

    /// -h + 2Σ|pure| - n'_R - n'_N - s_alt, the bookkeeping form of the
    /// second splitting; the internal sum exceeds it by 0, 1 or 2.
    pub fn alternating_form(&self) -> i64 {
        let n = (self.n_r + self.n_n) as i64;
        -(self.h as i64) + 2 * self.pure_total() - n - self.s_alt as i64
    }

    /// Whether the piece-count identity holds; `None` for windows through 0.
    pub fn identity_holds(&self) -> Option<bool> {
        (!self.contains_zero).then(|| self.chi_sum == self.predicted_sum())
    }

    /// Longest alternating piece.
    pub fn max_alternating(&self) -> u64 {
        self.pieces
            .iter()
            .filter(|q| q.kind == PieceKind::Alternating)
            .map(|q| q.len)
            .max()
            .unwrap_or(0)
    }
}

fn kind_of(chi: i8) -> PieceKind {
    match chi {
        1 => PieceKind::R,
        -1 => PieceKind::N,
        _ => PieceKind::Zero,
    }
}

/// Splits the window s+1..s+h (mod p), 1 <= h <= p.
pub fn split_window(ctx: &PrimeContext, s: u64, h: u64, variant: SplitVariant) -> SplittingReport {
    let p = ctx.p();
    let chi = ctx.chi_table();
    let h = h.clamp(1, p);
    let at = |j: u64| (s % p + j) % p;

    // maximal runs of equal χ inside the window
    let mut runs: Vec<Piece> = Vec::new();
    for j in 1..=h {
        let x = at(j);
        let kind = kind_of(chi[x as usize]);
        match runs.last_mut() {
            Some(last) if last.kind == kind && kind != PieceKind::Zero => last.len += 1,
            _ => runs.push(Piece {
                start: x,
                len: 1,
                kind,
            }),
        }
    }

    let pair = |j: u64| {
        let x = at(j);
        chi[x as usize] as i64 * chi[((x + 1) % p) as usize] as i64
    };
    let chi_sum: i64 = (1..h).map(pair).sum();
    let full_sum = chi_sum + pair(h);
    let contains_zero = runs.iter().any(|q| q.kind == PieceKind::Zero);

    let count =
        |pieces: &[Piece], k: PieceKind| pieces.iter().filter(|q| q.kind == k).count() as u64;

    let (pieces, s_alt) = match variant {
        SplitVariant::First => (runs, 0),
        SplitVariant::Second => {
            let mut pieces: Vec<Piece> = Vec::new();
            let mut s_alt = 0u64;
            // previous piece was pure: an empty slot sits between it and a
            // following pure piece
            let mut prev_pure = false;
            for run in runs {
                let pure = run.len >= 2 && run.kind != PieceKind::Zero;
                if pure {
                    if prev_pure {
                        s_alt += 1;
                    }
                    pieces.push(run);
                    prev_pure = true;
                } else if run.kind == PieceKind::Zero {
                    pieces.push(run);
                    prev_pure = false;
                } else {
                    match pieces.last_mut() {
                        Some(last) if last.kind == PieceKind::Alternating => last.len += 1,
                        _ => {
                            pieces.push(Piece {
                                start: run.start,
                                len: 1,
                                kind: PieceKind::Alternating,
                            });
                            s_alt += 1;
                        }
                    }
                    prev_pure = false;
                }
            }
            (pieces, s_alt)
        }
    };

    SplittingReport {
        variant,
        s,
        h,
        n_r: count(&pieces, PieceKind::R),
        n_n: count(&pieces, PieceKind::N),
        s_alt,
        pieces,
        chi_sum,
        full_sum,
        contains_zero,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticRun {
    pub h: u64,
    /// window is s+1..s+h
    pub s: u64,
    pub check: BoundCheck,
}

/// Longest window s+1..s+h on which (x+a)(x+a+1) ∈ R throughout, compared
/// with p^{1/4} log p.
pub fn max_quadratic_run(ctx: &PrimeContext, a: u64) -> QuadraticRun {
    let p = ctx.p();
    let table = quadratic_chi_table(ctx);
    let good = FpSet::from_predicate(p, |t| table[t as usize] == 1);
    // best run in t = x + a; earliest start on ties
    let best = good
        .runs()
        .runs
        .into_iter()
        .fold(None, |acc: Option<(u64, u64)>, r| match acc {
            Some((_, len)) if len >= r.len => acc,
            _ => Some((r.start, r.len)),
        });
    let (h, s) = match best {
        Some((start, len)) => (len, (start + 2 * p - a % p - 1) % p),
        None => (0, 0),
    };
    let check = BoundCheck::report(
        p,
        "max_quadratic_run",
        h as i128,
        bounds::burgess_rhs(p),
        "quadratic-residue-run",
    )
    .with_params(format!("a={a};s={s}"));
    QuadraticRun { h, s, check }
}
