//! Representation functions, additive and multiplicative energies, and the
//! dense Fourier transform over Z/n.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds;
use crate::field::{add_mod, mul_mod, primes_in_range, sub_mod, PrimeContext};
use crate::fpset::{FpSet, SetError};
use crate::report::BoundCheck;

/// Largest length accepted by [`dft`].
pub const DFT_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error("dense transform limited to length {cap}, got {len}")]
    TooLargeForDense { len: usize, cap: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Set(#[from] SetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RepOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// λ -> number of (a, b) ∈ A × B with a ∘ b = λ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepCounts {
    pub p: u64,
    pub op: RepOp,
    pub counts: Vec<u64>,
}

impl RepCounts {
    pub fn get(&self, lambda: u64) -> u64 {
        self.counts[(lambda % self.p) as usize]
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    pub fn sum_of_squares(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128 * c as u128).sum()
    }

    /// Largest count over λ ≠ 0, with the smallest such λ.
    pub fn max_nonzero(&self) -> Option<(u64, u64)> {
        let mut best: Option<(u64, u64)> = None;
        for (lambda, &c) in self.counts.iter().enumerate().skip(1) {
            if best.is_none_or(|(_, b)| c > b) {
                best = Some((lambda as u64, c));
            }
        }
        best
    }
}

/// Exact counts by the O(|A||B|) accumulation. Division follows the set
/// policy: 0 ∈ B is an error.
pub fn rep_counts(a: &FpSet, b: &FpSet, op: RepOp) -> Result<RepCounts, SetError> {
    if a.p() != b.p() {
        return Err(SetError::ModulusMismatch(a.p(), b.p()));
    }
    let p = a.p();
    let mut counts = vec![0u64; p as usize];
    let right: Vec<u64> = match op {
        RepOp::Div => {
            if b.contains(0) {
                return Err(SetError::ZeroDenominator);
            }
            b.invert().to_vec()
        }
        _ => b.to_vec(),
    };
    for x in a.iter() {
        match op {
            RepOp::Add => right
                .iter()
                .for_each(|&y| counts[add_mod(x, y, p) as usize] += 1),
            RepOp::Sub => right
                .iter()
                .for_each(|&y| counts[sub_mod(x, y, p) as usize] += 1),
            RepOp::Mul | RepOp::Div => right
                .iter()
                .for_each(|&y| counts[mul_mod(x, y, p) as usize] += 1),
        }
    }
    Ok(RepCounts { p, op, counts })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EnergyKind {
    Additive,
    Multiplicative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnergyReport {
    pub value: u128,
    pub kind: EnergyKind,
    pub card_a: usize,
    pub card_b: usize,
}

/// E⁺(A, B) = #{a1 - b1 = a2 - b2} = Σ_λ r²_{A-B}(λ).
pub fn additive_energy(a: &FpSet, b: &FpSet) -> Result<EnergyReport, SetError> {
    let r = rep_counts(a, b, RepOp::Sub)?;
    Ok(EnergyReport {
        value: r.sum_of_squares(),
        kind: EnergyKind::Additive,
        card_a: a.len(),
        card_b: b.len(),
    })
}

/// E^×(A, B) = #{a1 / b1 = a2 / b2} over the nonzero elements of A and B.
pub fn multiplicative_energy(a: &FpSet, b: &FpSet) -> Result<EnergyReport, SetError> {
    let mut a = a.clone();
    let mut b = b.clone();
    a.remove(0);
    b.remove(0);
    let r = rep_counts(&a, &b, RepOp::Div)?;
    Ok(EnergyReport {
        value: r.sum_of_squares(),
        kind: EnergyKind::Multiplicative,
        card_a: a.len(),
        card_b: b.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Cauchy-Schwarz: |A|²|B|² <= E⁺(A,B) |A ± B|. Reported as value = |A|²|B|²
/// against rhs = E⁺(A,B)|A ± B|, decided in exact integers.
pub fn cs_energy_check(a: &FpSet, b: &FpSet, sign: Sign) -> Result<BoundCheck, SetError> {
    let energy = additive_energy(a, b)?.value;
    let combined = match sign {
        Sign::Plus => a.sumset(b)?,
        Sign::Minus => a.difference_set(b)?,
    };
    let lhs = (a.len() as u128).pow(2) * (b.len() as u128).pow(2);
    let rhs = energy * combined.len() as u128;
    let (quantity, sym) = match sign {
        Sign::Plus => ("energy_times_sumset", '+'),
        Sign::Minus => ("energy_times_difference_set", '-'),
    };
    Ok(BoundCheck::report(
        a.p(),
        quantity,
        lhs as i128,
        rhs as f64,
        "cauchy-schwarz-energy",
    )
    .with_exact_pass(lhs <= rhs)
    .with_params(format!(
        "card_a={};card_b={};energy={energy};card_a{sym}b={}",
        a.len(),
        b.len(),
        combined.len()
    )))
}

/// f̂(ρ) = Σ_g f(g) e(-gρ/n), evaluated directly for every ρ.
pub fn dft(f: &[Complex64]) -> Result<Vec<Complex64>, EnergyError> {
    let n = f.len();
    if n > DFT_CAP {
        return Err(EnergyError::TooLargeForDense {
            len: n,
            cap: DFT_CAP,
        });
    }
    let twiddle: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    Ok((0..n)
        .into_par_iter()
        .map(|rho| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0usize;
            for v in f {
                acc += v * twiddle[idx];
                idx += rho;
                if idx >= n {
                    idx -= n;
                }
            }
            acc
        })
        .collect())
}

/// Indicator function of a set as a complex table.
pub fn indicator(set: &FpSet) -> Vec<Complex64> {
    (0..set.p())
        .map(|x| Complex64::new(if set.contains(x) { 1.0 } else { 0.0 }, 0.0))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeEnergyExperiment {
    pub check: BoundCheck,
    pub primes: Vec<u64>,
    pub card_a: usize,
    /// ratio <= the configured constant
    pub within_constant: bool,
}

/// Multiplicative energy of the primes in [h*/2, h*] against A = S ∔ [0, h),
/// compared with |Q|²|A|²/p + |Q||A| min{h*/log h*, log p / log h*}.
pub fn energy_lemma_experiment(
    ctx: &PrimeContext,
    h: u64,
    h_star: u64,
    s: &FpSet,
    constant: f64,
) -> Result<PrimeEnergyExperiment, EnergyError> {
    let p = ctx.p();
    if h_star > h {
        return Err(EnergyError::PreconditionViolated(format!(
            "h* = {h_star} > h = {h}"
        )));
    }
    if 8 * h_star as u128 * h as u128 >= p as u128 {
        return Err(EnergyError::PreconditionViolated(format!(
            "8 h* h = {} >= p = {p}",
            8 * h_star as u128 * h as u128
        )));
    }
    let window = FpSet::interval(p, 0, h);
    let a = s.sumset(&window)?;
    if a.len() != s.len() * window.len() {
        return Err(EnergyError::PreconditionViolated(
            "S + [0, h) is not direct".to_string(),
        ));
    }
    let primes = primes_in_range(h_star.div_ceil(2), h_star);
    let q = FpSet::from_elements(p, primes.iter().copied());
    let energy = multiplicative_energy(&q, &a)?.value;
    let rhs = bounds::prime_energy_rhs(p, q.len(), a.len(), h_star);
    let check = BoundCheck::report(p, "prime_energy", energy as i128, rhs, "prime-energy")
        .with_params(format!(
            "h={h};h_star={h_star};card_q={};card_a={}",
            q.len(),
            a.len()
        ));
    let within_constant = check.ratio <= constant;
    Ok(PrimeEnergyExperiment {
        check,
        primes,
        card_a: a.len(),
        within_constant,
    })
}
