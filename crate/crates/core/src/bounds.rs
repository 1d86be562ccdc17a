//! Right-hand sides of the asymptotic bounds, evaluated with implied
//! constant 1. All logarithms are base 2.

/// Exponent of the external character-sum bound that enters the
/// consecutive-pair coverage threshold.
pub const PAIR_COVERAGE_ETA: f64 = 0.16656;

#[inline]
fn lg(x: f64) -> f64 {
    x.log2()
}

/// Three-regime correction factor δ_p(h): 1 up to 2 log p, then h / log p up
/// to log² p, then log p.
pub fn delta_table(p: u64, h: u64) -> f64 {
    let l = lg(p as f64);
    let h = h as f64;
    if h <= 2.0 * l {
        1.0
    } else if h <= l * l {
        h / l
    } else {
        l
    }
}

/// Closed form min{ h / min{h/2, log p}, log p } of the same factor. Agrees
/// with [`delta_table`] up to a factor of 2.
pub fn delta_closed(p: u64, h: u64) -> f64 {
    let l = lg(p as f64);
    let h = h as f64;
    (h / (h / 2.0).min(l)).min(l)
}

/// C_* = C for h <= 2 log p, else 1.
pub fn c_star(p: u64, h: u64, c: f64) -> f64 {
    if (h as f64) <= 2.0 * lg(p as f64) {
        c
    } else {
        1.0
    }
}

/// Smallest real h allowed by the window-length condition
/// h >= 2 log p - 4 log(C log p) + 4.
pub fn window_threshold(p: u64, c: f64) -> f64 {
    let l = lg(p as f64);
    2.0 * l - 4.0 * lg(c * l) + 4.0
}

/// Smallest integer h >= 1 satisfying the window-length condition.
pub fn min_admissible_h(p: u64, c: f64) -> u64 {
    window_threshold(p, c).ceil().max(1.0) as u64
}

fn log_factor(p: u64, h: u64) -> f64 {
    let l = lg(p as f64);
    let h = h as f64;
    lg(4.0 * h / h.min(2.0 * l)).powi(2)
}

/// C_* √p log²p log²(4h / min{h, 2 log p}) δ_p(h): the common numerator of the
/// packing and interval-intersection bounds.
fn distribution_numerator(p: u64, h: u64, c: f64) -> f64 {
    let l = lg(p as f64);
    c_star(p, h, c) * (p as f64).sqrt() * l * l * log_factor(p, h) * delta_table(p, h)
}

/// Bound for S(h) on R, N and the Möbius images Q_{a,a+1}.
pub fn packing_rhs(p: u64, h: u64, c: f64) -> f64 {
    distribution_numerator(p, h, c) / (h as f64).powi(2)
}

/// Bound for |R⁺_{[h]}| valid under the window-length condition.
pub fn interval_intersection_rhs(p: u64, h: u64, c: f64) -> f64 {
    distribution_numerator(p, h, c) / h as f64
}

/// Bound for |R⁺_{[h]}| when h >= 2 log p: √p log²p log²(4h/log p) δ_p(h) / h.
pub fn interval_intersection_rhs_long(p: u64, h: u64) -> f64 {
    let l = lg(p as f64);
    let hf = h as f64;
    (p as f64).sqrt() * l * l * lg(4.0 * hf / l).powi(2) * delta_table(p, h) / hf
}

/// Localized packing bound C_* √p log²p / h².
pub fn local_packing_rhs(p: u64, h: u64, c: f64) -> f64 {
    let l = lg(p as f64);
    c_star(p, h, c) * (p as f64).sqrt() * l * l / (h as f64).powi(2)
}

/// Hypothesis of the localized packing bound: 16 |I| h² < p log² p.
pub fn local_hypothesis(p: u64, interval_len: u64, h: u64) -> bool {
    let l = lg(p as f64);
    16.0 * interval_len as f64 * (h as f64).powi(2) < p as f64 * l * l
}

/// p^{1/4} log p.
pub fn burgess_rhs(p: u64) -> f64 {
    (p as f64).powf(0.25) * lg(p as f64)
}

/// p^{1/4} (2 log p)^{3r/2 + 1}.
pub fn gap_in_residues_rhs(p: u64, rank: u32) -> f64 {
    let l = lg(p as f64);
    (p as f64).powf(0.25) * (2.0 * l).powf(1.5 * rank as f64 + 1.0)
}

/// p^{11/24} (log p)^{4/3 + η/6} (log log p)^{1/2}.
pub fn pair_coverage_rhs(p: u64) -> f64 {
    let l = lg(p as f64);
    (p as f64).powf(11.0 / 24.0) * l.powf(4.0 / 3.0 + PAIR_COVERAGE_ETA / 6.0) * lg(l).sqrt()
}

/// √p log p.
pub fn sqrt_p_log_p(p: u64) -> f64 {
    (p as f64).sqrt() * lg(p as f64)
}

/// |Q|²|A|²/p + |Q||A| min{h*/log h*, log p / log h*}.
pub fn prime_energy_rhs(p: u64, q_len: usize, a_len: usize, h_star: u64) -> f64 {
    if q_len == 0 {
        return 0.0;
    }
    let (q, a) = (q_len as f64, a_len as f64);
    let lh = lg(h_star as f64);
    q * q * a * a / p as f64 + q * a * (h_star as f64 / lh).min(lg(p as f64) / lh)
}
