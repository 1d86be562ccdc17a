//! Intersections of a set with its additive or multiplicative shifts, the
//! Möbius images Q_{a,b} of the residues, and the instance checker for the
//! Weil-type bound on shifted residue intersections.

use thiserror::Error;

use crate::field::{Class, FieldError, PrimeContext};
use crate::fpset::{FpSet, SetError};
use crate::report::{BoundCheck, SQRT_GUARD};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShiftError {
    #[error("multiplicative shift by 0")]
    ZeroShift,
    #[error("Q_{{a,b}} requires a != b")]
    EqualShifts,
    #[error("shift pattern: {0}")]
    BadPattern(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Set(#[from] SetError),
}

/// Largest number of shifts; keeps 2^{k+1} inside a u64.
pub const MAX_SHIFTS: usize = 62;

/// Distinct nonzero shifts s_1..s_k with a residue class per factor.
/// `classes[0]` belongs to the unshifted factor, `classes[i]` to `T_i - s_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftPattern {
    shifts: Vec<u64>,
    classes: Vec<Class>,
}

impl ShiftPattern {
    pub fn new(p: u64, shifts: Vec<u64>, classes: Vec<Class>) -> Result<Self, ShiftError> {
        if classes.len() != shifts.len() + 1 {
            return Err(ShiftError::BadPattern(format!(
                "{} shifts need {} classes, got {}",
                shifts.len(),
                shifts.len() + 1,
                classes.len()
            )));
        }
        if shifts.len() > MAX_SHIFTS {
            return Err(ShiftError::BadPattern(format!(
                "at most {MAX_SHIFTS} shifts, got {}",
                shifts.len()
            )));
        }
        let mut seen = FpSet::empty(p);
        for &s in &shifts {
            if s == 0 || s >= p {
                return Err(ShiftError::BadPattern(format!("shift {s} not in 1..{p}")));
            }
            if !seen.insert(s) {
                return Err(ShiftError::BadPattern(format!("duplicate shift {s}")));
            }
        }
        Ok(Self { shifts, classes })
    }

    /// All factors in R.
    pub fn residues(p: u64, shifts: Vec<u64>) -> Result<Self, ShiftError> {
        let classes = vec![Class::R; shifts.len() + 1];
        Self::new(p, shifts, classes)
    }

    /// Reduces shifts mod p, then drops zero shifts and repeats, keeping the
    /// class of the first occurrence. Dropping a factor can only enlarge the
    /// intersection, and the bound is evaluated for the reduced k.
    pub fn normalized(p: u64, shifts: &[u64], classes: &[Class]) -> Result<Self, ShiftError> {
        if classes.len() != shifts.len() + 1 {
            return Err(ShiftError::BadPattern(
                "class count must be shifts + 1".into(),
            ));
        }
        let mut seen = FpSet::empty(p);
        let mut kept_shifts = Vec::new();
        let mut kept_classes = vec![classes[0]];
        for (&s, &c) in shifts.iter().zip(&classes[1..]) {
            let s = s % p;
            if s != 0 && seen.insert(s) {
                kept_shifts.push(s);
                kept_classes.push(c);
            }
        }
        Self::new(p, kept_shifts, kept_classes)
    }

    pub fn k(&self) -> usize {
        self.shifts.len()
    }

    pub fn shifts(&self) -> &[u64] {
        &self.shifts
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    pub fn describe(&self) -> String {
        let shifts: Vec<String> = self.shifts.iter().map(u64::to_string).collect();
        let classes: String = self.classes.iter().map(|c| c.symbol()).collect();
        format!(
            "k={};shifts={};classes={}",
            self.k(),
            shifts.join(" "),
            classes
        )
    }
}

/// A⁺_S = A ∩ (A - s_1) ∩ ... ∩ (A - s_k). A zero shift is the identity factor.
pub fn shifted_intersection_add(a: &FpSet, shifts: &[u64]) -> FpSet {
    let p = a.p();
    let shifts: Vec<u64> = shifts.iter().map(|s| s % p).collect();
    FpSet::from_predicate(p, |x| {
        a.contains(x) && shifts.iter().all(|&s| a.contains((x + s) % p))
    })
}

/// A^×_S = A ∩ A s_1^{-1} ∩ ... ∩ A s_k^{-1}.
pub fn shifted_intersection_mul(a: &FpSet, shifts: &[u64]) -> Result<FpSet, ShiftError> {
    let p = a.p();
    let shifts: Vec<u64> = shifts.iter().map(|s| s % p).collect();
    if shifts.contains(&0) {
        return Err(ShiftError::ZeroShift);
    }
    let mut out = FpSet::empty(p);
    for x in a.iter() {
        if shifts
            .iter()
            .all(|&s| a.contains(crate::field::mul_mod(x, s, p)))
        {
            out.insert(x);
        }
    }
    Ok(out)
}

/// Q_{a,b} = {x : (x+b)/(x+a) ∈ R} (or ∈ N for the primed family), by direct
/// evaluation of the Legendre symbol. x = -a is excluded.
pub fn q_set(ctx: &PrimeContext, a: u64, b: u64, class: Class) -> Result<FpSet, ShiftError> {
    let p = ctx.p();
    let (a, b) = (a % p, b % p);
    if a == b {
        return Err(ShiftError::EqualShifts);
    }
    // χ((x+b)/(x+a)) = χ((x+b)(x+a)) for x ≠ -a.
    let set = FpSet::from_predicate(p, |x| {
        let den = ctx.add(x, a);
        den != 0 && ctx.in_class(ctx.mul(ctx.add(x, b), den), class)
    });
    debug_assert_eq!(set, q_set_via_mobius(ctx, a, b, class).unwrap());
    Ok(set)
}

/// The same set built as (a-b)/(T-1) - b with T = R or N.
pub fn q_set_via_mobius(
    ctx: &PrimeContext,
    a: u64,
    b: u64,
    class: Class,
) -> Result<FpSet, ShiftError> {
    let p = ctx.p();
    let (a, b) = (a % p, b % p);
    if a == b {
        return Err(ShiftError::EqualShifts);
    }
    let set = ctx
        .class_set(class)
        .shift(p - 1)
        .invert()
        .dilate(ctx.sub(a, b))?
        .shift(p - b);
    Ok(set)
}

/// Exact size of ∩_i (T_i - s_i) against p/2^{k+1} + k√p.
pub fn weil_check(ctx: &PrimeContext, pattern: &ShiftPattern) -> BoundCheck {
    let p = ctx.p();
    let chi = ctx.chi_table();
    let head = pattern.classes[0].chi();
    let factors: Vec<(usize, i8)> = pattern
        .shifts
        .iter()
        .zip(&pattern.classes[1..])
        .map(|(&s, c)| (s as usize, c.chi()))
        .collect();
    let n = p as usize;
    let mut count = 0i128;
    for x in 0..n {
        if chi[x] != head {
            continue;
        }
        if factors.iter().all(|&(s, c)| {
            let y = x + s;
            chi[if y >= n { y - n } else { y }] == c
        }) {
            count += 1;
        }
    }
    let k = pattern.k();
    let rhs = p as f64 / (1u64 << (k + 1)) as f64 + k as f64 * (p as f64).sqrt() + SQRT_GUARD;
    BoundCheck::upper(
        p,
        "shifted_class_intersection",
        count,
        rhs,
        "weil-shifted-intersection",
    )
    .with_params(pattern.describe())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    #[test]
    fn add_examples() {
        let c = ctx(7);
        let r = c.residues();
        assert_eq!(&shifted_intersection_add(r, &[]), r);
        // {1,2,4} ∩ {0,1,3}
        assert_eq!(shifted_intersection_add(r, &[1]).to_vec(), vec![1]);
        let full = FpSet::full(7);
        assert_eq!(shifted_intersection_add(&full, &[1, 3, 5]), full);
        assert_eq!(&shifted_intersection_add(r, &[0]), r);
    }

    #[test]
    fn mul_examples() {
        let c = ctx(7);
        let r = c.residues();
        assert_eq!(&shifted_intersection_mul(r, &[1]).unwrap(), r);
        assert_eq!(&shifted_intersection_mul(r, &[2, 4]).unwrap(), r);
        // 3 is a non-residue mod 7, so R·3 = N and the intersection is empty
        assert!(shifted_intersection_mul(r, &[3]).unwrap().is_empty());
        assert_eq!(
            shifted_intersection_mul(r, &[0]).unwrap_err(),
            ShiftError::ZeroShift
        );
    }

    #[test]
    fn q_set_examples() {
        let c = ctx(7);
        assert_eq!(
            q_set(&c, 0, 0, Class::R).unwrap_err(),
            ShiftError::EqualShifts
        );
        // (x+1)/x for x = 1..6: 2 R, 5 N, 6 N, 3 N, 4 R, 0 (excluded)
        assert_eq!(q_set(&c, 0, 1, Class::R).unwrap().to_vec(), vec![1, 5]);
        assert_eq!(q_set(&c, 0, 1, Class::N).unwrap().to_vec(), vec![2, 3, 4]);
    }

    #[test]
    fn q_set_sizes_and_identity() {
        for p in [5u64, 7, 11, 13, 101, 499] {
            let c = ctx(p);
            for (a, b) in [(0, 1), (3, 1), (p - 1, 2), (4, 0)] {
                if a % p == b % p {
                    continue;
                }
                let q = q_set(&c, a, b, Class::R).unwrap();
                let qn = q_set(&c, a, b, Class::N).unwrap();
                assert_eq!(q.len() + qn.len(), p as usize - 2);
                assert_eq!(q.len(), (p as usize - 3) / 2);
                assert!(!q.contains((p - a % p) % p) && !qn.contains((p - b % p) % p));
                assert_eq!(q, q_set_via_mobius(&c, a, b, Class::R).unwrap());
                assert_eq!(qn, q_set_via_mobius(&c, a, b, Class::N).unwrap());
            }
        }
    }

    #[test]
    fn weil_examples() {
        let c = ctx(7);
        let check = weil_check(&c, &ShiftPattern::residues(7, vec![1]).unwrap());
        assert_eq!(check.value, 1);
        assert!((check.rhs - (7.0 / 4.0 + 7f64.sqrt())).abs() < 1e-5);
        assert_eq!(check.pass, Some(true));

        let check = weil_check(&c, &ShiftPattern::residues(7, vec![]).unwrap());
        assert_eq!(check.value, 3);
        assert_eq!(check.pass, Some(true));
    }

    #[test]
    fn pattern_validation() {
        assert!(ShiftPattern::new(7, vec![1, 1], vec![Class::R; 3]).is_err());
        assert!(ShiftPattern::new(7, vec![0], vec![Class::R; 2]).is_err());
        assert!(ShiftPattern::new(7, vec![1], vec![Class::R]).is_err());
        let pat = ShiftPattern::normalized(
            7,
            &[0, 3, 10, 2],
            &[Class::R, Class::N, Class::N, Class::R, Class::N],
        )
        .unwrap();
        assert_eq!(pat.shifts(), &[3, 2]);
        assert_eq!(pat.classes(), &[Class::R, Class::N, Class::N]);
    }

    #[test]
    fn weil_sweep_small_primes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in crate::field::primes_in_range(3, 400) {
            let c = ctx(p);
            for _ in 0..50 {
                let k = rng.random_range(1..=8usize).min(p as usize - 1);
                let mut shifts = Vec::new();
                while shifts.len() < k {
                    let s = rng.random_range(1..p);
                    if !shifts.contains(&s) {
                        shifts.push(s);
                    }
                }
                let classes = (0..=k)
                    .map(|_| {
                        if rng.random_bool(0.5) {
                            Class::R
                        } else {
                            Class::N
                        }
                    })
                    .collect();
                let check = weil_check(&c, &ShiftPattern::new(p, shifts, classes).unwrap());
                assert_eq!(check.pass, Some(true), "{check:?}");
            }
        }
    }

    fn arb_case() -> impl Strategy<Value = (u64, Vec<u64>, Vec<u64>)> {
        prop::sample::select(vec![11u64, 13, 31, 101, 211]).prop_flat_map(|p| {
            (
                Just(p),
                prop::collection::vec(0..p, 0..40),
                prop::collection::vec(1..p, 0..5),
            )
        })
    }

    proptest! {
        #[test]
        fn inclusion_property((p, xs, shifts) in arb_case()) {
            let a = FpSet::from_elements(p, xs);
            let mut with_zero = shifts.clone();
            with_zero.push(0);
            let plus = shifted_intersection_add(&a, &shifts);
            let pattern = FpSet::from_elements(p, with_zero.iter().copied());
            prop_assert!(plus.sumset(&pattern).unwrap().is_subset(&a));

            let times = shifted_intersection_mul(&a, &shifts).unwrap();
            let mut with_one = shifts.clone();
            with_one.push(1);
            let pattern = FpSet::from_elements(p, with_one);
            prop_assert!(times.product_set(&pattern).unwrap().is_subset(&a));
        }

        #[test]
        fn composition((p, xs, shifts) in arb_case(), split in 0usize..5) {
            let a = FpSet::from_elements(p, xs);
            let split = split.min(shifts.len());
            let (x, y) = shifts.split_at(split);
            // union of shift lists is an intersection of the pieces
            prop_assert_eq!(
                shifted_intersection_add(&a, &shifts),
                shifted_intersection_add(&a, x).intersection(&shifted_intersection_add(&a, y))
            );
            // iterating shifts by X then Y shifts by ({0} ∪ X) + ({0} ∪ Y)
            let x0 = FpSet::from_elements(p, x.iter().copied().chain([0]));
            let y0 = FpSet::from_elements(p, y.iter().copied().chain([0]));
            let sum: Vec<u64> = x0.sumset(&y0).unwrap().to_vec();
            prop_assert_eq!(
                shifted_intersection_add(&shifted_intersection_add(&a, x), y),
                shifted_intersection_add(&a, &sum)
            );
        }
    }
}
