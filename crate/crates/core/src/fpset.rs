//! Dense subsets of F_p and their set algebra.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::{add_mod, inverse_mod, mul_mod, sub_mod};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("dilation by 0 is not a bijection")]
    ZeroDilation,
    #[error("ratio set with 0 in the denominator set")]
    ZeroDenominator,
    #[error("sets live in different fields (p = {0} and p = {1})")]
    ModulusMismatch(u64, u64),
    #[error("element {0} out of range for p = {1}")]
    OutOfRange(u64, u64),
    #[error("malformed set literal: {0}")]
    Parse(String),
}

/// Membership table over {0, ..., p-1} with a cached cardinality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpSet {
    p: u64,
    words: Vec<u64>,
    card: usize,
}

impl fmt::Debug for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FpSet {
    pub fn empty(p: u64) -> Self {
        let words = vec![0u64; (p as usize).div_ceil(64)];
        Self { p, words, card: 0 }
    }

    pub fn full(p: u64) -> Self {
        Self::from_predicate(p, |_| true)
    }

    pub fn from_predicate(p: u64, mut pred: impl FnMut(u64) -> bool) -> Self {
        let mut set = Self::empty(p);
        for x in 0..p {
            if pred(x) {
                set.insert(x);
            }
        }
        set
    }

    /// Builds a set from arbitrary integers, reducing each mod p.
    pub fn from_elements(p: u64, elements: impl IntoIterator<Item = u64>) -> Self {
        let mut set = Self::empty(p);
        for x in elements {
            set.insert(x % p);
        }
        set
    }

    /// Like [`FpSet::from_elements`] but rejects elements outside [0, p).
    pub fn try_from_elements(
        p: u64,
        elements: impl IntoIterator<Item = u64>,
    ) -> Result<Self, SetError> {
        let mut set = Self::empty(p);
        for x in elements {
            if x >= p {
                return Err(SetError::OutOfRange(x, p));
            }
            set.insert(x);
        }
        Ok(set)
    }

    /// The step-one interval {start, start+1, ..., start+len-1} mod p.
    pub fn interval(p: u64, start: u64, len: u64) -> Self {
        if len >= p {
            return Self::full(p);
        }
        Self::from_elements(p, (0..len).map(|j| start % p + j))
    }

    /// {start + step*j : 0 <= j < len} mod p.
    pub fn progression(p: u64, start: u64, step: u64, len: u64) -> Self {
        let mut set = Self::empty(p);
        let mut x = start % p;
        let step = step % p;
        for _ in 0..len {
            set.insert(x);
            x = add_mod(x, step, p);
        }
        set
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.card
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.card as u64 == self.p
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        x < self.p && (self.words[(x >> 6) as usize] >> (x & 63)) & 1 == 1
    }

    /// Inserts `x` (must be < p); returns true if it was new.
    #[inline]
    pub fn insert(&mut self, x: u64) -> bool {
        debug_assert!(x < self.p);
        let w = &mut self.words[(x >> 6) as usize];
        let bit = 1u64 << (x & 63);
        if *w & bit == 0 {
            *w |= bit;
            self.card += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, x: u64) -> bool {
        if !self.contains(x) {
            return false;
        }
        self.words[(x >> 6) as usize] &= !(1u64 << (x & 63));
        self.card -= 1;
        true
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = (i as u64) << 6;
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as u64;
                rest &= rest - 1;
                Some(base + tz)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<u64> {
        self.iter().next()
    }

    fn check_same_field(&self, other: &Self) -> Result<(), SetError> {
        if self.p != other.p {
            return Err(SetError::ModulusMismatch(self.p, other.p));
        }
        Ok(())
    }

    fn zip_words(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.p, other.p, "sets over different fields");
        let mut words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| op(a, b))
            .collect();
        mask_tail(self.p, &mut words);
        let card = words.iter().map(|w| w.count_ones() as usize).sum();
        Self {
            p: self.p,
            words,
            card,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        mask_tail(self.p, &mut words);
        Self {
            p: self.p,
            words,
            card: self.p as usize - self.card,
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.p == other.p
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// A + s.
    pub fn shift(&self, s: u64) -> Self {
        let s = s % self.p;
        let mut out = Self::empty(self.p);
        for x in self.iter() {
            out.insert(add_mod(x, s, self.p));
        }
        out
    }

    /// λ·A for λ ≠ 0.
    pub fn dilate(&self, lambda: u64) -> Result<Self, SetError> {
        let lambda = lambda % self.p;
        if lambda == 0 {
            return Err(SetError::ZeroDilation);
        }
        let mut out = Self::empty(self.p);
        for x in self.iter() {
            out.insert(mul_mod(x, lambda, self.p));
        }
        Ok(out)
    }

    /// -A.
    pub fn negate(&self) -> Self {
        let mut out = Self::empty(self.p);
        for x in self.iter() {
            out.insert(sub_mod(0, x, self.p));
        }
        out
    }

    /// {x^{-1} : x ∈ A, x ≠ 0}; 0 is dropped.
    pub fn invert(&self) -> Self {
        let p = self.p;
        let mut out = Self::empty(p);
        if p == 1 {
            return out;
        }
        let elems: Vec<u64> = self.iter().filter(|&x| x != 0).collect();
        // Montgomery batch inversion: one exponentiation for the whole set.
        let mut prefix = Vec::with_capacity(elems.len());
        let mut acc = 1u64;
        for &x in &elems {
            prefix.push(acc);
            acc = mul_mod(acc, x, p);
        }
        if elems.is_empty() {
            return out;
        }
        let mut inv_acc = inverse_mod(acc, p).expect("product of nonzero elements");
        for (i, &x) in elems.iter().enumerate().rev() {
            out.insert(mul_mod(inv_acc, prefix[i], p));
            inv_acc = mul_mod(inv_acc, x, p);
        }
        out
    }

    /// Marks every combination of `self` and `other` under `op`, stopping
    /// once the result covers all of F_p.
    fn combine(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        let mut out = Self::empty(self.p);
        let right: Vec<u64> = other.iter().collect();
        for a in self.iter() {
            for &b in &right {
                out.insert(op(a, b));
            }
            if out.is_full() {
                break;
            }
        }
        out
    }

    /// A + B.
    pub fn sumset(&self, other: &Self) -> Result<Self, SetError> {
        self.check_same_field(other)?;
        let p = self.p;
        Ok(self.combine(other, |a, b| add_mod(a, b, p)))
    }

    /// A - B.
    pub fn difference_set(&self, other: &Self) -> Result<Self, SetError> {
        self.check_same_field(other)?;
        let p = self.p;
        Ok(self.combine(other, |a, b| sub_mod(a, b, p)))
    }

    /// A·B.
    pub fn product_set(&self, other: &Self) -> Result<Self, SetError> {
        self.check_same_field(other)?;
        let p = self.p;
        Ok(self.combine(other, |a, b| mul_mod(a, b, p)))
    }

    /// A/B. Errors when 0 ∈ B; see [`FpSet::ratio_set_dropping_zero`].
    pub fn ratio_set(&self, other: &Self) -> Result<Self, SetError> {
        if other.contains(0) {
            return Err(SetError::ZeroDenominator);
        }
        self.ratio_set_dropping_zero(other)
    }

    /// A/(B \ {0}).
    pub fn ratio_set_dropping_zero(&self, other: &Self) -> Result<Self, SetError> {
        self.check_same_field(other)?;
        let p = self.p;
        Ok(self.combine(&other.invert(), |a, b| mul_mod(a, b, p)))
    }

    /// nA - mA, with 0A = {0}.
    pub fn iterated(&self, n: u32, m: u32) -> Self {
        let zero = Self::from_elements(self.p, [0]);
        if self.is_empty() {
            return Self::empty(self.p);
        }
        let mut acc = zero;
        let neg = self.negate();
        for _ in 0..n {
            acc = acc.sumset(self).expect("same field");
        }
        for _ in 0..m {
            acc = acc.sumset(&neg).expect("same field");
        }
        acc
    }

    /// |A + B| = |A|·|B|.
    pub fn is_direct_sum(&self, other: &Self) -> Result<bool, SetError> {
        let s = self.sumset(other)?;
        Ok(s.len() as u128 == self.len() as u128 * other.len() as u128)
    }

    /// Maximal cyclic step-one runs, ordered by start.
    pub fn runs(&self) -> RunList {
        let p = self.p;
        if self.is_full() {
            return RunList {
                p,
                runs: vec![Run { start: 0, len: p }],
            };
        }
        if self.is_empty() {
            return RunList {
                p,
                runs: Vec::new(),
            };
        }
        let cut = self
            .complement()
            .min()
            .expect("non-full set has a non-member");
        let mut runs = Vec::new();
        let mut current: Option<(u64, u64)> = None;
        for off in 1..=p {
            let x = (cut + off) % p;
            if self.contains(x) {
                current = Some(match current {
                    Some((start, len)) => (start, len + 1),
                    None => (x, 1),
                });
            } else if let Some((start, len)) = current.take() {
                runs.push(Run { start, len });
            }
        }
        runs.sort_by_key(|r| r.start);
        RunList { p, runs }
    }
}

fn mask_tail(p: u64, words: &mut [u64]) {
    let rem = p % 64;
    if rem != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

/// `p=<int>; {e1,e2,...}`
impl fmt::Display for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}; {{", self.p)?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// Serialized as its set literal.
impl serde::Serialize for FpSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for FpSet {
    type Err = SetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SetError::Parse(s.to_string());
        let (head, body) = s.trim().split_once(';').ok_or_else(bad)?;
        let p: u64 = head
            .trim()
            .strip_prefix("p=")
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        if p == 0 {
            return Err(bad());
        }
        let inner = body
            .trim()
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(bad)?;
        let mut elements = Vec::new();
        for tok in inner.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            elements.push(tok.parse::<u64>().map_err(|_| bad())?);
        }
        Self::try_from_elements(p, elements)
    }
}

/// Parses one set literal per non-empty line; `#` starts a comment.
pub fn parse_set_lines(text: &str) -> Result<Vec<FpSet>, SetError> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Run {
    pub start: u64,
    pub len: u64,
}

/// Maximal cyclic runs of consecutive elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunList {
    pub p: u64,
    pub runs: Vec<Run>,
}

impl RunList {
    pub fn longest(&self) -> u64 {
        self.runs.iter().map(|r| r.len).max().unwrap_or(0)
    }

    pub fn to_set(&self) -> FpSet {
        let mut set = FpSet::empty(self.p);
        for r in &self.runs {
            for j in 0..r.len {
                set.insert((r.start + j) % self.p);
            }
        }
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(p: u64, xs: &[u64]) -> FpSet {
        FpSet::from_elements(p, xs.iter().copied())
    }

    #[test]
    fn shift_examples() {
        let r7 = set(7, &[1, 2, 4]);
        assert_eq!(r7.shift(0), r7);
        assert_eq!(r7.shift(3), set(7, &[4, 5, 0]));
        assert!(FpSet::empty(7).shift(3).is_empty());
    }

    #[test]
    fn dilate_examples() {
        let r7 = set(7, &[1, 2, 4]);
        assert_eq!(r7.dilate(1).unwrap(), r7);
        assert_eq!(r7.dilate(2).unwrap(), r7);
        assert_eq!(set(5, &[1, 3]).dilate(3).unwrap(), set(5, &[3, 4]));
        assert_eq!(r7.dilate(7).unwrap_err(), SetError::ZeroDilation);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(set(11, &[1]).invert(), set(11, &[1]));
        assert!(set(11, &[0]).invert().is_empty());
        assert_eq!(set(7, &[2, 4]).invert(), set(7, &[4, 2]));
        let all = FpSet::full(101);
        let inv = all.invert();
        assert_eq!(inv.len(), 100);
        assert!(!inv.contains(0));
    }

    #[test]
    fn sumset_examples() {
        let a = set(7, &[0, 1]);
        assert!(a.sumset(&FpSet::empty(7)).unwrap().is_empty());
        assert_eq!(a.sumset(&set(7, &[0, 2])).unwrap(), set(7, &[0, 1, 2, 3]));
        assert_eq!(
            a.sumset(&FpSet::empty(11)).unwrap_err(),
            SetError::ModulusMismatch(7, 11)
        );
        assert_eq!(
            set(7, &[1, 2]).difference_set(&set(7, &[1])).unwrap(),
            set(7, &[0, 1])
        );
        assert_eq!(
            set(7, &[2, 3]).product_set(&set(7, &[3])).unwrap(),
            set(7, &[6, 2])
        );
    }

    #[test]
    fn ratio_set_zero_policy() {
        let a = set(7, &[1, 2]);
        let b = set(7, &[0, 2]);
        assert_eq!(a.ratio_set(&b).unwrap_err(), SetError::ZeroDenominator);
        // 1/2 = 4, 2/2 = 1
        assert_eq!(a.ratio_set_dropping_zero(&b).unwrap(), set(7, &[4, 1]));
        assert_eq!(a.ratio_set(&set(7, &[2])).unwrap(), set(7, &[4, 1]));
    }

    #[test]
    fn direct_sum_examples() {
        let b = set(7, &[0, 1, 2]);
        assert!(set(7, &[0]).is_direct_sum(&b).unwrap());
        assert!(!set(7, &[0, 1]).is_direct_sum(&set(7, &[0, 1])).unwrap());
        assert!(set(7, &[0, 3]).is_direct_sum(&b).unwrap());
    }

    #[test]
    fn runs_examples() {
        let rl = set(7, &[1, 2, 4]).runs();
        assert_eq!(
            rl.runs,
            vec![Run { start: 1, len: 2 }, Run { start: 4, len: 1 }]
        );
        assert_eq!(FpSet::full(13).runs().runs, vec![Run { start: 0, len: 13 }]);
        assert!(FpSet::empty(13).runs().runs.is_empty());
        // wrapping run {5,6,0,1}
        let rl = set(7, &[5, 6, 0, 1, 3]).runs();
        assert_eq!(
            rl.runs,
            vec![Run { start: 3, len: 1 }, Run { start: 5, len: 4 }]
        );
    }

    #[test]
    fn runs_of_nonresidues_mod_23() {
        // squares mod 23
        let r: Vec<u64> = (1..23u64).map(|x| x * x % 23).collect();
        let n = FpSet::from_predicate(23, |x| x != 0 && !r.contains(&x));
        let rl = n.runs();
        assert_eq!(rl.longest(), 4);
        assert!(rl.runs.contains(&Run { start: 19, len: 4 }));
    }

    #[test]
    fn literal_format() {
        let s: FpSet = "p=7; {4,1,2}".parse().unwrap();
        assert_eq!(s, set(7, &[1, 2, 4]));
        assert_eq!(s.to_string(), "p=7; {1,2,4}");
        assert_eq!("p=7;{}".parse::<FpSet>().unwrap(), FpSet::empty(7));
        assert!("p=7; {9}".parse::<FpSet>().is_err());
        assert!("{1,2}".parse::<FpSet>().is_err());
        let lines = parse_set_lines("# fixtures\np=5; {1,4}\n\np=7;{3}\n").unwrap();
        assert_eq!(lines.len(), 2);
    }

    #[test]
    fn complement_and_algebra() {
        let a = set(67, &[0, 5, 66, 64, 63]);
        let c = a.complement();
        assert_eq!(c.len(), 62);
        assert!(a.is_disjoint(&c));
        assert!(a.union(&c).is_full());
        // x ∈ A with x - 1 ∈ A
        assert_eq!(a.intersection(&a.shift(1)), set(67, &[0, 64]));
    }

    #[test]
    fn direct_sum_matches_disjoint_translates() {
        // brute force for small p: |A+B| = |A||B| iff translates A+b are disjoint
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for p in [5u64, 11, 29, 97, 199] {
            for _ in 0..200 {
                let a = FpSet::from_predicate(p, |_| next() % 5 == 0);
                let b = FpSet::from_predicate(p, |_| next() % 7 == 0);
                let translates: Vec<FpSet> = b.iter().map(|t| a.shift(t)).collect();
                let disjoint = translates
                    .iter()
                    .enumerate()
                    .all(|(i, x)| translates[i + 1..].iter().all(|y| x.is_disjoint(y)));
                assert_eq!(a.is_direct_sum(&b).unwrap(), disjoint);
            }
        }
    }

    fn arb_set() -> impl Strategy<Value = FpSet> {
        prop::sample::select(vec![3u64, 7, 13, 61, 127, 257])
            .prop_flat_map(|p| (Just(p), prop::collection::vec(0..p, 0..40)))
            .prop_map(|(p, xs)| FpSet::from_elements(p, xs))
    }

    proptest! {
        #[test]
        fn involutions(a in arb_set(), s in 0u64..1000, l in 1u64..1000) {
            let p = a.p();
            prop_assert_eq!(a.shift(s).shift(p - s % p), a.clone());
            let lam = l % p;
            prop_assume!(lam != 0);
            let inv = inverse_mod(lam, p).unwrap();
            prop_assert_eq!(a.dilate(lam).unwrap().dilate(inv).unwrap(), a.clone());
            let mut no_zero = a.clone();
            no_zero.remove(0);
            prop_assert_eq!(a.invert().invert(), no_zero);
            prop_assert_eq!(a.shift(s).len(), a.len());
        }

        #[test]
        fn sumset_symmetric_and_bounded(a in arb_set(), xs in prop::collection::vec(0u64..1000, 0..30)) {
            let b = FpSet::from_elements(a.p(), xs);
            let ab = a.sumset(&b).unwrap();
            prop_assert_eq!(ab.len(), b.sumset(&a).unwrap().len());
            prop_assert!(ab.len() as u64 <= a.p().min((a.len() * b.len()) as u64));
        }

        #[test]
        fn runs_round_trip(a in arb_set()) {
            let rl = a.runs();
            prop_assert_eq!(rl.to_set(), a.clone());
            let total: u64 = rl.runs.iter().map(|r| r.len).sum();
            prop_assert_eq!(total, a.len() as u64);
            // maximal: the element after each run is a non-member
            if !a.is_full() {
                for r in &rl.runs {
                    prop_assert!(!a.contains((r.start + r.len) % a.p()));
                    prop_assert!(!a.contains((r.start + a.p() - 1) % a.p()));
                }
            }
        }
    }
}
