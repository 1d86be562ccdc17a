//! Brute-force oracles shared by the integration tests and the acceptance
//! target. Everything here works on plain Vec<u64> and loops, never on the
//! library's own set algebra.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use residue_lab::field::is_prime;
use residue_lab::FpSet;

pub fn small_primes(hi: u64) -> Vec<u64> {
    (2..=hi).filter(|&n| is_prime(n)).collect()
}

pub fn legendre_naive(x: u64, p: u64) -> i8 {
    let x = x % p;
    if x == 0 {
        return 0;
    }
    if (1..p).any(|y| y * y % p == x) {
        1
    } else {
        -1
    }
}

pub fn random_prime(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> u64 {
    let primes: Vec<u64> = small_primes(hi).into_iter().filter(|&p| p >= lo).collect();
    *primes.choose(rng).expect("some prime in range")
}

pub fn random_subset(rng: &mut ChaCha8Rng, p: u64, max_len: usize) -> Vec<u64> {
    let len = rng.random_range(0..=max_len.min(p as usize));
    let mut out = BTreeSet::new();
    while out.len() < len {
        out.insert(rng.random_range(0..p));
    }
    out.into_iter().collect()
}

pub fn set(p: u64, elems: &[u64]) -> FpSet {
    FpSet::from_elements(p, elems.iter().copied())
}

pub fn sorted(set: &FpSet) -> Vec<u64> {
    set.iter().collect()
}

pub fn inv_naive(x: u64, p: u64) -> u64 {
    (1..p).find(|&y| x * y % p == 1).expect("nonzero residue")
}

/// {x ∈ A : x + s ∈ A for every s}
pub fn shifted_add(p: u64, a: &[u64], shifts: &[u64]) -> Vec<u64> {
    (0..p)
        .filter(|&x| a.contains(&x) && shifts.iter().all(|&s| a.contains(&((x + s) % p))))
        .collect()
}

/// {x ∈ A : x·s ∈ A for every s}
pub fn shifted_mul(p: u64, a: &[u64], shifts: &[u64]) -> Vec<u64> {
    (0..p)
        .filter(|&x| a.contains(&x) && shifts.iter().all(|&s| a.contains(&(x * s % p))))
        .collect()
}

pub fn sumset(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = BTreeSet::new();
    for &x in a {
        for &y in b {
            out.insert((x + y) % p);
        }
    }
    out.into_iter().collect()
}

/// Representation counts r(λ) for λ = a op b, by enumeration of pairs.
pub fn reps(p: u64, a: &[u64], b: &[u64], op: char) -> Vec<u64> {
    let mut counts = vec![0u64; p as usize];
    for &x in a {
        for &y in b {
            let l = match op {
                '+' => (x + y) % p,
                '-' => (x + p - y) % p,
                '*' => x * y % p,
                '/' => {
                    if y == 0 {
                        continue;
                    }
                    x * inv_naive(y, p) % p
                }
                _ => unreachable!(),
            };
            counts[l as usize] += 1;
        }
    }
    counts
}

/// #{(a1, a2, b1, b2) : a1 - b1 = a2 - b2}
pub fn energy_quadruples(p: u64, a: &[u64], b: &[u64]) -> u128 {
    let mut n = 0u128;
    for &a1 in a {
        for &a2 in a {
            for &b1 in b {
                for &b2 in b {
                    if (a1 + p - b1) % p == (a2 + p - b2) % p {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

/// Candidates x with x + pattern ⊆ target.
pub fn candidates(p: u64, target: &[u64], pattern: &[u64]) -> Vec<u64> {
    (0..p)
        .filter(|&x| pattern.iter().all(|&a| target.contains(&((x + a) % p))))
        .collect()
}

/// The candidates, and for each a bitmask of the candidates whose translate
/// meets its own. Needs at most 64 candidates.
pub fn packing_graph(p: u64, target: &[u64], pattern: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let cand = candidates(p, target, pattern);
    assert!(cand.len() <= 64, "bitmask graph limited to 64 candidates");
    let translate = |x: u64| -> BTreeSet<u64> { pattern.iter().map(|&a| (x + a) % p).collect() };
    let translates: Vec<BTreeSet<u64>> = cand.iter().map(|&x| translate(x)).collect();
    let mut adj = vec![0u64; cand.len()];
    for (i, ti) in translates.iter().enumerate() {
        for (j, tj) in translates.iter().enumerate() {
            if i != j && !ti.is_disjoint(tj) {
                adj[i] |= 1 << j;
            }
        }
    }
    (cand, adj)
}

/// Largest subset of candidates with pairwise disjoint translates, by
/// enumerating every subset. Needs at most 24 candidates.
pub fn packing_by_subsets(adj: &[u64]) -> usize {
    let n = adj.len();
    assert!(n <= 24, "subset oracle limited to 24 candidates");
    let mut best = 0;
    for mask in 0u64..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let mut ok = true;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if adj[i] & mask != 0 {
                ok = false;
                break;
            }
        }
        if ok {
            best = size;
        }
    }
    best
}

/// Same answer as `packing_by_subsets` for windows [x, x+h), by include /
/// exclude branching over arbitrary candidate counts (pruned only by the
/// remaining count). Linear windows may not pass p-1.
pub fn packing_by_branching(p: u64, target: &[u64], h: u64, cyclic: bool) -> usize {
    let cand: Vec<u64> = (0..p)
        .filter(|&x| cyclic || x + h <= p)
        .filter(|&x| (0..h).all(|a| target.contains(&((x + a) % p))))
        .collect();
    let clash = |x: u64, y: u64| {
        x != y
            && if cyclic {
                (y + p - x) % p < h || (x + p - y) % p < h
            } else {
                x.abs_diff(y) < h
            }
    };
    fn go(rest: &[u64], chosen: &mut Vec<u64>, best: &mut usize, clash: &dyn Fn(u64, u64) -> bool) {
        if chosen.len() + rest.len() <= *best {
            return;
        }
        let Some((&x, tail)) = rest.split_first() else {
            *best = chosen.len();
            return;
        };
        if chosen.iter().all(|&y| !clash(x, y)) {
            chosen.push(x);
            go(tail, chosen, best, clash);
            chosen.pop();
        }
        go(tail, chosen, best, clash);
    }
    let mut best = 0;
    go(&cand, &mut Vec::new(), &mut best, &clash);
    best
}
