//! Independent oracles: plain integer and bitmask arithmetic, no library
//! routines beyond the types being inspected.
#![allow(dead_code)]

use bollobas::{BigRational, SetSystem, System};
use num_bigint::BigInt;

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

/// Binomial from a Pascal triangle row.
pub fn choose(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut row = vec![BigInt::from(1)];
    for _ in 0..n {
        let mut next = vec![BigInt::from(1); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row[k].clone()
}

pub fn multinomial(parts: &[usize]) -> BigInt {
    let n: usize = parts.iter().sum();
    parts.iter().fold(factorial(n), |acc, &a| acc / factorial(a))
}

pub fn frac(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn int(x: i64) -> BigRational {
    frac(x, 1)
}

pub fn yue(a: usize, b: usize) -> BigRational {
    frac(1, (a + b + 1) * choose(a + b, a))
}

pub fn inv_choose(a: usize, b: usize) -> BigRational {
    frac(1, choose(a + b, a))
}

pub fn size(mask: u64) -> usize {
    mask.count_ones() as usize
}

pub fn parts(s: &SetSystem) -> Vec<Vec<u64>> {
    s.tuples().iter().map(|t| t.parts().to_vec()).collect()
}

pub fn set_of(system: &System) -> &SetSystem {
    match system {
        System::Set(s) => s,
        System::Subspace(_) => panic!("expected a set system"),
    }
}

fn independent(t: &[u64]) -> bool {
    let mut seen = 0u64;
    for &p in t {
        if seen & p != 0 {
            return false;
        }
        seen |= p;
    }
    true
}

/// Skew: clause (i) for every tuple, and for i < j some p < q with
/// `A_i^p ∩ A_j^q ≠ ∅`.
pub fn skew(ts: &[Vec<u64>]) -> bool {
    ts.iter().all(|t| independent(t))
        && (0..ts.len()).all(|i| {
            (i + 1..ts.len()).all(|j| {
                let d = ts[i].len();
                (0..d).any(|p| (p + 1..d).any(|q| ts[i][p] & ts[j][q] != 0))
            })
        })
}

/// Weak: as skew, with `p ≠ q` in either order.
pub fn weak(ts: &[Vec<u64>]) -> bool {
    ts.iter().all(|t| independent(t))
        && (0..ts.len()).all(|i| {
            (i + 1..ts.len()).all(|j| {
                let d = ts[i].len();
                (0..d).any(|p| (0..d).any(|q| p != q && ts[i][p] & ts[j][q] != 0))
            })
        })
}

/// Bollobás pairs: `A_i ∩ B_j ≠ ∅` for all `i ≠ j`.
pub fn bollobas(ts: &[Vec<u64>]) -> bool {
    ts.iter().all(|t| independent(t))
        && (0..ts.len()).all(|i| (0..ts.len()).all(|j| i == j || ts[i][0] & ts[j][1] != 0))
}

/// Largest skew sequence of distinct candidates, by trying every ordering of
/// every subset.
pub fn brute_force_max_skew(candidates: &[Vec<u64>]) -> usize {
    fn extend(cands: &[Vec<u64>], used: &mut Vec<bool>, seq: &mut Vec<Vec<u64>>, best: &mut usize) {
        *best = (*best).max(seq.len());
        for c in 0..cands.len() {
            if used[c] {
                continue;
            }
            seq.push(cands[c].clone());
            used[c] = true;
            // Every ordering is enumerated; invalid prefixes stay invalid.
            if skew(seq) {
                extend(cands, used, seq, best);
            }
            used[c] = false;
            seq.pop();
        }
    }
    let mut best = 0;
    extend(candidates, &mut vec![false; candidates.len()], &mut Vec::new(), &mut best);
    best
}

/// All `(d+1)^n` pairwise-disjoint d-tuples of subsets of `[n]`.
pub fn all_disjoint_tuples(n: usize, d: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let total = (d + 1).pow(n as u32);
    for code in 0..total {
        let mut t = vec![0u64; d];
        let mut rest = code;
        for e in 0..n {
            let label = rest % (d + 1);
            rest /= d + 1;
            if label > 0 {
                t[label - 1] |= 1 << e;
            }
        }
        out.push(t);
    }
    out
}
