//! Counting and enumeration helpers: multinomials, combinations, multiset
//! permutations.

use num_bigint::BigUint;
use num_traits::One;

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `(Σaᵢ)! / Πaᵢ!`.
pub fn multinomial(parts: &[u32]) -> BigUint {
    let total: u64 = parts.iter().map(|&a| a as u64).sum();
    let mut acc = factorial(total);
    for &a in parts {
        acc /= factorial(a as u64);
    }
    acc
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc·(n−i) is divisible by (i+1)
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Rearrange `v` into the next lexicographic permutation; false at the last one.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).expect("a larger element exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// All distinct arrangements of the multiset with `counts[i]` copies of
/// letter `i`, in lexicographic order.
pub fn multiset_permutations(counts: &[u32]) -> MultisetPermutations {
    let mut first = Vec::new();
    for (letter, &c) in counts.iter().enumerate() {
        first.extend(std::iter::repeat(letter as u8).take(c as usize));
    }
    MultisetPermutations { current: Some(first) }
}

pub struct MultisetPermutations {
    current: Option<Vec<u8>>,
}

impl Iterator for MultisetPermutations {
    type Item = Vec<u8>;
    fn next(&mut self) -> Option<Vec<u8>> {
        let out = self.current.take()?;
        let mut nxt = out.clone();
        if next_permutation(&mut nxt) {
            self.current = Some(nxt);
        }
        Some(out)
    }
}

/// k-subsets of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

pub fn combinations(n: usize, k: usize) -> Combinations {
    Combinations { n, current: if k <= n { Some((0..k).collect()) } else { None } }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut nxt = out.clone();
        if let Some(i) = (0..k).rev().find(|&i| nxt[i] < self.n - k + i) {
            nxt[i] += 1;
            for j in i + 1..k {
                nxt[j] = nxt[j - 1] + 1;
            }
            self.current = Some(nxt);
        }
        Some(out)
    }
}

/// The `rank`-th k-subset of `0..n` in lexicographic order.
pub fn unrank_combination(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut start = 0;
    for slot in 0..k {
        let remaining = k - slot - 1;
        let mut x = start;
        loop {
            // subsets whose next element is x
            let c = binomial((n - x - 1) as u64, remaining as u64);
            if rank < c {
                break;
            }
            rank -= c;
            x += 1;
        }
        out.push(x);
        start = x + 1;
    }
    out
}

/// All compositions of `total` into `parts` nonnegative parts, ascending lexicographically.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; parts];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur[i] = a;
            rec(i + 1, left - a, cur, out);
        }
    }
    if parts == 0 {
        if total == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(0, total, &mut cur, &mut out);
    out
}

/// Partitions of `n` as weakly decreasing parts, in reverse lexicographic
/// order: `(n)`, `(n-1,1)`, … , `(1,…,1)`.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=left.min(max)).rev() {
            cur.push(p);
            rec(left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}
