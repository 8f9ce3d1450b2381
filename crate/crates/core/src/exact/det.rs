//! Determinants of matrices with polynomial entries.

use std::collections::HashMap;

use super::poly::MultiPoly;
use crate::error::{Error, Result};

/// Exact determinant of a square matrix of polynomials.
///
/// The matrix is first split into independent blocks (connected components
/// of the nonzero pattern). Each block is expanded by cofactors along its
/// rows with minors memoized on column subsets, which costs about `2^k·k`
/// polynomial products for a block of size `k`.
pub fn poly_det(m: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    let n = m.len();
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare { rows: n, cols: row.len() });
    }
    let arity = m.iter().flatten().map(MultiPoly::arity).next().unwrap_or(0);
    if m.iter().flatten().any(|p| p.arity() != arity) {
        return Err(Error::DimensionMismatch("entries of unequal arity".into()));
    }
    if n == 0 {
        return Ok(MultiPoly::one(arity));
    }
    if n > 63 {
        return Err(Error::Unsupported(format!("polynomial determinant of size {n}")));
    }

    let blocks = blocks(m);
    let mut row_order = Vec::with_capacity(n);
    let mut col_order = Vec::with_capacity(n);
    for (rows, cols) in &blocks {
        if rows.len() != cols.len() {
            return Ok(MultiPoly::zero(arity));
        }
        row_order.extend_from_slice(rows);
        col_order.extend_from_slice(cols);
    }
    let mut det = MultiPoly::one(arity);
    if perm_sign(&row_order) * perm_sign(&col_order) < 0 {
        det = det.neg();
    }
    for (rows, cols) in &blocks {
        let sub: Vec<Vec<&MultiPoly>> =
            rows.iter().map(|&r| cols.iter().map(|&c| &m[r][c]).collect()).collect();
        let d = cofactor_det(&sub, arity)?;
        if d.is_zero() {
            return Ok(d);
        }
        det = det.try_mul(&d)?;
    }
    Ok(det)
}

fn cofactor_det(m: &[Vec<&MultiPoly>], arity: usize) -> Result<MultiPoly> {
    let n = m.len();
    // minors[S] = det of rows 0..|S| restricted to the columns in S
    let mut minors: HashMap<u64, MultiPoly> = HashMap::new();
    minors.insert(0, MultiPoly::one(arity));
    for (k, row) in m.iter().enumerate() {
        let mut next: HashMap<u64, MultiPoly> = HashMap::new();
        let mut keys: Vec<u64> = minors.keys().copied().collect();
        keys.sort_unstable();
        for s in keys {
            let minor = &minors[&s];
            for (j, entry) in row.iter().enumerate() {
                if s >> j & 1 == 1 || entry.is_zero() {
                    continue;
                }
                // j sits at position `pos` of S ∪ {j}; the entry is in row k
                let pos = (s & ((1u64 << j) - 1)).count_ones() as usize;
                let mut t = minor.try_mul(entry)?;
                if (k + pos) % 2 == 1 {
                    t = t.neg();
                }
                let key = s | 1 << j;
                match next.get_mut(&key) {
                    Some(acc) => *acc = acc.try_add(&t)?,
                    None => {
                        next.insert(key, t);
                    }
                }
            }
        }
        next.retain(|_, p| !p.is_zero());
        minors = next;
    }
    Ok(minors.remove(&((1u64 << n) - 1)).unwrap_or_else(|| MultiPoly::zero(arity)))
}

/// Connected components of the bipartite row/column graph of nonzero entries.
fn blocks(m: &[Vec<MultiPoly>]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = m.len();
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nxt = p[y];
            p[y] = r;
            y = nxt;
        }
        r
    }
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if !e.is_zero() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, n + j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut out: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
    for v in 0..2 * n {
        let r = find(&mut parent, v);
        let slot = match out.iter().position(|(root, _, _)| *root == r) {
            Some(p) => p,
            None => {
                out.push((r, vec![], vec![]));
                out.len() - 1
            }
        };
        if v < n {
            out[slot].1.push(v);
        } else {
            out[slot].2.push(v - n);
        }
    }
    out.into_iter().map(|(_, r, c)| (r, c)).collect()
}

fn perm_sign(p: &[usize]) -> i32 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quad::QuadScalar;
    use proptest::prelude::*;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(3, i)
    }

    #[test]
    fn two_by_two_example() {
        let m = vec![
            vec![x(0).try_sub(&x(1)).unwrap(), x(1)],
            vec![MultiPoly::zero(3), x(0).try_add(&x(1)).unwrap()],
        ];
        let expect = x(0).pow(2).unwrap().try_sub(&x(1).pow(2).unwrap()).unwrap();
        assert_eq!(poly_det(&m).unwrap(), expect);
    }

    #[test]
    fn one_by_one_and_diagonal() {
        let s = x(0).try_add(&x(1)).unwrap();
        assert_eq!(poly_det(&[vec![s.clone()]]).unwrap(), s);
        let z = MultiPoly::zero(3);
        let m = vec![
            vec![x(0), z.clone(), z.clone()],
            vec![z.clone(), x(1), z.clone()],
            vec![z.clone(), z.clone(), x(2)],
        ];
        assert_eq!(poly_det(&m).unwrap(), x(0).try_mul(&x(1)).unwrap().try_mul(&x(2)).unwrap());
    }

    #[test]
    fn permuted_blocks_keep_sign() {
        let z = MultiPoly::zero(3);
        // anti-diagonal 2x2: det = −x0·x1
        let m = vec![vec![z.clone(), x(0)], vec![x(1), z]];
        assert_eq!(poly_det(&m).unwrap(), x(0).try_mul(&x(1)).unwrap().neg());
    }

    #[test]
    fn non_square_rejected() {
        let m = vec![vec![x(0), x(1)]];
        assert!(matches!(poly_det(&m), Err(Error::NotSquare { .. })));
    }

    fn leibniz(m: &[Vec<MultiPoly>]) -> MultiPoly {
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = MultiPoly::zero(3);
        loop {
            let mut t = MultiPoly::one(3);
            for (i, &j) in perm.iter().enumerate() {
                t = t.try_mul(&m[i][j]).unwrap();
            }
            if perm_sign(&perm) < 0 {
                t = t.neg();
            }
            total = total.try_add(&t).unwrap();
            // next permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        total
    }

    fn arb_linear() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(-2i64..3, 3).prop_map(|c| {
            let mut p = MultiPoly::zero(3);
            for (i, k) in c.into_iter().enumerate() {
                p = p.try_add(&x(i).scale(&QuadScalar::from_int(k)).unwrap()).unwrap();
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn agrees_with_leibniz(n in 1usize..5, entries in prop::collection::vec(arb_linear(), 16)) {
            let m: Vec<Vec<MultiPoly>> =
                (0..n).map(|i| entries[i * n..(i + 1) * n].to_vec()).collect();
            prop_assert_eq!(poly_det(&m).unwrap(), leibniz(&m));
        }
    }
}
