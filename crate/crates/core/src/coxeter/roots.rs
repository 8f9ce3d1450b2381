//! Positive roots and matrix-only length computations, for groups too large
//! to enumerate.

use std::collections::HashSet;

use super::reflection::ReflectionRep;
use super::types::CoxeterSystem;
use super::word::Word;
use crate::error::{Error, Result};
use crate::exact::{QInt, ZMat};

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub rep: ReflectionRep,
    positive: Vec<Vec<QInt>>,
}

impl RootSystem {
    pub fn new(sys: &CoxeterSystem) -> Result<RootSystem> {
        let rep = ReflectionRep::new(sys)?;
        let n = rep.n;
        let mut seen: HashSet<Vec<QInt>> = HashSet::new();
        let mut stack: Vec<Vec<QInt>> = (0..n)
            .map(|i| (0..n).map(|k| if k == i { QInt::ONE } else { QInt::ZERO }).collect())
            .collect();
        let mut positive = Vec::new();
        while let Some(v) = stack.pop() {
            if !seen.insert(v.clone()) {
                continue;
            }
            for j in 0..n {
                let u = reflect(&rep, &v, j)?;
                // every positive root is reached through positive roots
                if is_positive(&rep, &u) && !seen.contains(&u) {
                    stack.push(u);
                }
            }
            positive.push(v);
        }
        positive.sort();
        Ok(RootSystem { rep, positive })
    }

    pub fn positive_roots(&self) -> &[Vec<QInt>] {
        &self.positive
    }

    /// Number of positive roots sent to negative roots.
    pub fn length(&self, m: &ZMat) -> Result<usize> {
        let mut l = 0;
        for r in &self.positive {
            if !is_positive(&self.rep, &apply(m, r)?) {
                l += 1;
            }
        }
        Ok(l)
    }

    /// `l(s·w) < l(w)`, tested on the matrix of `w`.
    pub fn is_left_descent(&self, m: &ZMat, s: usize) -> Result<bool> {
        let mut sm = m.clone();
        self.rep.mul_left(&mut sm, s)?;
        Ok(self.length(&sm)? < self.length(m)?)
    }

    /// Lexicographically least reduced word, by stripping the smallest left
    /// descent at each step.
    pub fn reduced_word(&self, m: &ZMat) -> Result<Word> {
        let mut cur = m.clone();
        let mut l = self.length(&cur)?;
        let mut out = Vec::with_capacity(l);
        while l > 0 {
            let mut stepped = false;
            for s in 0..self.rep.n {
                let mut sm = cur.clone();
                self.rep.mul_left(&mut sm, s)?;
                let ls = self.length(&sm)?;
                if ls < l {
                    out.push(s as u8);
                    cur = sm;
                    l = ls;
                    stepped = true;
                    break;
                }
            }
            debug_assert!(stepped, "a nonidentity element has a left descent");
        }
        Ok(Word(out))
    }

    /// The longest element, grown by right multiplication while length increases.
    pub fn longest_element(&self) -> Result<ZMat> {
        let mut cur = ZMat::identity(self.rep.n, self.rep.field);
        let mut l = 0;
        loop {
            let mut grew = false;
            for s in 0..self.rep.n {
                let mut ms = cur.clone();
                self.rep.mul_right(&mut ms, s)?;
                let ls = self.length(&ms)?;
                if ls > l {
                    cur = ms;
                    l = ls;
                    grew = true;
                    break;
                }
            }
            if !grew {
                return Ok(cur);
            }
        }
    }

    /// A minimal-length element of the conjugacy class of `m`, with its length.
    ///
    /// Explores conjugations `x ↦ s x s` that do not increase length and
    /// restarts whenever the length drops. In a finite Coxeter group every
    /// element reaches the minimal length of its class this way, so when a
    /// whole level is exhausted without a drop the current length is minimal.
    pub fn descend_to_min(&self, m: &ZMat, cap: usize) -> Result<(ZMat, usize)> {
        let mut cur = m.clone();
        let mut l = self.length(&cur)?;
        'restart: loop {
            let mut seen: HashSet<ZMat> = HashSet::from([cur.clone()]);
            let mut queue = vec![cur.clone()];
            while let Some(x) = queue.pop() {
                for s in 0..self.rep.n {
                    let mut y = x.clone();
                    self.rep.mul_left(&mut y, s)?;
                    self.rep.mul_right(&mut y, s)?;
                    let ly = self.length(&y)?;
                    if ly < l {
                        cur = y;
                        l = ly;
                        continue 'restart;
                    }
                    if ly == l && seen.insert(y.clone()) {
                        if seen.len() > cap {
                            return Err(Error::Unsupported(format!(
                                "cyclic-shift class exceeds {cap} elements at length {l}"
                            )));
                        }
                        queue.push(y);
                    }
                }
            }
            return Ok((cur, l));
        }
    }
}

fn apply(m: &ZMat, v: &[QInt]) -> Result<Vec<QInt>> {
    let n = m.n;
    let mut out = vec![QInt::ZERO; n];
    for (r, o) in out.iter_mut().enumerate() {
        for c in 0..n {
            let a = m.data[r * n + c];
            if !a.is_zero() && !v[c].is_zero() {
                *o = o.add(a.mul(v[c], m.field)?)?;
            }
        }
    }
    Ok(out)
}

/// `σ_j(v) = v − B(v, e_j)·e_j`.
fn reflect(rep: &ReflectionRep, v: &[QInt], j: usize) -> Result<Vec<QInt>> {
    let mut b = QInt::ZERO;
    for (k, x) in v.iter().enumerate() {
        b = b.add(x.mul(rep.bilinear(k, j), rep.field)?)?;
    }
    let mut out = v.to_vec();
    out[j] = out[j].sub(b)?;
    Ok(out)
}

/// Roots have all coordinates of one sign; test the first nonzero one.
fn is_positive(rep: &ReflectionRep, v: &[QInt]) -> bool {
    v.iter().map(|x| x.signum(rep.field)).find(|&s| s != 0).is_some_and(|s| s > 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{GroupTable, DEFAULT_CAP};

    #[test]
    fn root_counts() {
        for (spec, n) in [("A3", 6), ("B3", 9), ("H3", 15), ("F4", 24), ("H4", 60), ("E6", 36), ("E7", 63), ("E8", 120)] {
            let r = RootSystem::new(&CoxeterSystem::parse(spec).unwrap()).unwrap();
            assert_eq!(r.positive_roots().len(), n, "{spec}");
        }
    }

    #[test]
    fn lengths_and_words_match_enumeration() {
        let sys = CoxeterSystem::parse("B3").unwrap();
        let t = GroupTable::enumerate(&sys, DEFAULT_CAP).unwrap();
        let r = RootSystem::new(&sys).unwrap();
        for x in 0..t.order() as u32 {
            let w = t.reduced_word(x);
            let m = r.rep.word_matrix(&w).unwrap();
            assert_eq!(r.length(&m).unwrap(), t.length(x));
            assert_eq!(r.reduced_word(&m).unwrap(), w);
        }
        let w0 = r.longest_element().unwrap();
        assert_eq!(r.length(&w0).unwrap(), 9);
    }

    #[test]
    fn descent_reaches_class_minimum() {
        let sys = CoxeterSystem::parse("A3").unwrap();
        let r = RootSystem::new(&sys).unwrap();
        // a conjugate of the Coxeter element 123
        let m = r.rep.word_matrix(&Word::parse("21232", 3).unwrap()).unwrap();
        let (_, l) = r.descend_to_min(&m, 10_000).unwrap();
        assert_eq!(l, 3);
    }
}
