//! Full enumeration of finite Coxeter groups into multiplication tables.
//!
//! Elements are numbered in breadth-first order from the identity, right
//! multiplying by generators in index order. The numbering depends only on
//! the group and its generator order, not on the carrier used to represent
//! elements, so matrix, dihedral and product carriers agree on ids.

use std::collections::HashMap;
use std::hash::Hash;

use super::reflection::ReflectionRep;
use super::types::{CoxeterSystem, CoxeterType};
use super::word::Word;
use crate::error::{Error, Result};
use crate::exact::ZMat;

pub const DEFAULT_CAP: u128 = 1_000_000;

/// An element of the dihedral group of order 2m written ρ^k·s₁^f with ρ = s₁s₂.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DihedralElement {
    pub rotation: u32,
    pub reflected: bool,
}

impl DihedralElement {
    pub const IDENTITY: DihedralElement = DihedralElement { rotation: 0, reflected: false };

    pub fn generator(i: usize, m: u32) -> DihedralElement {
        let rotation = if i == 0 { 0 } else { m - 1 };
        DihedralElement { rotation, reflected: true }
    }

    pub fn mul(self, o: DihedralElement, m: u32) -> DihedralElement {
        let b = if self.reflected { (m - o.rotation % m) % m } else { o.rotation % m };
        DihedralElement { rotation: (self.rotation + b) % m, reflected: self.reflected ^ o.reflected }
    }
}

trait Carrier {
    type E: Clone + Eq + Hash;
    fn identity(&self) -> Self::E;
    fn mul_gen(&self, x: &Self::E, i: usize) -> Result<Self::E>;
}

struct MatrixCarrier(ReflectionRep);

impl Carrier for MatrixCarrier {
    type E = ZMat;
    fn identity(&self) -> ZMat {
        ZMat::identity(self.0.n, self.0.field)
    }
    fn mul_gen(&self, x: &ZMat, i: usize) -> Result<ZMat> {
        let mut y = x.clone();
        self.0.mul_right(&mut y, i)?;
        Ok(y)
    }
}

struct DihedralCarrier(u32);

impl Carrier for DihedralCarrier {
    type E = DihedralElement;
    fn identity(&self) -> DihedralElement {
        DihedralElement::IDENTITY
    }
    fn mul_gen(&self, x: &DihedralElement, i: usize) -> Result<DihedralElement> {
        Ok(x.mul(DihedralElement::generator(i, self.0), self.0))
    }
}

/// Tuples of component element ids; generator `i` acts on component
/// `slot[i].0` as its canonical generator `slot[i].1`.
struct ProductCarrier {
    tables: Vec<GroupTable>,
    slot: Vec<(usize, usize)>,
}

impl Carrier for ProductCarrier {
    type E = Vec<u32>;
    fn identity(&self) -> Vec<u32> {
        vec![0; self.tables.len()]
    }
    fn mul_gen(&self, x: &Vec<u32>, i: usize) -> Result<Vec<u32>> {
        let (c, k) = self.slot[i];
        let mut y = x.clone();
        y[c] = self.tables[c].mul_gen(y[c], k);
        Ok(y)
    }
}

/// Fully enumerated group: right and left generator actions and lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    rank: usize,
    gen_mult: Vec<u32>,
    left_mult: Vec<u32>,
    lengths: Vec<u16>,
}

impl GroupTable {
    /// Enumerate `sys`, refusing groups whose order exceeds `cap`.
    pub fn enumerate(sys: &CoxeterSystem, cap: u128) -> Result<GroupTable> {
        let order = sys.order();
        if order > cap {
            return Err(Error::TooLarge { spec: sys.type_spec(), order, cap });
        }
        let comps = sys.components();
        let canonical = comps.len() == 1 && comps[0].nodes.iter().enumerate().all(|(k, &v)| k == v);
        if canonical {
            let kind = comps[0].kind;
            return match kind {
                CoxeterType::A(2) | CoxeterType::B(2) | CoxeterType::I2(_) => {
                    bfs(&DihedralCarrier(sys.m(0, 1)), sys.rank(), order)
                }
                _ => bfs(&MatrixCarrier(ReflectionRep::new(sys)?), sys.rank(), order),
            };
        }
        let mut tables = Vec::with_capacity(comps.len());
        let mut slot = vec![(0, 0); sys.rank()];
        for (c, comp) in comps.iter().enumerate() {
            tables.push(GroupTable::enumerate(&CoxeterSystem::irreducible(comp.kind), cap)?);
            for (k, &v) in comp.nodes.iter().enumerate() {
                slot[v] = (c, k);
            }
        }
        bfs(&ProductCarrier { tables, slot }, sys.rank(), order)
    }

    /// Rebuild from stored right actions and lengths (the cache format).
    pub fn from_parts(rank: usize, gen_mult: Vec<u32>, lengths: Vec<u16>) -> Result<GroupTable> {
        let order = lengths.len();
        if gen_mult.len() != order * rank || order == 0 || lengths[0] != 0 {
            return Err(Error::Format("inconsistent group table".into()));
        }
        if gen_mult.iter().any(|&y| y as usize >= order) {
            return Err(Error::Format("element id out of range".into()));
        }
        let mut parent = vec![(u32::MAX, 0u8); order];
        for x in 1..order {
            let i = (0..rank)
                .find(|&i| lengths[gen_mult[x * rank + i] as usize] + 1 == lengths[x])
                .ok_or_else(|| Error::Format(format!("element {x} has no descent")))?;
            let y = gen_mult[x * rank + i];
            if y as usize >= x {
                return Err(Error::Format("elements not in length order".into()));
            }
            parent[x] = (y, i as u8);
        }
        let left_mult = derive_left(rank, &gen_mult, &parent);
        let t = GroupTable { rank, gen_mult, left_mult, lengths };
        t.check_involutions()?;
        Ok(t)
    }

    fn check_involutions(&self) -> Result<()> {
        for x in 0..self.order() as u32 {
            for i in 0..self.rank {
                if self.mul_gen(self.mul_gen(x, i), i) != x || self.left_gen(self.left_gen(x, i), i) != x {
                    return Err(Error::Format("generator action is not an involution".into()));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.lengths.len()
    }

    pub fn identity(&self) -> u32 {
        0
    }

    /// `x·s_i`.
    #[inline]
    pub fn mul_gen(&self, x: u32, i: usize) -> u32 {
        self.gen_mult[x as usize * self.rank + i]
    }

    /// `s_i·x`.
    #[inline]
    pub fn left_gen(&self, x: u32, i: usize) -> u32 {
        self.left_mult[x as usize * self.rank + i]
    }

    /// `s_i·x·s_i`.
    #[inline]
    pub fn conj_gen(&self, x: u32, i: usize) -> u32 {
        self.left_gen(self.mul_gen(x, i), i)
    }

    #[inline]
    pub fn length(&self, x: u32) -> usize {
        self.lengths[x as usize] as usize
    }

    pub fn lengths(&self) -> &[u16] {
        &self.lengths
    }

    pub fn gen_mult_flat(&self) -> &[u32] {
        &self.gen_mult
    }

    pub fn element_of(&self, w: &Word) -> u32 {
        w.letters().iter().fold(0, |x, &l| self.mul_gen(x, l as usize))
    }

    /// `x·y`.
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.reduced_word(y).letters().iter().fold(x, |acc, &l| self.mul_gen(acc, l as usize))
    }

    pub fn inverse(&self, x: u32) -> u32 {
        self.element_of(&self.reduced_word(x).reversed())
    }

    /// The lexicographically least reduced word: repeatedly strip the
    /// smallest left descent.
    pub fn reduced_word(&self, mut x: u32) -> Word {
        let mut out = Vec::with_capacity(self.length(x));
        while self.length(x) > 0 {
            let i = (0..self.rank)
                .find(|&i| self.length(self.left_gen(x, i)) < self.length(x))
                .expect("nonidentity elements have a left descent");
            out.push(i as u8);
            x = self.left_gen(x, i);
        }
        Word(out)
    }

    pub fn longest_element(&self) -> u32 {
        (self.order() - 1) as u32
    }
}

fn bfs<C: Carrier>(carrier: &C, rank: usize, order: u128) -> Result<GroupTable> {
    let cap = order as usize;
    let mut ids: HashMap<C::E, u32> = HashMap::with_capacity(cap);
    let mut elems: Vec<Option<C::E>> = Vec::with_capacity(cap);
    let mut lengths: Vec<u16> = Vec::with_capacity(cap);
    let mut parent: Vec<(u32, u8)> = Vec::with_capacity(cap);
    let mut gen_mult = vec![u32::MAX; cap * rank];
    let e = carrier.identity();
    ids.insert(e.clone(), 0);
    elems.push(Some(e));
    lengths.push(0);
    parent.push((u32::MAX, 0));
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head].take().expect("each element is expanded once");
        for i in 0..rank {
            let y = carrier.mul_gen(&x, i)?;
            let next = ids.len() as u32;
            let id = *ids.entry(y.clone()).or_insert(next);
            if id == next {
                if id as usize >= cap {
                    return Err(Error::Precondition(format!("more than {order} elements generated")));
                }
                elems.push(Some(y));
                lengths.push(lengths[head] + 1);
                parent.push((head as u32, i as u8));
            }
            gen_mult[head * rank + i] = id;
        }
        head += 1;
    }
    if elems.len() as u128 != order {
        return Err(Error::Precondition(format!(
            "enumerated {} elements, expected {order}",
            elems.len()
        )));
    }
    let left_mult = derive_left(rank, &gen_mult, &parent);
    Ok(GroupTable { rank, gen_mult, left_mult, lengths })
}

/// `s_i·x = (s_i·y)·s_j` where `x = y·s_j` is the recorded parent edge.
fn derive_left(rank: usize, gen_mult: &[u32], parent: &[(u32, u8)]) -> Vec<u32> {
    let order = parent.len();
    let mut left = vec![0u32; order * rank];
    for i in 0..rank {
        left[i] = gen_mult[i];
    }
    for x in 1..order {
        let (y, j) = parent[x];
        for i in 0..rank {
            let sy = left[y as usize * rank + i];
            left[x * rank + i] = gen_mult[sy as usize * rank + j as usize];
        }
    }
    left
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(spec: &str) -> GroupTable {
        GroupTable::enumerate(&CoxeterSystem::parse(spec).unwrap(), DEFAULT_CAP).unwrap()
    }

    #[test]
    fn classical_orders() {
        for (spec, order) in [
            ("A1", 2), ("A3", 24), ("A4", 120), ("B3", 48), ("B4", 384), ("D4", 192),
            ("H3", 120), ("F4", 1152), ("I2(5)", 10), ("I2(8)", 16), ("A1xA2", 12), ("A2xB2", 48),
        ] {
            let t = table(spec);
            assert_eq!(t.order(), order, "{spec}");
        }
    }

    #[test]
    fn h3_longest_length() {
        let t = table("H3");
        assert_eq!(t.length(t.longest_element()), 15);
    }

    #[test]
    fn dihedral_and_matrix_carriers_agree() {
        let sys = CoxeterSystem::parse("B2").unwrap();
        let d = bfs(&DihedralCarrier(4), 2, 8).unwrap();
        let m = bfs(&MatrixCarrier(ReflectionRep::new(&sys).unwrap()), 2, 8).unwrap();
        assert_eq!(d, m);
        let h = CoxeterSystem::parse("I2(5)").unwrap();
        let d = bfs(&DihedralCarrier(5), 2, 10).unwrap();
        let m = bfs(&MatrixCarrier(ReflectionRep::new(&h).unwrap()), 2, 10).unwrap();
        assert_eq!(d, m);
    }

    #[test]
    fn braid_relation_in_a2() {
        let t = table("A2");
        let a = t.element_of(&Word::parse("121", 2).unwrap());
        let b = t.element_of(&Word::parse("212", 2).unwrap());
        assert_eq!(a, b);
        assert_eq!(t.element_of(&Word::empty()), 0);
    }

    #[test]
    fn cap_refuses_e7() {
        let sys = CoxeterSystem::parse("E7").unwrap();
        let err = GroupTable::enumerate(&sys, DEFAULT_CAP).unwrap_err();
        assert!(matches!(err, Error::TooLarge { order: 2_903_040, cap: 1_000_000, .. }));
    }

    #[test]
    fn table_invariants() {
        for spec in ["A3", "B3", "H3", "D4", "A1xI2(7)"] {
            let t = table(spec);
            let sys = CoxeterSystem::parse(spec).unwrap();
            for x in 0..t.order() as u32 {
                for i in 0..t.rank() {
                    assert_eq!(t.mul_gen(t.mul_gen(x, i), i), x);
                    assert_eq!(t.length(t.mul_gen(x, i)).abs_diff(t.length(x)), 1);
                    assert_eq!(t.length(t.left_gen(x, i)).abs_diff(t.length(x)), 1);
                }
                let w = t.reduced_word(x);
                assert_eq!(w.len(), t.length(x));
                assert_eq!(t.element_of(&w), x);
            }
            for i in 0..t.rank() {
                for j in 0..t.rank() {
                    let w = Word([i as u8, j as u8].repeat(sys.m(i, j) as usize));
                    assert_eq!(t.element_of(&w), 0);
                }
            }
        }
    }

    #[test]
    fn relabeled_and_product_tables_are_groups() {
        let h3 = CoxeterSystem::parse("H3").unwrap().relabel(&[2, 1, 0]).unwrap();
        let t = GroupTable::enumerate(&h3, DEFAULT_CAP).unwrap();
        assert_eq!(t.order(), 120);
        assert_eq!(t.element_of(&Word::parse("2323232323", 3).unwrap()), 0);
        let rebuilt = GroupTable::from_parts(3, t.gen_mult.clone(), t.lengths.clone()).unwrap();
        assert_eq!(rebuilt, t);
    }

    #[test]
    fn bfs_length_is_minimal_word_length() {
        // exhaustive words up to length 6
        for spec in ["A2", "B2", "I2(5)"] {
            let t = table(spec);
            let mut best = vec![usize::MAX; t.order()];
            let mut frontier = vec![(0u32, 0usize)];
            best[0] = 0;
            while let Some((x, len)) = frontier.pop() {
                if len == 6 {
                    continue;
                }
                for i in 0..2 {
                    let y = t.mul_gen(x, i);
                    if len + 1 < best[y as usize] {
                        best[y as usize] = len + 1;
                    }
                    frontier.push((y, len + 1));
                }
            }
            for x in 0..t.order() {
                if best[x] != usize::MAX {
                    assert_eq!(best[x], t.length(x as u32), "{spec}");
                }
            }
        }
    }

    #[test]
    fn inverse_and_product() {
        let t = table("B3");
        for x in 0..t.order() as u32 {
            assert_eq!(t.mul(x, t.inverse(x)), 0);
        }
    }
}
