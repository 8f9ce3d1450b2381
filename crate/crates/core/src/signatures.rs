//! Signatures and exact word counts: `N_α(g)` = number of words with letter
//! counts α whose product is g, summed per conjugacy class into `V_α`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinat::{compositions, multinomial, multiset_permutations};
use crate::conjugacy::ClassTable;
use crate::coxeter::{GroupTable, Word};
use crate::error::{Error, Result};
use crate::exact::QuadScalar;

/// Default cap on live DP cells (two layers × |W|).
pub const DEFAULT_BUDGET: u128 = 120_000_000;
/// Cap used by extended runs (E6 cuspidal rows peak near 1.5e8 cells).
pub const EXTENDED_BUDGET: u128 = 400_000_000;
/// Default cap on the number of words the brute-force oracle may visit.
pub const BRUTE_FORCE_LIMIT: u128 = 20_000_000;

pub fn signature_of(w: &Word, rank: usize) -> Vec<u32> {
    w.signature(rank)
}

/// `α || β`.
pub fn splice(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = a.to_vec();
    out.extend_from_slice(b);
    out
}

/// `|E_α| = |α|! / Π aᵢ!`.
pub fn word_count(alpha: &[u32]) -> BigUint {
    multinomial(alpha)
}

/// `V_α`: per-class word counts, indexed by class id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureVector {
    pub alpha: Vec<u32>,
    pub entries: Vec<BigUint>,
}

impl SignatureVector {
    pub fn total(&self) -> BigUint {
        self.entries.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.entries.len()).filter(|&c| !Zero::is_zero(&self.entries[c])).collect()
    }

    pub fn entry(&self, c: usize) -> &BigUint {
        &self.entries[c]
    }
}

trait Count: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add_from(&mut self, o: &Self);
    fn is_zero(&self) -> bool;
    fn to_big(&self) -> BigUint;
}

macro_rules! prim_count {
    ($t:ty) => {
        impl Count for $t {
            fn zero() -> Self {
                0
            }
            fn one() -> Self {
                1
            }
            #[inline]
            fn add_from(&mut self, o: &Self) {
                // widths are chosen so the largest multinomial fits
                *self += *o;
            }
            fn is_zero(&self) -> bool {
                *self == 0
            }
            fn to_big(&self) -> BigUint {
                BigUint::from(*self)
            }
        }
    };
}
prim_count!(u64);
prim_count!(u128);

impl Count for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        BigUint::from(1u32)
    }
    fn add_from(&mut self, o: &Self) {
        *self += o;
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Width {
    U64,
    U128,
    Big,
}

fn width_for(max_count: &BigUint) -> Width {
    if max_count.to_u64().is_some() {
        Width::U64
    } else if max_count.to_u128().is_some() {
        Width::U128
    } else {
        Width::Big
    }
}

/// One DP layer: all tracked β with the same |β|.
struct Layered<'a, C> {
    t: &'a GroupTable,
    layer: HashMap<Vec<u32>, Vec<C>>,
}

impl<'a, C: Count> Layered<'a, C> {
    fn new(t: &'a GroupTable) -> Self {
        let mut start = vec![C::zero(); t.order()];
        start[t.identity() as usize] = C::one();
        let mut layer = HashMap::new();
        layer.insert(vec![0u32; t.rank()], start);
        Layered { t, layer }
    }

    /// Replace the layer by `betas`, each one letter longer than the current layer.
    fn advance(&mut self, betas: &[Vec<u32>]) {
        let t = self.t;
        let prev = &self.layer;
        let computed: Vec<(Vec<u32>, Vec<C>)> = betas
            .par_iter()
            .map(|beta| {
                let mut out = vec![C::zero(); t.order()];
                let mut below = beta.clone();
                for i in 0..beta.len() {
                    if beta[i] == 0 {
                        continue;
                    }
                    below[i] -= 1;
                    if let Some(src) = prev.get(&below) {
                        // N_β(g) += N_{β−eᵢ}(g·sᵢ)
                        for (g, cell) in out.iter_mut().enumerate() {
                            let v = &src[t.mul_gen(g as u32, i) as usize];
                            if !v.is_zero() {
                                cell.add_from(v);
                            }
                        }
                    }
                    below[i] += 1;
                }
                (beta.clone(), out)
            })
            .collect();
        self.layer = computed.into_iter().collect();
    }

    fn counts(&self, beta: &[u32]) -> Option<&Vec<C>> {
        self.layer.get(beta)
    }

    fn class_vector(&self, beta: &[u32], classes: &ClassTable) -> SignatureVector {
        let counts = &self.layer[beta];
        let mut sums = vec![C::zero(); classes.len()];
        for (g, v) in counts.iter().enumerate() {
            if !v.is_zero() {
                sums[classes.class_of(g as u32)].add_from(v);
            }
        }
        SignatureVector { alpha: beta.to_vec(), entries: sums.iter().map(|s| s.to_big()).collect() }
    }
}

/// Levels of the down-closure of `alphas`, each sorted ascending.
fn down_closure(alphas: &[Vec<u32>]) -> Vec<Vec<Vec<u32>>> {
    let max = alphas.iter().map(|a| a.iter().sum::<u32>()).max().unwrap_or(0) as usize;
    let mut levels: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); max + 1];
    for a in alphas {
        let mut cur = vec![0u32; a.len()];
        loop {
            levels[cur.iter().sum::<u32>() as usize].insert(cur.clone());
            // odometer over the box 0..=a
            let mut i = 0;
            while i < a.len() && cur[i] == a[i] {
                cur[i] = 0;
                i += 1;
            }
            if i == a.len() {
                break;
            }
            cur[i] += 1;
        }
    }
    levels.into_iter().map(|s| s.into_iter().collect()).collect()
}

fn peak_cells(levels: &[Vec<Vec<u32>>], order: usize) -> u128 {
    let mut peak = levels.first().map_or(0, |l| l.len()) as u128;
    for w in levels.windows(2) {
        peak = peak.max((w[0].len() + w[1].len()) as u128);
    }
    peak * order as u128
}

fn check_alpha(t: &GroupTable, alpha: &[u32]) -> Result<()> {
    if alpha.len() != t.rank() {
        return Err(Error::InvalidSignature(format!(
            "signature has {} entries, the group has rank {}",
            alpha.len(),
            t.rank()
        )));
    }
    Ok(())
}

fn sweep<C: Count>(t: &GroupTable, levels: &[Vec<Vec<u32>>], mut visit: impl FnMut(&Layered<C>, &[Vec<u32>])) {
    let mut dp = Layered::<C>::new(t);
    visit(&dp, &levels[0]);
    for level in &levels[1..] {
        dp.advance(level);
        visit(&dp, level);
    }
}

/// `N_α(g)` for every element id g.
pub fn count_words_by_element(t: &GroupTable, alpha: &[u32], budget: u128) -> Result<Vec<BigUint>> {
    check_alpha(t, alpha)?;
    let levels = down_closure(&[alpha.to_vec()]);
    let needed = peak_cells(&levels, t.order());
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut out = Vec::new();
    match width_for(&word_count(alpha)) {
        Width::U64 => sweep::<u64>(t, &levels, |dp, _| {
            if let Some(c) = dp.counts(alpha) {
                out = c.iter().map(Count::to_big).collect();
            }
        }),
        Width::U128 => sweep::<u128>(t, &levels, |dp, _| {
            if let Some(c) = dp.counts(alpha) {
                out = c.iter().map(Count::to_big).collect();
            }
        }),
        Width::Big => sweep::<BigUint>(t, &levels, |dp, _| {
            if let Some(c) = dp.counts(alpha) {
                out = c.clone();
            }
        }),
    }
    Ok(out)
}

pub fn signature_vector(t: &GroupTable, classes: &ClassTable, alpha: &[u32]) -> Result<SignatureVector> {
    signature_vector_with_budget(t, classes, alpha, DEFAULT_BUDGET)
}

pub fn signature_vector_with_budget(
    t: &GroupTable,
    classes: &ClassTable,
    alpha: &[u32],
    budget: u128,
) -> Result<SignatureVector> {
    Ok(signature_vectors(t, classes, &[alpha.to_vec()], budget)?.remove(0))
}

/// Vectors for several signatures, sharing DP layers where the budget allows.
/// Output order follows `alphas`.
pub fn signature_vectors(
    t: &GroupTable,
    classes: &ClassTable,
    alphas: &[Vec<u32>],
    budget: u128,
) -> Result<Vec<SignatureVector>> {
    for a in alphas {
        check_alpha(t, a)?;
    }
    let mut results: Vec<Option<SignatureVector>> = vec![None; alphas.len()];
    for batch in batches(t, alphas, budget)? {
        let members: Vec<Vec<u32>> = batch.iter().map(|&k| alphas[k].clone()).collect();
        let levels = down_closure(&members);
        let max = members.iter().map(|a| word_count(a)).max().unwrap_or_default();
        let mut record = |dp_vec: &dyn Fn(&[u32]) -> SignatureVector, level: &[Vec<u32>]| {
            for &k in &batch {
                if results[k].is_none() && level.binary_search(&alphas[k]).is_ok() {
                    results[k] = Some(dp_vec(&alphas[k]));
                }
            }
        };
        match width_for(&max) {
            Width::U64 => sweep::<u64>(t, &levels, |dp, l| record(&|b| dp.class_vector(b, classes), l)),
            Width::U128 => sweep::<u128>(t, &levels, |dp, l| record(&|b| dp.class_vector(b, classes), l)),
            Width::Big => sweep::<BigUint>(t, &levels, |dp, l| record(&|b| dp.class_vector(b, classes), l)),
        }
    }
    Ok(results.into_iter().map(|r| r.expect("every signature lies in its own batch")).collect())
}

/// Group signature indices so each group's shared sweep fits the budget.
/// Larger boxes go first; later signatures join the first batch that can take them.
fn batches(t: &GroupTable, alphas: &[Vec<u32>], budget: u128) -> Result<Vec<Vec<usize>>> {
    let boxsize = |a: &Vec<u32>| a.iter().map(|&x| x as u128 + 1).product::<u128>();
    let mut idx: Vec<usize> = (0..alphas.len()).collect();
    idx.sort_by(|&x, &y| boxsize(&alphas[y]).cmp(&boxsize(&alphas[x])).then(x.cmp(&y)));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for k in idx {
        let alone = peak_cells(&down_closure(&[alphas[k].clone()]), t.order());
        if alone > budget {
            return Err(Error::BudgetExceeded { needed: alone, budget });
        }
        let mut placed = false;
        for b in out.iter_mut() {
            let mut members: Vec<Vec<u32>> = b.iter().map(|&j| alphas[j].clone()).collect();
            members.push(alphas[k].clone());
            if peak_cells(&down_closure(&members), t.order()) <= budget {
                b.push(k);
                placed = true;
                break;
            }
        }
        if !placed {
            out.push(vec![k]);
        }
    }
    Ok(out)
}

/// Independent oracle: classify every word of signature α.
pub fn brute_force_signature_vector(
    t: &GroupTable,
    classes: &ClassTable,
    alpha: &[u32],
    limit: u128,
) -> Result<SignatureVector> {
    check_alpha(t, alpha)?;
    let words = word_count(alpha);
    let n = words.to_u128().unwrap_or(u128::MAX);
    if n > limit {
        return Err(Error::BruteForceTooLarge { words: n, limit });
    }
    let mut entries = vec![<BigUint as Zero>::zero(); classes.len()];
    for w in multiset_permutations(alpha) {
        let g = w.iter().fold(t.identity(), |x, &l| t.mul_gen(x, l as usize));
        entries[classes.class_of(g)] += 1u32;
    }
    Ok(SignatureVector { alpha: alpha.to_vec(), entries })
}

/// `Σ_j V_α[j]·χ(C_j)`, i.e. the sum of χ over all words of signature α.
pub fn character_sum(v: &SignatureVector, chi: &[QuadScalar]) -> Result<QuadScalar> {
    if chi.len() != v.entries.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} character values for {} classes",
            chi.len(),
            v.entries.len()
        )));
    }
    let mut acc = QuadScalar::zero();
    for (n, x) in v.entries.iter().zip(chi) {
        if !Zero::is_zero(n) {
            acc = acc.try_add(&x.try_mul(&QuadScalar::from_bigint(n.clone().into()))?)?;
        }
    }
    Ok(acc)
}

/// Every signature with `|α| ≤ max_len`, in graded-lex order (by |α|, then
/// lexicographically ascending), paired with its vector.
pub struct GradedStream<'a> {
    t: &'a GroupTable,
    classes: &'a ClassTable,
    max_len: u32,
    budget: u128,
    level: u32,
    engine: Engine<'a>,
    pending: std::vec::IntoIter<SignatureVector>,
    failed: bool,
}

enum Engine<'a> {
    U64(Layered<'a, u64>),
    U128(Layered<'a, u128>),
    Big(Layered<'a, BigUint>),
}

impl<'a> GradedStream<'a> {
    pub fn new(t: &'a GroupTable, classes: &'a ClassTable, max_len: u32, budget: u128) -> GradedStream<'a> {
        // the balanced composition has the largest multinomial
        let n = t.rank().max(1) as u32;
        let parts: Vec<u32> = (0..n).map(|i| max_len / n + u32::from(i < max_len % n)).collect();
        let engine = match width_for(&word_count(&parts)) {
            Width::U64 => Engine::U64(Layered::new(t)),
            Width::U128 => Engine::U128(Layered::new(t)),
            Width::Big => Engine::Big(Layered::new(t)),
        };
        let first = vec![0u32; t.rank()];
        let pending = vec![match &engine {
            Engine::U64(e) => e.class_vector(&first, classes),
            Engine::U128(e) => e.class_vector(&first, classes),
            Engine::Big(e) => e.class_vector(&first, classes),
        }];
        GradedStream { t, classes, max_len, budget, level: 0, engine, pending: pending.into_iter(), failed: false }
    }
}

impl Iterator for GradedStream<'_> {
    type Item = Result<SignatureVector>;

    fn next(&mut self) -> Option<Result<SignatureVector>> {
        loop {
            if let Some(v) = self.pending.next() {
                return Some(Ok(v));
            }
            if self.failed || self.level >= self.max_len || self.t.rank() == 0 {
                return None;
            }
            self.level += 1;
            let betas = compositions(self.level, self.t.rank());
            let prev = compositions(self.level - 1, self.t.rank()).len();
            let needed = (prev + betas.len()) as u128 * self.t.order() as u128;
            if needed > self.budget {
                self.failed = true;
                return Some(Err(Error::BudgetExceeded { needed, budget: self.budget }));
            }
            let classes = self.classes;
            let vectors: Vec<SignatureVector> = match &mut self.engine {
                Engine::U64(e) => {
                    e.advance(&betas);
                    betas.iter().map(|b| e.class_vector(b, classes)).collect()
                }
                Engine::U128(e) => {
                    e.advance(&betas);
                    betas.iter().map(|b| e.class_vector(b, classes)).collect()
                }
                Engine::Big(e) => {
                    e.advance(&betas);
                    betas.iter().map(|b| e.class_vector(b, classes)).collect()
                }
            };
            self.pending = vectors.into_iter();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CoxeterSystem, DEFAULT_CAP};
    use proptest::prelude::*;

    fn setup(spec: &str) -> (GroupTable, ClassTable) {
        let sys = CoxeterSystem::parse(spec).unwrap();
        let t = GroupTable::enumerate(&sys, DEFAULT_CAP).unwrap();
        let c = ClassTable::new(&sys, &t).unwrap();
        (t, c)
    }

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn signature_and_splice() {
        assert_eq!(signature_of(&Word::parse("1213213234", 4).unwrap(), 4), vec![3, 3, 3, 1]);
        assert_eq!(signature_of(&Word::parse("1212132121321234", 4).unwrap(), 4), vec![6, 6, 3, 1]);
        assert_eq!(splice(&[1, 2], &[3, 4]), vec![1, 2, 3, 4]);
        assert_eq!(splice(&[1, 2], &[]), vec![1, 2]);
    }

    #[test]
    fn a2_element_counts() {
        let (t, _) = setup("A2");
        let c = count_words_by_element(&t, &[2, 0], DEFAULT_BUDGET).unwrap();
        assert_eq!(c[t.identity() as usize], BigUint::from(1u32));
        assert_eq!(c.iter().sum::<BigUint>(), BigUint::from(1u32));
        let c = count_words_by_element(&t, &[1, 1], DEFAULT_BUDGET).unwrap();
        let a = t.element_of(&Word(vec![0, 1]));
        let b = t.element_of(&Word(vec![1, 0]));
        assert_eq!(c[a as usize], BigUint::from(1u32));
        assert_eq!(c[b as usize], BigUint::from(1u32));
    }

    #[test]
    fn a2_vectors() {
        let (t, c) = setup("A2");
        assert_eq!(signature_vector(&t, &c, &[1, 1]).unwrap().entries, big(&[0, 0, 2]));
        assert_eq!(signature_vector(&t, &c, &[0, 0]).unwrap().entries, big(&[1, 0, 0]));
        assert_eq!(signature_vector(&t, &c, &[1, 0]).unwrap().entries, big(&[0, 1, 0]));
    }

    #[test]
    fn b2_brute_force() {
        let (t, c) = setup("B2");
        let v = brute_force_signature_vector(&t, &c, &[2, 2], BRUTE_FORCE_LIMIT).unwrap();
        let w0 = c.class_of(t.longest_element());
        assert_eq!(v.entries[w0], BigUint::from(2u32));
        assert_eq!(v.entries[0], BigUint::from(4u32));
        assert_eq!(v, signature_vector(&t, &c, &[2, 2]).unwrap());
    }

    #[test]
    fn character_sums() {
        let (t, c) = setup("A2");
        let v = signature_vector(&t, &c, &[1, 1]).unwrap();
        let ones = vec![QuadScalar::one(); 3];
        assert_eq!(character_sum(&v, &ones).unwrap(), QuadScalar::from_int(2));
        let sign = [1, -1, 1].map(QuadScalar::from_int);
        assert_eq!(character_sum(&v, &sign).unwrap(), QuadScalar::from_int(2));
        let refl = [2, 0, -1].map(QuadScalar::from_int);
        assert_eq!(character_sum(&v, &refl).unwrap(), QuadScalar::from_int(-2));
        let _ = t;
    }

    #[test]
    fn budget_is_enforced() {
        let (t, c) = setup("A3");
        let err = signature_vector_with_budget(&t, &c, &[3, 3, 3], 10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        assert!(matches!(
            brute_force_signature_vector(&t, &c, &[6, 6, 6], 1000),
            Err(Error::BruteForceTooLarge { .. })
        ));
    }

    #[test]
    fn shared_sweep_matches_single() {
        let (t, c) = setup("B3");
        let alphas = vec![vec![2, 1, 3], vec![1, 1, 1], vec![3, 0, 2], vec![0, 4, 0]];
        let shared = signature_vectors(&t, &c, &alphas, DEFAULT_BUDGET).unwrap();
        let tiny = signature_vectors(&t, &c, &alphas, 12 * 48).unwrap();
        for (k, a) in alphas.iter().enumerate() {
            let single = signature_vector(&t, &c, a).unwrap();
            assert_eq!(shared[k], single);
            assert_eq!(tiny[k], single);
        }
    }

    #[test]
    fn stream_order_and_contents() {
        let (t, c) = setup("A2");
        let got: Vec<Vec<u32>> = GradedStream::new(&t, &c, 2, DEFAULT_BUDGET).map(|v| v.unwrap().alpha).collect();
        assert_eq!(got, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]);
        for v in GradedStream::new(&t, &c, 4, DEFAULT_BUDGET) {
            let v = v.unwrap();
            assert_eq!(v, signature_vector(&t, &c, &v.alpha).unwrap());
        }
    }

    #[test]
    fn wide_counters_agree() {
        let (t, c) = setup("A1");
        let v = signature_vector(&t, &c, &[70]).unwrap();
        assert_eq!(v.entries[0], BigUint::from(1u32));
        let (t, c) = setup("A1xA1");
        let v = signature_vector(&t, &c, &[40, 40]).unwrap();
        assert_eq!(v.total(), word_count(&[40, 40]));
        assert!(word_count(&[40, 40]).to_u64().is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn row_sums_are_multinomials(a in 0u32..5, b in 0u32..5, d in 0u32..5) {
            let (t, c) = setup("A3");
            let v = signature_vector(&t, &c, &[a, b, d]).unwrap();
            prop_assert_eq!(v.total(), word_count(&[a, b, d]));
        }

        #[test]
        fn dp_matches_brute_force(a in 0u32..4, b in 0u32..4) {
            let (t, c) = setup("I2(5)");
            prop_assert_eq!(
                signature_vector(&t, &c, &[a, b]).unwrap(),
                brute_force_signature_vector(&t, &c, &[a, b], BRUTE_FORCE_LIMIT).unwrap()
            );
        }
    }
}
