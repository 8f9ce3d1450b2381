//! Tie-pair certification: cyclic classes, insertion operators, candidate
//! sets and the flag search over them.

use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinat::{binomial, multinomial, multiset_permutations, unrank_combination};
use crate::conjugacy::ClassTable;
use crate::coxeter::{CoxeterSystem, GroupTable, ReflectionRep, Word, DEFAULT_CAP};
use crate::cuspdata::{fingerprint_allowed, is_canonical, CuspidalDatum};
use crate::error::{Error, Result};
use crate::exact::QInt;

/// Candidate count above which a run needs extended mode.
pub const DEFAULT_GUARD: u128 = 100_000_000;

/// Lexicographically least rotation.
pub fn min_rotation(w: &Word) -> Word {
    (0..w.len().max(1)).map(|k| w.rotate(k)).min().unwrap_or_else(Word::empty)
}

/// One word per rotation class of the words with signature `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicClassSet {
    pub base: Vec<u32>,
    pub reps: Vec<Word>,
}

pub fn cyclic_reps(alpha: &[u32]) -> CyclicClassSet {
    let reps = multiset_permutations(alpha)
        .map(Word)
        .filter(|w| min_rotation(w) == *w)
        .collect();
    CyclicClassSet { base: alpha.to_vec(), reps }
}

/// Burnside count of rotation classes: `(1/L) Σ_{d | gcd} φ(d)·multinomial(α/d)`.
pub fn necklace_count(alpha: &[u32]) -> BigUint {
    let len: u32 = alpha.iter().sum();
    if len == 0 {
        return BigUint::from(1u32);
    }
    let g = alpha.iter().fold(0u32, |acc, &a| acc.gcd(&a));
    let mut total = BigUint::zero();
    for d in (1..=g).filter(|d| g % d == 0) {
        let phi = (1..=d).filter(|k| k.gcd(&d) == 1).count() as u32;
        let reduced: Vec<u32> = alpha.iter().map(|&a| a / d).collect();
        total += multinomial(&reduced) * phi;
    }
    total / len
}

/// Every word obtained by choosing `k` occurrences of target letters in `u`
/// and inserting `inserted` immediately left of each, in lexicographic order
/// of the chosen positions.
pub fn insert_before(u: &Word, targets: &[u8], inserted: &Word, k: usize) -> Result<Vec<Word>> {
    let positions = target_positions(u, targets);
    if k > positions.len() {
        return Err(Error::TooManyInsertions { k, available: positions.len() });
    }
    Ok(crate::combinat::combinations(positions.len(), k)
        .map(|choice| insert_chosen(u, &positions, &choice, inserted))
        .collect())
}

fn target_positions(u: &Word, targets: &[u8]) -> Vec<usize> {
    (0..u.len()).filter(|&p| targets.contains(&u.0[p])).collect()
}

fn insert_chosen(u: &Word, positions: &[usize], choice: &[usize], inserted: &Word) -> Word {
    let mut out = Vec::with_capacity(u.len() + choice.len() * inserted.len());
    let mut next = choice.iter().map(|&c| positions[c]).peekable();
    for (p, &l) in u.0.iter().enumerate() {
        if next.peek() == Some(&p) {
            out.extend_from_slice(&inserted.0);
            next.next();
        }
        out.push(l);
    }
    Word(out)
}

/// Insert `block` before `count` of the letters in `targets`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Insertion {
    pub targets: Vec<u8>,
    pub block: Word,
    pub count: u32,
}

/// The words `I_k ⋯ I_1(E^cyc)` for a signature, addressed by a mixed-radix index.
#[derive(Clone, Debug)]
pub struct CandidateSet {
    pub alpha: Vec<u32>,
    pub base: CyclicClassSet,
    pub steps: Vec<Insertion>,
    radices: Vec<u128>,
}

fn w(letters: &[u8]) -> Word {
    Word(letters.iter().map(|l| l - 1).collect())
}

impl CandidateSet {
    /// The reduction chain for H4/F4 (around letters 2,3) or E8 (around 4,6).
    pub fn new(sys: &CoxeterSystem, alpha: &[u32]) -> Result<CandidateSet> {
        let spec = sys.type_spec();
        if !is_canonical(sys) {
            return Err(Error::Precondition("candidate sets use the canonical labeling".into()));
        }
        if alpha.len() != sys.rank() {
            return Err(Error::InvalidSignature(format!("{alpha:?} for rank {}", sys.rank())));
        }
        let (base, steps) = match spec.as_str() {
            "H4" | "F4" => {
                let &[a1, a2, a3, a4] = alpha else { unreachable!() };
                if a1 > a2 || a4 > a3 {
                    return Err(Error::Precondition(format!(
                        "{spec} signature {alpha:?} needs a1 <= a2 and a4 <= a3"
                    )));
                }
                let steps = vec![
                    Insertion { targets: vec![1], block: w(&[1]), count: a1 },
                    Insertion { targets: vec![2], block: w(&[4]), count: a4 },
                ];
                (vec![0, a2, a3, 0], steps)
            }
            "E8" => {
                let &[a1, a2, a3, a4, a5, a6, a7, a8] = alpha else { unreachable!() };
                let ok = a1 <= a3
                    && a1 <= a4
                    && a3 - a1 <= a4
                    && a2 <= a4
                    && a5 <= a4 + a6
                    && a8 <= a7
                    && a8 <= a6
                    && a7 - a8 <= a6;
                if !ok {
                    return Err(Error::Precondition(format!(
                        "E8 signature {alpha:?} violates a1<=a3, a1<=a4, a3-a1<=a4, a2<=a4, a5<=a4+a6, a8<=a7, a8<=a6, a7-a8<=a6"
                    )));
                }
                let steps = vec![
                    Insertion { targets: vec![3], block: w(&[3]), count: a3 - a1 },
                    Insertion { targets: vec![3], block: w(&[1, 3]), count: a1 },
                    Insertion { targets: vec![3], block: w(&[2]), count: a2 },
                    Insertion { targets: vec![3, 5], block: w(&[5]), count: a5 },
                    Insertion { targets: vec![5], block: w(&[7]), count: a7 - a8 },
                    Insertion { targets: vec![5], block: w(&[8, 7]), count: a8 },
                ];
                (vec![0, 0, 0, a4, 0, a6, 0, 0], steps)
            }
            other => return Err(Error::Unsupported(format!("no candidate reduction for type {other}"))),
        };
        Ok(CandidateSet::from_parts(alpha, cyclic_reps(&base), steps))
    }

    /// A chain over an explicit base set.
    pub fn from_parts(alpha: &[u32], base: CyclicClassSet, steps: Vec<Insertion>) -> CandidateSet {
        let mut radices = vec![base.reps.len() as u128];
        for s in &steps {
            // target letters are never inserted, so their count is fixed by the base
            let available: u32 = s.targets.iter().map(|&l| base.base[l as usize]).sum();
            radices.push(binomial(available as u64, s.count as u64));
        }
        CandidateSet { alpha: alpha.to_vec(), base, steps, radices }
    }

    /// Product of the binomial factors times the number of cyclic classes.
    pub fn len(&self) -> u128 {
        self.radices.iter().fold(1u128, |acc, &r| acc.saturating_mul(r))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn radices(&self) -> &[u128] {
        &self.radices
    }

    /// The candidate at `index`, necklace-major with later insertions varying fastest.
    pub fn get(&self, mut index: u128) -> Word {
        let mut digits = vec![0u128; self.radices.len()];
        for k in (0..self.radices.len()).rev() {
            digits[k] = index % self.radices[k];
            index /= self.radices[k];
        }
        let mut cur = self.base.reps[digits[0] as usize].clone();
        for (s, &d) in self.steps.iter().zip(&digits[1..]) {
            let positions = target_positions(&cur, &s.targets);
            let choice = unrank_combination(positions.len(), s.count as usize, d);
            cur = insert_chosen(&cur, &positions, &choice, &s.block);
        }
        cur
    }

    pub fn iter(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.len()).map(|k| self.get(k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Fingerprint,
    Enumeration,
    Auto,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "fingerprint" => Ok(Mode::Fingerprint),
            "enumeration" => Ok(Mode::Enumeration),
            "auto" => Ok(Mode::Auto),
            _ => Err(Error::Unsupported(format!("mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FlagOptions {
    pub mode: Mode,
    pub extended: bool,
    pub guard: u128,
    /// Progress file for extended runs; resumed when it matches the job.
    pub checkpoint: Option<PathBuf>,
    /// Candidates per checkpoint.
    pub block: u128,
}

impl Default for FlagOptions {
    fn default() -> Self {
        FlagOptions { mode: Mode::Auto, extended: false, guard: DEFAULT_GUARD, checkpoint: None, block: 50_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagReport {
    pub flag: u8,
    /// Candidates up to and including the first match, or all of them.
    pub candidates_checked: u128,
    pub total: u128,
    pub mode: Mode,
}

#[derive(Clone, Serialize, Deserialize, PartialEq, Eq)]
struct Checkpoint {
    type_spec: String,
    word: String,
    target: usize,
    mode: Mode,
    next: u128,
    total: u128,
}

enum Matcher<'a> {
    Poly { rep: ReflectionRep, target: Vec<QInt>, trace: QInt },
    Class { t: &'a GroupTable, classes: &'a ClassTable, target: usize },
}

impl Matcher<'_> {
    fn matches(&self, w: &Word) -> Result<bool> {
        match self {
            Matcher::Poly { rep, target, trace } => {
                let m = rep.word_matrix(w)?;
                if m.trace()? != *trace {
                    return Ok(false);
                }
                Ok(m.char_poly()? == *target)
            }
            Matcher::Class { t, classes, target } => Ok(classes.class_of_word(t, w) == *target),
        }
    }
}

/// Resolve `Auto`: enumeration for F4, fingerprints where they separate classes.
pub fn resolve_mode(sys: &CoxeterSystem, mode: Mode) -> Mode {
    match mode {
        Mode::Auto if fingerprint_allowed(sys).is_ok() => Mode::Fingerprint,
        Mode::Auto => Mode::Enumeration,
        m => m,
    }
}

/// Flag = 1 iff some candidate for `sig(w)` lands in the target class.
///
/// `table` supplies an enumerated group for enumeration mode; it is built on
/// demand when absent.
pub fn algorithm_a(
    sys: &CoxeterSystem,
    w: &Word,
    target: &CuspidalDatum,
    opts: &FlagOptions,
    table: Option<(&GroupTable, &ClassTable)>,
) -> Result<FlagReport> {
    if w.len() != target.min_length {
        return Err(Error::Precondition(format!(
            "|w| = {} but the target class has minimal length {}",
            w.len(),
            target.min_length
        )));
    }
    let cands = CandidateSet::new(sys, &w.signature(sys.rank()))?;
    let total = cands.len();
    if total > opts.guard && !opts.extended {
        return Err(Error::CandidateGuard { candidates: total, guard: opts.guard });
    }
    let total64 = total.to_u64().ok_or(Error::Overflow)?;
    let mode = resolve_mode(sys, opts.mode);

    let owned;
    let matcher = match mode {
        Mode::Fingerprint => {
            fingerprint_allowed(sys)?;
            let rep = ReflectionRep::new(sys)?;
            let p = target.polynomial(sys)?;
            let target: Vec<QInt> = p.coeffs().iter().map(|c| QInt::from_scalar(c, rep.field)).collect::<Result<_>>()?;
            if target.len() != rep.n + 1 {
                return Err(Error::MissingDatum(format!("target polynomial has degree {}", target.len() - 1)));
            }
            let trace = target[rep.n - 1].neg()?;
            Matcher::Poly { rep, target, trace }
        }
        _ => {
            let word = target.rep_word.as_ref().ok_or_else(|| {
                Error::MissingDatum(format!("enumeration mode needs a representative of class {}", target.gp_index))
            })?;
            let (t, classes) = match table {
                Some(tc) => tc,
                None => {
                    let t = GroupTable::enumerate(sys, DEFAULT_CAP)?;
                    let c = ClassTable::new(sys, &t)?;
                    owned = (t, c);
                    (&owned.0, &owned.1)
                }
            };
            Matcher::Class { t, classes, target: classes.class_of_word(t, word) }
        }
    };

    let key = Checkpoint {
        type_spec: sys.type_spec(),
        word: w.to_string(),
        target: target.gp_index,
        mode,
        next: 0,
        total,
    };
    let mut start: u64 = 0;
    if let (true, Some(path)) = (opts.extended, &opts.checkpoint) {
        if let Ok(text) = std::fs::read_to_string(path) {
            let saved: Checkpoint = serde_json::from_str(&text)?;
            if (Checkpoint { next: 0, ..saved }) == key {
                start = saved.next.to_u64().ok_or(Error::Overflow)?;
            }
        }
    }

    let block = opts.block.clamp(1, u64::MAX as u128) as u64;
    while start < total64 {
        let end = start.saturating_add(block).min(total64);
        if let Some(hit) = scan(&cands, &matcher, start, end)? {
            return Ok(FlagReport { flag: 1, candidates_checked: hit as u128 + 1, total, mode });
        }
        start = end;
        if let (true, Some(path)) = (opts.extended, &opts.checkpoint) {
            let cp = Checkpoint { next: start as u128, ..key.clone() };
            std::fs::write(path, serde_json::to_string(&cp)?)?;
        }
    }
    Ok(FlagReport { flag: 0, candidates_checked: total, total, mode })
}

/// Least matching index in `[start, end)`, independent of scheduling.
fn scan(cands: &CandidateSet, matcher: &Matcher, start: u64, end: u64) -> Result<Option<u64>> {
    const CHUNK: u64 = 4096;
    let best = AtomicU64::new(u64::MAX);
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let chunks = (end - start).div_ceil(CHUNK);
    (0..chunks).into_par_iter().for_each(|c| {
        let lo = start + c * CHUNK;
        let hi = (lo + CHUNK).min(end);
        for idx in lo..hi {
            if idx >= best.load(Ordering::Relaxed) {
                return;
            }
            match matcher.matches(&cands.get(idx as u128)) {
                Ok(true) => {
                    best.fetch_min(idx, Ordering::Relaxed);
                    return;
                }
                Ok(false) => {}
                Err(e) => {
                    failure.lock().expect("no poisoning").get_or_insert(e);
                    return;
                }
            }
        }
    });
    if let Some(e) = failure.into_inner().expect("no poisoning") {
        return Err(e);
    }
    let b = best.into_inner();
    Ok((b != u64::MAX).then_some(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuspdata::from_classes;

    fn words(list: &[&str], rank: usize) -> Vec<Word> {
        list.iter().map(|s| Word::parse(s, rank).unwrap()).collect()
    }

    #[test]
    fn f4_cyclic_classes() {
        let c = cyclic_reps(&[0, 3, 3, 0]);
        assert_eq!(c.reps, words(&["222333", "223233", "223323", "232323"], 4));
        assert_eq!(necklace_count(&[0, 3, 3, 0]), BigUint::from(4u32));
        assert_eq!(min_rotation(&Word::parse("232233", 4).unwrap()), Word::parse("223323", 4).unwrap());
        assert_eq!(cyclic_reps(&[0, 1]).reps, vec![Word(vec![1])]);
    }

    #[test]
    fn necklace_formula_matches_enumeration() {
        for a in [[2u32, 2, 0], [4, 2, 0], [3, 3, 3], [6, 0, 0], [1, 2, 3], [4, 4, 2]] {
            assert_eq!(necklace_count(&a), BigUint::from(cyclic_reps(&a).reps.len()), "{a:?}");
        }
    }

    #[test]
    fn insertion_example() {
        let u = Word::parse("2322", 4).unwrap();
        let got = insert_before(&u, &[1], &Word(vec![0]), 2).unwrap();
        assert_eq!(got, words(&["123122", "123212", "231212"], 4));
        assert_eq!(insert_before(&u, &[1], &Word(vec![0]), 3).unwrap().len(), 1);
        assert!(matches!(insert_before(&u, &[1], &Word(vec![0]), 4), Err(Error::TooManyInsertions { .. })));
    }

    #[test]
    fn candidate_counts() {
        let f4 = CoxeterSystem::parse("F4").unwrap();
        assert_eq!(CandidateSet::new(&f4, &[3, 3, 3, 1]).unwrap().len(), 12);
        let h4 = CoxeterSystem::parse("H4").unwrap();
        let h = CandidateSet::new(&h4, &[6, 6, 3, 1]).unwrap();
        assert_eq!(h.len(), 30);
        assert_eq!(h.iter().count(), 30);
        assert!(h.iter().all(|w| w.signature(4) == vec![6, 6, 3, 1]));
        let e8 = CoxeterSystem::parse("E8").unwrap();
        let a = Word::parse("1231423454657658", 8).unwrap().signature(8);
        assert_eq!(CandidateSet::new(&e8, &a).unwrap().len(), 360);
        assert!(CandidateSet::new(&f4, &[4, 3, 3, 1]).is_err());
    }

    #[test]
    fn indexed_candidates_match_nested_insertion() {
        let f4 = CoxeterSystem::parse("F4").unwrap();
        let c = CandidateSet::new(&f4, &[3, 3, 3, 1]).unwrap();
        let mut nested = Vec::new();
        for u in &c.base.reps {
            for v in insert_before(u, &[1], &Word(vec![0]), 3).unwrap() {
                nested.extend(insert_before(&v, &[2], &Word(vec![3]), 1).unwrap());
            }
        }
        assert_eq!(c.iter().collect::<Vec<_>>(), nested);
    }

    #[test]
    fn a3_is_unsupported() {
        let a3 = CoxeterSystem::parse("A3").unwrap();
        assert!(matches!(CandidateSet::new(&a3, &[1, 1, 1]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn h4_tie_flags() {
        let sys = CoxeterSystem::parse("H4").unwrap();
        let t = GroupTable::enumerate(&sys, DEFAULT_CAP).unwrap();
        let c = ClassTable::new(&sys, &t).unwrap();
        let data = from_classes(&sys, &t, &c).unwrap();
        let w = Word::parse("1212132121321234", 4).unwrap();
        let opts = FlagOptions::default();
        let own = algorithm_a(&sys, &w, &data[6], &opts, Some((&t, &c))).unwrap();
        assert_eq!(own.flag, 1);
        let other = algorithm_a(&sys, &w, &data[7], &opts, Some((&t, &c))).unwrap();
        assert_eq!(other, FlagReport { flag: 0, candidates_checked: 30, total: 30, mode: Mode::Fingerprint });
        let by_class = algorithm_a(&sys, &w, &data[7], &FlagOptions { mode: Mode::Enumeration, ..opts }, Some((&t, &c)));
        assert_eq!(by_class.unwrap().flag, 0);
    }
}
