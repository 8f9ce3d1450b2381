//! Cuspidal class data in Geck–Pfeiffer numbering: tie words, derivation
//! from an enumerated table or by sampling, and the JSON data file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conjugacy::{element_char_poly, ClassTable};
use crate::coxeter::reflection::qint_poly;
use crate::coxeter::{cache, CoxeterSystem, GroupTable, RootSystem, Word};
use crate::error::{Error, Result};
use crate::exact::{QInt, ScalarJson, UniPoly, ZMat};

/// A word of minimal length in class `index` whose signature misses class
/// `partner` of the same minimal length (1-based Geck–Pfeiffer indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TieWord {
    pub type_spec: &'static str,
    pub word: &'static str,
    pub index: usize,
    pub partner: usize,
}

pub const TIE_WORDS: &[TieWord] = &[
    TieWord { type_spec: "F4", word: "1213213234", index: 5, partner: 4 },
    TieWord { type_spec: "H4", word: "1212132121321234", index: 7, partner: 8 },
    TieWord { type_spec: "E8", word: "1231423454657658", index: 5, partner: 6 },
    TieWord { type_spec: "E8", word: "1234234542345654765876", index: 9, partner: 10 },
    TieWord { type_spec: "E8", word: "123142314542345654765876", index: 11, partner: 12 },
    TieWord { type_spec: "E8", word: "12314231454231456542345678", index: 13, partner: 14 },
    TieWord { type_spec: "E8", word: "12314231545231436542314354265431765423456878", index: 22, partner: 21 },
    TieWord { type_spec: "E8", word: "1231423154523165456237654567238765456782345678", index: 23, partner: 24 },
];

pub fn tie_words(type_spec: &str) -> Vec<TieWord> {
    TIE_WORDS.iter().filter(|t| t.type_spec == type_spec).copied().collect()
}

/// Number of cuspidal classes of each exceptional type.
pub fn cuspidal_count(type_spec: &str) -> Option<usize> {
    match type_spec {
        "H3" => Some(4),
        "H4" => Some(20),
        "F4" => Some(9),
        "E6" => Some(5),
        "E7" => Some(12),
        "E8" => Some(30),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspidalDatum {
    pub type_spec: String,
    pub gp_index: usize,
    pub name: String,
    pub min_length: usize,
    pub rep_word: Option<Word>,
    pub char_poly: Option<UniPoly>,
}

impl CuspidalDatum {
    /// `p_C`, from the stored polynomial or else the representative.
    pub fn polynomial(&self, sys: &CoxeterSystem) -> Result<UniPoly> {
        match (&self.char_poly, &self.rep_word) {
            (Some(p), _) => Ok(p.clone()),
            (None, Some(w)) => element_char_poly(sys, w),
            (None, None) => Err(Error::MissingDatum(format!("{} class {}", self.type_spec, self.gp_index))),
        }
    }
}

/// Whether `sys` uses the canonical node order of its type spec.
pub fn is_canonical(sys: &CoxeterSystem) -> bool {
    cache::cache_key(sys) == sys.type_spec()
}

/// Whether characteristic polynomials separate the cuspidal classes of `sys`.
pub fn fingerprint_allowed(sys: &CoxeterSystem) -> Result<()> {
    match sys.type_spec().as_str() {
        "H3" | "H4" | "E6" | "E7" | "E8" => Ok(()),
        "F4" => Err(Error::FingerprintAmbiguous),
        other => Err(Error::FingerprintUnsupported(other.to_string())),
    }
}

/// True iff the element of `w` lies in the target class, decided by `p_g = p_C`.
pub fn cuspidal_fingerprint_match(sys: &CoxeterSystem, w: &Word, target: &CuspidalDatum) -> Result<bool> {
    fingerprint_allowed(sys)?;
    Ok(element_char_poly(sys, w)? == target.polynomial(sys)?)
}

struct Entry {
    min_length: usize,
    key: Vec<String>,
    payload: usize,
}

/// Sort by minimal length, then place each tie word's class at its designated
/// index. `contains(tie, payload)` says whether the payload's class holds the word.
fn gp_sort(
    mut entries: Vec<Entry>,
    ties: &[TieWord],
    contains: impl Fn(&TieWord, usize) -> Result<bool>,
) -> Result<Vec<usize>> {
    entries.sort_by(|a, b| (a.min_length, &a.key).cmp(&(b.min_length, &b.key)));
    let mut order: Vec<usize> = entries.iter().map(|e| e.payload).collect();
    let lengths: Vec<usize> = entries.iter().map(|e| e.min_length).collect();
    for tie in ties {
        let (i, j) = (tie.index - 1, tie.partner - 1);
        if j >= order.len() || i >= order.len() || lengths[i] != lengths[j] {
            return Err(Error::MissingTieWord(format!(
                "{}: classes {} and {} are not a tie",
                tie.type_spec, tie.index, tie.partner
            )));
        }
        let hit_i = contains(tie, order[i])?;
        let hit_j = contains(tie, order[j])?;
        match (hit_i, hit_j) {
            (true, false) => {}
            (false, true) => order.swap(i, j),
            _ => {
                return Err(Error::MissingTieWord(format!(
                    "{}: {} lies in neither or both of classes {} and {}",
                    tie.type_spec, tie.word, tie.index, tie.partner
                )))
            }
        }
    }
    Ok(order)
}

/// Cuspidal data of an enumerated canonical system, numbered by minimal
/// length with ties placed by the tie words.
pub fn from_classes(sys: &CoxeterSystem, t: &GroupTable, classes: &ClassTable) -> Result<Vec<CuspidalDatum>> {
    let spec = sys.type_spec();
    let entries = classes
        .cuspidal_classes()
        .into_iter()
        .map(|c| Entry { min_length: classes.min_length(c), key: vec![format!("{c:08}")], payload: c })
        .collect();
    let ties = if is_canonical(sys) { tie_words(&spec) } else { Vec::new() };
    let order = gp_sort(entries, &ties, |tie, c| {
        Ok(classes.class_of_word(t, &Word::parse(tie.word, sys.rank())?) == c)
    })?;
    Ok(order
        .into_iter()
        .enumerate()
        .map(|(k, c)| CuspidalDatum {
            type_spec: spec.clone(),
            gp_index: k + 1,
            name: classes.name(c),
            min_length: classes.min_length(c),
            rep_word: Some(classes.rep_word(c).clone()),
            char_poly: classes.char_poly(c).cloned(),
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct SamplingOptions {
    pub seed: u64,
    pub max_samples: usize,
    /// Stop once this many distinct cuspidal polynomials are seen.
    pub target: usize,
    /// Cap on the cyclic-shift exploration in the descent.
    pub descent_cap: usize,
}

impl SamplingOptions {
    pub fn for_type(type_spec: &str) -> SamplingOptions {
        SamplingOptions {
            seed: 0x5eed_c0de,
            max_samples: 200_000,
            target: cuspidal_count(type_spec).unwrap_or(usize::MAX),
            descent_cap: 2_000_000,
        }
    }
}

fn poly_at_one_nonzero(p: &[QInt]) -> Result<bool> {
    let mut s = QInt::ZERO;
    for &c in p {
        s = s.add(c)?;
    }
    Ok(!s.is_zero())
}

/// Cuspidal data without enumerating the group: random elements, their
/// powers and (when −1 ∈ W) negatives are fingerprinted by `p_g`; each new
/// cuspidal polynomial is pushed down to a minimal-length conjugate.
///
/// Relies on `p_g` separating cuspidal classes, so it refuses F4.
pub fn derive_by_sampling(sys: &CoxeterSystem, opts: &SamplingOptions) -> Result<Vec<CuspidalDatum>> {
    fingerprint_allowed(sys)?;
    if !is_canonical(sys) {
        return Err(Error::Precondition("sampling needs the canonical labeling".into()));
    }
    let spec = sys.type_spec();
    let roots = RootSystem::new(sys)?;
    let rep = &roots.rep;
    let n = rep.n;
    let id = ZMat::identity(n, rep.field);
    let minus_id = ZMat { n, field: rep.field, data: id.data.iter().map(|x| x.neg()).collect::<Result<_>>()? };
    let central = roots.longest_element()? == minus_id;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let word_len = 3 * roots.positive_roots().len();
    let mut found: BTreeMap<Vec<QInt>, ZMat> = BTreeMap::new();
    for _ in 0..opts.max_samples {
        if found.len() >= opts.target {
            break;
        }
        let mut g = id.clone();
        for _ in 0..word_len {
            rep.mul_right(&mut g, rng.gen_range(0..n))?;
        }
        let mut h = g.clone();
        while !h.is_identity() {
            let mut cands = vec![h.clone()];
            if central {
                cands.push(h.mul(&minus_id)?);
            }
            for c in cands {
                let p = c.char_poly()?;
                if poly_at_one_nonzero(&p)? {
                    found.entry(p).or_insert(c);
                }
            }
            h = h.mul(&g)?;
        }
        if central {
            found.entry(minus_id.char_poly()?).or_insert_with(|| minus_id.clone());
        }
    }
    if found.len() < opts.target && opts.target != usize::MAX {
        return Err(Error::Unsupported(format!(
            "{spec}: found {} of {} cuspidal polynomials after {} samples",
            found.len(),
            opts.target,
            opts.max_samples
        )));
    }

    let mut reps = Vec::new();
    for (p, m) in &found {
        let (min, l) = roots.descend_to_min(m, opts.descent_cap)?;
        let w = roots.reduced_word(&min)?;
        reps.push((qint_poly(p, rep.field), l, w));
    }
    let entries = reps
        .iter()
        .enumerate()
        .map(|(k, (p, l, _))| Entry {
            min_length: *l,
            key: p.to_json().iter().map(|c| format!("{}/{}", c.num, c.den)).collect(),
            payload: k,
        })
        .collect();
    let order = gp_sort(entries, &tie_words(&spec), |tie, k| {
        Ok(element_char_poly(sys, &Word::parse(tie.word, n)?)? == reps[k].0)
    })?;
    Ok(order
        .into_iter()
        .enumerate()
        .map(|(idx, k)| {
            let (p, l, w) = &reps[k];
            CuspidalDatum {
                type_spec: spec.clone(),
                gp_index: idx + 1,
                name: format!("C({w})"),
                min_length: *l,
                rep_word: Some(w.clone()),
                char_poly: Some(p.clone()),
            }
        })
        .collect())
}

#[derive(Serialize, Deserialize)]
struct DatumJson {
    gp_index: usize,
    name: String,
    min_length: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    rep_word: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    char_poly: Option<Vec<ScalarJson>>,
}

#[derive(Serialize, Deserialize)]
struct TypeJson {
    #[serde(rename = "type")]
    type_spec: String,
    classes: Vec<DatumJson>,
}

pub fn to_json(data: &[Vec<CuspidalDatum>]) -> Result<String> {
    let out: Vec<TypeJson> = data
        .iter()
        .filter(|d| !d.is_empty())
        .map(|d| TypeJson {
            type_spec: d[0].type_spec.clone(),
            classes: d
                .iter()
                .map(|c| DatumJson {
                    gp_index: c.gp_index,
                    name: c.name.clone(),
                    min_length: c.min_length,
                    rep_word: c.rep_word.as_ref().map(|w| w.to_one_based()),
                    char_poly: c.char_poly.as_ref().map(|p| p.to_json()),
                })
                .collect(),
        })
        .collect();
    Ok(serde_json::to_string_pretty(&out)?)
}

/// Data for every type in the file, keyed by type spec.
pub fn from_json(text: &str) -> Result<BTreeMap<String, Vec<CuspidalDatum>>> {
    let parsed: Vec<TypeJson> = serde_json::from_str(text)?;
    let mut out = BTreeMap::new();
    for t in parsed {
        let mut classes = Vec::new();
        for c in t.classes {
            if c.rep_word.is_none() && c.char_poly.is_none() {
                return Err(Error::Format(format!("{} class {} has neither word nor polynomial", t.type_spec, c.gp_index)));
            }
            classes.push(CuspidalDatum {
                type_spec: t.type_spec.clone(),
                gp_index: c.gp_index,
                name: c.name,
                min_length: c.min_length,
                rep_word: c.rep_word.map(|w| Word::from_one_based(&w)).transpose()?,
                char_poly: c.char_poly.map(|p| UniPoly::from_json(&p)).transpose()?,
            });
        }
        classes.sort_by_key(|c| c.gp_index);
        out.insert(t.type_spec, classes);
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<BTreeMap<String, Vec<CuspidalDatum>>> {
    from_json(&std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?)
}

/// The data file shipped with the crate.
pub fn default_data_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("cuspidal_reps.json")
}

/// The datum with Geck–Pfeiffer index `gp_index` from a loaded file.
pub fn lookup<'a>(
    data: &'a BTreeMap<String, Vec<CuspidalDatum>>,
    type_spec: &str,
    gp_index: usize,
) -> Result<&'a CuspidalDatum> {
    data.get(type_spec)
        .and_then(|v| v.iter().find(|d| d.gp_index == gp_index))
        .ok_or_else(|| Error::MissingDatum(format!("{type_spec} class {gp_index}")))
}
