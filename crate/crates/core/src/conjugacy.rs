//! Conjugacy classes of enumerated groups, class polynomials and cuspidality.

use std::collections::VecDeque;

use crate::coxeter::reflection::field_of;
use crate::coxeter::{cache, CoxeterSystem, GroupTable, ReflectionRep, Word, DEFAULT_CAP};
use crate::error::Result;
use crate::exact::{QuadScalar, UniPoly};

/// Partition of an enumerated group into conjugacy classes.
///
/// Class ids are ordered by minimal length, then by the lexicographically
/// least reduced word among minimal-length members.
#[derive(Clone, Debug)]
pub struct ClassTable {
    class_of: Vec<u32>,
    classes: Vec<Vec<u32>>,
    min_length: Vec<usize>,
    rep: Vec<u32>,
    rep_word: Vec<Word>,
    cuspidal: Vec<bool>,
    char_poly: Option<Vec<UniPoly>>,
}

impl ClassTable {
    pub fn new(sys: &CoxeterSystem, t: &GroupTable) -> Result<ClassTable> {
        let n = t.order();
        let rank = t.rank();
        let mut orbit = vec![u32::MAX; n];
        let mut orbits: Vec<Vec<u32>> = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n as u32 {
            if orbit[start as usize] != u32::MAX {
                continue;
            }
            let id = orbits.len() as u32;
            let mut members = vec![start];
            orbit[start as usize] = id;
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                for i in 0..rank {
                    let y = t.conj_gen(x, i);
                    if orbit[y as usize] == u32::MAX {
                        orbit[y as usize] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            orbits.push(members);
        }

        let mut keyed: Vec<(usize, Word, u32, Vec<u32>)> = orbits
            .into_iter()
            .map(|members| {
                let l = members.iter().map(|&x| t.length(x)).min().unwrap_or(0);
                let (word, rep) = members
                    .iter()
                    .filter(|&&x| t.length(x) == l)
                    .map(|&x| (t.reduced_word(x), x))
                    .min()
                    .expect("orbits are nonempty");
                (l, word, rep, members)
            })
            .collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));

        let mut class_of = vec![0u32; n];
        let mut classes = Vec::with_capacity(keyed.len());
        let mut min_length = Vec::with_capacity(keyed.len());
        let mut rep = Vec::with_capacity(keyed.len());
        let mut rep_word = Vec::with_capacity(keyed.len());
        for (id, (l, w, r, members)) in keyed.into_iter().enumerate() {
            for &x in &members {
                class_of[x as usize] = id as u32;
            }
            classes.push(members);
            min_length.push(l);
            rep.push(r);
            rep_word.push(w);
        }

        let char_poly = match field_of(sys) {
            Ok(_) => {
                let refl = ReflectionRep::new(sys)?;
                Some(rep_word.iter().map(|w| refl.word_char_poly(w)).collect::<Result<Vec<_>>>()?)
            }
            Err(_) => None,
        };
        let cuspidal = match &char_poly {
            Some(polys) => polys
                .iter()
                .map(|p| p.eval(&QuadScalar::one()).map(|v| !v.is_zero()))
                .collect::<Result<Vec<_>>>()?,
            None => cuspidal_by_membership(sys, t, &class_of, classes.len()),
        };
        Ok(ClassTable { class_of, classes, min_length, rep, rep_word, cuspidal, char_poly })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, x: u32) -> usize {
        self.class_of[x as usize] as usize
    }

    pub fn class_of_word(&self, t: &GroupTable, w: &Word) -> usize {
        self.class_of(t.element_of(w))
    }

    pub fn class_ids(&self) -> &[u32] {
        &self.class_of
    }

    pub fn members(&self, c: usize) -> &[u32] {
        &self.classes[c]
    }

    pub fn size(&self, c: usize) -> usize {
        self.classes[c].len()
    }

    pub fn min_length(&self, c: usize) -> usize {
        self.min_length[c]
    }

    pub fn rep(&self, c: usize) -> u32 {
        self.rep[c]
    }

    pub fn rep_word(&self, c: usize) -> &Word {
        &self.rep_word[c]
    }

    pub fn is_cuspidal(&self, c: usize) -> bool {
        self.cuspidal[c]
    }

    pub fn cuspidal_classes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.cuspidal[c]).collect()
    }

    pub fn char_poly(&self, c: usize) -> Option<&UniPoly> {
        self.char_poly.as_ref().map(|p| &p[c])
    }

    /// `C(w)` with the class's minimal representative word.
    pub fn name(&self, c: usize) -> String {
        format!("C({})", self.rep_word[c])
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.len()).map(|c| self.name(c)).collect()
    }
}

/// Classes meeting no proper parabolic subgroup, found by generating each
/// maximal parabolic subgroup inside the table.
pub fn cuspidal_by_membership(
    sys: &CoxeterSystem,
    t: &GroupTable,
    class_of: &[u32],
    class_count: usize,
) -> Vec<bool> {
    let rank = sys.rank();
    if rank == 0 {
        // the trivial group has no proper parabolic subgroup
        return vec![true; class_count];
    }
    let mut met = vec![false; class_count];
    let mut seen = vec![u32::MAX; t.order()];
    for skip in 0..rank {
        let gens: Vec<usize> = (0..rank).filter(|&i| i != skip).collect();
        let mut queue = vec![t.identity()];
        seen[0] = skip as u32;
        while let Some(x) = queue.pop() {
            met[class_of[x as usize] as usize] = true;
            for &i in &gens {
                let y = t.mul_gen(x, i);
                if seen[y as usize] != skip as u32 {
                    seen[y as usize] = skip as u32;
                    queue.push(y);
                }
            }
        }
    }
    met.into_iter().map(|m| !m).collect()
}

/// `p_g(λ)` of the element of `w`, computed from matrices alone.
pub fn element_char_poly(sys: &CoxeterSystem, w: &Word) -> Result<UniPoly> {
    ReflectionRep::new(sys)?.word_char_poly(w)
}

/// Enumerate `sys` (through the cache directory when one is configured)
/// and partition it into classes.
pub fn enumerate_classes(sys: &CoxeterSystem) -> Result<(GroupTable, ClassTable)> {
    let t = cache::enumerate_cached(sys, DEFAULT_CAP, cache::env_cache_dir().as_deref())?;
    let classes = ClassTable::new(sys, &t)?;
    Ok((t, classes))
}

/// Cuspidality through `p_g(1) ≠ 0`.
pub fn is_cuspidal(sys: &CoxeterSystem, w: &Word) -> Result<bool> {
    Ok(!element_char_poly(sys, w)?.eval(&QuadScalar::one())?.is_zero())
}
