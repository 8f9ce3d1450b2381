//! Words in the Coxeter generators.

use std::fmt;

use crate::error::{Error, Result};

/// A word `s_{i1} s_{i2} …` stored with 0-based letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Word {
        Word(vec![])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// Parse 1-based letters: a digit string such as `1213213234`, or a
    /// comma-separated list when some letter exceeds 9. `e` and the empty
    /// string denote the empty word.
    pub fn parse(text: &str, rank: usize) -> Result<Word> {
        let t = text.trim();
        if t.is_empty() || t == "e" || t == "ε" {
            return Ok(Word::empty());
        }
        let raw: Vec<usize> = if t.contains(',') {
            t.split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| Error::InvalidWord(text.into())))
                .collect::<Result<_>>()?
        } else {
            t.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::InvalidWord(text.into())))
                .collect::<Result<_>>()?
        };
        let letters = raw
            .into_iter()
            .map(|l| {
                if l == 0 || l > rank {
                    Err(Error::InvalidWord(format!("letter {l} outside 1..={rank} in {text:?}")))
                } else {
                    Ok((l - 1) as u8)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Word(letters))
    }

    pub fn from_one_based(letters: &[usize]) -> Result<Word> {
        letters
            .iter()
            .map(|&l| u8::try_from(l).ok().filter(|&x| x >= 1).map(|x| x - 1))
            .collect::<Option<Vec<u8>>>()
            .map(Word)
            .ok_or_else(|| Error::InvalidWord(format!("{letters:?}")))
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&l| l as usize + 1).collect()
    }

    /// Letter counts, the signature of the word.
    pub fn signature(&self, rank: usize) -> Vec<u32> {
        let mut s = vec![0; rank];
        for &l in &self.0 {
            s[l as usize] += 1;
        }
        s
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Rotation by `k`: `w_k … w_n w_1 … w_{k−1}`.
    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let r = k % v.len();
            v.rotate_left(r);
        }
        Word(v)
    }

    pub fn map_letters(&self, f: impl Fn(u8) -> u8) -> Word {
        Word(self.0.iter().map(|&l| f(l)).collect())
    }
}

impl fmt::Display for Word {
    /// 1-based digits, comma-separated when a letter exceeds 9, `e` for the empty word.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        if self.0.iter().all(|&l| l < 9) {
            for &l in &self.0 {
                write!(f, "{}", l + 1)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|&l| (l + 1).to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}
