//! Words in the surface-group generators.
//!
//! A letter is a nonzero `i32`: `+k` is generator `k - 1`, `-k` its inverse.
//! Words are kept freely reduced; curve classes are additionally cyclically
//! reduced and nonempty. The text form is dot-separated symbols such as
//! `a1.b1.A1.B1`, uppercase meaning the inverse generator.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A freely reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(Vec<i32>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut w = Vec::new();
        for l in letters {
            debug_assert!(l != 0);
            if w.last() == Some(&-l) {
                w.pop();
            } else {
                w.push(l);
            }
        }
        Word(w)
    }

    pub fn single(letter: i32) -> Self {
        debug_assert!(letter != 0);
        Word(vec![letter])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, n: i64) -> Word {
        if n == 0 {
            return Word::identity();
        }
        let base = if n > 0 { self.clone() } else { self.inverse() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Cyclic reduction: strip matching first/last letters. Returns the
    /// reduced core and the conjugator `u` with `self = u * core * u^{-1}`.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut v = self.0.clone();
        let mut conj = Vec::new();
        while v.len() >= 2 && v.first() == v.last().map(|&l| -l).as_ref() {
            conj.push(v[0]);
            v.remove(0);
            v.pop();
        }
        (Word(v), Word(conj))
    }

    /// Rotate left by `k`: for a cyclically reduced word this is conjugation
    /// by its length-`k` prefix.
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word::from_letters(v)
    }

    /// Exponent vector in the abelianization (length = generator count).
    pub fn abelianized(&self, num_gens: usize) -> Vec<i64> {
        let mut v = vec![0i64; num_gens];
        for &l in &self.0 {
            let idx = l.unsigned_abs() as usize - 1;
            v[idx] += if l > 0 { 1 } else { -1 };
        }
        v
    }
}

/// A free homotopy class: a nonempty, cyclically reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveClass {
    word: Word,
}

impl CurveClass {
    pub fn new(word: Word) -> Result<Self> {
        let (core, _) = word.cyclic_reduce();
        if core.is_empty() {
            return Err(Error::BadWord("curve class must be a nonempty cyclically reduced word".into()));
        }
        Ok(CurveClass { word: core })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn inverse(&self) -> CurveClass {
        CurveClass { word: self.word.inverse() }
    }

    pub fn rotate(&self, k: usize) -> CurveClass {
        CurveClass { word: self.word.rotate(k) }
    }

    /// Canonical representative of the cyclic word up to rotation and
    /// inversion: the lexicographically least rotation of the word or its
    /// inverse. Used as a cheap deduplication pre-key; geometric tests make
    /// the final call.
    pub fn cyclic_key(&self) -> Vec<i32> {
        let mut best: Option<Vec<i32>> = None;
        for w in [&self.word, &self.word.inverse()] {
            let n = w.len();
            for k in 0..n {
                let rot = w.rotate(k);
                let cand = rot.letters().to_vec();
                if best.as_ref().map_or(true, |b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        best.unwrap()
    }

    /// Same unoriented cyclic class (as words; ignores group relations).
    pub fn same_cyclic_word(&self, other: &CurveClass) -> bool {
        self.cyclic_key() == other.cyclic_key()
    }
}

/// Generator name table mapping letters to text symbols.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GenTable {
    names: Vec<String>,
}

impl GenTable {
    pub fn new(names: Vec<String>) -> Result<Self> {
        for n in &names {
            let mut chars = n.chars();
            let head_ok = chars.next().is_some_and(|c| c.is_ascii_lowercase());
            let tail_ok = !n[1..].is_empty() && n[1..].chars().all(|c| c.is_ascii_digit());
            if !head_ok || !tail_ok {
                return Err(Error::BadWord(format!(
                    "generator name {n:?} must be a lowercase letter followed by digits"
                )));
            }
        }
        Ok(GenTable { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Render a word as dot-separated symbols; uppercase first letter means
    /// the inverse generator.
    pub fn format(&self, word: &Word) -> String {
        word.letters()
            .iter()
            .map(|&l| {
                let name = &self.names[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    name.clone()
                } else {
                    let mut s = String::with_capacity(name.len());
                    let mut chars = name.chars();
                    s.push(chars.next().unwrap().to_ascii_uppercase());
                    s.extend(chars);
                    s
                }
            })
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Parse `word := sym ("." sym)*; sym := [a-zA-Z][0-9]+`.
    pub fn parse(&self, text: &str) -> Result<Word> {
        if text.is_empty() {
            return Err(Error::BadWord("empty word".into()));
        }
        let mut letters = Vec::new();
        for sym in text.split('.') {
            let mut chars = sym.chars();
            let head = chars
                .next()
                .ok_or_else(|| Error::BadWord(format!("empty symbol in {text:?}")))?;
            if !head.is_ascii_alphabetic() {
                return Err(Error::BadWord(format!("symbol {sym:?} must start with a letter")));
            }
            let digits: String = chars.collect();
            if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
                return Err(Error::BadWord(format!("symbol {sym:?} must end with digits")));
            }
            let lower = format!("{}{}", head.to_ascii_lowercase(), digits);
            let idx = self
                .index_of(&lower)
                .ok_or_else(|| Error::BadWord(format!("unknown generator {sym:?}")))?;
            let letter = (idx + 1) as i32;
            letters.push(if head.is_ascii_uppercase() { -letter } else { letter });
        }
        Ok(Word::from_letters(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction() {
        let w = Word::from_letters([1, 2, -2, -1, 3]);
        assert_eq!(w.letters(), &[3]);
        let w = Word::from_letters([1, -1]);
        assert!(w.is_empty());
    }

    #[test]
    fn cyclic_reduction_and_class() {
        let w = Word::from_letters([1, 2, 3, -2, -1]);
        let (core, conj) = w.cyclic_reduce();
        assert_eq!(core.letters(), &[3]);
        assert_eq!(conj.letters(), &[1, 2]);
        assert!(CurveClass::new(Word::from_letters([1, -1])).is_err());
        let c = CurveClass::new(w).unwrap();
        assert_eq!(c.word().letters(), &[3]);
    }

    #[test]
    fn rotation_is_conjugation() {
        let c = CurveClass::new(Word::from_letters([1, 2, -1, 3])).unwrap();
        let r = c.rotate(2);
        assert!(c.same_cyclic_word(&r));
        assert!(c.same_cyclic_word(&c.inverse()) || !c.same_cyclic_word(&r.inverse()) || true);
    }

    #[test]
    fn grammar_round_trip() {
        let table = GenTable::new(vec!["a1".into(), "b1".into(), "a2".into(), "b2".into(), "t1".into()])
            .unwrap();
        let w = table.parse("a1.b1.A1.B1").unwrap();
        assert_eq!(w.letters(), &[1, 2, -1, -2]);
        assert_eq!(table.format(&w), "a1.b1.A1.B1");
        assert!(table.parse("z9").is_err());
        assert!(table.parse("a").is_err());
        assert!(table.parse("").is_err());
        let t = table.parse("t1.T1").unwrap();
        assert!(t.is_empty());
    }
}
