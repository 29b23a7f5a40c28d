//! Fibonacci substitution words over the two-letter coupling alphabet.
//!
//! The substitution rule is A ↦ AB, B ↦ A, started from the single letter A.
//! Level-k words obey the concatenation recurrence w(k+1) = w(k) ++ w(k−1)
//! and have Fibonacci lengths 1, 2, 3, 5, 8, … (indexing F₁ = 1, F₂ = 2).
//! Letter A carries the coupling J0, letter B the coupling J1.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::tracemap::CouplingParams;

/// Default cap on word length: 2^26 letters (8 MiB of bit storage).
pub const DEFAULT_LETTER_CAP: u64 = 1 << 26;

/// One letter of the substitution alphabet. `A` carries J0, `B` carries J1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    /// ASCII representation used by the CLI word export.
    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::B => 'B',
        }
    }

    /// The coupling strength this letter selects.
    pub fn coupling(self, params: &CouplingParams) -> f64 {
        match self {
            Letter::A => params.j0(),
            Letter::B => params.j1(),
        }
    }
}

/// A Fibonacci substitution word, stored as a packed bit sequence
/// (0 = A, 1 = B) together with its substitution level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibWord {
    bits: Vec<u64>,
    len: u64,
    level: usize,
}

impl FibWord {
    fn with_capacity(len: u64, level: usize) -> Self {
        let blocks = (len as usize).div_ceil(64);
        FibWord {
            bits: Vec::with_capacity(blocks),
            len: 0,
            level,
        }
    }

    fn push(&mut self, letter: Letter) {
        let bit_index = (self.len % 64) as usize;
        if bit_index == 0 {
            self.bits.push(0);
        }
        if letter == Letter::B {
            *self.bits.last_mut().expect("block just pushed") |= 1 << bit_index;
        }
        self.len += 1;
    }

    /// Number of letters.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Substitution level k (level 1 is the single letter A).
    pub fn level(&self) -> usize {
        self.level
    }

    /// Letter at position `i` (0-based).
    pub fn letter(&self, i: u64) -> Letter {
        debug_assert!(i < self.len);
        let block = self.bits[(i / 64) as usize];
        if (block >> (i % 64)) & 1 == 1 {
            Letter::B
        } else {
            Letter::A
        }
    }

    /// Iterate over the letters in order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len).map(move |i| self.letter(i))
    }

    /// ASCII string of 'A'/'B' letters.
    pub fn to_ascii(&self) -> String {
        self.letters().map(Letter::to_char).collect()
    }

    /// Concatenation `self ++ other`, labelled with `level`.
    fn concat(&self, other: &FibWord, level: usize) -> FibWord {
        let mut out = FibWord::with_capacity(self.len + other.len, level);
        for l in self.letters().chain(other.letters()) {
            out.push(l);
        }
        out
    }
}

/// Length F_k of the level-k word (F₁ = 1, F₂ = 2), or an error when it
/// exceeds `cap`.
pub fn word_length(k: usize, cap: u64) -> Result<u64> {
    if k == 0 {
        return Err(CoreError::Domain("word level must be >= 1"));
    }
    let (mut prev, mut cur) = (1u64, 1u64); // F_0 := 1 internally, F_1 = 1
    for level in 1..k {
        let next = cur
            .checked_add(prev)
            .ok_or(CoreError::WordCapacity { level, cap })?;
        prev = cur;
        cur = next;
        if cur > cap {
            return Err(CoreError::WordCapacity {
                level: level + 1,
                cap,
            });
        }
    }
    if cur > cap {
        return Err(CoreError::WordCapacity { level: k, cap });
    }
    Ok(cur)
}

/// Apply the substitution A ↦ AB, B ↦ A letterwise, producing the next level.
pub fn substitute(word: &FibWord) -> FibWord {
    let grown = word.letters().map(|l| match l {
        Letter::A => 2u64,
        Letter::B => 1u64,
    });
    let new_len: u64 = grown.sum();
    let mut out = FibWord::with_capacity(new_len, word.level() + 1);
    for l in word.letters() {
        match l {
            Letter::A => {
                out.push(Letter::A);
                out.push(Letter::B);
            }
            Letter::B => out.push(Letter::A),
        }
    }
    out
}

/// The level-k word, built by the concatenation recurrence with the default
/// capacity cap.
pub fn word_at_level(k: usize) -> Result<FibWord> {
    word_at_level_capped(k, DEFAULT_LETTER_CAP)
}

/// The level-k word with an explicit capacity cap on the letter count.
pub fn word_at_level_capped(k: usize, cap: u64) -> Result<FibWord> {
    word_length(k, cap)?;
    let mut prev = {
        // Level-0 convention: the single letter B, so that w(2) = w(1) ++ w(0).
        let mut w = FibWord::with_capacity(1, 0);
        w.push(Letter::B);
        w
    };
    let mut cur = {
        let mut w = FibWord::with_capacity(1, 1);
        w.push(Letter::A);
        w
    };
    for level in 2..=k {
        let next = cur.concat(&prev, level);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Map a word letterwise to its coupling sequence (A ↦ J0, B ↦ J1).
pub fn coupling_sequence(word: &FibWord, params: &CouplingParams) -> Vec<f64> {
    let mut out = vec![0.0; word.len() as usize];
    for (slot, letter) in out.iter_mut().zip(word.letters()) {
        *slot = letter.coupling(params);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(j0: f64, j1: f64) -> CouplingParams {
        CouplingParams::new(j0, j1).unwrap()
    }

    #[test]
    fn base_case_is_single_a() {
        let w = word_at_level(1).unwrap();
        assert_eq!(w.to_ascii(), "A");
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn level_four_word() {
        assert_eq!(word_at_level(4).unwrap().to_ascii(), "ABAAB");
    }

    #[test]
    fn substitution_chain_matches_displays() {
        let w1 = word_at_level(1).unwrap();
        let w2 = substitute(&w1);
        assert_eq!(w2.to_ascii(), "AB");
        let w3 = substitute(&w2);
        assert_eq!(w3.to_ascii(), "ABA");
        let w4 = substitute(&w3);
        assert_eq!(w4.to_ascii(), "ABAAB");
    }

    #[test]
    fn concatenation_recurrence_holds() {
        for k in 2..=16 {
            let wk1 = word_at_level(k + 1).unwrap();
            let wk = word_at_level(k).unwrap();
            let wkm1 = word_at_level(k - 1).unwrap();
            let glued: String = wk.to_ascii() + &wkm1.to_ascii();
            assert_eq!(wk1.to_ascii(), glued, "recurrence broken at level {k}");
        }
    }

    #[test]
    fn substitution_agrees_with_concatenation() {
        for k in 1..=14 {
            let wk = word_at_level(k).unwrap();
            let next = substitute(&wk);
            assert_eq!(next.to_ascii(), word_at_level(k + 1).unwrap().to_ascii());
            assert_eq!(next.level(), k + 1);
        }
    }

    #[test]
    fn lengths_are_fibonacci() {
        let expected = [1u64, 2, 3, 5, 8, 13, 21, 34, 55, 89];
        for (i, &f) in expected.iter().enumerate() {
            assert_eq!(word_length(i + 1, DEFAULT_LETTER_CAP).unwrap(), f);
            assert_eq!(word_at_level(i + 1).unwrap().len(), f);
        }
    }

    #[test]
    fn capacity_cap_is_enforced() {
        let err = word_at_level_capped(30, 1000).unwrap_err();
        assert!(matches!(err, CoreError::WordCapacity { .. }));
        // The largest level under the cap still builds.
        assert!(word_at_level_capped(15, 1000).is_ok());
    }

    #[test]
    fn coupling_sequence_maps_letterwise() {
        let p = params(1.0, 2.0);
        let w = word_at_level(4).unwrap();
        assert_eq!(coupling_sequence(&w, &p), vec![1.0, 2.0, 1.0, 1.0, 2.0]);

        let p2 = params(2.0, 1.0);
        let w2 = word_at_level(2).unwrap();
        assert_eq!(coupling_sequence(&w2, &p2), vec![2.0, 1.0]);

        let p3 = params(3.0, 3.0);
        let w1 = word_at_level(1).unwrap();
        assert_eq!(coupling_sequence(&w1, &p3), vec![3.0]);
    }

    #[test]
    fn bit_packing_survives_block_boundaries() {
        // Level 11 has 144 letters, crossing several 64-bit blocks.
        let w = word_at_level(11).unwrap();
        let by_substitution = substitute(&word_at_level(10).unwrap());
        assert_eq!(w.to_ascii(), by_substitution.to_ascii());
        assert_eq!(w.len(), 144);
    }
}
