use std::ops::Mul;

use serde::{Deserialize, Serialize};

/// A freely reduced word in a free group, run-length encoded as
/// `(generator index, nonzero exponent)` syllables. Adjacent syllables
/// always have distinct generators.
///
/// Exponents are `i64`; overflowing one panics.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    syl: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word { syl: Vec::new() }
    }

    pub fn gen(g: usize) -> Self {
        Word { syl: vec![(g, 1)] }
    }

    /// `g^e` (the identity when `e == 0`).
    pub fn power_of(g: usize, e: i64) -> Self {
        if e == 0 {
            Word::identity()
        } else {
            Word { syl: vec![(g, e)] }
        }
    }

    /// Freely reduces an arbitrary syllable sequence.
    pub fn from_syllables<I: IntoIterator<Item = (usize, i64)>>(syllables: I) -> Self {
        let mut w = Word::identity();
        for (g, e) in syllables {
            w.push(g, e);
        }
        w
    }

    /// Letter sequence: each letter is `(generator, ±1)`.
    pub fn from_letters<I: IntoIterator<Item = (usize, bool)>>(letters: I) -> Self {
        Self::from_syllables(letters.into_iter().map(|(g, inv)| (g, if inv { -1 } else { 1 })))
    }

    /// Appends `g^e` with cancellation against the tail.
    pub fn push(&mut self, g: usize, e: i64) {
        self.checked_push(g, e).expect("word exponent overflow")
    }

    /// `push` that reports exponent overflow instead of panicking; the word
    /// is left unchanged on failure.
    pub fn checked_push(&mut self, g: usize, e: i64) -> Option<()> {
        if e == 0 {
            return Some(());
        }
        match self.syl.last_mut() {
            Some((h, f)) if *h == g => {
                let sum = f.checked_add(e)?;
                if sum == 0 {
                    self.syl.pop();
                } else {
                    *f = sum;
                }
            }
            _ => self.syl.push((g, e)),
        }
        Some(())
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syl
    }

    pub fn is_identity(&self) -> bool {
        self.syl.is_empty()
    }

    pub fn num_syllables(&self) -> usize {
        self.syl.len()
    }

    /// Length in letters, saturating at `u64::MAX`.
    pub fn len(&self) -> u64 {
        self.syl.iter().fold(0u64, |acc, &(_, e)| acc.saturating_add(e.unsigned_abs()))
    }

    pub fn is_empty(&self) -> bool {
        self.syl.is_empty()
    }

    /// Each letter as `(generator, inverted)`.
    pub fn letters(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.syl
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n((g, e < 0), e.unsigned_abs() as usize))
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.syl.iter().map(|&(g, _)| g).max()
    }

    pub fn concat(&self, other: &Word) -> Word {
        self.checked_concat(other).expect("word exponent overflow")
    }

    pub fn checked_concat(&self, other: &Word) -> Option<Word> {
        let mut w = self.clone();
        for &(g, e) in &other.syl {
            w.checked_push(g, e)?;
        }
        Some(w)
    }

    pub fn inverse(&self) -> Word {
        Word {
            syl: self.syl.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        self.checked_pow(n).expect("word exponent overflow")
    }

    pub fn checked_pow(&self, n: i64) -> Option<Word> {
        if n < 0 {
            return self.inverse().checked_pow(n.checked_neg()?);
        }
        if let [(g, e)] = self.syl.as_slice() {
            return Some(Word::power_of(*g, e.checked_mul(n)?));
        }
        if n > 0 && self.len().checked_mul(n as u64)? > 1 << 40 {
            return None;
        }
        let mut acc = Word::identity();
        let mut sq = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_concat(&sq)?;
            }
            k >>= 1;
            if k > 0 {
                sq = sq.checked_concat(&sq)?;
            }
        }
        Some(acc)
    }

    /// Cyclically reduced representative of the conjugacy class: strips a
    /// conjugating prefix/suffix pair and merges the first and last
    /// syllables when they share a generator.
    pub fn cyclic_reduce(&self) -> Word {
        let mut syl = self.syl.clone();
        let mut start = 0;
        while syl.len() - start >= 2 {
            let (g0, e0) = syl[start];
            let (g1, e1) = syl[syl.len() - 1];
            if g0 != g1 {
                break;
            }
            syl.pop();
            let sum = e0.checked_add(e1).expect("word exponent overflow");
            if sum == 0 {
                start += 1;
            } else {
                syl[start] = (g0, sum);
                break;
            }
        }
        Word {
            syl: syl.split_off(start),
        }
    }

    /// Exponent sum of each of the first `num_gens` generators.
    pub fn exponent_sums(&self, num_gens: usize) -> Vec<i64> {
        let mut v = vec![0i64; num_gens];
        for &(g, e) in &self.syl {
            v[g] += e;
        }
        v
    }

    /// Renames generators through `map` (old index → new index) and
    /// re-reduces, since merged names can create cancellation.
    pub fn relabel(&self, map: &[usize]) -> Word {
        Word::from_syllables(self.syl.iter().map(|&(g, e)| (map[g], e)))
    }
}

impl Mul<&Word> for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(self, rhs: Word) -> Word {
        self.concat(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const X: usize = 0;
    const Y: usize = 1;

    fn w(s: &[(usize, i64)]) -> Word {
        Word::from_syllables(s.iter().copied())
    }

    #[test]
    fn inverse_pair_cancels() {
        let xy = w(&[(X, 1), (Y, 1)]);
        let inv = w(&[(Y, -1), (X, -1)]);
        assert!(xy.concat(&inv).is_identity());
        assert_eq!(xy.inverse(), inv);
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(w(&[(X, -1), (Y, 2), (X, 1)]).cyclic_reduce(), w(&[(Y, 2)]));
        assert_eq!(w(&[(X, 2), (Y, 1), (X, -1)]).cyclic_reduce(), w(&[(X, 1), (Y, 1)]));
        assert_eq!(w(&[(X, 3)]).cyclic_reduce(), w(&[(X, 3)]));
        assert!(Word::identity().cyclic_reduce().is_identity());
        // x y x^-1 y^-1 is already cyclically reduced.
        let comm = w(&[(X, 1), (Y, 1), (X, -1), (Y, -1)]);
        assert_eq!(comm.cyclic_reduce(), comm);
    }

    #[test]
    fn powers() {
        let x2y = w(&[(X, 2), (Y, 1)]);
        assert_eq!(x2y.pow(2), w(&[(X, 2), (Y, 1), (X, 2), (Y, 1)]));
        assert_eq!(x2y.pow(-1), x2y.inverse());
        assert!(x2y.pow(0).is_identity());
        assert_eq!(Word::gen(X).pow(7), Word::power_of(X, 7));
        // Conjugate: (x y x^-1)^3 = x y^3 x^-1.
        assert_eq!(w(&[(X, 1), (Y, 1), (X, -1)]).pow(3), w(&[(X, 1), (Y, 3), (X, -1)]));
    }

    #[test]
    fn letters_and_sums() {
        let word = w(&[(X, 2), (Y, -3), (X, -1)]);
        assert_eq!(word.len(), 6);
        assert_eq!(word.exponent_sums(2), vec![1, -3]);
        assert_eq!(Word::from_letters(word.letters()), word);
    }
}
