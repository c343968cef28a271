//! Tuple-digit alphabets.
//!
//! A letter packs one digit per track into a single integer, track 0 most
//! significant. A k-track word therefore reads k integers in parallel, all
//! padded to a common length. Letter order (numeric order of the packed
//! value) is the canonical order used everywhere for tie-breaking.

use std::cmp::Ordering;

use crate::{Error, Result};

/// A packed digit tuple.
pub type Letter = u16;

/// A word over a tuple alphabet.
pub type Word = Vec<Letter>;

/// Alphabet of digit tuples; each track has its own radix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleAlphabet {
    radices: Vec<u16>,
    /// weights[i] = product of radices[i+1..], so that
    /// letter = sum(digit[i] * weights[i]).
    weights: Vec<usize>,
}

impl TupleAlphabet {
    pub fn new(radices: Vec<u16>) -> Result<Self> {
        if radices.is_empty() {
            return Err(Error::InvalidInput("alphabet needs at least one track".into()));
        }
        let mut count: usize = 1;
        for &r in &radices {
            if r < 2 {
                return Err(Error::InvalidInput(format!("track radix must be >= 2, got {r}")));
            }
            count = count
                .checked_mul(r as usize)
                .filter(|&c| c <= Letter::MAX as usize + 1)
                .ok_or_else(|| Error::InvalidInput("letter count exceeds 65536".into()))?;
        }
        let mut weights = vec![1usize; radices.len()];
        for i in (0..radices.len().saturating_sub(1)).rev() {
            weights[i] = weights[i + 1] * radices[i + 1] as usize;
        }
        Ok(Self { radices, weights })
    }

    pub fn uniform(radix: u16, arity: usize) -> Result<Self> {
        Self::new(vec![radix; arity])
    }

    pub fn arity(&self) -> usize {
        self.radices.len()
    }

    pub fn radices(&self) -> &[u16] {
        &self.radices
    }

    pub fn letter_count(&self) -> usize {
        self.weights[0] * self.radices[0] as usize
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.letter_count()).map(|l| l as Letter)
    }

    /// The all-zeros letter.
    pub fn zero(&self) -> Letter {
        0
    }

    pub fn digit(&self, letter: Letter, track: usize) -> u16 {
        (letter as usize / self.weights[track] % self.radices[track] as usize) as u16
    }

    pub fn digits(&self, letter: Letter) -> Vec<u16> {
        (0..self.arity()).map(|t| self.digit(letter, t)).collect()
    }

    /// Packs per-track digits into a letter. Digits must be in range.
    pub fn pack(&self, digits: &[u16]) -> Letter {
        debug_assert_eq!(digits.len(), self.arity());
        let mut l = 0usize;
        for (i, &d) in digits.iter().enumerate() {
            debug_assert!(d < self.radices[i]);
            l += d as usize * self.weights[i];
        }
        l as Letter
    }

    /// Restriction of this alphabet to the given tracks, in the given order.
    pub fn sub(&self, tracks: &[usize]) -> Result<Self> {
        let radices = tracks
            .iter()
            .map(|&t| {
                self.radices
                    .get(t)
                    .copied()
                    .ok_or_else(|| Error::InvalidInput(format!("track {t} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(radices)
    }

    /// Projects a letter onto the given tracks of this alphabet, packed for
    /// the corresponding sub-alphabet.
    pub fn project_letter(&self, letter: Letter, tracks: &[usize], sub: &TupleAlphabet) -> Letter {
        let digits: Vec<u16> = tracks.iter().map(|&t| self.digit(letter, t)).collect();
        sub.pack(&digits)
    }
}

/// Canonical word order: by length, then lexicographically by letter.
pub fn shortlex(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_unpack_roundtrip() {
        let al = TupleAlphabet::new(vec![2, 3, 2]).unwrap();
        assert_eq!(al.letter_count(), 12);
        for l in al.letters() {
            assert_eq!(al.pack(&al.digits(l)), l);
        }
        // track 0 most significant in the canonical order
        assert_eq!(al.digits(0), vec![0, 0, 0]);
        assert_eq!(al.digits(1), vec![0, 0, 1]);
        assert_eq!(al.digits(2), vec![0, 1, 0]);
        assert_eq!(al.digits(6), vec![1, 0, 0]);
    }

    #[test]
    fn rejects_bad_radices() {
        assert!(TupleAlphabet::new(vec![]).is_err());
        assert!(TupleAlphabet::new(vec![2, 1]).is_err());
    }

    #[test]
    fn shortlex_order() {
        assert_eq!(shortlex(&[], &[0]), Ordering::Less);
        assert_eq!(shortlex(&[1], &[0, 0]), Ordering::Less);
        assert_eq!(shortlex(&[0, 1], &[1, 0]), Ordering::Less);
        assert_eq!(shortlex(&[1, 0], &[1, 0]), Ordering::Equal);
    }
}
