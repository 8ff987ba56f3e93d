//! Exact arithmetic in free groups: letters, freely reduced words,
//! inversion, multiplication, conjugation and cyclic reduction.

use serde::{Deserialize, Serialize};

/// A generator or its inverse. `gen` is the generator's index within the
/// alphabet of the presentation the word belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub sign: i8,
}

impl Letter {
    pub fn new(gen: usize, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1, "letter sign must be +1 or -1");
        Letter { gen, sign }
    }

    pub fn positive(gen: usize) -> Self {
        Letter { gen, sign: 1 }
    }

    pub fn negative(gen: usize) -> Self {
        Letter { gen, sign: -1 }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, sign: -self.sign }
    }

    /// True when `self · other` cancels in the free group.
    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.sign == -other.sign
    }
}

/// A freely reduced word in the free group on an indexed alphabet.
/// The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    /// Single positive generator.
    pub fn generator(gen: usize) -> Self {
        Word { letters: vec![Letter::positive(gen)] }
    }

    /// Freely reduces an arbitrary letter sequence. Single left-to-right
    /// pass with an output stack; linear time and idempotent.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Word { letters: stack }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        // Reversal of a reduced word is reduced.
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Freely reduced concatenation `self · other`.
    pub fn multiply(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate(&self, g: &Word) -> Word {
        g.inverse().multiply(self).multiply(g)
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    /// Strips matching first/last inverse letters until none remain.
    /// Returns `(core, stripper)` with `self = stripper · core · stripper⁻¹`,
    /// so `core` is conjugate to `self` and generates the same normal closure.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let mut letters = self.letters.clone();
        let mut stripper: Vec<Letter> = Vec::new();
        while letters.len() >= 2 && letters[0].cancels(*letters.last().unwrap()) {
            stripper.push(letters[0]);
            letters.pop();
            letters.remove(0);
        }
        (Word { letters }, Word { letters: stripper })
    }

    /// Exponent sum of each generator, as a row of length `num_generators`.
    pub fn exponent_sums(&self, num_generators: usize) -> Vec<i64> {
        let mut sums = vec![0i64; num_generators];
        for l in &self.letters {
            sums[l.gen] += l.sign as i64;
        }
        sums
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }
}

/// Freely reduces a letter sequence. Free-function spelling of
/// [`Word::from_letters`].
pub fn free_reduce(letters: &[Letter]) -> Word {
    Word::from_letters(letters.iter().copied())
}
