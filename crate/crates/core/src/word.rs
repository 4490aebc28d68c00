//! Words in the free group `F_r`.
//!
//! Generators are indexed from zero internally; a presentation's generator
//! order defines the index order.

use std::fmt;

use crate::error::{Error, Result};
use crate::exponent::ExponentVector;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn positive(generator: usize) -> Self {
        Self::new(generator, false)
    }

    pub fn negative(generator: usize) -> Self {
        Self::new(generator, true)
    }

    /// Builds a letter from a `±1` sign.
    pub fn from_sign(generator: usize, sign: i8) -> Self {
        Self::new(generator, sign < 0)
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Self::new(self.generator, !self.inverse)
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A freely reduced word in the free group of a fixed rank.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Self {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn generator(rank: usize, index: usize) -> Result<Self> {
        Self::free_reduce(rank, [Letter::positive(index)])
    }

    /// Freely reduces a raw letter sequence with a single stack pass.
    pub fn free_reduce(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut stack: Vec<Letter> = Vec::new();
        for letter in letters {
            if letter.generator >= rank {
                return Err(Error::GeneratorOutOfRange {
                    index: letter.generator,
                    rank,
                });
            }
            match stack.last() {
                Some(&top) if top.cancels(letter) => {
                    stack.pop();
                }
                _ => stack.push(letter),
            }
        }
        Ok(Self {
            rank,
            letters: stack,
        })
    }

    /// Convenience constructor from `(generator, ±1)` pairs.
    pub fn from_signed(rank: usize, letters: &[(usize, i8)]) -> Result<Self> {
        Self::free_reduce(rank, letters.iter().map(|&(g, s)| Letter::from_sign(g, s)))
    }

    pub fn rank(&self) -> usize {
        self.rank
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

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Self::free_reduce(
            self.rank,
            self.letters.iter().chain(&other.letters).copied(),
        )
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..n.unsigned_abs() {
            out = out.multiply(&base).expect("same rank");
        }
        out
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Word) -> Result<Word> {
        g.multiply(self)?.multiply(&g.inverse())
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &Word, b: &Word) -> Result<Word> {
        a.multiply(b)?
            .multiply(&a.inverse())?
            .multiply(&b.inverse())
    }

    /// Product of a sequence of words, all of the given rank.
    pub fn product<'a>(rank: usize, words: impl IntoIterator<Item = &'a Word>) -> Result<Word> {
        let mut out = Word::identity(rank);
        for w in words {
            out = out.multiply(w)?;
        }
        Ok(out)
    }

    /// Image in `ab(F_r) = Z^r`: signed letter counts per generator.
    pub fn abelianize(&self) -> ExponentVector {
        let mut v = ExponentVector::zero(self.rank);
        for l in &self.letters {
            v.add_at(l.generator, l.sign());
        }
        v
    }

    /// Renders the word with generator names, grouping runs as `x^k`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }

    /// Maximal runs of a single generator as `(generator, exponent)`.
    pub fn syllables(&self) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for l in &self.letters {
            match out.last_mut() {
                Some((g, e)) if *g == l.generator => *e += l.sign(),
                _ => out.push((l.generator, l.sign())),
            }
        }
        out
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, (g, e)) in self.syllables().into_iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if e == 1 {
                write!(f, "x{}", g + 1)?;
            } else {
                write!(f, "x{}^{}", g + 1, e)?;
            }
        }
        Ok(())
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return write!(f, "1");
        }
        for (k, (g, e)) in self.word.syllables().into_iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            let name = &self.names[g];
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}
