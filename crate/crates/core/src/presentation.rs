//! Finite presentations `⟨x_1, …, x_r : R_1, …, R_s⟩` and their text form.
//!
//! ```text
//! gens: x, y
//! rels: x y x y^-1 x^-1 y^-1
//! ```
//!
//! Clauses may be separated by newlines or `;`. Relators are separated by
//! `;` or newlines, and a word is a whitespace-separated list of tokens
//! `name`, `name^-1`, `name^k`, or `1` for the identity. `#` starts a
//! comment that runs to the end of the line.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::snf::{smith_normal_form, SmithForm};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidInput(
                "a presentation needs at least one generator".into(),
            ));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !is_identifier(name) {
                return Err(Error::InvalidInput(format!(
                    "invalid generator name {name:?}"
                )));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "duplicate generator name {name:?}"
                )));
            }
        }
        for r in &relators {
            if r.rank() != names.len() {
                return Err(Error::RankMismatch {
                    left: names.len(),
                    right: r.rank(),
                });
            }
        }
        Ok(Self { names, relators })
    }

    /// Generators named `prefix1 … prefixr`.
    pub fn with_indexed_names(prefix: &str, rank: usize, relators: Vec<Word>) -> Result<Self> {
        let names = (1..=rank).map(|i| format!("{prefix}{i}")).collect();
        Self::new(names, relators)
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The same generators with one more relator.
    pub fn with_relator(&self, relator: Word) -> Result<Self> {
        let mut relators = self.relators.clone();
        relators.push(relator);
        Self::new(self.names.clone(), relators)
    }

    /// Free product: disjoint union of generators and relators. Generator
    /// names of `other` that clash get a `_2` suffix.
    pub fn free_product(&self, other: &Presentation) -> Result<Self> {
        let r1 = self.rank();
        let rank = r1 + other.rank();
        let mut names = self.names.clone();
        for n in &other.names {
            let mut candidate = n.clone();
            while names.contains(&candidate) {
                candidate.push_str("_2");
            }
            names.push(candidate);
        }
        let shift = |w: &Word, offset: usize| {
            Word::free_reduce(
                rank,
                w.letters()
                    .iter()
                    .map(|l| Letter::new(l.generator + offset, l.inverse)),
            )
        };
        let mut relators = Vec::new();
        for w in &self.relators {
            relators.push(shift(w, 0)?);
        }
        for w in &other.relators {
            relators.push(shift(w, r1)?);
        }
        Self::new(names, relators)
    }

    /// The `r × s` relator exponent matrix: column `j` is `ab(R_j)`.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let mut a = IntMatrix::zeros(self.rank(), self.relators.len());
        for (j, rel) in self.relators.iter().enumerate() {
            for (i, e) in rel.abelianize().entries().iter().enumerate() {
                a[(i, j)] = BigInt::from(*e);
            }
        }
        a
    }

    pub fn abelianization(&self) -> AbelianizationData {
        let a = self.exponent_matrix();
        let snf = smith_normal_form(&a);
        let diag = snf.diagonal();
        let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
        let torsion = diag
            .iter()
            .filter(|x| **x > BigInt::from(1))
            .cloned()
            .collect();
        AbelianizationData {
            betti: self.rank() - nonzero,
            torsion,
            exponent_matrix: a,
            snf,
        }
    }

    /// Parses a word over this presentation's generator names.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse_word_at(&self.names, text, 1, 1)
    }
}

/// `ab(Γ) ≅ Z^d ⊕ ⊕ Z/t_k`, together with the Smith form that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianizationData {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
    pub exponent_matrix: IntMatrix,
    pub snf: SmithForm,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses one word; `line`/`col` locate the start of `text` in the input.
fn parse_word_at(
    names: &[String],
    text: &str,
    line: usize,
    col: usize,
) -> Result<Word> {
    let rank = names.len();
    let mut letters = Vec::new();
    let bytes: Vec<char> = text.chars().collect();
    let mut k = 0;
    while k < bytes.len() {
        if bytes[k].is_whitespace() {
            k += 1;
            continue;
        }
        let start = k;
        while k < bytes.len() && !bytes[k].is_whitespace() {
            k += 1;
        }
        let token: String = bytes[start..k].iter().collect();
        let tcol = col + start;
        if token == "1" {
            continue;
        }
        let (name, exp) = match token.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e.parse().map_err(|_| {
                    parse_error(line, tcol + n.len() + 1, format!("malformed exponent {e:?}"))
                })?;
                (n, e)
            }
            None => (token.as_str(), 1),
        };
        if !is_identifier(name) {
            return Err(parse_error(line, tcol, format!("malformed token {token:?}")));
        }
        let g = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| parse_error(line, tcol, format!("unknown generator {name:?}")))?;
        let letter = Letter::new(g, exp < 0);
        letters.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
    }
    Word::free_reduce(rank, letters)
}

/// A piece of the input with its source position.
struct Span<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

/// Splits the input into `;`/newline-separated segments, stripping comments.
fn segments(text: &str) -> Vec<Span<'_>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut offset = 0;
        for piece in line.split(';') {
            out.push(Span {
                text: piece,
                line: ln + 1,
                col: line[..offset].chars().count() + 1,
            });
            offset += piece.len() + 1;
        }
    }
    out
}

impl FromStr for Presentation {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        enum Clause {
            None,
            Gens,
            Rels,
        }
        let mut clause = Clause::None;
        let mut names: Vec<(String, usize, usize)> = Vec::new();
        let mut gens_seen = false;
        let mut rel_spans: Vec<(String, usize, usize)> = Vec::new();

        for span in segments(text) {
            let trimmed_start = span.text.len() - span.text.trim_start().len();
            let body = span.text.trim();
            if body.is_empty() {
                continue;
            }
            let col = span.col + span.text[..trimmed_start].chars().count();
            let (content, ccol) = if let Some(rest) = body.strip_prefix("gens:") {
                if gens_seen {
                    return Err(parse_error(span.line, col, "duplicate gens: clause"));
                }
                gens_seen = true;
                clause = Clause::Gens;
                (rest, col + 5)
            } else if let Some(rest) = body.strip_prefix("rels:") {
                if !gens_seen {
                    return Err(parse_error(span.line, col, "rels: before gens:"));
                }
                clause = Clause::Rels;
                (rest, col + 5)
            } else {
                (body, col)
            };
            match clause {
                Clause::None => {
                    return Err(parse_error(span.line, col, "expected gens: clause"));
                }
                Clause::Gens => {
                    let mut offset = 0;
                    for piece in content.split(',') {
                        let lead = piece.len() - piece.trim_start().len();
                        let name = piece.trim();
                        let ncol = ccol + content[..offset + lead].chars().count();
                        offset += piece.len() + 1;
                        if name.is_empty() {
                            continue;
                        }
                        if !is_identifier(name) {
                            return Err(parse_error(
                                span.line,
                                ncol,
                                format!("invalid generator name {name:?}"),
                            ));
                        }
                        if names.iter().any(|(n, _, _)| n == name) {
                            return Err(parse_error(
                                span.line,
                                ncol,
                                format!("duplicate generator name {name:?}"),
                            ));
                        }
                        names.push((name.to_string(), span.line, ncol));
                    }
                }
                Clause::Rels => {
                    if !content.trim().is_empty() {
                        rel_spans.push((content.to_string(), span.line, ccol));
                    }
                }
            }
        }
        if names.is_empty() {
            return Err(parse_error(1, 1, "no generators declared"));
        }
        let names: Vec<String> = names.into_iter().map(|(n, _, _)| n).collect();
        let relators = rel_spans
            .iter()
            .map(|(t, line, col)| parse_word_at(&names, t, *line, *col))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(names, relators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens: {}", self.names.join(", "))?;
        write!(f, "rels:")?;
        for (k, r) in self.relators.iter().enumerate() {
            if k > 0 {
                write!(f, ";")?;
            }
            write!(f, " {}", r.display_with(&self.names))?;
        }
        writeln!(f)
    }
}
