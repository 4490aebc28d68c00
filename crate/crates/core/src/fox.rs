//! Fox derivatives and the Alexander matrix.
//!
//! `D_i : F_r → Z[t^{±1}]` is determined by `D_i(x_j) = δ_ij` and the
//! product rule `D_i(fg) = D_i(f) + ab(f)·D_i(g)`, which forces
//! `D_i(x_j⁻¹) = −t_j⁻¹·δ_ij`. Entries of the Alexander matrix stay in the
//! free-group ring; the quotient to `Z[ab(Γ)]` is applied at evaluation.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CyclotomicMatrix, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::exponent::ExponentVector;
use crate::laurent::{Laurent, LaurentPoly};
use crate::presentation::{AbelianizationData, Presentation};
use crate::word::Word;

/// All partials `(D_1 w, …, D_r w)` in one left-to-right pass over the
/// letters, tracking the abelianized prefix.
pub fn fox_gradient(w: &Word) -> Vec<LaurentPoly> {
    let rank = w.rank();
    let mut grad = vec![LaurentPoly::zero(rank); rank];
    let mut prefix = ExponentVector::zero(rank);
    let one = BigInt::one();
    for l in w.letters() {
        if l.inverse {
            prefix.add_at(l.generator, -1);
            grad[l.generator].add_term(prefix.clone(), -&one);
        } else {
            grad[l.generator].add_term(prefix.clone(), one.clone());
            prefix.add_at(l.generator, 1);
        }
    }
    grad
}

pub fn fox_partial(w: &Word, i: usize) -> Result<LaurentPoly> {
    if i >= w.rank() {
        return Err(Error::GeneratorOutOfRange {
            index: i,
            rank: w.rank(),
        });
    }
    Ok(fox_gradient(w).swap_remove(i))
}

/// `Σ_i D_i(w)·(t_i − 1)`, which equals `ab(w) − 1` for every word.
pub fn fundamental_sum(grad: &[LaurentPoly]) -> LaurentPoly {
    let rank = grad.len();
    let mut acc = LaurentPoly::zero(rank);
    for (i, d) in grad.iter().enumerate() {
        let ti_minus_1 = &LaurentPoly::variable(rank, i) - &LaurentPoly::one(rank);
        acc = &acc + &(d * &ti_minus_1);
    }
    acc
}

/// The `r × s` matrix of Fox partials of the relators.
#[derive(Clone, Debug, PartialEq)]
pub struct AlexanderMatrix {
    presentation: Presentation,
    /// Row-major: `entries[i][j] = D_i(R_j)`.
    entries: Vec<Vec<LaurentPoly>>,
}

impl AlexanderMatrix {
    pub fn new(presentation: &Presentation) -> Self {
        let r = presentation.rank();
        let mut entries = vec![Vec::with_capacity(presentation.relators().len()); r];
        for rel in presentation.relators() {
            for (i, d) in fox_gradient(rel).into_iter().enumerate() {
                entries[i].push(d);
            }
        }
        Self {
            presentation: presentation.clone(),
            entries,
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn rank(&self) -> usize {
        self.presentation.rank()
    }

    pub fn relator_count(&self) -> usize {
        self.presentation.relators().len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<LaurentPoly>] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<LaurentPoly> {
        self.entries.iter().map(|row| row[j].clone()).collect()
    }

    /// Evaluates every entry at `t_i ↦ ζ_N^{a_i}`. No relator check is done
    /// here; see [`crate::strata::evaluate_matrix`].
    pub fn evaluate_at_roots(&self, modulus: u64, exponents: &[u64]) -> Result<CyclotomicMatrix> {
        let rows = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| p.evaluate_at_roots(modulus, exponents))
                    .collect::<Result<Vec<CyclotomicNumber>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if self.relator_count() == 0 {
            return Ok(CyclotomicMatrix::zeros(modulus, self.rank(), 0));
        }
        CyclotomicMatrix::from_rows(modulus, rows)
    }

    /// Display-only image of the entries in `Z[ab(Γ)/torsion]`, with one
    /// variable per free generator of the abelianization.
    ///
    /// Row `k` of the Smith transform `U` (for each free coordinate `k`)
    /// gives the exponent of the `k`-th free basis element in the image of
    /// `t_i`; torsion coordinates are dropped. The sign of each basis
    /// element is chosen so its first nonzero coordinate is positive.
    pub fn apply_abelianization_quotient(&self, ab: &AbelianizationData) -> QuotientMatrix {
        let r = self.rank();
        let nonzero = ab.snf.rank();
        let images: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                (nonzero..r)
                    .map(|k| {
                        let row = ab.snf.u.row(k);
                        let first = row.iter().find(|x| **x != BigInt::from(0));
                        let flip = first.is_some_and(|x| *x < BigInt::from(0));
                        let v = i64::try_from(&row[i]).expect("exponent fits in i64");
                        if flip {
                            -v
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect();
        let d = r - nonzero;
        let entries = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| {
                        let mut q = LaurentPoly::zero(d);
                        for (e, c) in p.terms() {
                            let mut img = vec![0i64; d];
                            for (i, &ei) in e.entries().iter().enumerate() {
                                for (k, slot) in img.iter_mut().enumerate() {
                                    *slot += ei * images[i][k];
                                }
                            }
                            q.add_term(ExponentVector::new(img), c.clone());
                        }
                        q
                    })
                    .collect()
            })
            .collect();
        let names = if d == 1 {
            vec!["".to_string()]
        } else {
            (1..=d).map(|k| k.to_string()).collect()
        };
        QuotientMatrix { names, entries }
    }

    pub fn to_json(&self) -> AlexanderMatrixJson {
        AlexanderMatrixJson {
            generators: self.presentation.names().to_vec(),
            relators: self.relator_count(),
            entries: self.entries.clone(),
        }
    }

    /// Rebuilds the entries from JSON; the presentation supplies the rank.
    pub fn entries_from_json(json: &AlexanderMatrixJson) -> Result<Vec<Vec<LaurentPoly>>> {
        let rank = json.generators.len();
        if json.entries.len() != rank {
            return Err(Error::InvalidInput(format!(
                "expected {rank} rows, found {}",
                json.entries.len()
            )));
        }
        let mut out = Vec::with_capacity(rank);
        for row in &json.entries {
            if row.len() != json.relators {
                return Err(Error::InvalidInput("ragged matrix rows".into()));
            }
            out.push(
                row.iter()
                    .map(|p| {
                        if p.is_zero() {
                            Ok(LaurentPoly::zero(rank))
                        } else if p.rank() != rank {
                            Err(Error::RankMismatch {
                                left: rank,
                                right: p.rank(),
                            })
                        } else {
                            Ok(p.clone())
                        }
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(out)
    }
}

/// Matrix entries after the abelianization quotient. Variable names are
/// suffixes for `t`: a single free generator prints as `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientMatrix {
    pub names: Vec<String>,
    pub entries: Vec<Vec<LaurentPoly>>,
}

impl QuotientMatrix {
    pub fn entry_text(&self, i: usize, j: usize) -> String {
        let text = self.entries[i][j].display_with(&self.names).to_string();
        // `t_` with an empty suffix is just `t`.
        if self.names.len() == 1 {
            text.replace("t_", "t")
        } else {
            text
        }
    }
}

/// Serialized form of an Alexander matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlexanderMatrixJson {
    pub generators: Vec<String>,
    pub relators: usize,
    /// `entries[i][j]` is `D_i(R_j)` as `[[exponents], coefficient]` pairs.
    pub entries: Vec<Vec<LaurentPoly>>,
}

/// Checks `Σ_i D_i(w)(t_i − 1) = ab(w) − 1` for one word.
pub fn fundamental_identity_holds(w: &Word) -> bool {
    let rank = w.rank();
    let rhs = &Laurent::group_element(w.abelianize()) - &LaurentPoly::one(rank);
    fundamental_sum(&fox_gradient(w)) == rhs
}
