//! Finite abelian covers and their first Betti numbers.
//!
//! For an epimorphism `α : Γ → G` onto a finite abelian group, `b_1(X_α)`
//! is computed two ways that share no rank code:
//!
//! * the stratification formula, summing `max(0, r − 1 − rank M(α̂χ))` over
//!   nontrivial `χ ∈ Ĝ` with ranks taken over cyclotomic fields;
//! * the chain-complex oracle `(r − 1)|G| + 1 − rank δ_{2,α}`, with `δ_{2,α}`
//!   expanded into an integer matrix through the regular representation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::ExponentVector;
use crate::fox::AlexanderMatrix;
use crate::laurent::LaurentPoly;
use crate::matrix::IntMatrix;
use crate::presentation::Presentation;
use crate::snf::smith_normal_form;
use crate::strata::{Stratification, TorsionCharacter};

/// `Z/d_1 × … × Z/d_k`, given by arbitrary cyclic orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidInput("cyclic orders must be >= 1".into()));
        }
        Ok(Self { orders })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn trivial() -> Self {
        Self { orders: Vec::new() }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn factor_count(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.orders.iter().map(|&d| d as usize).product()
    }

    /// `lcm(d_i)`, 1 for the trivial group.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |l, d| l.lcm(d))
    }

    pub fn reduce(&self, g: &[i64]) -> Vec<u64> {
        g.iter()
            .zip(&self.orders)
            .map(|(&x, &d)| x.rem_euclid(d as i64) as u64)
            .collect()
    }

    /// Mixed-radix index, last coordinate fastest. Matches `elements()`.
    pub fn index_of(&self, g: &[u64]) -> usize {
        g.iter()
            .zip(&self.orders)
            .fold(0, |acc, (&x, &d)| acc * d as usize + (x % d) as usize)
    }

    pub fn element(&self, mut index: usize) -> Vec<u64> {
        let mut g = vec![0; self.orders.len()];
        for (slot, &d) in g.iter_mut().zip(&self.orders).rev() {
            *slot = (index % d as usize) as u64;
            index /= d as usize;
        }
        g
    }

    /// Elements in lexicographic order, identity first.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((x, y), d)| (x + y) % d)
            .collect()
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.orders.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Parses comma-separated cyclic orders, e.g. `"6"` or `"2,2"`.
impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::trivial());
        }
        let orders = s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidInput(format!("bad cyclic order {x:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(orders)
    }
}

/// A validated epimorphism `Γ → G`, stored by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Epimorphism {
    #[serde(skip)]
    presentation: Presentation,
    target: FiniteAbelianGroup,
    images: Vec<Vec<u64>>,
}

impl Epimorphism {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn images(&self) -> &[Vec<u64>] {
        &self.images
    }

    /// `α(t^e) = Σ_i e_i·α(x_i)`.
    pub fn apply(&self, e: &ExponentVector) -> Vec<u64> {
        let k = self.target.factor_count();
        let mut acc = vec![0i64; k];
        for (ei, img) in e.entries().iter().zip(&self.images) {
            for c in 0..k {
                let d = self.target.orders[c] as i64;
                acc[c] = (acc[c] + ei.rem_euclid(d) * img[c] as i64) % d;
            }
        }
        self.target.reduce(&acc)
    }
}

pub fn validate_epimorphism(
    presentation: &Presentation,
    target: &FiniteAbelianGroup,
    images: Vec<Vec<u64>>,
) -> Result<Epimorphism> {
    let r = presentation.rank();
    let k = target.factor_count();
    if images.len() != r {
        return Err(Error::RankMismatch {
            left: r,
            right: images.len(),
        });
    }
    for img in &images {
        if img.len() != k {
            return Err(Error::InvalidInput(format!(
                "image {img:?} has {} coordinates, the group has {k} factors",
                img.len()
            )));
        }
        if img.iter().zip(target.orders()).any(|(x, d)| x >= d) {
            return Err(Error::InvalidInput(format!(
                "image {img:?} is not reduced modulo {:?}",
                target.orders()
            )));
        }
    }
    let alpha = Epimorphism {
        presentation: presentation.clone(),
        target: target.clone(),
        images,
    };
    for (j, rel) in presentation.relators().iter().enumerate() {
        let image = alpha.apply(&rel.abelianize());
        if image.iter().any(|&x| x != 0) {
            return Err(Error::NotHomomorphism { relator: j, image });
        }
    }
    // The images generate G iff [images | diag(d)] has all invariant
    // factors equal to 1.
    let mut m = IntMatrix::zeros(k, r + k);
    for (i, img) in alpha.images.iter().enumerate() {
        for c in 0..k {
            m[(c, i)] = BigInt::from(img[c]);
        }
    }
    for c in 0..k {
        m[(c, r + c)] = BigInt::from(target.orders[c]);
    }
    let snf = smith_normal_form(&m);
    let index: BigInt = snf.diagonal().iter().product();
    if snf.rank() < k || !index.is_one() {
        let index = if snf.rank() < k {
            "infinite".to_string()
        } else {
            index.to_string()
        };
        return Err(Error::NotSurjective { index });
    }
    Ok(alpha)
}

/// Parses per-generator images `"x:1;y:1"` (coordinates comma-separated
/// per cyclic factor). Every generator must be listed once.
pub fn parse_images(
    presentation: &Presentation,
    target: &FiniteAbelianGroup,
    text: &str,
) -> Result<Vec<Vec<u64>>> {
    let mut images: Vec<Option<Vec<u64>>> = vec![None; presentation.rank()];
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, coords) = part
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("expected <generator>:<coords>, got {part:?}")))?;
        let name = name.trim();
        let i = presentation
            .generator_index(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown generator {name:?}")))?;
        if images[i].is_some() {
            return Err(Error::InvalidInput(format!("generator {name:?} listed twice")));
        }
        let raw = coords
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidInput(format!("bad coordinate {x:?} for {name}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if raw.len() != target.factor_count() {
            return Err(Error::InvalidInput(format!(
                "generator {name} has {} coordinates, the group has {} factors",
                raw.len(),
                target.factor_count()
            )));
        }
        images[i] = Some(target.reduce(&raw));
    }
    images
        .into_iter()
        .enumerate()
        .map(|(i, img)| {
            img.ok_or_else(|| {
                Error::InvalidInput(format!("no image given for {}", presentation.names()[i]))
            })
        })
        .collect()
}

/// `χ_c(g) = Π_k ζ_{d_k}^{c_k g_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupCharacter {
    exponents: Vec<u64>,
}

impl GroupCharacter {
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&c| c == 0)
    }
}

/// All of `Ĝ`, trivial first, then lexicographic.
pub fn characters_of(group: &FiniteAbelianGroup) -> Vec<GroupCharacter> {
    group
        .elements()
        .map(|exponents| GroupCharacter { exponents })
        .collect()
}

/// `α̂(χ)`: modulus `N = lcm(d_k)` and `a_i = Σ_k (N/d_k)·c_k·α(x_i)_k`.
pub fn pullback_character(alpha: &Epimorphism, chi: &GroupCharacter) -> TorsionCharacter {
    let n = alpha.target.exponent();
    let orders = alpha.target.orders();
    let a = alpha
        .images
        .iter()
        .map(|img| {
            (0..orders.len())
                .map(|k| (n / orders[k]) as u128 * chi.exponents[k] as u128 * img[k] as u128)
                .sum::<u128>()
                % n as u128
        })
        .map(|x| x as u64)
        .collect();
    TorsionCharacter::new(n, a).expect("modulus is at least 1")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterContribution {
    pub character: GroupCharacter,
    pub pullback: TorsionCharacter,
    pub rank: usize,
    pub dim_cohomology: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaBreakdown {
    pub base_betti: usize,
    pub contributions: Vec<CharacterContribution>,
    /// `b_1(X) + Σ_{χ≠1} max(0, r − 1 − rank M(α̂χ))`.
    pub betti: usize,
    /// `Σ_{i≥1} |W_i(Γ) ∩ α̂(Ĝ)|`.
    pub jumping_sum: usize,
}

/// Per-character data behind the formula, evaluated in parallel.
pub fn betti_cover_breakdown(alpha: &Epimorphism) -> Result<FormulaBreakdown> {
    let s = Stratification::new(&alpha.presentation);
    let r = alpha.presentation.rank();
    let contributions = characters_of(&alpha.target)
        .into_par_iter()
        .map(|chi| {
            let pullback = pullback_character(alpha, &chi);
            let report = s.report(&pullback)?;
            Ok(CharacterContribution {
                character: chi,
                pullback: report.character,
                rank: report.rank,
                dim_cohomology: report.dim_cohomology,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let base_betti = s.abelianization().betti;
    let betti = base_betti
        + contributions
            .iter()
            .filter(|c| !c.character.is_trivial())
            .map(|c| (r - 1).saturating_sub(c.rank))
            .sum::<usize>();
    let max_dim = contributions.iter().map(|c| c.dim_cohomology).max().unwrap_or(0);
    let jumping_sum = (1..=max_dim)
        .map(|i| contributions.iter().filter(|c| c.dim_cohomology >= i).count())
        .sum();
    Ok(FormulaBreakdown {
        base_betti,
        contributions,
        betti,
        jumping_sum,
    })
}

/// `b_1(X_α)` from the stratification, cross-checked against the
/// jumping-locus count.
pub fn betti_cover_formula(alpha: &Epimorphism) -> Result<usize> {
    let b = betti_cover_breakdown(alpha)?;
    if b.betti != b.jumping_sum {
        return Err(Error::Internal(format!(
            "stratum sum {} disagrees with jumping-locus sum {}",
            b.betti, b.jumping_sum
        )));
    }
    Ok(b.betti)
}

/// An element of `Z[G]`, coefficients indexed by `FiniteAbelianGroup::index_of`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    coefficients: Vec<BigInt>,
}

impl GroupRingElement {
    pub fn zero(group: &FiniteAbelianGroup) -> Self {
        Self {
            coefficients: vec![BigInt::zero(); group.order()],
        }
    }

    pub fn from_coefficients(group: &FiniteAbelianGroup, coefficients: Vec<BigInt>) -> Result<Self> {
        if coefficients.len() != group.order() {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients, got {}",
                group.order(),
                coefficients.len()
            )));
        }
        Ok(Self { coefficients })
    }

    pub fn element(group: &FiniteAbelianGroup, g: &[u64]) -> Self {
        let mut x = Self::zero(group);
        x.coefficients[group.index_of(g)] = BigInt::one();
        x
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// Image of a Laurent polynomial under `α`.
    pub fn from_laurent(alpha: &Epimorphism, p: &LaurentPoly) -> Self {
        let mut x = Self::zero(&alpha.target);
        for (e, c) in p.terms() {
            x.coefficients[alpha.target.index_of(&alpha.apply(e))] += c;
        }
        x
    }
}

/// Regular-representation block of `f = Σ c_g g`: `B[h][g + h] = c_g`.
fn regular_block(group: &FiniteAbelianGroup, f: &GroupRingElement) -> Vec<Vec<BigInt>> {
    let n = group.order();
    let elements: Vec<Vec<u64>> = group.elements().collect();
    let mut b = vec![vec![BigInt::zero(); n]; n];
    for (gi, c) in f.coefficients.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (hi, h) in elements.iter().enumerate() {
            let k = group.index_of(&group.add(&elements[gi], h));
            b[hi][k] += c;
        }
    }
    b
}

/// Replaces every `Z[G]` entry by its `|G| × |G|` integer block.
pub fn group_ring_expand(entries: &[Vec<GroupRingElement>], group: &FiniteAbelianGroup) -> IntMatrix {
    let n = group.order();
    let rows = entries.len();
    let cols = entries.first().map_or(0, Vec::len);
    let mut m = IntMatrix::zeros(rows * n, cols * n);
    for (i, row) in entries.iter().enumerate() {
        for (j, f) in row.iter().enumerate() {
            let b = regular_block(group, f);
            for (h, brow) in b.into_iter().enumerate() {
                for (k, x) in brow.into_iter().enumerate() {
                    m[(i * n + h, j * n + k)] = x;
                }
            }
        }
    }
    m
}

/// `δ_{2,α}` as an `(r|G|) × (s|G|)` integer matrix.
pub fn expanded_boundary_2(alpha: &Epimorphism) -> IntMatrix {
    let m = AlexanderMatrix::new(&alpha.presentation);
    let entries: Vec<Vec<GroupRingElement>> = m
        .rows()
        .iter()
        .map(|row| row.iter().map(|p| GroupRingElement::from_laurent(alpha, p)).collect())
        .collect();
    group_ring_expand(&entries, &alpha.target)
}

/// `δ_{1,α}` as an `|G| × (r|G|)` integer matrix with blocks `α(x_i) − 1`.
pub fn expanded_boundary_1(alpha: &Epimorphism) -> IntMatrix {
    let g = &alpha.target;
    let row: Vec<GroupRingElement> = alpha
        .images
        .iter()
        .map(|img| {
            let mut x = GroupRingElement::element(g, img);
            x.coefficients[0] -= 1;
            x
        })
        .collect();
    group_ring_expand(&[row], g)
}

/// `b_1(X_α) = (r − 1)|G| + 1 − rank δ_{2,α}`, with integer ranks.
pub fn betti_cover_oracle(alpha: &Epimorphism) -> Result<usize> {
    let r = alpha.presentation.rank();
    let n = alpha.target.order();
    let d2 = expanded_boundary_2(alpha);
    let d1 = expanded_boundary_1(alpha);
    let cycles = (r - 1) * n + 1;
    let nullity_1 = r * n - d1.rank();
    if nullity_1 != cycles {
        return Err(Error::Internal(format!(
            "nullity of delta_1 is {nullity_1}, expected {cycles}"
        )));
    }
    if d2.cols() > 0 && !(&d1 * &d2).is_zero() {
        return Err(Error::Internal("delta_1 * delta_2 is not zero".into()));
    }
    let rank = d2.rank();
    cycles.checked_sub(rank).ok_or_else(|| {
        Error::Internal(format!("rank of delta_2 ({rank}) exceeds the cycle rank {cycles}"))
    })
}

/// `Σ_χ rank M(α̂χ)`, which must equal the rank of the expanded `δ_{2,α}`.
pub fn character_rank_sum(alpha: &Epimorphism) -> Result<usize> {
    Ok(betti_cover_breakdown(alpha)?
        .contributions
        .iter()
        .map(|c| c.rank)
        .sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiComparison {
    pub group: FiniteAbelianGroup,
    pub images: Vec<Vec<u64>>,
    pub formula: usize,
    pub oracle: usize,
}

impl BettiComparison {
    pub fn agree(&self) -> bool {
        self.formula == self.oracle
    }
}

pub fn compare_betti(alpha: &Epimorphism) -> Result<BettiComparison> {
    Ok(BettiComparison {
        group: alpha.target.clone(),
        images: alpha.images.clone(),
        formula: betti_cover_formula(alpha)?,
        oracle: betti_cover_oracle(alpha)?,
    })
}
