use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An element of `Z^r`: the abelianized image of a word, or the exponent of
/// a Laurent monomial `t^λ`.
///
/// The ordering is graded: vectors compare first by total degree, and ties
/// are broken so that higher powers of earlier variables come first
/// (`t_1^2 < t_1 t_2 < t_2^2`). This is a monomial order on `N^r`, which
/// the Laurent division relies on.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn unit(rank: usize, index: usize) -> Self {
        let mut v = vec![0; rank];
        v[index] = 1;
        Self(v)
    }

    pub fn new(entries: Vec<i64>) -> Self {
        Self(entries)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<i64> {
        self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `Σ λ_i a_i` reduced into `0..modulus`.
    pub fn dot_mod(&self, coefficients: &[u64], modulus: u64) -> u64 {
        let m = modulus as i128;
        let s: i128 = self
            .0
            .iter()
            .zip(coefficients)
            .map(|(&e, &a)| e as i128 * a as i128)
            .sum();
        s.rem_euclid(m) as u64
    }

    /// Componentwise minimum, used to clear negative exponents.
    pub fn meet(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub(crate) fn add_at(&mut self, index: usize, delta: i64) {
        self.0[index] += delta;
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;
    fn add(self, rhs: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.rank(), rhs.rank());
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ExponentVector {
    type Output = ExponentVector;
    fn sub(self, rhs: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.rank(), rhs.rank());
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ExponentVector {
    type Output = ExponentVector;
    fn neg(self) -> ExponentVector {
        ExponentVector(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_order() {
        let x2 = ExponentVector::new(vec![2, 0]);
        let xy = ExponentVector::new(vec![1, 1]);
        let y2 = ExponentVector::new(vec![0, 2]);
        let x = ExponentVector::new(vec![1, 0]);
        let xyinv = ExponentVector::new(vec![1, -1]);
        assert!(x2 < xy && xy < y2);
        assert!(x < x2);
        assert!(xyinv < x);
    }

    #[test]
    fn dot_mod_handles_negatives() {
        let v = ExponentVector::new(vec![1, -1]);
        assert_eq!(v.dot_mod(&[1, 3], 4), 2);
    }
}
