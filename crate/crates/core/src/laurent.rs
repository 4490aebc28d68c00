//! Sparse multivariate Laurent polynomials `C[t_1^{±1}, …, t_r^{±1}]`.
//!
//! Terms live in a `BTreeMap` keyed by [`ExponentVector`], so the
//! representation is canonical and iteration follows the graded order.
//! Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::exponent::ExponentVector;

/// Coefficient ring operations needed by [`Laurent`]. No zero constant is
/// required: the zero polynomial is the empty map.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

pub trait FieldCoefficient: Coefficient {
    fn inverse(&self) -> Option<Self>;
}

impl Coefficient for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Coefficient for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl FieldCoefficient for BigRational {
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

/// Panics when the two operands live in different cyclotomic fields;
/// polynomials over `Q(ζ_N)` are always built over a single field.
impl Coefficient for CyclotomicNumber {
    fn is_zero(&self) -> bool {
        CyclotomicNumber::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("cyclotomic coefficients share a field")
    }
    fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("cyclotomic coefficients share a field")
    }
    fn neg(&self) -> Self {
        CyclotomicNumber::neg(self)
    }
}

impl FieldCoefficient for CyclotomicNumber {
    fn inverse(&self) -> Option<Self> {
        CyclotomicNumber::inverse(self).ok()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Laurent<C> {
    rank: usize,
    terms: BTreeMap<ExponentVector, C>,
}

/// Laurent polynomials over the integers: the group ring `Z[ab(F_r)]`.
pub type LaurentPoly = Laurent<BigInt>;

impl<C: Coefficient> Laurent<C> {
    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exponent: ExponentVector, coefficient: C) -> Self {
        let mut p = Self::zero(exponent.rank());
        if !coefficient.is_zero() {
            p.terms.insert(exponent, coefficient);
        }
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, combining
    /// repeated exponents.
    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (ExponentVector, C)>) -> Result<Self> {
        let mut p = Self::zero(rank);
        for (e, c) in terms {
            if e.rank() != rank {
                return Err(Error::RankMismatch {
                    left: rank,
                    right: e.rank(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Option<&C> {
        self.terms.get(e)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Largest term in the graded order.
    pub fn leading_term(&self) -> Option<(&ExponentVector, &C)> {
        self.terms.iter().next_back()
    }

    /// Indices of variables that occur with a nonzero exponent.
    pub fn support_variables(&self) -> Vec<usize> {
        (0..self.rank)
            .filter(|&i| self.terms.keys().any(|e| e.entries()[i] != 0))
            .collect()
    }

    /// Componentwise minimum of the exponents; `None` for zero.
    pub fn min_exponents(&self) -> Option<ExponentVector> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.meet(e)))
    }

    pub(crate) fn add_term(&mut self, e: ExponentVector, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.negate())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1.mul(c2));
            }
        }
        Ok(out)
    }

    pub fn negate(&self) -> Self {
        Self {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    /// Multiplies by the monomial `t^shift`.
    pub fn shift(&self, shift: &ExponentVector) -> Self {
        Self {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.rank);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.mul(c));
        }
        out
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Laurent<D> {
        let mut out = Laurent::zero(self.rank);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }
}

impl<C: FieldCoefficient> Laurent<C> {
    /// Exact division in the Laurent ring. Returns `Ok(None)` when `divisor`
    /// does not divide `self`.
    ///
    /// Both operands are shifted to ordinary polynomials (the divisor with
    /// its monomial content removed) and divided by leading terms in the
    /// graded order; monomials are units, so the shift does not change
    /// divisibility.
    pub fn divide_exact(&self, divisor: &Self) -> Result<Option<Self>> {
        self.check_rank(divisor)?;
        let Some(dmin) = divisor.min_exponents() else {
            return Err(Error::DivisionByZero);
        };
        let Some(pmin) = self.min_exponents() else {
            return Ok(Some(Self::zero(self.rank)));
        };
        let d = divisor.shift(&-&dmin);
        let mut rem = self.shift(&-&pmin);
        let (lead_e, lead_c) = d.leading_term().expect("nonzero divisor");
        let lead_e = lead_e.clone();
        let lead_inv = lead_c
            .inverse()
            .ok_or_else(|| Error::Internal("leading coefficient not invertible".into()))?;
        let mut quotient = Self::zero(self.rank);
        while let Some((e, c)) = rem.leading_term() {
            let step_e = e - &lead_e;
            if !step_e.is_nonnegative() {
                return Ok(None);
            }
            let step = Self::monomial(step_e, c.mul(&lead_inv));
            rem = rem.checked_sub(&step.checked_mul(&d)?)?;
            quotient = quotient.checked_add(&step)?;
        }
        Ok(Some(quotient.shift(&(&pmin - &dmin))))
    }
}

impl LaurentPoly {
    pub fn one(rank: usize) -> Self {
        Self::monomial(ExponentVector::zero(rank), BigInt::one())
    }

    pub fn constant(rank: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(ExponentVector::zero(rank), c.into())
    }

    /// The variable `t_i`.
    pub fn variable(rank: usize, i: usize) -> Self {
        Self::monomial(ExponentVector::unit(rank, i), BigInt::one())
    }

    /// The group element `t^λ`.
    pub fn group_element(exponent: ExponentVector) -> Self {
        Self::monomial(exponent, BigInt::one())
    }

    /// Exact division over `Z`: divides over `Q` and checks integrality.
    pub fn divide_exact_integer(&self, divisor: &Self) -> Result<Option<Self>> {
        let to_q = |c: &BigInt| BigRational::from_integer(c.clone());
        let q = self
            .map_coefficients(to_q)
            .divide_exact(&divisor.map_coefficients(to_q))?;
        Ok(q.and_then(|q| {
            q.terms()
                .all(|(_, c)| c.is_integer())
                .then(|| q.map_coefficients(|c| c.to_integer()))
        }))
    }

    /// Evaluates at `t_i ↦ ζ_N^{a_i}`: the monomial `t^λ` goes to
    /// `ζ_N^{(a·λ) mod N}`.
    pub fn evaluate_at_roots(&self, modulus: u64, exponents: &[u64]) -> Result<CyclotomicNumber> {
        if exponents.len() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: exponents.len(),
            });
        }
        let field = CyclotomicField::get(modulus);
        let mut residues = vec![BigInt::zero(); modulus as usize];
        for (e, c) in &self.terms {
            residues[e.dot_mod(exponents, modulus) as usize] += c;
        }
        let coords = field.reduce_residues(&residues);
        Ok(CyclotomicNumber::from_field_coords(field, coords))
    }

    /// Image in `Q(ζ_N)[t^{±1}]` with rational-constant coefficients.
    pub fn to_cyclotomic(&self, modulus: u64) -> Laurent<CyclotomicNumber> {
        self.map_coefficients(|c| CyclotomicNumber::from_integer(modulus, c.clone()))
    }
}

impl<C: Coefficient + CoefficientText> Laurent<C> {
    /// Canonical text form with variables named `t_<name>`, terms ascending
    /// in the graded order, e.g. `1 - t_x + t_x*t_y`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> LaurentDisplay<'a, C> {
        LaurentDisplay { poly: self, names }
    }
}

pub struct LaurentDisplay<'a, C> {
    poly: &'a Laurent<C>,
    names: &'a [String],
}

fn monomial_text(e: &ExponentVector, names: &[String]) -> String {
    let parts: Vec<String> = e
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("t_{}", names[i])
            } else {
                format!("t_{}^{}", names[i], k)
            }
        })
        .collect();
    parts.join("*")
}

/// Coefficients print through this trait so integer polynomials get the
/// familiar `- 3*t` layout while field coefficients are parenthesized.
pub trait CoefficientText {
    /// `(is_negative, magnitude text, is_unit_magnitude)`.
    fn text(&self) -> (bool, String, bool);
}

impl CoefficientText for BigInt {
    fn text(&self) -> (bool, String, bool) {
        (self.is_negative(), self.abs().to_string(), self.abs().is_one())
    }
}

impl CoefficientText for BigRational {
    fn text(&self) -> (bool, String, bool) {
        (self.is_negative(), self.abs().to_string(), self.abs().is_one())
    }
}

impl CoefficientText for CyclotomicNumber {
    fn text(&self) -> (bool, String, bool) {
        if self.is_one() {
            return (false, "1".into(), true);
        }
        if self.neg().is_one() {
            return (true, "1".into(), true);
        }
        (false, format!("({self})"), false)
    }
}

impl<C: Coefficient + CoefficientText> fmt::Display for LaurentDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.poly.terms.iter().enumerate() {
            let (neg, mag, unit) = c.text();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = monomial_text(e, self.names);
            match (mono.is_empty(), unit) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{mag}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coefficient + CoefficientText> fmt::Debug for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.rank).map(|i| i.to_string()).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

impl<'a, C: Coefficient> Add for &'a Laurent<C> {
    type Output = Laurent<C>;
    /// Panics on rank mismatch; use [`Laurent::checked_add`] otherwise.
    fn add(self, rhs: &'a Laurent<C>) -> Laurent<C> {
        self.checked_add(rhs).expect("Laurent rank mismatch")
    }
}

impl<'a, C: Coefficient> Sub for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn sub(self, rhs: &'a Laurent<C>) -> Laurent<C> {
        self.checked_sub(rhs).expect("Laurent rank mismatch")
    }
}

impl<'a, C: Coefficient> Mul for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn mul(self, rhs: &'a Laurent<C>) -> Laurent<C> {
        self.checked_mul(rhs).expect("Laurent rank mismatch")
    }
}

impl<C: Coefficient> Neg for &Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        self.negate()
    }
}

/// JSON form: `[[exponents], coefficient]` pairs in graded order. The
/// coefficient is a JSON integer when it fits in 64 bits, else a decimal
/// string.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            let coeff = match i64::try_from(c) {
                Ok(v) => serde_json::Value::from(v),
                Err(_) => serde_json::Value::from(c.to_string()),
            };
            seq.serialize_element(&(e.entries(), coeff))?;
        }
        seq.end()
    }
}

/// Inverse of the `Serialize` impl; the rank comes from the exponent
/// vectors, so deserializing the zero polynomial needs
/// [`LaurentPoly::from_json_terms`].
impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<(Vec<i64>, serde_json::Value)> = Deserialize::deserialize(d)?;
        let rank = raw.first().map_or(0, |(e, _)| e.len());
        LaurentPoly::from_json_terms(rank, raw).map_err(D::Error::custom)
    }
}

impl LaurentPoly {
    pub fn from_json_terms(
        rank: usize,
        raw: Vec<(Vec<i64>, serde_json::Value)>,
    ) -> std::result::Result<Self, String> {
        let mut terms = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            let c = match c {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| format!("non-integer coefficient {n}"))?,
                serde_json::Value::String(s) => s
                    .parse::<BigInt>()
                    .map_err(|e| format!("bad coefficient {s:?}: {e}"))?,
                other => return Err(format!("bad coefficient {other}")),
            };
            terms.push((ExponentVector::new(e), c));
        }
        Laurent::from_terms(rank, terms).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(rank: usize, terms: &[(&[i64], i64)]) -> LaurentPoly {
        Laurent::from_terms(
            rank,
            terms
                .iter()
                .map(|(e, c)| (ExponentVector::new(e.to_vec()), BigInt::from(*c))),
        )
        .unwrap()
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn ring_examples() {
        let t = LaurentPoly::variable(1, 0);
        let tinv = poly(1, &[(&[-1], 1)]);
        assert_eq!(&t * &tinv, LaurentPoly::one(1));
        let a = poly(1, &[(&[0], 1), (&[1], -1)]);
        let b = poly(1, &[(&[0], 1), (&[1], 1)]);
        assert_eq!(&a * &b, poly(1, &[(&[0], 1), (&[2], -1)]));
        assert!((&a + &(-&a)).is_zero());
        assert!(matches!(
            a.checked_add(&LaurentPoly::one(2)),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn canonical_text() {
        let p = poly(2, &[(&[0, 0], 1), (&[1, 0], -1), (&[1, 1], 1)]);
        assert_eq!(p.display_with(&names(&["x", "y"])).to_string(), "1 - t_x + t_x*t_y");
        let q = poly(2, &[(&[1, -1], -1), (&[1, 0], 1), (&[2, 0], -1)]);
        assert_eq!(
            q.display_with(&names(&["x", "y"])).to_string(),
            "-t_x*t_y^-1 + t_x - t_x^2"
        );
        assert_eq!(LaurentPoly::zero(2).display_with(&names(&["x", "y"])).to_string(), "0");
        let r = poly(1, &[(&[0], -3), (&[2], 2)]);
        assert_eq!(r.display_with(&names(&["s"])).to_string(), "-3 + 2*t_s^2");
    }

    #[test]
    fn divide_examples() {
        let p = poly(1, &[(&[0], 1), (&[2], -1)]);
        let q = poly(1, &[(&[0], 1), (&[1], -1)]);
        assert_eq!(
            p.divide_exact_integer(&q).unwrap(),
            Some(poly(1, &[(&[0], 1), (&[1], 1)]))
        );
        let p = poly(3, &[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 1)]);
        let q = poly(3, &[(&[1, 0, 0], 1), (&[0, 1, 0], -1)]);
        assert_eq!(p.divide_exact_integer(&q).unwrap(), None);
        assert_eq!(
            p.divide_exact_integer(&LaurentPoly::zero(3)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn divide_over_cyclotomic_field() {
        // (t - ζ6)(t - ζ6^5) = 1 - t + t^2
        let p = poly(1, &[(&[0], 1), (&[1], -1), (&[2], 1)]).to_cyclotomic(6);
        let t = ExponentVector::new(vec![1]);
        let c = ExponentVector::new(vec![0]);
        let q = Laurent::from_terms(
            1,
            [
                (t.clone(), CyclotomicNumber::one(6)),
                (c.clone(), CyclotomicNumber::root_of_unity(6, 1).neg()),
            ],
        )
        .unwrap();
        let expected = Laurent::from_terms(
            1,
            [
                (t, CyclotomicNumber::one(6)),
                (c, CyclotomicNumber::root_of_unity(6, 5).neg()),
            ],
        )
        .unwrap();
        assert_eq!(p.divide_exact(&q).unwrap(), Some(expected));
    }

    #[test]
    fn divide_with_negative_exponents() {
        let q = poly(2, &[(&[1, -1], 1), (&[0, 0], -1)]);
        let h = poly(2, &[(&[-2, 3], 5), (&[1, 0], -2), (&[0, 0], 1)]);
        let p = &q * &h;
        assert_eq!(p.divide_exact_integer(&q).unwrap(), Some(h));
    }

    #[test]
    fn integrality_is_checked() {
        let p = poly(1, &[(&[0], 1)]);
        let q = poly(1, &[(&[0], 2)]);
        assert_eq!(p.divide_exact_integer(&q).unwrap(), None);
    }

    #[test]
    fn evaluation_examples() {
        let p = poly(1, &[(&[0], 1), (&[1], -1), (&[2], 1)]);
        assert!(p.evaluate_at_roots(6, &[1]).unwrap().is_zero());
        assert!(p.evaluate_at_roots(1, &[0]).unwrap().is_one());
        let m = poly(2, &[(&[1, -1], 1)]);
        assert_eq!(
            m.evaluate_at_roots(4, &[1, 3]).unwrap(),
            CyclotomicNumber::from_integer(4, -1)
        );
    }

    #[test]
    fn json_round_trip() {
        let p = poly(2, &[(&[0, 0], 1), (&[1, -1], -7)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[[1,-1],-7],[[0,0],1]]");
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    fn arb_poly(rank: usize) -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec(
            (proptest::collection::vec(-2i64..3, rank), -3i64..4),
            0..5,
        )
        .prop_map(move |ts| {
            Laurent::from_terms(
                rank,
                ts.into_iter()
                    .map(|(e, c)| (ExponentVector::new(e), BigInt::from(c))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        }

        #[test]
        fn exact_division_recovers_cofactor(a in arb_poly(3), b in arb_poly(3)) {
            prop_assume!(!b.is_zero());
            let p = &a * &b;
            let h = p.divide_exact_integer(&b).unwrap();
            prop_assert_eq!(h.as_ref(), Some(&a));
            prop_assert_eq!(&b * h.as_ref().unwrap(), p);
        }

        #[test]
        fn evaluation_is_a_ring_homomorphism(
            a in arb_poly(2),
            b in arb_poly(2),
            n in 1u64..13,
            x in 0u64..13,
            y in 0u64..13,
        ) {
            let ex = [x % n, y % n];
            let ea = a.evaluate_at_roots(n, &ex).unwrap();
            let eb = b.evaluate_at_roots(n, &ex).unwrap();
            prop_assert_eq!((&a * &b).evaluate_at_roots(n, &ex).unwrap(), ea.try_mul(&eb).unwrap());
            prop_assert_eq!((&a + &b).evaluate_at_roots(n, &ex).unwrap(), ea.try_add(&eb).unwrap());
        }
    }
}
