//! Exact arithmetic in the cyclotomic fields `Q(ζ_N) = Q[x]/Φ_N(x)`.
//!
//! Elements are stored as rational coordinates in the power basis
//! `1, ζ, …, ζ^{φ(N)-1}`. Field data (the defining polynomial and the
//! reductions of `ζ^k` for `0 ≤ k < N`) is computed once per modulus and
//! shared.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense univariate integer polynomial, lowest degree first.
pub type IntPoly = Vec<BigInt>;

/// The cyclotomic polynomial `Φ_N`, by dividing `x^N − 1` by `Φ_d` for
/// every proper divisor `d` of `N`.
pub fn cyclotomic_polynomial(n: u64) -> IntPoly {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    let mut num: IntPoly = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = divide_monic(&num, &cyclotomic_polynomial(d));
    }
    num
}

/// Exact quotient of `a` by the monic polynomial `b`; panics on remainder.
fn divide_monic(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return vec![];
    }
    let mut q = vec![BigInt::zero(); rem.len() - db];
    for k in (0..q.len()).rev() {
        let c = rem[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            rem[k + i] -= &c * bi;
        }
        q[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// Shared data for one field `Q(ζ_N)`.
pub struct CyclotomicField {
    modulus: u64,
    phi: IntPoly,
    /// `powers[k]` = integer coordinates of `ζ^k`, `0 ≤ k < N`.
    powers: Vec<Vec<BigInt>>,
}

impl CyclotomicField {
    /// Returns the (cached) field of `N`-th roots of unity.
    pub fn get(modulus: u64) -> Arc<CyclotomicField> {
        assert!(modulus >= 1, "cyclotomic field of modulus 0");
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(f) = cache.lock().unwrap().get(&modulus) {
            return f.clone();
        }
        let field = Arc::new(Self::build(modulus));
        cache
            .lock()
            .unwrap()
            .entry(modulus)
            .or_insert(field)
            .clone()
    }

    fn build(modulus: u64) -> Self {
        let phi = cyclotomic_polynomial(modulus);
        let deg = phi.len() - 1;
        let mut powers = Vec::with_capacity(modulus as usize);
        let mut cur = vec![BigInt::zero(); deg];
        if deg > 0 {
            cur[0] = BigInt::one();
        }
        for _ in 0..modulus {
            powers.push(cur.clone());
            // multiply by x and reduce with x^deg = -Σ phi_i x^i
            let top = cur[deg - 1].clone();
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for (i, c) in cur.iter_mut().enumerate() {
                    *c -= &top * &phi[i];
                }
            }
        }
        Self {
            modulus,
            phi,
            powers,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn defining_polynomial(&self) -> &[BigInt] {
        &self.phi
    }

    /// Coordinates of `Σ_k c_k ζ^k` given integer coefficients per residue
    /// class `k mod N`.
    pub fn reduce_residues(&self, residues: &[BigInt]) -> Vec<BigRational> {
        let deg = self.degree();
        let mut acc = vec![BigInt::zero(); deg];
        for (k, c) in residues.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (a, p) in acc.iter_mut().zip(&self.powers[k % self.modulus as usize]) {
                *a += c * p;
            }
        }
        acc.into_iter().map(BigRational::from_integer).collect()
    }
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta{})", self.modulus)
    }
}

/// An element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct CyclotomicNumber {
    field: Arc<CyclotomicField>,
    coords: Vec<BigRational>,
}

impl CyclotomicNumber {
    pub fn zero(modulus: u64) -> Self {
        let field = CyclotomicField::get(modulus);
        let coords = vec![BigRational::zero(); field.degree()];
        Self { field, coords }
    }

    pub fn from_rational(modulus: u64, q: BigRational) -> Self {
        let mut z = Self::zero(modulus);
        z.coords[0] = q;
        z
    }

    pub fn from_integer(modulus: u64, n: impl Into<BigInt>) -> Self {
        Self::from_rational(modulus, BigRational::from_integer(n.into()))
    }

    pub fn one(modulus: u64) -> Self {
        Self::from_integer(modulus, 1)
    }

    /// `ζ_N^k`.
    pub fn root_of_unity(modulus: u64, k: i64) -> Self {
        let field = CyclotomicField::get(modulus);
        let idx = k.rem_euclid(modulus as i64) as usize;
        let coords = field.powers[idx]
            .iter()
            .cloned()
            .map(BigRational::from_integer)
            .collect();
        Self { field, coords }
    }

    /// Builds an element from power-basis coordinates.
    pub fn from_coords(modulus: u64, coords: Vec<BigRational>) -> Result<Self> {
        let field = CyclotomicField::get(modulus);
        if coords.len() != field.degree() {
            return Err(Error::InvalidInput(format!(
                "Q(zeta{modulus}) has degree {}, got {} coordinates",
                field.degree(),
                coords.len()
            )));
        }
        Ok(Self { field, coords })
    }

    pub(crate) fn from_field_coords(field: Arc<CyclotomicField>, coords: Vec<BigRational>) -> Self {
        Self { field, coords }
    }

    pub fn modulus(&self) -> u64 {
        self.field.modulus
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch {
                left: self.modulus(),
                right: other.modulus(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self::from_field_coords(self.field.clone(), coords))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::from_field_coords(self.field.clone(), self.coords.iter().map(|a| -a).collect())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let deg = self.field.degree();
        // Convolve, then fold each x^k through the table of ζ^(k mod N).
        let mut conv = vec![BigRational::zero(); 2 * deg - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] += a * b;
                }
            }
        }
        let n = self.field.modulus as usize;
        let mut out = vec![BigRational::zero(); deg];
        for (k, c) in conv.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&self.field.powers[k % n]) {
                if !p.is_zero() {
                    *o += c * BigRational::from_integer(p.clone());
                }
            }
        }
        Ok(Self::from_field_coords(self.field.clone(), out))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::from_field_coords(self.field.clone(), self.coords.iter().map(|a| a * q).collect())
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against
    /// `Φ_N` in `Q[x]`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi: Vec<BigRational> = self
            .field
            .phi
            .iter()
            .cloned()
            .map(BigRational::from_integer)
            .collect();
        let a = trim(self.coords.clone());
        // invariant: s_k * a ≡ r_k (mod Φ)
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1) = (vec![], vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant because Φ_N is irreducible.
        let c = r1[0].clone();
        debug_assert!(!c.is_zero());
        let (_, s) = poly_divmod(&s1, &trim(
            self.field.phi.iter().cloned().map(BigRational::from_integer).collect(),
        ));
        let mut coords = vec![BigRational::zero(); self.field.degree()];
        for (k, x) in s.into_iter().enumerate() {
            coords[k] = x / &c;
        }
        Ok(Self::from_field_coords(self.field.clone(), coords))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.modulus());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).expect("same field");
            }
            base = base.try_mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }

    /// Image under the embedding `Q(ζ_N) → Q(ζ_M)`, `ζ_N ↦ ζ_M^{M/N}`,
    /// for `N | M`.
    pub fn embed(&self, modulus: u64) -> Result<Self> {
        let n = self.modulus();
        if !modulus.is_multiple_of(n) {
            return Err(Error::InvalidInput(format!(
                "cannot embed Q(zeta{n}) into Q(zeta{modulus})"
            )));
        }
        let step = (modulus / n) as i64;
        let mut out = Self::zero(modulus);
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = Self::root_of_unity(modulus, step * k as i64).scale(c);
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Recognizes `ζ_N^k`, returning `k`.
    pub fn as_root_of_unity(&self) -> Option<u64> {
        (0..self.modulus()).find(|&k| *self == Self::root_of_unity(self.modulus(), k as i64))
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(k).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &c * bi;
        }
        q[k] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.coords == other.coords
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicNumber {
    /// Renders `c_0 + c_1 zetaN + c_2 zetaN^2 …`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = format!("zeta{}", self.modulus());
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let basis = match k {
                0 => String::new(),
                1 => z.clone(),
                _ => format!("{z}^{k}"),
            };
            match (mag.is_one(), basis.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{basis}")?,
                (false, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag}*{basis}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CyclotomicNumber", 2)?;
        st.serialize_field("modulus", &self.modulus())?;
        let coords: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        st.serialize_field("coords", &coords)?;
        st.end()
    }
}

/// Dense matrix over a single field `Q(ζ_N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<CyclotomicNumber>,
}

impl CyclotomicMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Self {
        Self {
            modulus,
            rows,
            cols,
            entries: vec![CyclotomicNumber::zero(modulus); rows * cols],
        }
    }

    pub fn from_rows(modulus: u64, rows: Vec<Vec<CyclotomicNumber>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::InvalidInput("ragged cyclotomic matrix".into()));
            }
            for x in row {
                if x.modulus() != modulus {
                    return Err(Error::ModulusMismatch {
                        left: modulus,
                        right: x.modulus(),
                    });
                }
                entries.push(x);
            }
        }
        Ok(Self {
            modulus,
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: CyclotomicNumber) {
        assert_eq!(x.modulus(), self.modulus, "modulus mismatch");
        self.entries[i * self.cols + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CyclotomicNumber::is_zero)
    }

    /// Exact rank by Gaussian elimination over `Q(ζ_N)`.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<CyclotomicNumber>> = (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let inv = m[rank][col].inverse().expect("nonzero pivot");
            let pivot_row: Vec<CyclotomicNumber> = m[rank]
                .iter()
                .map(|x| x.try_mul(&inv).expect("same field"))
                .collect();
            for row in m.iter_mut().skip(rank + 1) {
                let f = row[col].clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..self.cols {
                    let d = f.try_mul(&pivot_row[j]).expect("same field");
                    row[j] = row[j].try_sub(&d).expect("same field");
                }
            }
            m[rank] = pivot_row;
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> IntPoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
        for n in 1..=30 {
            assert_eq!(cyclotomic_polynomial(n).len() as u64 - 1, euler_phi(n));
        }
    }

    #[test]
    fn roots_of_unity_multiply() {
        let a = CyclotomicNumber::root_of_unity(6, 1);
        let b = CyclotomicNumber::root_of_unity(6, 5);
        assert!(a.try_mul(&b).unwrap().is_one());
    }

    #[test]
    fn zeta6_squared() {
        let z = CyclotomicNumber::root_of_unity(6, 1);
        let z2 = z.try_mul(&z).unwrap();
        assert_eq!(z2.coords(), &[q(-1, 1), q(1, 1)]);
        assert_eq!(z2, CyclotomicNumber::root_of_unity(6, 2));
    }

    #[test]
    fn inverse_of_rational() {
        let two = CyclotomicNumber::from_integer(5, 2);
        assert_eq!(two.inverse().unwrap(), CyclotomicNumber::from_rational(5, q(1, 2)));
        assert_eq!(CyclotomicNumber::zero(5).inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn modulus_one_is_rationals() {
        let a = CyclotomicNumber::from_rational(1, q(3, 4));
        assert!(a.try_mul(&a.inverse().unwrap()).unwrap().is_one());
        assert!(CyclotomicNumber::root_of_unity(1, 7).is_one());
    }

    #[test]
    fn mismatched_moduli() {
        let a = CyclotomicNumber::one(3);
        let b = CyclotomicNumber::one(4);
        assert_eq!(
            a.try_add(&b),
            Err(Error::ModulusMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn embedding_respects_roots() {
        let z3 = CyclotomicNumber::root_of_unity(3, 1);
        assert_eq!(z3.embed(12).unwrap(), CyclotomicNumber::root_of_unity(12, 4));
        assert_eq!(CyclotomicNumber::root_of_unity(12, 4).as_root_of_unity(), Some(4));
    }

    #[test]
    fn display_form() {
        let z = CyclotomicNumber::root_of_unity(6, 2);
        assert_eq!(z.to_string(), "-1 + zeta6");
        assert_eq!(CyclotomicNumber::zero(6).to_string(), "0");
    }

    #[test]
    fn rank_examples() {
        assert_eq!(CyclotomicMatrix::zeros(6, 3, 2).rank(), 0);
        let n = 5;
        let mut id = CyclotomicMatrix::zeros(n, 3, 3);
        for i in 0..3 {
            id.set(i, i, CyclotomicNumber::one(n));
        }
        assert_eq!(id.rank(), 3);
    }

    fn arb_element(n: u64) -> impl Strategy<Value = CyclotomicNumber> {
        let deg = euler_phi(n) as usize;
        proptest::collection::vec((-5i64..6, 1i64..4), deg).prop_map(move |cs| {
            let coords = cs.into_iter().map(|(a, b)| q(a, b)).collect();
            CyclotomicNumber::from_coords(n, coords).unwrap()
        })
    }

    proptest! {
        #[test]
        fn inverse_law((n, a) in (1u64..=24).prop_flat_map(|n| (Just(n), arb_element(n)))) {
            prop_assume!(!a.is_zero());
            let inv = a.inverse().unwrap();
            prop_assert!(a.try_mul(&inv).unwrap().is_one(), "N = {}", n);
        }

        #[test]
        fn multiplication_commutes_and_distributes(
            (a, b, c) in (1u64..=16).prop_flat_map(|n| (arb_element(n), arb_element(n), arb_element(n)))
        ) {
            let ab = a.try_mul(&b).unwrap();
            prop_assert_eq!(&ab, &b.try_mul(&a).unwrap());
            let lhs = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
            let rhs = ab.try_add(&a.try_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
