//! Torsion characters and the Alexander stratification.
//!
//! A torsion character of `Γ = ⟨F_r : R⟩` with modulus `N` is a vector
//! `a ∈ (Z/N)^r` with `t_i ↦ ζ_N^{a_i}` killing every `ab(R_j)`.
//!
//! Conventions: `V_i = {ρ : rank M(ρ) < r − i}`, so with
//! `dim C¹(ρ) = r − rank M(ρ)`, membership is `ρ ∈ V_i ⟺ i < dim C¹`.
//! The reported *depth* is the largest `i` with `ρ ∈ V_i`, i.e.
//! `dim C¹ − 1`, and 0 when `ρ` lies in no stratum at all.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::CyclotomicMatrix;
use crate::error::{Error, Result};
use crate::fox::AlexanderMatrix;
use crate::matrix::IntMatrix;
use crate::presentation::{AbelianizationData, Presentation};
use crate::snf::smith_normal_form;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorsionCharacter {
    modulus: u64,
    exponents: Vec<u64>,
}

impl TorsionCharacter {
    /// Builds `t_i ↦ ζ_N^{a_i}`, reducing the exponents mod `N`. Relator
    /// constraints are not checked here.
    pub fn new(modulus: u64, exponents: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidInput("character modulus must be >= 1".into()));
        }
        let exponents = exponents.into_iter().map(|a| a % modulus).collect();
        Ok(Self { modulus, exponents })
    }

    pub fn trivial(rank: usize) -> Self {
        Self {
            modulus: 1,
            exponents: vec![0; rank],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    /// The same character over the smallest modulus: `(6, (2, 4))` becomes
    /// `(3, (1, 2))`. The new modulus is the order of the character.
    pub fn normalized(&self) -> Self {
        let g = self
            .exponents
            .iter()
            .fold(self.modulus, |g, &a| g.gcd(&a));
        Self {
            modulus: self.modulus / g,
            exponents: self.exponents.iter().map(|a| a / g).collect(),
        }
    }

    pub fn order(&self) -> u64 {
        self.normalized().modulus
    }

    /// Checks `Σ_i A_ij a_i ≡ 0 (mod N)` for every relator column.
    pub fn check_constraints(&self, exponent_matrix: &IntMatrix) -> Result<()> {
        if exponent_matrix.rows() != self.rank() {
            return Err(Error::RankMismatch {
                left: exponent_matrix.rows(),
                right: self.rank(),
            });
        }
        let n = BigInt::from(self.modulus);
        for j in 0..exponent_matrix.cols() {
            let s: BigInt = (0..self.rank())
                .map(|i| &exponent_matrix[(i, j)] * BigInt::from(self.exponents[i]))
                .sum();
            let residue = s.mod_floor(&n);
            if !residue.is_zero() {
                return Err(Error::CharacterConstraint {
                    relator: j,
                    residue: residue.to_u64().unwrap_or(u64::MAX),
                    modulus: self.modulus,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TorsionCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TorsionCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.exponents.iter().map(u64::to_string).collect();
        write!(f, "N={},a={}", self.modulus, a.join(","))
    }
}

/// Parses the `N=<N>,a=<a1,...,ar>` form used on the command line.
impl std::str::FromStr for TorsionCharacter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("expected N=<N>,a=<a1,...,ar>, got {s:?}"));
        let rest = s.trim().strip_prefix("N=").ok_or_else(bad)?;
        let (n, a) = rest.split_once(",a=").ok_or_else(bad)?;
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let a = a
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<i64>>>()?;
        if n == 0 {
            return Err(bad());
        }
        let a = a
            .into_iter()
            .map(|x| x.rem_euclid(n as i64) as u64)
            .collect();
        TorsionCharacter::new(n, a)
    }
}

/// Lazily enumerates `{a ∈ (Z/N)^r : Aᵀa ≡ 0 mod N}` in lexicographic
/// order, each solution once.
///
/// Kernel generators come from the Smith form `U Aᵀ V = D`: with `a = V b`
/// the system decouples into `d_k b_k ≡ 0`. The generators are brought to
/// an echelon basis over `Z/N` in which every "tail" subgroup
/// `{a ∈ K : a_1 = … = a_{j−1} = 0}` is spanned by the rows from `j` on;
/// that lets an odometer walk the kernel in lexicographic order.
pub struct TorsionCharacters {
    modulus: u64,
    rank: usize,
    /// `pivots[j] = Some((g_j, row))` when coordinate `j` has a pivot row
    /// with leading value `g_j | N`.
    pivots: Vec<Option<(u64, Vec<u64>)>>,
    /// One counter per pivot coordinate, `0..N/g_j`.
    digits: Vec<u64>,
    done: bool,
}

impl TorsionCharacters {
    pub fn new(presentation: &Presentation, modulus: u64) -> Result<Self> {
        Self::from_exponent_matrix(&presentation.exponent_matrix(), modulus)
    }

    pub fn from_exponent_matrix(a: &IntMatrix, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidInput("character modulus must be >= 1".into()));
        }
        let rank = a.rows();
        let n = modulus;
        let big_n = BigInt::from(n);
        let snf = smith_normal_form(&a.transpose());
        let diag = snf.diagonal();
        let mut gens: Vec<Vec<u64>> = Vec::with_capacity(rank);
        for k in 0..rank {
            let dk = diag.get(k).cloned().unwrap_or_else(BigInt::zero);
            let g = dk.gcd(&big_n).to_u64().expect("gcd divides N");
            let scale = n / g;
            let col: Vec<u64> = (0..rank)
                .map(|i| {
                    let v = (&snf.v[(i, k)] * BigInt::from(scale)).mod_floor(&big_n);
                    v.to_u64().expect("reduced mod N")
                })
                .collect();
            gens.push(col);
        }
        let pivots = howell_basis(gens, rank, n);
        let digits = vec![0; pivots.iter().flatten().count()];
        Ok(Self {
            modulus: n,
            rank,
            pivots,
            digits,
            done: false,
        })
    }

    /// Number of characters, `Π N/g_j`.
    pub fn total(&self) -> u128 {
        self.pivots
            .iter()
            .flatten()
            .map(|(g, _)| (self.modulus / g) as u128)
            .product()
    }

    fn current(&self) -> Vec<u64> {
        let n = self.modulus as u128;
        let mut a = vec![0u128; self.rank];
        let mut d = 0;
        for j in 0..self.rank {
            let Some((g, row)) = &self.pivots[j] else {
                continue;
            };
            let g = *g as u128;
            let x = a[j];
            let target = x % g + self.digits[d] as u128 * g;
            let m = ((target + n - x) % n) / g;
            for (ai, &ri) in a.iter_mut().zip(row) {
                *ai = (*ai + m * ri as u128) % n;
            }
            d += 1;
        }
        a.into_iter().map(|x| x as u64).collect()
    }
}

impl Iterator for TorsionCharacters {
    type Item = TorsionCharacter;

    fn next(&mut self) -> Option<TorsionCharacter> {
        if self.done {
            return None;
        }
        let item = TorsionCharacter {
            modulus: self.modulus,
            exponents: self.current(),
        };
        let limits: Vec<u64> = self
            .pivots
            .iter()
            .flatten()
            .map(|(g, _)| self.modulus / g)
            .collect();
        let mut k = self.digits.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.digits[k] += 1;
            if self.digits[k] < limits[k] {
                break;
            }
            self.digits[k] = 0;
        }
        Some(item)
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Echelon (Howell) basis of the span of `gens` in `(Z/N)^rank`.
fn howell_basis(gens: Vec<Vec<u64>>, rank: usize, n: u64) -> Vec<Option<(u64, Vec<u64>)>> {
    let nn = n as i128;
    let reduce = |v: &[i128]| -> Vec<i128> { v.iter().map(|x| x.rem_euclid(nn)).collect() };
    let mut pending: Vec<Vec<i128>> = gens
        .into_iter()
        .map(|g| g.into_iter().map(|x| x as i128).collect())
        .filter(|g: &Vec<i128>| g.iter().any(|&x| x != 0))
        .collect();
    let mut out = vec![None; rank];
    for (j, slot) in out.iter_mut().enumerate() {
        let mut pivot: Option<Vec<i128>> = None;
        let mut rest = Vec::new();
        for w in pending {
            if w[j] == 0 {
                rest.push(w);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(w),
                Some(p) => {
                    // [s t; -w_j/g p_j/g] is unimodular and clears column j.
                    let (g, s, t) = ext_gcd(p[j], w[j]);
                    let (pg, wg) = (p[j] / g, w[j] / g);
                    let np: Vec<i128> = p.iter().zip(&w).map(|(a, b)| s * a + t * b).collect();
                    let nw: Vec<i128> = p.iter().zip(&w).map(|(a, b)| wg * a - pg * b).collect();
                    pivot = Some(reduce(&np));
                    let nw = reduce(&nw);
                    if nw.iter().any(|&x| x != 0) {
                        rest.push(nw);
                    }
                }
            }
        }
        if let Some(mut p) = pivot {
            if p[j] != 0 {
                let (g, s, _) = ext_gcd(p[j], nn);
                let g = g.abs();
                // Bezout's s need not be a unit mod N; shifting by N/g keeps
                // s·p_j ≡ g and some shift is coprime to N.
                let step = nn / g;
                let unit = (0..g)
                    .map(|k| (s + k * step).rem_euclid(nn))
                    .find(|&u| ext_gcd(u, nn).0.abs() == 1)
                    .expect("a unit lift exists");
                p = reduce(&p.iter().map(|x| x * unit).collect::<Vec<_>>());
                debug_assert_eq!(p[j], g % nn);
                // (N/g)·p has a zero in column j and must stay in the span.
                let tail = reduce(&p.iter().map(|x| x * (nn / g)).collect::<Vec<_>>());
                if tail.iter().any(|&x| x != 0) {
                    rest.push(tail);
                }
                *slot = Some((g as u64, p.into_iter().map(|x| x as u64).collect()));
            } else if p.iter().any(|&x| x != 0) {
                rest.push(p);
            }
        }
        pending = rest;
    }
    out
}

pub fn torsion_characters(presentation: &Presentation, modulus: u64) -> Result<TorsionCharacters> {
    TorsionCharacters::new(presentation, modulus)
}

/// Evaluates the Alexander matrix at a character after checking the
/// relator constraints.
pub fn evaluate_matrix(m: &AlexanderMatrix, chi: &TorsionCharacter) -> Result<CyclotomicMatrix> {
    chi.check_constraints(&m.presentation().exponent_matrix())?;
    m.evaluate_at_roots(chi.modulus(), chi.exponents())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumReport {
    /// Normalized to its order.
    pub character: TorsionCharacter,
    pub rank: usize,
    /// `dim C¹(Γ, ρ) = r − rank M(ρ)`.
    pub dim_cocycles: usize,
    /// `dim H¹(Γ, ρ)`: `dim C¹ − 1` for nontrivial `ρ`, `b_1` for trivial.
    pub dim_cohomology: usize,
    /// Largest `i` with `ρ ∈ V_i` (0 if none).
    pub depth: usize,
}

impl StratumReport {
    pub fn in_stratum(&self, i: usize) -> bool {
        i < self.dim_cocycles
    }

    pub fn in_jumping_locus(&self, i: usize) -> bool {
        self.dim_cohomology >= i
    }
}

/// A presentation together with its Alexander matrix and abelianization,
/// answering stratum queries at torsion characters.
#[derive(Clone, Debug)]
pub struct Stratification {
    presentation: Presentation,
    matrix: AlexanderMatrix,
    abelianization: AbelianizationData,
}

impl Stratification {
    pub fn new(presentation: &Presentation) -> Self {
        Self {
            presentation: presentation.clone(),
            matrix: AlexanderMatrix::new(presentation),
            abelianization: presentation.abelianization(),
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn matrix(&self) -> &AlexanderMatrix {
        &self.matrix
    }

    pub fn abelianization(&self) -> &AbelianizationData {
        &self.abelianization
    }

    pub fn rank(&self) -> usize {
        self.presentation.rank()
    }

    /// `rank M(ρ)` over `Q(ζ_ord ρ)`.
    pub fn matrix_rank(&self, chi: &TorsionCharacter) -> Result<usize> {
        let chi = chi.normalized();
        Ok(evaluate_matrix(&self.matrix, &chi)?.rank())
    }

    pub fn report(&self, chi: &TorsionCharacter) -> Result<StratumReport> {
        if chi.rank() != self.rank() {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: chi.rank(),
            });
        }
        let character = chi.normalized();
        let rank = evaluate_matrix(&self.matrix, &character)?.rank();
        let r = self.rank();
        let dim_cocycles = r - rank;
        let dim_cohomology = if character.is_trivial() {
            self.abelianization.betti
        } else {
            // For nontrivial ρ the coboundaries are one-dimensional and
            // rank M(ρ) ≤ r − 1 (the image lies in ker δ_1(ρ)).
            dim_cocycles.checked_sub(1).ok_or_else(|| {
                Error::Internal(format!("rank {rank} = r at nontrivial character {character}"))
            })?
        };
        Ok(StratumReport {
            character,
            rank,
            dim_cocycles,
            dim_cohomology,
            depth: dim_cocycles.saturating_sub(1),
        })
    }

    /// `ρ ∈ W_i`: `dim H¹(Γ, ρ) ≥ i`. Agrees with `V_i` except at the
    /// trivial character, which lies in `W_i` exactly for `i ≤ b_1`.
    pub fn w_membership(&self, chi: &TorsionCharacter, i: usize) -> Result<bool> {
        Ok(self.report(chi)?.in_jumping_locus(i))
    }

    pub fn v_membership(&self, chi: &TorsionCharacter, i: usize) -> Result<bool> {
        Ok(self.report(chi)?.in_stratum(i))
    }

    /// Reports at every character of order dividing `modulus`, evaluated in
    /// parallel and sorted by normalized `(N, a)`.
    pub fn reports(&self, modulus: u64) -> Result<Vec<StratumReport>> {
        let chars: Vec<TorsionCharacter> = torsion_characters(&self.presentation, modulus)?.collect();
        let mut out = chars
            .par_iter()
            .map(|c| self.report(c))
            .collect::<Result<Vec<_>>>()?;
        out.sort_by(|a, b| a.character.cmp(&b.character));
        Ok(out)
    }

    /// Characters of order dividing `modulus` lying in `V_i`.
    pub fn torsion_scan(&self, i: usize, modulus: u64) -> Result<Vec<TorsionCharacter>> {
        Ok(self
            .reports(modulus)?
            .into_iter()
            .filter(|r| r.in_stratum(i))
            .map(|r| r.character)
            .collect())
    }

    /// Characters of order dividing `modulus` lying in `W_i`.
    pub fn jumping_scan(&self, i: usize, modulus: u64) -> Result<Vec<TorsionCharacter>> {
        Ok(self
            .reports(modulus)?
            .into_iter()
            .filter(|r| r.in_jumping_locus(i))
            .map(|r| r.character)
            .collect())
    }
}

pub fn stratum_report(p: &Presentation, chi: &TorsionCharacter) -> Result<StratumReport> {
    Stratification::new(p).report(chi)
}

pub fn w_membership(p: &Presentation, chi: &TorsionCharacter, i: usize) -> Result<bool> {
    Stratification::new(p).w_membership(chi, i)
}

pub fn torsion_scan(p: &Presentation, i: usize, modulus: u64) -> Result<Vec<TorsionCharacter>> {
    Stratification::new(p).torsion_scan(i, modulus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CyclotomicNumber;

    fn parse(s: &str) -> Presentation {
        s.parse().unwrap()
    }

    fn trefoil() -> Presentation {
        parse("gens: x, y; rels: x y x y^-1 x^-1 y^-1")
    }

    fn chi(n: u64, a: &[u64]) -> TorsionCharacter {
        TorsionCharacter::new(n, a.to_vec()).unwrap()
    }

    // Test-only brute force over (Z/N)^r.
    fn brute_force(p: &Presentation, n: u64) -> Vec<Vec<u64>> {
        let a = p.exponent_matrix();
        let r = p.rank();
        let total = (n as usize).pow(r as u32);
        (0..total)
            .map(|mut idx| {
                let mut v = vec![0u64; r];
                for k in (0..r).rev() {
                    v[k] = (idx % n as usize) as u64;
                    idx /= n as usize;
                }
                v
            })
            .filter(|v| chi(n, v).check_constraints(&a).is_ok())
            .collect()
    }

    #[test]
    fn trefoil_characters_mod_6() {
        let got: Vec<Vec<u64>> = torsion_characters(&trefoil(), 6)
            .unwrap()
            .map(|c| c.exponents().to_vec())
            .collect();
        let expected: Vec<Vec<u64>> = (0..6).map(|k| vec![k, k]).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn free_group_characters_mod_2() {
        let got: Vec<Vec<u64>> = torsion_characters(&parse("gens: x, y"), 2)
            .unwrap()
            .map(|c| c.exponents().to_vec())
            .collect();
        assert_eq!(got, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn z2_characters_mod_3() {
        let got: Vec<TorsionCharacter> =
            torsion_characters(&parse("gens: x; rels: x^2"), 3).unwrap().collect();
        assert_eq!(got, vec![chi(3, &[0])]);
    }

    #[test]
    fn solver_matches_brute_force_on_fixed_cases() {
        let cases = [
            "gens: x, y; rels: x^2 y^4; x^6",
            "gens: a, b, c; rels: a^2 b^-2 c^4; b^3 c^3",
            "gens: a, b, c; rels: a^4; b^6; a^2 c^2",
            "gens: a, b; rels: a b a^-1 b^-1",
        ];
        for text in cases {
            let p = parse(text);
            for n in 1..=8 {
                let got: Vec<Vec<u64>> = torsion_characters(&p, n)
                    .unwrap()
                    .map(|c| c.exponents().to_vec())
                    .collect();
                assert_eq!(got, brute_force(&p, n), "{text} N={n}");
                assert_eq!(torsion_characters(&p, n).unwrap().total() as usize, got.len());
            }
        }
    }

    #[test]
    fn normalization() {
        let c = chi(6, &[2, 4]);
        assert_eq!(c.normalized(), chi(3, &[1, 2]));
        assert_eq!(chi(6, &[0, 0]).normalized(), TorsionCharacter::trivial(2));
        assert_eq!(c.order(), 3);
    }

    #[test]
    fn evaluate_examples() {
        let p = trefoil();
        let m = AlexanderMatrix::new(&p);
        assert!(evaluate_matrix(&m, &chi(6, &[1, 1])).unwrap().is_zero());
        let e = evaluate_matrix(&m, &TorsionCharacter::trivial(2)).unwrap();
        assert_eq!(e.get(0, 0), &CyclotomicNumber::from_integer(1, 1));
        assert_eq!(e.get(1, 0), &CyclotomicNumber::from_integer(1, -1));
        assert_eq!(
            evaluate_matrix(&m, &chi(6, &[1, 2])),
            Err(Error::CharacterConstraint {
                relator: 0,
                residue: 5,
                modulus: 6
            })
        );
        let f = AlexanderMatrix::new(&parse("gens: a, b, c"));
        let e = evaluate_matrix(&f, &chi(5, &[1, 2, 3])).unwrap();
        assert_eq!((e.rows(), e.cols()), (3, 0));
    }

    #[test]
    fn trefoil_reports() {
        let s = Stratification::new(&trefoil());
        let r6 = s.report(&chi(6, &[1, 1])).unwrap();
        assert_eq!((r6.rank, r6.depth), (0, 1));
        assert!(r6.in_stratum(1) && !r6.in_stratum(2));
        let r5 = s.report(&chi(5, &[1, 1])).unwrap();
        assert_eq!((r5.rank, r5.depth), (1, 0));
        assert!(!r5.in_stratum(1));
        let triv = s.report(&TorsionCharacter::trivial(2)).unwrap();
        assert_eq!((triv.rank, triv.dim_cocycles, triv.dim_cohomology), (1, 1, 1));
    }

    #[test]
    fn free_group_reports() {
        let s = Stratification::new(&parse("gens: x, y"));
        for c in torsion_characters(s.presentation(), 3).unwrap() {
            let r = s.report(&c).unwrap();
            assert_eq!((r.rank, r.depth), (0, 1));
        }
    }

    #[test]
    fn w_membership_examples() {
        let s = Stratification::new(&trefoil());
        let one = TorsionCharacter::trivial(2);
        assert!(s.w_membership(&one, 1).unwrap());
        assert!(!s.w_membership(&one, 2).unwrap());
        let g2 = parse("gens: a1, a2, b1, b2; rels: a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1");
        let s = Stratification::new(&g2);
        assert!(s.w_membership(&chi(2, &[1, 0, 0, 1]), 2).unwrap());
    }

    #[test]
    fn scans() {
        let s = Stratification::new(&trefoil());
        assert_eq!(s.torsion_scan(1, 6).unwrap(), vec![chi(6, &[1, 1]), chi(6, &[5, 5])]);
        assert!(s.torsion_scan(1, 5).unwrap().is_empty());
        assert_eq!(
            s.jumping_scan(1, 6).unwrap(),
            vec![TorsionCharacter::trivial(2), chi(6, &[1, 1]), chi(6, &[5, 5])]
        );
        let f2 = Stratification::new(&parse("gens: x, y"));
        assert!(f2.torsion_scan(2, 12).unwrap().is_empty());
    }

    #[test]
    fn parse_character() {
        let c: TorsionCharacter = "N=6,a=1,-1".parse().unwrap();
        assert_eq!(c, chi(6, &[1, 5]));
        assert!("N=0,a=1".parse::<TorsionCharacter>().is_err());
        assert!("a=1".parse::<TorsionCharacter>().is_err());
    }
}
