//! A bounded binomial-ideal screen for Kähler groups.
//!
//! Presentations whose relators are products of conjugates of one base
//! relator, `S_i = Π_j u_ij R u_ij⁻¹` with `ab(R) = 0`, have Fox rows
//! `D(S_i) = p_i·D(R)` with `p_i = Σ_j ab(u_ij)`. Away from the trivial
//! character `V_1` is then the common zero set of the `p_i`. For a Kähler
//! group it must be cut out by binomials `t^λ − u` with `u` a root of unity.
//!
//! Every verdict here holds only within the stated search bounds.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::exponent::ExponentVector;
use crate::fox::fox_gradient;
use crate::laurent::{Laurent, LaurentPoly};
use crate::presentation::Presentation;
use crate::strata::{torsion_characters, Stratification, TorsionCharacter};
use crate::word::Word;

/// `S_i = Π_j u_ij R u_ij⁻¹` for every relator, literally after free
/// reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonRelatorForm {
    pub base: Word,
    pub conjugators: Vec<Vec<Word>>,
}

impl CommonRelatorForm {
    /// Single relator equal to the base with trivial conjugator.
    pub fn is_degenerate(&self) -> bool {
        self.conjugators
            .iter()
            .all(|us| us.len() == 1 && us[0].is_identity())
    }

    /// Re-multiplies the conjugates of relator `i`.
    pub fn expand(&self, i: usize) -> Result<Word> {
        let rank = self.base.rank();
        let mut acc = Word::identity(rank);
        for u in &self.conjugators[i] {
            acc = acc.multiply(&self.base.conjugate_by(u)?)?;
        }
        Ok(acc)
    }
}

/// Finds a base relator `R` such that every relator splits as conjugates of
/// `R`. With a hint only that `R` is tried; otherwise subwords of the first
/// relator are tried longest first.
pub fn detect_common_relator_form(
    presentation: &Presentation,
    hint: Option<&Word>,
) -> Option<CommonRelatorForm> {
    let rels = presentation.relators();
    let first = rels.first()?;
    let candidates: Vec<Word> = match hint {
        Some(h) => vec![h.clone()],
        None => {
            let letters = first.letters();
            let n = letters.len();
            let mut out = Vec::new();
            for len in (1..=n).rev() {
                for start in 0..=n - len {
                    let w = Word::free_reduce(first.rank(), letters[start..start + len].iter().copied())
                        .ok()?;
                    if w.len() == len && !out.contains(&w) {
                        out.push(w);
                    }
                }
            }
            out
        }
    };
    for base in candidates {
        if base.is_empty() || base.rank() != presentation.rank() {
            continue;
        }
        let Some(conjugators) = rels
            .iter()
            .map(|s| split_conjugates(s, &base))
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let form = CommonRelatorForm { base, conjugators };
        if !form.is_degenerate() && !form.base.abelianize().is_zero() {
            continue;
        }
        if (0..rels.len()).all(|i| form.expand(i).ok().as_ref() == Some(&rels[i])) {
            return Some(form);
        }
    }
    None
}

/// Splits `s = v_1 R v_2 R … R v_{k+1}` with `u_1 = v_1`,
/// `u_j = u_{j−1} v_j` and `v_{k+1} = u_k⁻¹`, by backtracking over the
/// occurrences of `R`.
fn split_conjugates(s: &Word, base: &Word) -> Option<Vec<Word>> {
    let letters = s.letters();
    let pattern = base.letters();
    let occurrences: Vec<usize> = (0..=letters.len().saturating_sub(pattern.len()))
        .filter(|&i| letters.len() >= pattern.len() && &letters[i..i + pattern.len()] == pattern)
        .collect();
    let mut out = Vec::new();
    if search(s, base, &occurrences, 0, &Word::identity(s.rank()), &mut out) {
        Some(out)
    } else {
        None
    }
}

fn search(
    s: &Word,
    base: &Word,
    occurrences: &[usize],
    pos: usize,
    u: &Word,
    out: &mut Vec<Word>,
) -> bool {
    let letters = s.letters();
    let rank = s.rank();
    let piece = |a: usize, b: usize| -> Word {
        Word::free_reduce(rank, letters[a..b].iter().copied()).expect("same rank")
    };
    if !out.is_empty() {
        let rest = piece(pos, letters.len());
        if rest == u.inverse() {
            return true;
        }
    }
    for &start in occurrences.iter().filter(|&&o| o >= pos) {
        let v = piece(pos, start);
        let next = u.multiply(&v).expect("same rank");
        out.push(next.clone());
        if search(s, base, occurrences, start + base.len(), &next, out) {
            return true;
        }
        out.pop();
    }
    false
}

/// `p_i = Σ_j ab(u_ij)`, after checking `D(S_i) = p_i·D(R)` entrywise.
pub fn pencil_polynomials(form: &CommonRelatorForm) -> Result<Vec<LaurentPoly>> {
    let rank = form.base.rank();
    let d_base = fox_gradient(&form.base);
    let mut out = Vec::with_capacity(form.conjugators.len());
    for (i, us) in form.conjugators.iter().enumerate() {
        let mut p = LaurentPoly::zero(rank);
        for u in us {
            p = &p + &LaurentPoly::group_element(u.abelianize());
        }
        let s = form.expand(i)?;
        let d_s = fox_gradient(&s);
        for (k, (lhs, rhs)) in d_s.iter().zip(&d_base).enumerate() {
            if lhs != &(&p * rhs) {
                return Err(Error::Internal(format!(
                    "D_{k}(S_{i}) is not p_{i} times D_{k}(R)"
                )));
            }
        }
        out.push(p);
    }
    Ok(out)
}

/// `t^λ − ζ^k` with `ζ = exp(2πi/unit_order)`, stored with
/// `gcd(k, unit_order) = 1` (and order 1 for `u = 1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Binomial {
    pub exponent: ExponentVector,
    pub unit_order: u64,
    pub unit_power: u64,
}

impl Binomial {
    /// `t^λ − ζ_n^k`, normalized so the unit is written at its order.
    pub fn new(exponent: ExponentVector, n: u64, k: u64) -> Self {
        let k = k % n;
        let g = n.gcd(&k);
        Self {
            exponent,
            unit_order: n / g,
            unit_power: k / g,
        }
    }

    pub fn unit(&self, modulus: u64) -> CyclotomicNumber {
        assert_eq!(modulus % self.unit_order, 0, "unit order must divide the modulus");
        CyclotomicNumber::root_of_unity(modulus, (self.unit_power * (modulus / self.unit_order)) as i64)
    }

    /// The binomial as a polynomial over `Q(ζ_modulus)`.
    pub fn to_polynomial(&self, modulus: u64) -> Laurent<CyclotomicNumber> {
        let rank = self.exponent.rank();
        let mut p = Laurent::monomial(self.exponent.clone(), CyclotomicNumber::one(modulus));
        let u = Laurent::monomial(ExponentVector::zero(rank), self.unit(modulus));
        p = &p - &u;
        p
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> BinomialDisplay<'a> {
        BinomialDisplay { b: self, names }
    }
}

pub struct BinomialDisplay<'a> {
    b: &'a Binomial,
    names: &'a [String],
}

impl fmt::Display for BinomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.b.exponent.entries().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "t_{}", self.names[i])?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        match (self.b.unit_order, self.b.unit_power) {
            (1, _) => write!(f, " - 1"),
            (2, _) => write!(f, " + 1"),
            (n, 1) => write!(f, " - zeta{n}"),
            (n, k) => write!(f, " - zeta{n}^{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialSearch {
    pub divisors: Vec<Binomial>,
    /// The candidate family covers every binomial `t^λ − u` with
    /// `‖λ‖_∞ ≤ D` or `λ` a support difference, and `u^Nmax = 1`.
    pub exhaustive: bool,
    /// Whether `p` is a monomial times a product of the divisors.
    pub fully_factors: bool,
}

fn candidate_exponents(p: &LaurentPoly, max_degree: u32) -> Vec<ExponentVector> {
    let rank = p.rank();
    let vars = p.support_variables();
    let mut set = std::collections::BTreeSet::new();
    let mut push = |v: Vec<i64>| {
        if let Some(&lead) = v.iter().find(|&&x| x != 0) {
            let v = if lead < 0 { v.iter().map(|x| -x).collect() } else { v };
            set.insert(ExponentVector::new(v));
        }
    };
    let support: Vec<&ExponentVector> = p.terms().map(|(e, _)| e).collect();
    for a in &support {
        for b in &support {
            push((*a - *b).into_entries());
        }
    }
    let d = max_degree as i64;
    let side = (2 * d + 1) as usize;
    let total = side.pow(vars.len() as u32);
    for mut idx in 0..total {
        let mut v = vec![0i64; rank];
        for &var in &vars {
            v[var] = (idx % side) as i64 - d;
            idx /= side;
        }
        push(v);
    }
    set.into_iter().collect()
}

/// Enumerates candidate binomials and keeps those dividing `p` exactly over
/// `Q(ζ_Nmax)`.
pub fn binomial_factor_search(p: &LaurentPoly, max_degree: u32, max_order: u64) -> Result<BinomialSearch> {
    if p.is_zero() {
        return Err(Error::InvalidInput("binomial search needs a nonzero polynomial".into()));
    }
    if max_degree == 0 || max_order == 0 {
        return Err(Error::InvalidInput("search bounds must be >= 1".into()));
    }
    let n = max_order;
    let pc = p.to_cyclotomic(n);
    let candidates: Vec<Binomial> = candidate_exponents(p, max_degree)
        .into_iter()
        .flat_map(|lambda| (0..n).map(move |k| Binomial::new(lambda.clone(), n, k)))
        .collect();
    let divisors = candidates
        .into_par_iter()
        .map(|b| Ok(pc.divide_exact(&b.to_polynomial(n))?.map(|_| b)))
        .collect::<Result<Vec<Option<Binomial>>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    let polys: Vec<Laurent<CyclotomicNumber>> = divisors.iter().map(|b| b.to_polynomial(n)).collect();
    let mut budget = 10_000usize;
    let fully_factors = factors_completely(&pc, &polys, 0, &mut budget)?;
    Ok(BinomialSearch {
        divisors,
        exhaustive: true,
        fully_factors,
    })
}

fn factors_completely(
    q: &Laurent<CyclotomicNumber>,
    divisors: &[Laurent<CyclotomicNumber>],
    start: usize,
    budget: &mut usize,
) -> Result<bool> {
    if q.is_monomial() {
        return Ok(true);
    }
    for (i, d) in divisors.iter().enumerate().skip(start) {
        if *budget == 0 {
            return Ok(false);
        }
        *budget -= 1;
        if let Some(rest) = q.divide_exact(d)? {
            if factors_completely(&rest, divisors, i, budget)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ObstructionStatus {
    Obstructed,
    Consistent,
    Inconclusive,
}

impl fmt::Display for ObstructionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObstructionStatus::Obstructed => "OBSTRUCTED",
            ObstructionStatus::Consistent => "CONSISTENT",
            ObstructionStatus::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub max_degree: u32,
    pub max_order: u64,
    pub threshold: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PencilResult {
    pub polynomial: String,
    pub terms: LaurentPoly,
    pub support_variables: Vec<String>,
    pub divisors: Vec<String>,
    pub search: BinomialSearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub status: ObstructionStatus,
    pub base_relator: Option<String>,
    pub conjugators: Vec<Vec<String>>,
    pub pencils: Vec<PencilResult>,
    /// Torsion characters on `V(p_1, …, p_s)`, each checked to lie in `V_1`.
    pub torsion_points: Vec<TorsionCharacter>,
    pub bounds: SearchBounds,
    pub justification: String,
}

pub fn kahler_obstruction_report(
    presentation: &Presentation,
    max_degree: u32,
    max_order: u64,
    hint: Option<&Word>,
) -> Result<ObstructionReport> {
    kahler_obstruction_report_with(
        presentation,
        SearchBounds {
            max_degree,
            max_order,
            threshold: 3,
        },
        hint,
    )
}

pub fn kahler_obstruction_report_with(
    presentation: &Presentation,
    bounds: SearchBounds,
    hint: Option<&Word>,
) -> Result<ObstructionReport> {
    let names = presentation.names();
    let within = format!(
        "within bounds max_degree={}, max_order={}",
        bounds.max_degree, bounds.max_order
    );
    let Some(form) = detect_common_relator_form(presentation, hint) else {
        return Ok(ObstructionReport {
            status: ObstructionStatus::Inconclusive,
            base_relator: None,
            conjugators: Vec::new(),
            pencils: Vec::new(),
            torsion_points: Vec::new(),
            bounds,
            justification: "relators are not products of conjugates of a common base relator".into(),
        });
    };
    let ps = pencil_polynomials(&form)?;
    let mut pencils = Vec::with_capacity(ps.len());
    for p in &ps {
        let search = binomial_factor_search(p, bounds.max_degree, bounds.max_order)?;
        pencils.push(PencilResult {
            polynomial: p.display_with(names).to_string(),
            terms: p.clone(),
            support_variables: p.support_variables().iter().map(|&i| names[i].clone()).collect(),
            divisors: search
                .divisors
                .iter()
                .map(|b| b.display_with(names).to_string())
                .collect(),
            search,
        });
    }
    let witness = pencils.iter().position(|pr| {
        pr.support_variables.len() >= 3 && !pr.terms.is_monomial() && pr.search.divisors.is_empty()
    });
    let mut torsion_points = Vec::new();
    let status;
    let justification;
    if let Some(w) = witness {
        torsion_points = common_torsion_zeros(presentation, &ps, bounds.max_order, bounds.threshold)?;
        if torsion_points.len() >= bounds.threshold {
            status = ObstructionStatus::Obstructed;
            justification = format!(
                "p_{} = {} has support in {} variables and no binomial factor; \
                 V(p_1..p_{}) contains at least {} torsion points of V_1; \
                 V_1 is not cut out by binomials {within}",
                w + 1,
                pencils[w].polynomial,
                pencils[w].support_variables.len(),
                ps.len(),
                torsion_points.len()
            );
        } else {
            status = ObstructionStatus::Inconclusive;
            justification = format!(
                "p_{} lacks binomial factors but only {} common torsion zeros were found {within}",
                w + 1,
                torsion_points.len()
            );
        }
    } else if pencils.iter().all(|pr| pr.search.fully_factors) {
        status = ObstructionStatus::Consistent;
        justification = if ps.iter().all(LaurentPoly::is_monomial) {
            "every p_i is a monomial, so V(p_1..p_s) is empty; no obstruction found".into()
        } else {
            format!("every p_i is a monomial times binomials {within}; no obstruction found")
        };
    } else {
        status = ObstructionStatus::Inconclusive;
        justification = format!("some p_i does not factor into binomials {within}, but no witness hypersurface in >= 3 variables");
    }
    Ok(ObstructionReport {
        status,
        base_relator: Some(form.base.display_with(names).to_string()),
        conjugators: form
            .conjugators
            .iter()
            .map(|us| us.iter().map(|u| u.display_with(names).to_string()).collect())
            .collect(),
        pencils,
        torsion_points,
        bounds,
        justification,
    })
}

/// Characters of order dividing `max_order` where every `p_i` vanishes,
/// scanned by increasing order and stopping once `wanted` are found. Each
/// one is confirmed to lie in `V_1`.
fn common_torsion_zeros(
    presentation: &Presentation,
    ps: &[LaurentPoly],
    max_order: u64,
    wanted: usize,
) -> Result<Vec<TorsionCharacter>> {
    let strat = Stratification::new(presentation);
    let mut found = Vec::new();
    for n in (1..=max_order).filter(|n| max_order.is_multiple_of(*n)) {
        for chi in torsion_characters(presentation, n)? {
            if chi.order() != n {
                continue;
            }
            let mut all_zero = true;
            for p in ps {
                if !p.evaluate_at_roots(n, chi.exponents())?.is_zero() {
                    all_zero = false;
                    break;
                }
            }
            if all_zero && strat.report(&chi)?.in_stratum(1) {
                found.push(chi);
                if found.len() >= wanted {
                    return Ok(found);
                }
            }
        }
    }
    Ok(found)
}

/// `S = Π_j u_j R u_j⁻¹` as a freely reduced word.
pub fn product_of_conjugates(base: &Word, conjugators: &[Word]) -> Result<Word> {
    let mut acc = Word::identity(base.rank());
    for u in conjugators {
        acc = acc.multiply(&base.conjugate_by(u)?)?;
    }
    Ok(acc)
}
