//! Cyclotomic Gaussian elimination against a minor-expansion rank.

use alexstrat::cyclotomic::{CyclotomicMatrix, CyclotomicNumber};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn det(m: &[Vec<CyclotomicNumber>], n: u64) -> CyclotomicNumber {
    if m.is_empty() {
        return CyclotomicNumber::one(n);
    }
    let mut acc = CyclotomicNumber::zero(n);
    for (j, x) in m[0].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let minor: Vec<Vec<CyclotomicNumber>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = x.try_mul(&det(&minor, n)).unwrap();
        acc = if j % 2 == 0 { acc.try_add(&term) } else { acc.try_sub(&term) }.unwrap();
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (0..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Largest k with a nonzero k×k minor.
fn minor_rank(m: &[Vec<CyclotomicNumber>], n: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for k in (1..=rows.min(cols)).rev() {
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<CyclotomicNumber>> =
                    rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
                if !det(&sub, n).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

fn arb_entry(n: u64) -> impl Strategy<Value = CyclotomicNumber> {
    // Sparse small coordinates so that rank drops happen often.
    proptest::collection::vec(prop_oneof![3 => Just(0i64), 1 => -2i64..=2], n as usize).prop_map(move |c| {
        let mut x = CyclotomicNumber::zero(n);
        for (k, v) in c.into_iter().enumerate() {
            let term = CyclotomicNumber::root_of_unity(n, k as i64).scale(&BigRational::from_integer(BigInt::from(v)));
            x = x.try_add(&term).unwrap();
        }
        x
    })
}

fn arb_case() -> impl Strategy<Value = (u64, Vec<Vec<CyclotomicNumber>>)> {
    (prop_oneof![Just(1u64), Just(3), Just(4), Just(5), Just(6), Just(8), Just(12)], 1usize..=4, 1usize..=4)
        .prop_flat_map(|(n, r, c)| {
            (Just(n), proptest::collection::vec(proptest::collection::vec(arb_entry(n), c), r))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn elimination_matches_minors((n, rows) in arb_case()) {
        let expected = minor_rank(&rows, n);
        let m = CyclotomicMatrix::from_rows(n, rows).unwrap();
        prop_assert_eq!(m.rank(), expected);
    }

    #[test]
    fn dependent_rows_are_detected((n, rows) in arb_case(), k in 0i64..12) {
        // Append ζ^k · row_0 + row_last; rank is unchanged.
        let z = CyclotomicNumber::root_of_unity(n, k);
        let extra: Vec<CyclotomicNumber> = rows[0]
            .iter()
            .zip(rows.last().unwrap())
            .map(|(a, b)| z.try_mul(a).unwrap().try_add(b).unwrap())
            .collect();
        let base = CyclotomicMatrix::from_rows(n, rows.clone()).unwrap().rank();
        let mut more = rows;
        more.push(extra);
        prop_assert_eq!(CyclotomicMatrix::from_rows(n, more).unwrap().rank(), base);
    }
}

#[test]
fn vanishing_determinant_in_q_zeta3() {
    let n = 3;
    let one = CyclotomicNumber::one(n);
    let z = CyclotomicNumber::root_of_unity(n, 1);
    let z2 = CyclotomicNumber::root_of_unity(n, 2);
    // det [[1, ζ], [ζ², 1]] = 1 − ζ³ = 0.
    let rows = vec![vec![one.clone(), z.clone()], vec![z2, one.clone()]];
    assert_eq!(minor_rank(&rows, n), 1);
    assert_eq!(CyclotomicMatrix::from_rows(n, rows).unwrap().rank(), 1);
    // det [[1, ζ], [1, 1]] = 1 − ζ ≠ 0.
    let rows = vec![vec![one.clone(), z], vec![one.clone(), one]];
    assert_eq!(minor_rank(&rows, n), 2);
    assert_eq!(CyclotomicMatrix::from_rows(n, rows).unwrap().rank(), 2);
}
