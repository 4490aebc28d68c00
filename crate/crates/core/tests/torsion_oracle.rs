//! The SNF-based character enumerator against a brute-force scan of (Z/N)^r.

use alexstrat::matrix::IntMatrix;
use alexstrat::strata::{TorsionCharacter, TorsionCharacters};
use proptest::prelude::*;

fn brute_force(a: &IntMatrix, n: u64) -> Vec<Vec<u64>> {
    let r = a.rows();
    let mut out = Vec::new();
    let mut v = vec![0u64; r];
    loop {
        let ok = (0..a.cols()).all(|j| {
            let s: i128 = (0..r)
                .map(|i| i128::try_from(&a[(i, j)]).unwrap() * v[i] as i128)
                .sum();
            s.rem_euclid(n as i128) == 0
        });
        if ok {
            out.push(v.clone());
        }
        // Lexicographic successor.
        let mut k = r;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            v[k] += 1;
            if v[k] < n {
                break;
            }
            v[k] = 0;
        }
    }
}

fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=3, 0usize..=3).prop_flat_map(|(r, s)| {
        proptest::collection::vec(proptest::collection::vec(-8i64..=8, s), r)
            .prop_map(move |rows| {
                if s == 0 {
                    IntMatrix::zeros(r, 0)
                } else {
                    IntMatrix::from_rows(&rows)
                }
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn enumeration_matches_brute_force(a in arb_matrix(), n in 1u64..=8) {
        let got: Vec<Vec<u64>> = TorsionCharacters::from_exponent_matrix(&a, n)
            .unwrap()
            .map(|c| c.exponents().to_vec())
            .collect();
        prop_assert_eq!(&got, &brute_force(&a, n));
        let count = TorsionCharacters::from_exponent_matrix(&a, n).unwrap().total();
        prop_assert_eq!(count as usize, got.len());
    }

    #[test]
    fn normalization_preserves_the_character(n in 1u64..=24, a in proptest::collection::vec(0u64..24, 1..4)) {
        let chi = TorsionCharacter::new(n, a).unwrap();
        let m = chi.normalized();
        prop_assert_eq!(n % m.modulus(), 0);
        let scale = n / m.modulus();
        let back: Vec<u64> = m.exponents().iter().map(|x| x * scale).collect();
        prop_assert_eq!(back.as_slice(), chi.exponents());
        prop_assert_eq!(m.normalized(), m);
    }
}

#[test]
fn large_modulus_without_brute_force() {
    // (Z/360)^3 has 46 million points; the kernel of [2, 3, 5] has 360^2.
    let a = IntMatrix::from_rows(&[vec![2], vec![3], vec![5]]);
    let it = TorsionCharacters::from_exponent_matrix(&a, 360).unwrap();
    assert_eq!(it.total(), 360 * 360);
    let first: Vec<Vec<u64>> = TorsionCharacters::from_exponent_matrix(&a, 360)
        .unwrap()
        .take(3)
        .map(|c| c.exponents().to_vec())
        .collect();
    assert_eq!(first, vec![vec![0, 0, 0], vec![0, 0, 72], vec![0, 0, 144]]);
}
