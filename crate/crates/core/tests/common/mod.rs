#![allow(dead_code)]

use std::path::PathBuf;

use alexstrat::covers::{validate_epimorphism, Epimorphism, FiniteAbelianGroup};
use alexstrat::strata::torsion_characters;
use alexstrat::word::Letter;
use alexstrat::{Presentation, Word};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> Presentation {
    let path = fixture_dir().join(format!("{name}.fp"));
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .parse()
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub const FIXTURES: &[&str] = &[
    "trefoil",
    "free2",
    "free3",
    "surface1",
    "surface2",
    "surface3",
    "f2xf2",
    "z3",
    "conjugate_pencil_g3",
];

pub fn random_word<R: Rng>(rng: &mut R, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len).map(|_| Letter::new(rng.gen_range(0..rank), rng.gen_bool(0.5)));
    Word::free_reduce(rank, letters).unwrap()
}

/// `r ≤ max_rank`, `s ≤ max_relators`, relators of at most `max_len` letters.
pub fn random_presentation<R: Rng>(
    rng: &mut R,
    max_rank: usize,
    max_relators: usize,
    max_len: usize,
) -> Presentation {
    let r = rng.gen_range(1..=max_rank);
    let s = rng.gen_range(0..=max_relators);
    let rels = (0..s)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            let letters = (0..len).map(|_| Letter::new(rng.gen_range(0..r), rng.gen_bool(0.5)));
            Word::free_reduce(r, letters).unwrap()
        })
        .collect();
    Presentation::with_indexed_names("x", r, rels).unwrap()
}

/// Groups of order 2..=12 given by cyclic factors.
pub const SMALL_GROUPS: &[&[u64]] = &[
    &[2], &[3], &[4], &[5], &[6], &[7], &[8], &[9], &[10], &[11], &[12],
    &[2, 2], &[2, 4], &[2, 6], &[3, 3], &[2, 2, 2], &[2, 2, 3],
];

/// A uniformly chosen homomorphism onto a random small group, drawn factor
/// by factor from `Hom(Γ, Z/d)`; `None` if no surjective draw was found.
pub fn random_epimorphism<R: Rng>(rng: &mut R, p: &Presentation, attempts: usize) -> Option<Epimorphism> {
    for _ in 0..attempts {
        let orders = SMALL_GROUPS.choose(rng).unwrap().to_vec();
        let g = FiniteAbelianGroup::new(orders.clone()).unwrap();
        let mut images = vec![Vec::with_capacity(orders.len()); p.rank()];
        for &d in &orders {
            let homs: Vec<_> = torsion_characters(p, d).unwrap().collect();
            let pick = homs.choose(rng).unwrap();
            for (img, &a) in images.iter_mut().zip(pick.exponents()) {
                img.push(a);
            }
        }
        if let Ok(alpha) = validate_epimorphism(p, &g, images) {
            return Some(alpha);
        }
    }
    None
}
