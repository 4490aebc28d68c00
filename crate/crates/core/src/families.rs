//! Standard presentations used as fixtures.

use crate::error::Result;
use crate::kahler::product_of_conjugates;
use crate::presentation::Presentation;
use crate::word::Word;

fn gens(rank: usize) -> Vec<Word> {
    (0..rank)
        .map(|i| Word::generator(rank, i).expect("index in range"))
        .collect()
}

/// `⟨x, y : xyx = yxy⟩`.
pub fn trefoil() -> Presentation {
    "gens: x, y; rels: x y x y^-1 x^-1 y^-1"
        .parse()
        .expect("fixed presentation")
}

pub fn free_group(rank: usize) -> Presentation {
    Presentation::with_indexed_names("x", rank, Vec::new()).expect("no relators")
}

/// `[x_1, x_{g+1}]⋯[x_g, x_{2g}]` in `F_{2g}`.
pub fn surface_relator(g: usize) -> Word {
    surface_relator_in(g, 2 * g)
}

fn surface_relator_in(g: usize, rank: usize) -> Word {
    let x = gens(rank);
    let mut w = Word::identity(rank);
    for i in 0..g {
        let c = Word::commutator(&x[i], &x[i + g]).expect("same rank");
        w = w.multiply(&c).expect("same rank");
    }
    w
}

pub fn surface_group(g: usize) -> Presentation {
    Presentation::with_indexed_names("x", 2 * g, vec![surface_relator(g)]).expect("valid")
}

/// `F_a × F_b` with generators `a1.., b1..` and relators `[a_i, b_j]`.
pub fn product_of_free_groups(a: usize, b: usize) -> Presentation {
    let r = a + b;
    let x = gens(r);
    let mut rels = Vec::with_capacity(a * b);
    for i in 0..a {
        for j in 0..b {
            rels.push(Word::commutator(&x[i], &x[a + j]).expect("same rank"));
        }
    }
    let names = (1..=a)
        .map(|i| format!("a{i}"))
        .chain((1..=b).map(|j| format!("b{j}")))
        .collect();
    Presentation::new(names, rels).expect("valid")
}

/// `Z^n = ⟨x_1..x_n : [x_i, x_j], i < j⟩`.
pub fn free_abelian(n: usize) -> Presentation {
    let x = gens(n);
    let mut rels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            rels.push(Word::commutator(&x[i], &x[j]).expect("same rank"));
        }
    }
    Presentation::with_indexed_names("x", n, rels).expect("valid")
}

/// `⟨x_1..x_{2g} : S_1, S_2⟩` with `S_1 = Π_{i≤g} x_i R_g x_i⁻¹` and
/// `S_2 = Π_{i>g} x_i R_g x_i⁻¹`.
pub fn conjugate_pencil_group(g: usize) -> Result<Presentation> {
    let r = 2 * g;
    let base = surface_relator(g);
    let x = gens(r);
    let s1 = product_of_conjugates(&base, &x[..g])?;
    let s2 = product_of_conjugates(&base, &x[g..])?;
    Presentation::with_indexed_names("x", r, vec![s1, s2])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(surface_group(2).relators()[0].len(), 8);
        assert_eq!(product_of_free_groups(2, 2).relators().len(), 4);
        assert_eq!(free_abelian(3).relators().len(), 3);
        let p = conjugate_pencil_group(3).unwrap();
        assert_eq!(p.relators()[0].len(), 3 * 14);
        assert_eq!(free_group(3).abelianization().betti, 3);
        assert_eq!(surface_group(3).abelianization().betti, 6);
    }
}
