//! Alexander matrices, characteristic varieties and Betti numbers of
//! abelian covers for finitely presented groups.

pub mod cyclotomic;
pub mod error;
pub mod exponent;
pub mod families;
pub mod fox;
pub mod kahler;
pub mod laurent;
pub mod matrix;
pub mod presentation;
pub mod snf;
pub mod covers;
pub mod strata;
pub mod word;

pub use cyclotomic::{CyclotomicField, CyclotomicMatrix, CyclotomicNumber};
pub use error::{Error, Result};
pub use exponent::ExponentVector;
pub use fox::{fox_gradient, fox_partial, AlexanderMatrix};
pub use laurent::{Laurent, LaurentPoly};
pub use matrix::IntMatrix;
pub use presentation::{AbelianizationData, Presentation};
pub use snf::{smith_normal_form, SmithForm};
pub use strata::{Stratification, StratumReport, TorsionCharacter};
pub use word::{Letter, Word};
pub use covers::{
    betti_cover_formula, betti_cover_oracle, characters_of, pullback_character, validate_epimorphism,
    Epimorphism, FiniteAbelianGroup, GroupCharacter,
};
pub use kahler::{kahler_obstruction_report, ObstructionReport, ObstructionStatus};
