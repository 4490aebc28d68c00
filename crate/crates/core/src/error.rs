use thiserror::Error;

/// Errors raised by the group, ring and cover computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} is out of range for a free group of rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("cyclotomic modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("division by zero")]
    DivisionByZero,

    #[error("character violates relator {relator}: exponent sum {residue} is nonzero mod {modulus}")]
    CharacterConstraint {
        relator: usize,
        residue: u64,
        modulus: u64,
    },

    #[error("not a homomorphism: relator {relator} maps to {image:?}")]
    NotHomomorphism { relator: usize, image: Vec<u64> },

    #[error("not surjective: the generator images span a subgroup of index {index}")]
    NotSurjective { index: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
