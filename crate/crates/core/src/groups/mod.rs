//! Words, finite presentations, small finite groups and homomorphism search.

mod catalog;
mod finite;
mod hom;
mod presentation;
mod word;

pub use catalog::{catalog_groups, DEFAULT_CATALOG_ORDER, MAX_CATALOG_ORDER};
pub use finite::{Element, FiniteGroup};
pub use hom::{
    commutator_power_certificate, enumerate_homs, evaluate, search_space_size, CommutatorPowerReport,
    Homomorphism,
};
pub use presentation::{parse_word, Presentation};
pub use word::{reduce, Syllable, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidGeneratorName(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("not a group law: {0}")]
    NotAGroupLaw(String),
    #[error("catalog order {requested} exceeds the supported maximum {max}")]
    OrderTooLarge { requested: usize, max: usize },
}
