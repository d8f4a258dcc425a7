//! The spaced-SNP database model: a reference with `k` two-allele sites,
//! an `m x k` genotype matrix, and the sentinel-separated database text
//! they jointly describe.

mod format;
mod generate;
mod infer;
mod matrix;
mod schema;
mod text;
mod validate;

pub use format::{parse_matrix, parse_schema, read_alignment, serialize_matrix, serialize_schema};
pub use generate::{generate, GenParams};
pub use infer::infer_from_alignment;
pub use matrix::GenotypeMatrix;
pub use schema::{Site, SsnpSchema, DEFAULT_PLACEHOLDER, SENTINEL};
pub(crate) use text::split_pos;
pub use text::VirtualText;
pub use validate::{
    language_check_exhaustive, ValidationReport, Violation, ViolationKind, DEFAULT_MAX_EXHAUSTIVE_SITES,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("{what} {index} out of range 1..={max}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("word {word} has length {found}, expected {expected}")]
    LengthMismatch { word: usize, expected: usize, found: usize },
    #[error("column {column} has more than two alleles ({alleles})")]
    TooManyAllelesInColumn { column: usize, alleles: String },
    #[error("site placement violation at column {column}: {reason}")]
    SitePlacementViolation { column: usize, reason: String },
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid reference: {0}")]
    InvalidReference(String),
    #[error("invalid alleles at site {site}: {reason}")]
    InvalidAlleles { site: usize, reason: String },
    #[error("row {row}: expected {expected} sites, found {found}")]
    DimensionMismatch { row: usize, expected: usize, found: usize },
    #[error("segment uniqueness violated: {0}")]
    UniquenessViolation(ValidationReport),
    #[error("{k} sites exceeds the exhaustive-check limit of {max}")]
    TooManySites { k: usize, max: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("no valid instance after {attempts} attempts")]
    GenerationFailed { attempts: usize },
}
