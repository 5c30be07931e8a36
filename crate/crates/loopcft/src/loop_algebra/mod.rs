//! Exact diagram algebra: dilute link patterns, blob decorations, diagram
//! composition, Markov and sector traces, quantum dimensions.

mod diagram;
mod pattern;
mod poly;

pub use diagram::{
    all_tl_diagrams, markov_identity_check, markov_identity_defect, random_word, sector_basis,
    sector_trace, Diagram, MarkovReport,
};
pub use pattern::{enumerate_basis, BasisSpec, BoundaryMode, LinkPattern, Mark, Site};
pub use poly::{
    dim_polynomial, quantum_dimension, DimFlavor, LoopWeights, Symbol, WeightPolynomial,
};

#[derive(thiserror::Error, Debug)]
pub enum AlgebraError {
    #[error("diagram interfaces do not match (site counts or occupations)")]
    InterfaceMismatch,
    #[error("invalid basis request: {0}")]
    BadBasis(String),
    #[error("missing parameter {0}")]
    MissingParameter(&'static str),
    #[error("singular parameter: {what} = {value}")]
    SingularParameter { what: &'static str, value: f64 },
    #[error("size {n} exceeds the oracle limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("numerical failure in {0}")]
    NumericalFailure(&'static str),
}
