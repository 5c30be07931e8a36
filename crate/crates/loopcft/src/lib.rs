//! Dilute O(n) loop model with blobbed (anisotropic special) boundary conditions.
//!
//! The crate is organized around independent computation paths that are
//! cross-checked against each other:
//!
//! - [`loop_algebra`]: exact diagram algebra (dilute link patterns, blob
//!   marks, Markov traces, quantum dimensions), with rational bookkeeping.
//! - [`integrable`]: bulk R-matrix and boundary K-matrices, verified against
//!   the Yang–Baxter, reflection and boundary-crossing equations by
//!   exhaustive diagrammatic contraction.
//! - [`transfer`]: sparse strip transfer matrices over the link-pattern
//!   basis, leading eigenvalues and finite-size-scaling extraction of
//!   effective central charges and boundary exponents.
//! - [`cft`]: Coulomb-gas parameters, Kac weights, characters, annulus
//!   partition functions, g-factors, crossing formulas.
//! - [`mc_ising`]: Wolff/Metropolis Monte Carlo for the triangular-lattice
//!   Ising model on an annulus, with domain-wall tracing on the dual
//!   honeycomb lattice.
//! - [`tba`]: massless boundary TBA flow between anisotropic-special and
//!   ordinary fixed points.
//!
//! Core combinatorial kernels are generic over the scalar type (see
//! [`scalar::LoopScalar`]): `f64` for production sweeps, and exact
//! rationals ([`Rat`]) for oracle-grade partition sums.

pub mod cft;
pub mod integrable;
pub mod loop_algebra;
pub mod mc_ising;
pub mod scalar;
pub mod tba;
pub mod transfer;

/// Exact rational scalar used by the oracle-grade computation paths.
pub type Rat = num::BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}
