//! Signed generalized Stirling polynomials, hyperbolic-secant integral
//! sequences, Barnes multiple zeta residues, and nested-sum identities,
//! with every closed form cross-checked against an independent oracle
//! (exact arithmetic or double-exponential quadrature) at configurable
//! decimal precision.
//!
//! Layout:
//! - [`precision`] / [`rational`]: the exact and tracked-float substrate
//! - [`combinatorics`]: binomials, Stirling and r-Stirling numbers,
//!   partitions, Newton's identities
//! - [`stirling_poly`]: the P_k(m,x) family and its identities
//! - [`special_functions`]: gamma, polygamma, Hurwitz zeta and its
//!   s-derivative, Dirichlet beta, Stieltjes constants
//! - [`closed_forms`]: the Malmsten sequence M_n(a,b), the chi closed
//!   forms F_j, lambda/delta companions, Barnes zeta and residues
//! - [`nested_sums`]: chain-counting multiplicities and the normalized
//!   limiting series
//! - [`quadrature`]: the double-exponential oracle on (0, inf)
//! - [`verify`]: the named verification suites behind `sechint verify`

pub mod closed_forms;
pub mod combinatorics;
pub mod error;
pub mod nested_sums;
pub mod precision;
pub mod quadrature;
pub mod rational;
pub mod special_functions;
pub mod stirling_poly;
pub mod verify;

pub use error::{Error, Result};
pub use precision::{HPReal, PrecisionContext};
pub use rational::RationalPolynomial;
