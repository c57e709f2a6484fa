//! Exact computer algebra for the Block-type Lie algebra `B`
//! (`[L_{α,i}, L_{β,j}] = ((i+1)β − (j+1)α) L_{α+β,i+j} + …`), its relatives
//! (Virasoro, `B̄`, `W_{1+∞}`, `W_∞`, the quotients `B_m / B_{n+1}`) and their
//! graded modules.
//!
//! The numeric substrate ([`matrix`], [`poly`], [`algebra`] brackets) is
//! generic over [`Scalar`]; the module-level and verification code uses the
//! exact aliases defined here.

pub mod algebra;
pub mod error;
pub mod lemma_lab;
pub mod matrix;
pub mod modules;
pub mod poly;
pub mod scalar;
pub mod verma;

pub use algebra::{AlgebraElement, AlgebraVariant, BasisKey};
pub use error::{Error, Result};
pub use matrix::{RowEchelon, SparseMatrix};
pub use poly::{Alphabet, Poly};
pub use scalar::{Rational, Scalar};

/// Exact rational sparse matrix.
pub type RationalMatrix = SparseMatrix<Rational>;
/// Exact rational multivariate polynomial.
pub type MultiPoly = Poly<Rational>;
