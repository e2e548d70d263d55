//! Finite-dimensional operator laboratory over the Gaussian rationals.
//!
//! The Fredholm-index side of the `J_2` intertwiner analysis is vacuous here:
//! every finite matrix has index 0.

pub mod gaussian;
pub mod intertwiner;
pub mod jn;
pub mod matrix;
pub mod poly;
pub mod sample;
pub mod similarity;
pub mod smith;
pub mod specht;

pub use gaussian::{GaussianRational, G};
pub use intertwiner::{commutant_basis, commutant_structure_check, j2_block_identities, j2_intertwiner_analysis, J2Analysis};
pub use jn::{build_jn, root_identity_check, symmetry_witnesses, SymmetryWitnesses};
pub use matrix::ExactMatrix;
pub use poly::Poly;
pub use similarity::{invariant_factors, kaplansky_halve, rosenblum_split_check, similar_decide, similarity_witness};
pub use smith::{InvariantFactors, PolyMatrix};
pub use specht::{specht_equiv, SpechtOutcome};
