//! Density vectors over the canonical pattern list, the change of basis
//! between occurrence and monomorphism densities, spanning step-up systems,
//! the polynomial map Ψ with its Jacobian, and the antipodal pair search.

mod borsuk;
mod linalg;
mod monmatrix;
mod psi;
mod spanning;
mod vector;

pub use borsuk::{borsuk_pair_search, BorsukConfig, BorsukPair, BorsukProblem};
pub use linalg::{determinant_f64, determinant_rational};
pub use monmatrix::{transform_vector, MonMatrix, TransformDirection};
pub use psi::{
    certify_interior_point, finite_difference_jacobian, jacobian_exact, jacobian_f64,
    max_relative_error, psi_eval, psi_map, InteriorWitness, Jacobian,
};
pub use spanning::{find_spanning_system, SpanningSystem, DEFAULT_DET_THRESHOLD};
pub use vector::{density_vector_permutation, density_vector_permuton, DensityKind, DensityVector};
