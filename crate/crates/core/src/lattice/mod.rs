//! Exact integer linear algebra: matrices, Smith normal form, alternating
//! forms and their types, and the symplectic group.
//!
//! Nothing in this module touches floating point.

mod form;
mod matrix;
mod snf;
mod symplectic;

use thiserror::Error;

pub use form::{
    associated_degree, frobenius_basis, polarization_type, AlternatingForm, FrobeniusBasis,
    PolarizationType,
};
pub use matrix::{IntMatrix, MatrixJson};
pub use snf::{
    column_lattice_basis, invariant_factors, lattice_coordinates, lattice_coordinates_matrix, smith,
    solve_integral, Smith,
};
pub use symplectic::{
    characteristic_polynomial, conjugacy_invariants, conjugacy_invariants_of, format_polynomial,
    is_symplectic, poly_eval, root_multiplicity, ConjugacyInvariants, SymplecticMatrix,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matrix has no rows or no columns")]
    EmptyMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not an alternating form: {0}")]
    NotAlternating(String),
    #[error("alternating form has odd dimension {0}")]
    OddDimension(usize),
    #[error("alternating form is degenerate")]
    Degenerate,
    #[error("invalid polarization type: {0}")]
    InvalidType(String),
    #[error("type {0} is not of the form (1,...,1,d)")]
    NotCoprincipal(String),
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("parse error: {0}")]
    Parse(String),
}

impl LatticeError {
    pub fn code(&self) -> &'static str {
        match self {
            LatticeError::EmptyMatrix => "EmptyMatrix",
            LatticeError::DimensionMismatch(_) => "DimensionMismatch",
            LatticeError::NotAlternating(_) => "NotAlternating",
            LatticeError::OddDimension(_) => "OddDimension",
            LatticeError::Degenerate => "Degenerate",
            LatticeError::InvalidType(_) => "InvalidType",
            LatticeError::NotCoprincipal(_) => "NotCoprincipal",
            LatticeError::NotSymplectic => "NotSymplectic",
            LatticeError::Parse(_) => "ParseError",
        }
    }
}
