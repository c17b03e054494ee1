//! Exact arithmetic on finitely generated abelian groups.
//!
//! Groups are kept in invariant-factor form, so two groups are isomorphic
//! exactly when they compare equal. Presentations are turned into that form
//! through the Smith normal form of the relation matrix.

mod element;
mod group;
mod matrix;
mod snf;

pub use element::{change_coefficients, lift_from_tensor, solve_divisibility, tensor_with_cyclic, GroupElement};
pub use group::{ext, has_element_of_order, hom, mod_p_dimension, tensor, tor, DirectSum, FgAbGroup};
pub use matrix::{content, IntegerMatrix};
pub use snf::{cokernel, smith_normal_form, Quotient, SnfDecomposition};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FgabError {
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedMatrix { row: usize, expected: usize, found: usize },
    #[error("not in invariant-factor form: {0}")]
    NonCanonical(String),
    #[error("coordinates ({free} free, {torsion} torsion) do not fit {group}")]
    CoordinateShape { group: String, free: usize, torsion: usize },
    #[error("elements of different groups: {left} vs {right}")]
    GroupMismatch { left: String, right: String },
    #[error("element order must be positive")]
    ZeroOrder,
    #[error("Z_{from} -> Z_{to}, 1 -> {multiplier} is not a homomorphism")]
    IllDefinedCoefficientMap { from: u64, to: u64, multiplier: u64 },
}
