//! Graded `(G, 𝔭)`-dynamical systems in finite dimension and their SPT index
//! `(κ, 𝔮, [υ]) ∈ ℤ₂ × H¹(G,ℤ₂) × H²(G,U(1)_𝔭)`.

mod index;
mod stack;
mod system;
mod z8;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::cocycle::CocycleError;
use crate::graded::GradedError;
use crate::group::GroupError;
use crate::io::IoError;
use crate::rep::RepError;

pub use index::{
    classify, cocycle_via_rep, compute_index, index_equal, stack_index, Classification, IndexJson, SPTIndex,
};
pub use stack::stack_systems;
pub use system::{standard_action, GradedSystem, SystemForm, SystemJson};
pub use z8::{z8_compose, z8_decode, z8_encode, Z8Element};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SptError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("NotCovariant: Ad_V({0}) does not preserve the algebra")]
    NotCovariant(usize),
    #[error("GradingNotPreserved: Ad_V({0}) does not commute with Ad_Γ on the algebra")]
    GradingNotPreserved(usize),
    #[error("NotBalanced: no odd self-adjoint unitary found in the algebra")]
    NotBalanced,
    #[error("MarkerNotFound: the grading is inner-trivial on the factor")]
    MarkerNotFound,
    #[error("GradingActionIndeterminate: Ad_V({0}) maps the marker to neither +marker nor -marker")]
    GradingActionIndeterminate(usize),
    #[error("GroupMismatch: systems or indices live on different (G, 𝔭)")]
    GroupMismatch,
    #[error("NotTimeReversalShape: expected G = ℤ₂ with 𝔭(1) = 1 and υ(1,1) = ±1")]
    NotTimeReversalShape,
}
