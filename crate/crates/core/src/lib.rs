//! Finite-dimensional toolkit for the index `(κ, 𝔮, [υ])` of one-dimensional
//! fermionic SPT phases with on-site `G`-symmetry, including anti-unitary
//! elements, and for fermionic matrix product states.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod cli;
pub mod cocycle;
pub mod fmps;
pub mod graded;
pub mod group;
pub mod io;
pub mod linalg;
pub mod phase;
pub mod rep;
pub mod snf;
pub mod spt;

use thiserror::Error;

/// Any error raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] group::GroupError),
    #[error(transparent)]
    Cocycle(#[from] cocycle::CocycleError),
    #[error(transparent)]
    Rep(#[from] rep::RepError),
    #[error(transparent)]
    Graded(#[from] graded::GradedError),
    #[error(transparent)]
    Algebra(#[from] algebra::AlgebraError),
    #[error(transparent)]
    Spt(#[from] spt::SptError),
    #[error(transparent)]
    Fmps(#[from] fmps::FmpsError),
    #[error(transparent)]
    Io(#[from] io::IoError),
}

impl Error {
    /// The name of the innermost error variant, e.g. `NotBalanced`.
    pub fn name(&self) -> String {
        let text = self.to_string();
        text.split(':').next().unwrap_or_default().trim().to_string()
    }

    /// Whether the error stems from malformed input rather than from the mathematics.
    pub fn is_malformed_input(&self) -> bool {
        matches!(self.name().as_str(), "MalformedMatrix" | "MalformedInput")
    }
}
