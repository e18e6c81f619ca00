//! Fermionic matrix product states with `d` modes per site and bond
//! dimension `m`.
//!
//! Local occupations `μ ⊆ {1..d}` are bitmasks with mode `k` at bit `k−1`.
//! Expectation values of site words follow the even and odd closed forms,
//! and [`density_matrix`] assembles the Jordan–Wigner density matrix of a
//! block as an independent consistency check of the sign factors.

mod expect;
mod state;
mod symmetry;
mod transfer;

use thiserror::Error;

use crate::cocycle::CocycleError;
use crate::graded::GradedError;
use crate::group::GroupError;
use crate::io::IoError;
use crate::rep::RepError;

pub use expect::{density_matrix, expectation, partial_trace_last, SiteWord, MAX_RHO_MODES};
pub use state::{normalize, FermionicMPS, FermionicMpsJson, MpsKind, FMPS_TOL};
pub use symmetry::{check_symmetry, fmps_index, OnSiteSymmetry, SymmetryCheck, SymmetryJson};
pub use transfer::{transfer_apply, transfer_apply_hat, transfer_fixed_point, transfer_matrix, transfer_power};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FmpsError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("NotDensityMatrix: {0}")]
    NotDensityMatrix(String),
    #[error("NotFixedPoint: sum_mu v_mu* D v_mu differs from D by {0:.3e}")]
    NotFixedPoint(f64),
    #[error(
        "NotNormalized: sum_mu v_mu v_mu* differs from I by {residual:.3e}; try rescaling v by {suggested_scale:.12}"
    )]
    NotNormalized { residual: f64, suggested_scale: f64 },
    #[error("GradingViolated: {0}")]
    GradingViolated(String),
    #[error("DegenerateFixedPoint: the fixed-point space has dimension {0}")]
    DegenerateFixedPoint(usize),
    #[error("NotPositive: fixed point has eigenvalue {0:.3e}")]
    NotPositive(f64),
    #[error("NotPrimitive: peripheral eigenvalue {0} other than 1")]
    NotPrimitive(String),
    #[error("SizeTooLarge: {0} modes exceed the limit of {MAX_RHO_MODES}")]
    SizeTooLarge(usize),
    #[error("SymmetryViolated: element {0} has residual {1:.3e}")]
    SymmetryViolated(usize, f64),
    #[error("NoConsistentQ: no homomorphism q satisfies the odd relation")]
    NoConsistentQ,
    #[error("GradingActionIndeterminate: Ad_W({0}) maps Theta to neither +Theta nor -Theta")]
    GradingActionIndeterminate(usize),
}
