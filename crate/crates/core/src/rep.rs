//! Unitary/anti-unitary operators as `(matrix, flag)` pairs and projective
//! representations built from them.
//!
//! The pair `(M, f)` stands for `M ∘ K^f` where `K` is complex conjugation in
//! the standard basis, so
//!
//! ```text
//! (M, f) · (N, g) = (M · conj^f(N), f + g)
//! Ad_{(M,f)}(x)   = M · conj^f(x) · M⁻¹
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cocycle::{CocycleError, TwistedCocycle};
use crate::group::{FiniteGroup, Z2Hom};
use crate::linalg::{self, conj_if, CMat, C64};
use crate::phase::Phase;

/// Unitarity tolerance for representation matrices.
pub const UNITARY_TOL: f64 = 1e-9;

/// Tolerance for `compose(g,h)·rep(gh)⁻¹` being scalar.
pub const SCALAR_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("WrongLength: expected one operator per group element ({expected}), found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("DimensionMismatch: operator for element {0} has the wrong shape")]
    DimensionMismatch(usize),
    #[error("NotUnitary: operator for element {0} is not unitary")]
    NotUnitary(usize),
    #[error("FlagMismatch: anti-unitary flag of element {0} disagrees with the twist")]
    FlagMismatch(usize),
    #[error("NotProjectiveRep: rep({0})·rep({1})·rep({0}{1})⁻¹ is not a scalar")]
    NotProjectiveRep(usize, usize),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

/// A unitary (`flag = false`) or anti-unitary (`flag = true`) operator.
#[derive(Clone, Debug, PartialEq)]
pub struct SymOp {
    pub matrix: CMat,
    pub flag: bool,
}

impl SymOp {
    pub fn new(matrix: CMat, flag: bool) -> Self {
        Self { matrix, flag }
    }

    pub fn unitary(matrix: CMat) -> Self {
        Self { matrix, flag: false }
    }

    pub fn identity(n: usize) -> Self {
        Self::unitary(linalg::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn compose(&self, other: &SymOp) -> SymOp {
        SymOp { matrix: &self.matrix * conj_if(&other.matrix, self.flag), flag: self.flag ^ other.flag }
    }

    pub fn inverse(&self) -> SymOp {
        let inv = self.matrix.clone().try_inverse().expect("invertible operator");
        SymOp { matrix: conj_if(&inv, self.flag), flag: self.flag }
    }

    /// `x ↦ M conj^f(x) M⁻¹`.
    pub fn ad(&self, x: &CMat) -> CMat {
        let inv = if linalg::is_unitary(&self.matrix, UNITARY_TOL) {
            self.matrix.adjoint()
        } else {
            self.matrix.clone().try_inverse().expect("invertible operator")
        };
        &self.matrix * conj_if(x, self.flag) * inv
    }

    /// `(M ⊗ N, f)` for two operators with the same flag; conjugation
    /// distributes over the product basis.
    pub fn kron(&self, other: &SymOp) -> SymOp {
        assert_eq!(self.flag, other.flag, "tensor product of operators with different linearity");
        SymOp { matrix: linalg::kron(&self.matrix, &other.matrix), flag: self.flag }
    }

    /// Conjugate by a unitary `T`: `T · op · T*`.
    pub fn conjugate_by(&self, t: &CMat) -> SymOp {
        SymOp::unitary(t.clone()).compose(self).compose(&SymOp::unitary(t.adjoint()))
    }

    pub fn scaled(&self, lambda: C64) -> SymOp {
        SymOp { matrix: &self.matrix * lambda, flag: self.flag }
    }
}

/// A projective unitary/anti-unitary representation of `G` relative to 𝔭.
#[derive(Clone, Debug)]
pub struct ProjectiveRep {
    group: FiniteGroup,
    twist: Z2Hom,
    ops: Vec<SymOp>,
}

impl ProjectiveRep {
    /// Validates unitarity, flags against the twist, and a common dimension.
    /// The operator at the identity is rescaled to `I` when it is a scalar.
    pub fn new(group: &FiniteGroup, twist: &Z2Hom, mut ops: Vec<SymOp>) -> Result<Self, RepError> {
        if ops.len() != group.order() {
            return Err(RepError::WrongLength { expected: group.order(), found: ops.len() });
        }
        let dim = ops[0].dim();
        for (g, op) in ops.iter().enumerate() {
            if !op.matrix.is_square() || op.dim() != dim {
                return Err(RepError::DimensionMismatch(g));
            }
            if !linalg::is_unitary(&op.matrix, UNITARY_TOL) {
                return Err(RepError::NotUnitary(g));
            }
            if op.flag != twist.flag(g) {
                return Err(RepError::FlagMismatch(g));
            }
        }
        let e = group.identity();
        let lambda = ops[e].matrix.trace() / C64::from(dim as f64);
        if linalg::norm(&(&ops[e].matrix - linalg::identity(dim) * lambda)) > SCALAR_TOL {
            return Err(RepError::NotProjectiveRep(e, e));
        }
        ops[e] = SymOp::identity(dim);
        Ok(Self { group: group.clone(), twist: twist.clone(), ops })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn twist(&self) -> &Z2Hom {
        &self.twist
    }

    pub fn op(&self, g: usize) -> &SymOp {
        &self.ops[g]
    }

    pub fn ops(&self) -> &[SymOp] {
        &self.ops
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    pub fn map_ops(&self, f: impl Fn(usize, &SymOp) -> SymOp) -> Result<ProjectiveRep, RepError> {
        let ops = self.ops.iter().enumerate().map(|(g, op)| f(g, op)).collect();
        ProjectiveRep::new(&self.group, &self.twist, ops)
    }
}

/// Reads off `υ(g,h)` from `U_g U_h = υ(g,h) U_{gh}`.
pub fn cocycle_of_rep(rep: &ProjectiveRep) -> Result<TwistedCocycle, RepError> {
    let g = rep.group();
    let n = g.order();
    let dim = rep.dim() as f64;
    let mut values = vec![vec![Phase::ONE; n]; n];
    for a in 0..n {
        for b in 0..n {
            let composed = rep.op(a).compose(rep.op(b));
            let target = rep.op(g.mul(a, b));
            let inv = target.inverse();
            let ratio = composed.compose(&inv);
            debug_assert!(!ratio.flag);
            let scalar = ratio.matrix.trace() / C64::from(dim);
            let dev = linalg::norm(&(&ratio.matrix - linalg::identity(rep.dim()) * scalar));
            if dev > SCALAR_TOL * dim.sqrt() || (scalar.norm() - 1.0).abs() > SCALAR_TOL {
                return Err(RepError::NotProjectiveRep(a, b));
            }
            values[a][b] = Phase::from_complex(scalar / scalar.norm());
        }
    }
    Ok(TwistedCocycle::with_tolerance(g, rep.twist(), values, 1e-8)?)
}

/// JSON form of one operator: `{"matrix": [[[re,im],..],..], "flag": 0|1}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymOpJson {
    pub matrix: crate::io::MatrixJson,
    #[serde(default)]
    pub flag: u8,
}

impl SymOpJson {
    pub fn from_op(op: &SymOp) -> Self {
        Self { matrix: crate::io::MatrixJson::from_matrix(&op.matrix), flag: u8::from(op.flag) }
    }

    pub fn to_op(&self) -> Result<SymOp, crate::io::IoError> {
        Ok(SymOp::new(self.matrix.to_matrix()?, self.flag == 1))
    }
}
