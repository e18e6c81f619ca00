//! ℤ₂-graded operators on finite-dimensional spaces.
//!
//! A grading is a self-adjoint unitary `Γ`; an operator `x` is homogeneous of
//! degree `σ` when `Γ x Γ = (−1)^σ x`. The graded tensor product is realized
//! spatially as `a ⊗̂ b = a Γ₁^{∂b} ⊗ b`.
//!
//! Fock spaces `ℱ(ℂ^d)` use the basis `ψ_μ` indexed by occupation bitmasks:
//! mode `k ∈ {1..d}` is occupied in `μ` when bit `k−1` is set, and the basis
//! index of `ψ_μ` is the integer `μ` itself.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::MatrixJson;
use crate::linalg::{self, cr, CMat, C64};
use crate::rep::SymOp;

/// Tolerance for `Γ = Γ*`, `Γ² = I` and degree tags.
pub const GRADING_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GradedError {
    #[error("NotGrading: Γ must be a self-adjoint unitary")]
    NotGrading,
    #[error("DegreeUntagged: the second factor of a graded tensor product must be homogeneous")]
    DegreeUntagged,
    #[error("NotHomogeneous: operator is not of the declared degree {0}")]
    NotHomogeneous(u8),
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("NotUnitary: one-particle operator is not unitary")]
    NotUnitary,
    #[error("IndexOutOfRange: {0}")]
    IndexOutOfRange(String),
}

/// A self-adjoint unitary defining a ℤ₂-grading.
#[derive(Clone, Debug, PartialEq)]
pub struct GradingUnitary {
    matrix: CMat,
}

impl GradingUnitary {
    pub fn new(matrix: CMat) -> Result<Self, GradedError> {
        if !matrix.is_square()
            || !linalg::is_hermitian(&matrix, GRADING_TOL)
            || !linalg::is_unitary(&matrix, GRADING_TOL)
        {
            return Err(GradedError::NotGrading);
        }
        Ok(Self { matrix })
    }

    pub fn trivial(n: usize) -> Self {
        Self { matrix: linalg::identity(n) }
    }

    /// `I_k ⊗ σz`, the grading of the standard forms.
    pub fn standard(k: usize) -> Self {
        Self { matrix: linalg::kron(&linalg::identity(k), &linalg::sigma_z()) }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn power(&self, k: u8) -> CMat {
        if k & 1 == 1 {
            self.matrix.clone()
        } else {
            linalg::identity(self.dim())
        }
    }

    pub fn act(&self, x: &CMat) -> CMat {
        &self.matrix * x * &self.matrix
    }

    pub fn even_part(&self, x: &CMat) -> CMat {
        (x + self.act(x)) * cr(0.5)
    }

    pub fn odd_part(&self, x: &CMat) -> CMat {
        (x - self.act(x)) * cr(0.5)
    }

    /// Degree of `x` if it is homogeneous within `tol` (relative to `‖x‖`).
    pub fn degree_of(&self, x: &CMat, tol: f64) -> Option<u8> {
        let scale = linalg::norm(x).max(1.0);
        if linalg::norm(&self.odd_part(x)) <= tol * scale {
            Some(0)
        } else if linalg::norm(&self.even_part(x)) <= tol * scale {
            Some(1)
        } else {
            None
        }
    }

    /// `Γ₁ ⊗ Γ₂`.
    pub fn tensor(&self, other: &GradingUnitary) -> GradingUnitary {
        GradingUnitary { matrix: linalg::kron(&self.matrix, &other.matrix) }
    }

    pub fn conjugate_by(&self, t: &CMat) -> GradingUnitary {
        GradingUnitary { matrix: t * &self.matrix * t.adjoint() }
    }
}

/// An operator with an optional homogeneous degree.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedOperator {
    pub matrix: CMat,
    pub degree: Option<u8>,
}

impl GradedOperator {
    pub fn untagged(matrix: CMat) -> Self {
        Self { matrix, degree: None }
    }

    /// Tags `matrix` with `degree` after checking it against `gamma`.
    pub fn homogeneous(matrix: CMat, degree: u8, gamma: &GradingUnitary) -> Result<Self, GradedError> {
        if matrix.shape() != gamma.matrix.shape() {
            return Err(GradedError::DimensionMismatch("operator and grading differ in size".into()));
        }
        let sign = if degree & 1 == 1 { -1.0 } else { 1.0 };
        let dev = linalg::norm(&(gamma.act(&matrix) - &matrix * cr(sign)));
        if dev > GRADING_TOL * linalg::norm(&matrix).max(1.0) {
            return Err(GradedError::NotHomogeneous(degree & 1));
        }
        Ok(Self { matrix, degree: Some(degree & 1) })
    }

    /// Tags `matrix` with its detected degree, if homogeneous.
    pub fn detect(matrix: CMat, gamma: &GradingUnitary) -> Self {
        let degree = gamma.degree_of(&matrix, GRADING_TOL);
        Self { matrix, degree }
    }
}

/// `a ⊗̂ b = a Γ₁^{∂b} ⊗ b`; the degree is `∂a + ∂b` when `a` is tagged.
pub fn graded_tensor(
    a: &GradedOperator,
    gamma1: &GradingUnitary,
    b: &GradedOperator,
) -> Result<GradedOperator, GradedError> {
    let db = b.degree.ok_or(GradedError::DegreeUntagged)?;
    if a.matrix.shape() != gamma1.matrix.shape() {
        return Err(GradedError::DimensionMismatch("first factor and Γ₁ differ in size".into()));
    }
    let left = &a.matrix * gamma1.power(db);
    Ok(GradedOperator { matrix: linalg::kron(&left, &b.matrix), degree: a.degree.map(|da| da ^ db) })
}

/// Parity `|μ|` of an occupation bitmask.
#[inline]
pub fn parity(mask: usize) -> u8 {
    (mask.count_ones() & 1) as u8
}

/// Occupied modes of `mask`, 1-based and increasing.
pub fn modes(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect()
}

/// Bitmask of a set of 1-based modes.
pub fn mask_of(modes: &[usize]) -> usize {
    modes.iter().fold(0, |m, k| m | 1 << (k - 1))
}

/// `Σ_μ (−1)^{|μ|} E_μμ` on `ℱ(ℂ^d)`.
pub fn fock_parity(d: usize) -> CMat {
    let entries: Vec<C64> = (0..1usize << d).map(|m| cr(if parity(m) == 1 { -1.0 } else { 1.0 })).collect();
    linalg::diag(&entries)
}

fn determinant(rows: &[usize], cols: &[usize], u: &CMat) -> C64 {
    if rows.is_empty() {
        return cr(1.0);
    }
    let sub = CMat::from_fn(rows.len(), cols.len(), |i, j| u[(rows[i], cols[j])]);
    sub.determinant()
}

/// Second quantization `𝔉Γ(U)`: entry `(μ,ν)` is the minor of `U` on rows
/// `μ` and columns `ν` (both in increasing mode order), zero unless
/// `#μ = #ν`. The flag is passed through unchanged.
pub fn second_quantize(u: &CMat, flag: bool) -> Result<SymOp, GradedError> {
    if !linalg::is_unitary(u, 1e-9) {
        return Err(GradedError::NotUnitary);
    }
    let d = u.nrows();
    if d > 12 {
        return Err(GradedError::IndexOutOfRange(format!("{d} modes exceed the Fock-space limit of 12")));
    }
    let dim = 1usize << d;
    let index: Vec<Vec<usize>> = (0..dim).map(|m| modes(m).into_iter().map(|k| k - 1).collect()).collect();
    let mut out = linalg::zeros(dim);
    for mu in 0..dim {
        for nu in 0..dim {
            if index[mu].len() == index[nu].len() {
                out[(mu, nu)] = determinant(&index[mu], &index[nu], u);
            }
        }
    }
    Ok(SymOp::new(out, flag))
}

/// `E^{(x)}_{μν}` on a chain of `l` sites with `d` modes each:
/// `P^{⊗x} ⊗ e_μν ⊗ I^{⊗(l−1−x)}`, with the parity string only for odd units.
pub fn jw_embed(mu: usize, nu: usize, x: usize, l: usize, d: usize) -> Result<CMat, GradedError> {
    let local = 1usize << d;
    if x >= l {
        return Err(GradedError::IndexOutOfRange(format!("site {x} on a chain of length {l}")));
    }
    if mu >= local || nu >= local {
        return Err(GradedError::IndexOutOfRange(format!("mode set outside 1..={d}")));
    }
    let odd = parity(mu) ^ parity(nu) == 1;
    let p = fock_parity(d);
    let id = linalg::identity(local);
    let unit = linalg::unit(local, mu, nu);
    let factors: Vec<&CMat> = (0..l)
        .map(|s| match s.cmp(&x) {
            std::cmp::Ordering::Less if odd => &p,
            std::cmp::Ordering::Less => &id,
            std::cmp::Ordering::Equal => &unit,
            std::cmp::Ordering::Greater => &id,
        })
        .collect();
    Ok(linalg::kron_all(factors))
}

/// JSON form of a graded operator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GradedOperatorJson {
    pub matrix: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u8>,
}

impl From<&GradedOperator> for GradedOperatorJson {
    fn from(op: &GradedOperator) -> Self {
        Self { matrix: MatrixJson::from_matrix(&op.matrix), degree: op.degree }
    }
}
