use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::FmpsError;
use crate::graded::{parity, GradingUnitary};
use crate::io::{square_matrix, IoError, MatrixJson};
use crate::linalg::{self, CMat};

/// Tolerance for the normalization and fixed-point relations.
pub const FMPS_TOL: f64 = 1e-8;

const FAITHFUL_RTOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MpsKind {
    Even,
    Odd,
}

/// A validated fermionic MPS `({v_μ}, D, Θ, σ₀)`.
///
/// For the even kind `σ₀` is read off from `Ad_Θ(v_μ) = (−1)^{|μ|+σ₀} v_μ`;
/// for the odd kind it is supplied and there is no `Θ`.
#[derive(Clone, Debug)]
pub struct FermionicMPS {
    kind: MpsKind,
    d: usize,
    v: Vec<CMat>,
    density: CMat,
    theta: Option<GradingUnitary>,
    sigma0: u8,
}

impl FermionicMPS {
    pub fn even(d: usize, v: Vec<CMat>, density: CMat, theta: CMat) -> Result<Self, FmpsError> {
        let theta = GradingUnitary::new(theta)?;
        let mut mps = Self { kind: MpsKind::Even, d, v, density, theta: Some(theta), sigma0: 0 };
        mps.validate()?;
        Ok(mps)
    }

    pub fn odd(d: usize, v: Vec<CMat>, density: CMat, sigma0: u8) -> Result<Self, FmpsError> {
        let mut mps = Self { kind: MpsKind::Odd, d, v, density, theta: None, sigma0: sigma0 & 1 };
        mps.validate()?;
        Ok(mps)
    }

    fn validate(&mut self) -> Result<(), FmpsError> {
        let local = check_kraus(self.d, &self.v)?;
        let m = self.v[0].nrows();
        debug_assert_eq!(local, self.v.len());
        if self.density.shape() != (m, m) {
            return Err(FmpsError::DimensionMismatch(format!("D must be {m}x{m}")));
        }
        check_density(&self.density)?;
        check_normalized(&self.v)?;
        let fixed = self.v.iter().fold(linalg::zeros(m), |acc, v| acc + v.adjoint() * &self.density * v);
        let residual = linalg::norm(&(fixed - &self.density));
        if residual > FMPS_TOL {
            return Err(FmpsError::NotFixedPoint(residual));
        }
        if let Some(theta) = &self.theta {
            if theta.dim() != m {
                return Err(FmpsError::DimensionMismatch(format!("Theta must be {m}x{m}")));
            }
            let mut sigma0 = None;
            for (mu, v) in self.v.iter().enumerate() {
                if linalg::norm(v) <= FMPS_TOL {
                    continue;
                }
                let deg = theta
                    .degree_of(v, FMPS_TOL)
                    .ok_or_else(|| FmpsError::GradingViolated(format!("v_{mu} is not homogeneous under Theta")))?;
                let s = deg ^ parity(mu);
                match sigma0 {
                    None => sigma0 = Some(s),
                    Some(prev) if prev != s => {
                        return Err(FmpsError::GradingViolated("no single sigma0 fits every v_mu".into()))
                    }
                    _ => {}
                }
            }
            self.sigma0 = sigma0.unwrap_or(0);
            if linalg::norm(&(theta.act(&self.density) - &self.density)) > FMPS_TOL {
                return Err(FmpsError::GradingViolated("Ad_Theta(D) != D".into()));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> MpsKind {
        self.kind
    }

    /// Modes per site.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Bond dimension.
    pub fn m(&self) -> usize {
        self.density.nrows()
    }

    /// `2^d`, the dimension of the on-site Fock space.
    pub fn local_dim(&self) -> usize {
        self.v.len()
    }

    pub fn v(&self, mu: usize) -> &CMat {
        &self.v[mu]
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.v
    }

    pub fn density(&self) -> &CMat {
        &self.density
    }

    pub fn theta(&self) -> Option<&GradingUnitary> {
        self.theta.as_ref()
    }

    pub fn sigma0(&self) -> u8 {
        self.sigma0
    }

    /// The gauge change `v_μ ↦ G v_μ G*`, `D ↦ G D G*`, `Θ ↦ G Θ G*` by a unitary `G`.
    pub fn gauge_transform(&self, g: &CMat) -> Result<Self, FmpsError> {
        if g.shape() != (self.m(), self.m()) {
            return Err(FmpsError::DimensionMismatch(format!("gauge must be {m}x{m}", m = self.m())));
        }
        let ad = |x: &CMat| g * x * g.adjoint();
        let v = self.v.iter().map(ad).collect();
        let density = ad(&self.density);
        match &self.theta {
            Some(t) => Self::even(self.d, v, density, ad(t.matrix())),
            None => Self::odd(self.d, v, density, self.sigma0),
        }
    }

    /// The same data with `v_μ ↦ v_μ + δ` on one occupation. Skips validation.
    pub fn perturbed_unchecked(&self, mu: usize, delta: &CMat) -> Self {
        let mut out = self.clone();
        out.v[mu] += delta;
        out
    }

    pub fn to_json(&self) -> FermionicMpsJson {
        FermionicMpsJson {
            kind: self.kind,
            d: self.d,
            m: self.m(),
            v: self.v.iter().enumerate().map(|(mu, v)| (mu.to_string(), MatrixJson::from_matrix(v))).collect(),
            density: MatrixJson::from_matrix(&self.density),
            theta: self.theta.as_ref().map(|t| MatrixJson::from_matrix(t.matrix())),
            sigma0: (self.kind == MpsKind::Odd).then_some(self.sigma0),
        }
    }
}

fn check_kraus(d: usize, v: &[CMat]) -> Result<usize, FmpsError> {
    if d == 0 || d > 12 {
        return Err(FmpsError::DimensionMismatch(format!("d = {d} must lie in 1..=12")));
    }
    let local = 1usize << d;
    if v.len() != local {
        return Err(FmpsError::DimensionMismatch(format!("expected {local} matrices v_mu, got {}", v.len())));
    }
    let m = v[0].nrows();
    if m == 0 || v.iter().any(|x| x.shape() != (m, m)) {
        return Err(FmpsError::DimensionMismatch("v_mu must all be m x m with m >= 1".into()));
    }
    Ok(local)
}

fn check_density(density: &CMat) -> Result<(), FmpsError> {
    if !linalg::is_hermitian(density, FMPS_TOL) {
        return Err(FmpsError::NotDensityMatrix("D is not self-adjoint".into()));
    }
    let tr = linalg::trace(density);
    if (tr.re - 1.0).abs() > FMPS_TOL || tr.im.abs() > FMPS_TOL {
        return Err(FmpsError::NotDensityMatrix(format!("trace(D) = {tr}")));
    }
    let eig = linalg::hermitian_eigen(density).0;
    let (lo, hi) = (eig[0], eig[eig.len() - 1]);
    if lo <= FAITHFUL_RTOL * hi {
        return Err(FmpsError::NotDensityMatrix(format!("D is not faithful (min eigenvalue {lo:.3e})")));
    }
    Ok(())
}

pub(super) fn check_normalized(v: &[CMat]) -> Result<(), FmpsError> {
    let m = v[0].nrows();
    let sum = v.iter().fold(linalg::zeros(m), |acc, x| acc + x * x.adjoint());
    let residual = linalg::norm(&(&sum - linalg::identity(m)));
    if residual > FMPS_TOL {
        let tr = linalg::trace(&sum).re;
        let suggested_scale = if tr > 0.0 { (m as f64 / tr).sqrt() } else { 0.0 };
        return Err(FmpsError::NotNormalized { residual, suggested_scale });
    }
    Ok(())
}

/// Rescales `{v_μ}` so that `Tr Σ v_μ v_μ* = m`. This makes `Σ v_μ v_μ* = I`
/// whenever the sum was already proportional to the identity.
pub fn normalize(v: &[CMat]) -> Vec<CMat> {
    let Some(first) = v.first() else { return Vec::new() };
    let m = first.nrows();
    let tr: f64 = v.iter().map(|x| linalg::trace(&(x * x.adjoint())).re).sum();
    if tr <= 0.0 {
        return v.to_vec();
    }
    let s = linalg::cr((m as f64 / tr).sqrt());
    v.iter().map(|x| x * s).collect()
}

/// `{"kind", "d", "m", "v": {bitmask: matrix}, "D", "Theta"?, "sigma0"?}`.
/// Occupations absent from `v` are zero matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FermionicMpsJson {
    pub kind: MpsKind,
    pub d: usize,
    pub m: usize,
    pub v: BTreeMap<String, MatrixJson>,
    #[serde(rename = "D")]
    pub density: MatrixJson,
    #[serde(rename = "Theta", default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma0: Option<u8>,
}

impl FermionicMpsJson {
    pub fn into_mps(self) -> Result<FermionicMPS, FmpsError> {
        if self.d == 0 || self.d > 12 || self.m == 0 {
            return Err(IoError::MalformedInput(format!("d = {}, m = {} out of range", self.d, self.m)).into());
        }
        let local = 1usize << self.d;
        let mut v = vec![linalg::zeros(self.m); local];
        for (key, mat) in &self.v {
            let mu: usize =
                key.trim().parse().map_err(|_| IoError::MalformedInput(format!("v key {key:?} is not a bitmask")))?;
            if mu >= local {
                return Err(IoError::MalformedInput(format!("v key {mu} exceeds 2^d - 1 = {}", local - 1)).into());
            }
            let x = square_matrix(mat, "v")?;
            if x.nrows() != self.m {
                return Err(FmpsError::DimensionMismatch(format!("v[{key}] is not {m}x{m}", m = self.m)));
            }
            v[mu] = x;
        }
        let density = square_matrix(&self.density, "D")?;
        match self.kind {
            MpsKind::Even => {
                let theta =
                    self.theta.as_ref().ok_or_else(|| IoError::MalformedInput("even MPS needs Theta".into()))?;
                FermionicMPS::even(self.d, v, density, square_matrix(theta, "Theta")?)
            }
            MpsKind::Odd => {
                let sigma0 = self.sigma0.ok_or_else(|| IoError::MalformedInput("odd MPS needs sigma0".into()))?;
                if sigma0 > 1 {
                    return Err(IoError::MalformedInput("sigma0 must be 0 or 1".into()).into());
                }
                FermionicMPS::odd(self.d, v, density, sigma0)
            }
        }
    }
}
