use serde::{Deserialize, Serialize};

use super::SptError;
use crate::algebra::{self, graded_center_split, GradedCenter, OperatorAlgebra, MEMBER_TOL};
use crate::graded::GradingUnitary;
use crate::group::{FiniteGroup, GroupJson, Z2Hom};
use crate::io::{square_matrix, MatrixJson};
use crate::linalg::{self, CMat, OperatorSpan};
use crate::rep::{ProjectiveRep, SymOp, SymOpJson};

/// How the algebra of a system was specified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemForm {
    /// `B(𝒦) ⊗ M₂` with `Γ = I ⊗ σz`.
    R0 { k: usize },
    /// `B(𝒦) ⊗ 𝔠` with `𝔠 = span{I, σx}` and `Γ = I ⊗ σz`.
    R1 { k: usize },
    /// Closure of explicit generators.
    Generators,
}

/// A validated finite-dimensional graded `(G, 𝔭)`-dynamical system.
#[derive(Clone, Debug)]
pub struct GradedSystem {
    form: SystemForm,
    algebra: OperatorAlgebra,
    gamma: GradingUnitary,
    action: ProjectiveRep,
    center: GradedCenter,
}

fn r1_algebra(k: usize) -> OperatorAlgebra {
    let n = 2 * k;
    let id2 = linalg::identity(2);
    let sx = linalg::sigma_x();
    let mut span = OperatorSpan::new(n);
    for a in 0..k {
        for b in 0..k {
            let e = linalg::unit(k, a, b);
            span.insert(&linalg::kron(&e, &id2));
            span.insert(&linalg::kron(&e, &sx));
        }
    }
    let mut generators: Vec<CMat> =
        (0..k.saturating_sub(1)).map(|i| linalg::kron(&linalg::unit(k, i, i + 1), &id2)).collect();
    generators.push(linalg::kron(&linalg::identity(k), &sx));
    OperatorAlgebra::from_parts(span, generators)
}

/// `g ↦ (V⁰_g ⊗ X^{𝔮(g)}, 𝔭(g))` with `X = σx` for `κ = 0` and `X = σy` for
/// `κ = 1`.
pub fn standard_action(kappa: u8, v0: &ProjectiveRep, q: &Z2Hom) -> Result<ProjectiveRep, SptError> {
    let x = if kappa & 1 == 0 { linalg::sigma_x() } else { linalg::sigma_y() };
    let id2 = linalg::identity(2);
    let ops = v0
        .ops()
        .iter()
        .enumerate()
        .map(|(g, op)| {
            let factor = if q.flag(g) { &x } else { &id2 };
            SymOp::new(linalg::kron(&op.matrix, factor), op.flag)
        })
        .collect();
    Ok(ProjectiveRep::new(v0.group(), v0.twist(), ops)?)
}

impl GradedSystem {
    /// Validates covariance, compatibility with the grading, balancedness
    /// and centrality.
    pub fn new(
        form: SystemForm,
        algebra: OperatorAlgebra,
        gamma: GradingUnitary,
        action: ProjectiveRep,
    ) -> Result<Self, SptError> {
        let n = algebra.ambient();
        if gamma.dim() != n || action.dim() != n {
            return Err(SptError::DimensionMismatch(format!(
                "algebra acts on dimension {n}, Γ on {}, the action on {}",
                gamma.dim(),
                action.dim()
            )));
        }
        let center = graded_center_split(&algebra, &gamma)?;
        let gens = algebra.generators();
        for (g, op) in action.ops().iter().enumerate() {
            if !algebra.preserved_by(op) {
                return Err(SptError::NotCovariant(g));
            }
            for x in gens {
                let lhs = op.ad(&gamma.act(x));
                let rhs = gamma.act(&op.ad(x));
                if linalg::norm(&(lhs - rhs)) > MEMBER_TOL * linalg::norm(x).max(1.0) {
                    return Err(SptError::GradingNotPreserved(g));
                }
            }
        }
        if algebra::odd_self_adjoint_unitary(&algebra, &gamma).is_none() {
            return Err(SptError::NotBalanced);
        }
        Ok(Self { form, algebra, gamma, action, center })
    }

    /// `B(ℂᵏ) ⊗ M₂` with the given action on `ℂᵏ ⊗ ℂ²`.
    pub fn r0(k: usize, action: ProjectiveRep) -> Result<Self, SptError> {
        Self::new(SystemForm::R0 { k }, OperatorAlgebra::full(2 * k), GradingUnitary::standard(k), action)
    }

    /// `B(ℂᵏ) ⊗ 𝔠` with the given action on `ℂᵏ ⊗ ℂ²`.
    pub fn r1(k: usize, action: ProjectiveRep) -> Result<Self, SptError> {
        Self::new(SystemForm::R1 { k }, r1_algebra(k), GradingUnitary::standard(k), action)
    }

    pub fn from_generators(
        generators: &[CMat],
        gamma: GradingUnitary,
        action: ProjectiveRep,
    ) -> Result<Self, SptError> {
        let algebra = algebra::algebra_closure(gamma.dim(), generators)?;
        Self::new(SystemForm::Generators, algebra, gamma, action)
    }

    pub fn form(&self) -> SystemForm {
        self.form
    }

    pub fn algebra(&self) -> &OperatorAlgebra {
        &self.algebra
    }

    pub fn gamma(&self) -> &GradingUnitary {
        &self.gamma
    }

    pub fn action(&self) -> &ProjectiveRep {
        &self.action
    }

    pub fn group(&self) -> &FiniteGroup {
        self.action.group()
    }

    pub fn twist(&self) -> &Z2Hom {
        self.action.twist()
    }

    pub fn dim(&self) -> usize {
        self.algebra.ambient()
    }

    pub(crate) fn graded_center(&self) -> &GradedCenter {
        &self.center
    }

    /// The equivalent system `(T 𝓜 T*, T Γ T*, T V_g T*)`.
    pub fn conjugate_by(&self, t: &CMat) -> Result<GradedSystem, SptError> {
        let action = self.action.map_ops(|_, op| op.conjugate_by(t))?;
        GradedSystem::new(SystemForm::Generators, self.algebra.conjugate_by(t), self.gamma.conjugate_by(t), action)
    }

    /// The same system with `V_g` replaced by `λ(g) V_g`.
    pub fn rephase(&self, lambda: &[linalg::C64]) -> Result<GradedSystem, SptError> {
        let action = self.action.map_ops(|g, op| op.scaled(lambda[g]))?;
        GradedSystem::new(self.form, self.algebra.clone(), self.gamma.clone(), action)
    }

    pub fn to_json(&self) -> SystemJson {
        let (form, k_dim, generators) = match self.form {
            SystemForm::R0 { k } => ("R0", Some(k), None),
            SystemForm::R1 { k } => ("R1", Some(k), None),
            SystemForm::Generators => {
                ("generators", None, Some(self.algebra.generators().iter().map(MatrixJson::from_matrix).collect()))
            }
        };
        SystemJson {
            form: form.to_string(),
            k_dim,
            gamma: Some(MatrixJson::from_matrix(self.gamma.matrix())),
            generators,
            group: Some(self.group().to_json()),
            p: Some(self.twist().clone()),
            action: self.action.ops().iter().map(SymOpJson::from_op).collect(),
        }
    }
}

/// `{"form", "K_dim", "gamma", "generators", "group", "p", "action"}`.
///
/// `group` defaults to the cyclic group of order `action.len()` and `p` to
/// the anti-unitary flags of the action.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemJson {
    pub form: String,
    #[serde(rename = "K_dim", default, skip_serializing_if = "Option::is_none")]
    pub k_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Z2Hom>,
    pub action: Vec<SymOpJson>,
}

impl SystemJson {
    pub fn into_system(self) -> Result<GradedSystem, SptError> {
        let group = match self.group {
            Some(g) => FiniteGroup::try_from(g)?,
            None => FiniteGroup::cyclic(self.action.len().max(1)),
        };
        let ops = self.action.iter().map(SymOpJson::to_op).collect::<Result<Vec<_>, _>>()?;
        let p_values = match self.p {
            Some(p) => p.values().to_vec(),
            None => ops.iter().map(|op| u8::from(op.flag)).collect(),
        };
        let p = Z2Hom::new(&group, p_values)?;
        let action = ProjectiveRep::new(&group, &p, ops)?;
        let gamma = self.gamma.as_ref().map(|m| square_matrix(m, "gamma")).transpose()?;
        let standard = |k: usize| -> Result<GradingUnitary, SptError> {
            match gamma.clone() {
                Some(m) => Ok(GradingUnitary::new(m)?),
                None => Ok(GradingUnitary::standard(k)),
            }
        };
        let k_of = |k: Option<usize>| -> Result<usize, SptError> {
            k.or_else(|| (action.dim() % 2 == 0).then_some(action.dim() / 2))
                .ok_or_else(|| SptError::DimensionMismatch("K_dim missing".into()))
        };
        match self.form.as_str() {
            "R0" => {
                let k = k_of(self.k_dim)?;
                let g = standard(k)?;
                GradedSystem::new(SystemForm::R0 { k }, OperatorAlgebra::full(2 * k), g, action)
            }
            "R1" => {
                let k = k_of(self.k_dim)?;
                let g = standard(k)?;
                GradedSystem::new(SystemForm::R1 { k }, r1_algebra(k), g, action)
            }
            "generators" => {
                let gens = self
                    .generators
                    .unwrap_or_default()
                    .iter()
                    .map(|m| square_matrix(m, "generator"))
                    .collect::<Result<Vec<_>, _>>()?;
                let g = match gamma {
                    Some(m) => GradingUnitary::new(m)?,
                    None => return Err(SptError::DimensionMismatch("generators form needs gamma".into())),
                };
                GradedSystem::from_generators(&gens, g, action)
            }
            other => Err(SptError::Io(crate::io::IoError::MalformedInput(format!(
                "unknown form {other:?}, expected R0, R1 or generators"
            )))),
        }
    }
}
