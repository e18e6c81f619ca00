use serde::{Deserialize, Serialize};

use super::system::GradedSystem;
use super::SptError;
use crate::algebra::{MatrixUnits, MEMBER_TOL};
use crate::cocycle::{cohomologous, epsilon, epsilon_p, CocycleJson, TwistedCocycle, DEFAULT_SNAP_TOL};
use crate::group::{FiniteGroup, Z2Hom};
use crate::linalg::{self, cr, CMat};
use crate::rep::{cocycle_of_rep, ProjectiveRep, SymOp};

/// The index `(κ, 𝔮, [υ])`; `cls` is a validated representative.
#[derive(Clone, Debug)]
pub struct SPTIndex {
    pub kappa: u8,
    pub q: Z2Hom,
    pub cls: TwistedCocycle,
}

impl SPTIndex {
    pub fn trivial(group: &FiniteGroup, p: &Z2Hom) -> Self {
        Self { kappa: 0, q: Z2Hom::trivial(group), cls: TwistedCocycle::trivial(group, p) }
    }

    pub fn group(&self) -> &FiniteGroup {
        self.cls.group()
    }

    pub fn twist(&self) -> &Z2Hom {
        self.cls.twist()
    }

    pub fn to_json(&self) -> IndexJson {
        IndexJson { kappa: self.kappa, q: self.q.values().to_vec(), cocycle: self.cls.to_json() }
    }
}

/// `{"kappa", "q", "cocycle"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexJson {
    pub kappa: u8,
    pub q: Vec<u8>,
    pub cocycle: CocycleJson,
}

impl IndexJson {
    pub fn into_index(self, group: Option<&FiniteGroup>) -> Result<SPTIndex, SptError> {
        let cls = self.cocycle.into_cocycle(group)?;
        let q = Z2Hom::new(cls.group(), self.q)?;
        Ok(SPTIndex { kappa: self.kappa & 1, q, cls })
    }
}

/// Outcome of [`classify`]: `κ` and the self-adjoint unitary marker used to
/// read off `𝔮`.
#[derive(Clone, Debug)]
pub struct Classification {
    pub kappa: u8,
    pub marker: CMat,
    /// Matrix units of the factor whose automorphisms carry the cocycle:
    /// the algebra itself for `κ = 0`, its even part for `κ = 1`.
    pub units: MatrixUnits,
}

/// Determines `κ` and its marker.
///
/// `κ = 1` when the center has an odd part; the marker is the odd central
/// self-adjoint unitary `b`. Otherwise the algebra is a factor and the marker
/// is the self-adjoint unitary `Γ̂` in the algebra implementing `Ad_Γ` there.
pub fn classify(sys: &GradedSystem) -> Result<Classification, SptError> {
    let center = sys.graded_center();
    let structure = &center.structure;
    if let Some(b) = &center.b {
        // even part of z₁𝓜 ⊕ z₂𝓜 with Ad_Γ swapping the blocks
        let block = &structure.blocks[0];
        let column = (0..block.k())
            .map(|i| {
                let e = block.unit(i, 0);
                e + sys.gamma().act(e)
            })
            .collect();
        return Ok(Classification { kappa: 1, marker: b.clone(), units: MatrixUnits::from_column(column) });
    }
    if !structure.is_factor() {
        return Err(SptError::Algebra(crate::algebra::AlgebraError::CentralityViolation(structure.blocks.len())));
    }
    let units = structure.blocks[0].clone();
    let grading = SymOp::unitary(sys.gamma().matrix().clone());
    let u = units.implementer(&grading)?.matrix;
    let k = units.k();
    let square = &u * &u;
    let lambda = square.trace() / cr(k as f64);
    let u = u / lambda.sqrt();
    if linalg::norm(&(&u * &u - linalg::identity(k))) > MEMBER_TOL {
        return Err(SptError::MarkerNotFound);
    }
    let trace = u.trace() / cr(k as f64);
    if (trace.norm() - 1.0).abs() < MEMBER_TOL {
        return Err(SptError::MarkerNotFound);
    }
    let marker = units.embed(&u);
    Ok(Classification { kappa: 0, marker, units })
}

fn read_q(sys: &GradedSystem, marker: &CMat) -> Result<Z2Hom, SptError> {
    let scale = linalg::norm(marker);
    let values = sys
        .action()
        .ops()
        .iter()
        .enumerate()
        .map(|(g, op)| {
            let image = op.ad(marker);
            if linalg::norm(&(&image - marker)) <= MEMBER_TOL * scale {
                Ok(0)
            } else if linalg::norm(&(&image + marker)) <= MEMBER_TOL * scale {
                Ok(1)
            } else {
                Err(SptError::GradingActionIndeterminate(g))
            }
        })
        .collect::<Result<Vec<u8>, _>>()?;
    Ok(Z2Hom::new(sys.group(), values)?)
}

/// The index of a system.
///
/// `[υ]` is the class of the projective (anti-)unitary representation that
/// implements the action on the factor carried by the classification
/// (the algebra for `κ = 0`, its even part for `κ = 1`), read in matrix-unit
/// coordinates. This is independent of how that factor sits inside the
/// ambient space, so it also applies to stacked systems with multiplicity.
pub fn compute_index(sys: &GradedSystem) -> Result<SPTIndex, SptError> {
    let class = classify(sys)?;
    let q = read_q(sys, &class.marker)?;
    let ops = sys.action().ops().iter().map(|op| class.units.implementer(op)).collect::<Result<Vec<_>, _>>()?;
    let rep = ProjectiveRep::new(sys.group(), sys.twist(), ops)?;
    let cls = cocycle_of_rep(&rep)?;
    let (cls, _) = cls.root_normal_form(DEFAULT_SNAP_TOL)?;
    Ok(SPTIndex { kappa: class.kappa, q, cls })
}

/// The cocycle read directly from the ambient action: `υ(V)` for `κ = 0`
/// and `υ(V)·ε(𝔮,𝔭)` for `κ = 1`. Agrees with [`compute_index`] on the
/// standard forms.
pub fn cocycle_via_rep(sys: &GradedSystem, kappa: u8, q: &Z2Hom) -> Result<TwistedCocycle, SptError> {
    let u = cocycle_of_rep(sys.action())?;
    let u = if kappa == 1 { u.product(&epsilon(sys.group(), sys.twist(), q, sys.twist()))? } else { u };
    Ok(u)
}

/// `κ`, `𝔮` equal and the cocycles cohomologous.
pub fn index_equal(i1: &SPTIndex, i2: &SPTIndex) -> bool {
    if !i1.cls.same_setting(&i2.cls) || i1.kappa != i2.kappa || i1.q != i2.q {
        return false;
    }
    cohomologous(&i1.cls, &i2.cls, None, DEFAULT_SNAP_TOL).is_ok_and(|c| c.cohomologous)
}

/// `(κ₁+κ₂, 𝔮₁+𝔮₂+κ₁κ₂𝔭, [υ₁ υ₂ ε_𝔭(κ₁,𝔮₁,κ₂,𝔮₂)])`.
pub fn stack_index(i1: &SPTIndex, i2: &SPTIndex) -> Result<SPTIndex, SptError> {
    if !i1.cls.same_setting(&i2.cls) {
        return Err(SptError::GroupMismatch);
    }
    let p = i1.twist();
    let group = i1.group();
    let kappa = (i1.kappa ^ i2.kappa) & 1;
    let q = i1.q.add(&i2.q).add(&p.scale(i1.kappa & i2.kappa));
    let eps = epsilon_p(group, p, i1.kappa, &i1.q, i2.kappa, &i2.q);
    let cls = i1.cls.product(&i2.cls)?.product(&eps)?;
    Ok(SPTIndex { kappa, q, cls })
}
