use serde::{Deserialize, Serialize};

use super::{FermionicMPS, FmpsError, MpsKind, FMPS_TOL};
use crate::cocycle::DEFAULT_SNAP_TOL;
use crate::graded::{parity, second_quantize};
use crate::group::{FiniteGroup, GroupJson, Z2Hom};
use crate::linalg::{self, CMat, C64};
use crate::phase::Phase;
use crate::rep::{cocycle_of_rep, ProjectiveRep, SymOpJson};
use crate::spt::SPTIndex;

/// An on-site action: `U_g` on the one-particle space `ℂ^d`, `W_g` on the
/// bond space `ℂ^m`, and for the odd kind an optional prescribed `𝔮`.
#[derive(Clone, Debug)]
pub struct OnSiteSymmetry {
    u: ProjectiveRep,
    w: ProjectiveRep,
    q: Option<Z2Hom>,
}

impl OnSiteSymmetry {
    pub fn new(u: ProjectiveRep, w: ProjectiveRep, q: Option<Z2Hom>) -> Result<Self, FmpsError> {
        if u.group() != w.group() || u.twist() != w.twist() {
            return Err(FmpsError::DimensionMismatch("U and W must live on the same (G, p)".into()));
        }
        if let Some(q) = &q {
            Z2Hom::new(u.group(), q.values().to_vec())?;
        }
        Ok(Self { u, w, q })
    }

    pub fn group(&self) -> &FiniteGroup {
        self.u.group()
    }

    pub fn twist(&self) -> &Z2Hom {
        self.u.twist()
    }

    pub fn u(&self) -> &ProjectiveRep {
        &self.u
    }

    pub fn w(&self) -> &ProjectiveRep {
        &self.w
    }

    pub fn q(&self) -> Option<&Z2Hom> {
        self.q.as_ref()
    }
}

/// Result of [`check_symmetry`].
#[derive(Clone, Debug)]
pub struct SymmetryCheck {
    /// `c_g`, normalized to unit modulus.
    pub phases: Vec<Phase>,
    /// `|c_g|` of the least-squares fit before normalization.
    pub raw_moduli: Vec<f64>,
    /// `(Σ_ν ‖L_ν − c_g W_g∘v_ν∘W_g⁻¹‖²)^{1/2}`.
    pub residuals: Vec<f64>,
    /// The validated `𝔮` for the odd kind.
    pub q: Option<Z2Hom>,
}

struct Fit {
    phase: C64,
    modulus: f64,
    residual: f64,
}

fn fit(mps: &FermionicMPS, fock: &CMat, w: &crate::rep::SymOp, q: u8) -> Fit {
    let local = mps.local_dim();
    let mut num = C64::new(0.0, 0.0);
    let mut den = 0.0;
    let mut pairs = Vec::with_capacity(local);
    for nu in 0..local {
        let mut lhs = (0..local).fold(linalg::zeros(mps.m()), |acc, mu| acc + mps.v(mu) * fock[(mu, nu)]);
        if q & parity(nu) == 1 {
            lhs = -lhs;
        }
        let rhs = w.ad(mps.v(nu));
        num += linalg::hs_inner(&rhs, &lhs);
        den += linalg::norm(&rhs).powi(2);
        pairs.push((lhs, rhs));
    }
    let raw = if den > 0.0 { num / den } else { C64::new(1.0, 0.0) };
    let modulus = raw.norm();
    let phase = if modulus > 0.0 { raw / modulus } else { C64::new(1.0, 0.0) };
    let residual = pairs.iter().map(|(l, r)| linalg::norm(&(l - r * phase)).powi(2)).sum::<f64>().sqrt();
    Fit { phase, modulus, residual }
}

/// Finds `c_g` with `Σ_μ ⟨ψ_μ, 𝔉Γ(U_g)ψ_ν⟩ v_μ = c_g W_g∘v_ν∘W_g⁻¹` for every `ν`.
///
/// For the odd kind the left side carries `(−1)^{𝔮(g)|ν|}`; a prescribed `𝔮`
/// is checked as given, otherwise every homomorphism is tried in order. A
/// relation holds when its residual is at most `tol·max(1, √m)`.
pub fn check_symmetry(mps: &FermionicMPS, sym: &OnSiteSymmetry, tol: f64) -> Result<SymmetryCheck, FmpsError> {
    if sym.u.dim() != mps.d() {
        return Err(FmpsError::DimensionMismatch(format!("U_g must be {d}x{d}", d = mps.d())));
    }
    if sym.w.dim() != mps.m() {
        return Err(FmpsError::DimensionMismatch(format!("W_g must be {m}x{m}", m = mps.m())));
    }
    let group = sym.group();
    let fock = group
        .elements()
        .map(|g| {
            let u = sym.u.op(g);
            second_quantize(&u.matrix, u.flag).map(|op| op.matrix)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let bound = tol * (mps.m() as f64).sqrt().max(1.0);
    let run = |q: &Z2Hom| -> Result<SymmetryCheck, FmpsError> {
        let mut out = SymmetryCheck { phases: vec![], raw_moduli: vec![], residuals: vec![], q: None };
        for g in group.elements() {
            let f = fit(mps, &fock[g], sym.w.op(g), q.at(g));
            if f.residual > bound {
                return Err(FmpsError::SymmetryViolated(g, f.residual));
            }
            out.phases.push(Phase::from_complex(f.phase));
            out.raw_moduli.push(f.modulus);
            out.residuals.push(f.residual);
        }
        Ok(out)
    };
    match mps.kind() {
        MpsKind::Even => run(&Z2Hom::trivial(group)),
        MpsKind::Odd => {
            if let Some(q) = &sym.q {
                let mut out = run(q)?;
                out.q = Some(q.clone());
                return Ok(out);
            }
            for q in group.z2_homs() {
                if let Ok(mut out) = run(&q) {
                    out.q = Some(q);
                    return Ok(out);
                }
            }
            Err(FmpsError::NoConsistentQ)
        }
    }
}

/// The index of a symmetric fermionic MPS: `κ` from the kind, `𝔮` from
/// `Ad_{W_g}(Θ) = (−1)^{𝔮(g)} Θ` (even) or from [`check_symmetry`] (odd),
/// and the class of `W`.
pub fn fmps_index(mps: &FermionicMPS, sym: &OnSiteSymmetry) -> Result<SPTIndex, FmpsError> {
    let check = check_symmetry(mps, sym, FMPS_TOL)?;
    let group = sym.group();
    let (kappa, q) = match (mps.kind(), mps.theta()) {
        (MpsKind::Even, Some(theta)) => {
            let t = theta.matrix();
            let scale = linalg::norm(t);
            let values = group
                .elements()
                .map(|g| {
                    let image = sym.w.op(g).ad(t);
                    if linalg::norm(&(&image - t)) <= FMPS_TOL * scale {
                        Ok(0)
                    } else if linalg::norm(&(&image + t)) <= FMPS_TOL * scale {
                        Ok(1)
                    } else {
                        Err(FmpsError::GradingActionIndeterminate(g))
                    }
                })
                .collect::<Result<Vec<u8>, _>>()?;
            (0, Z2Hom::new(group, values)?)
        }
        _ => (1, check.q.expect("odd check records q")),
    };
    let (cls, _) = cocycle_of_rep(&sym.w)?.root_normal_form(DEFAULT_SNAP_TOL)?;
    Ok(SPTIndex { kappa, q, cls })
}

/// `{"group"?, "p"?, "U": [..], "W": [..], "q"?}`. The group defaults to
/// `ℤ_n` with `n = len(U)`, and `p` to the flags of `U`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymmetryJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Z2Hom>,
    #[serde(rename = "U")]
    pub u: Vec<SymOpJson>,
    #[serde(rename = "W")]
    pub w: Vec<SymOpJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Z2Hom>,
}

impl SymmetryJson {
    pub fn into_symmetry(self) -> Result<OnSiteSymmetry, FmpsError> {
        let group = match self.group {
            Some(g) => FiniteGroup::try_from(g)?,
            None => FiniteGroup::cyclic(self.u.len().max(1)),
        };
        let u_ops = self.u.iter().map(SymOpJson::to_op).collect::<Result<Vec<_>, _>>()?;
        let w_ops = self.w.iter().map(SymOpJson::to_op).collect::<Result<Vec<_>, _>>()?;
        let p_values = match self.p {
            Some(p) => p.values().to_vec(),
            None => u_ops.iter().map(|op| u8::from(op.flag)).collect(),
        };
        let p = Z2Hom::new(&group, p_values)?;
        let q = self.q.map(|q| Z2Hom::new(&group, q.values().to_vec())).transpose()?;
        OnSiteSymmetry::new(ProjectiveRep::new(&group, &p, u_ops)?, ProjectiveRep::new(&group, &p, w_ops)?, q)
    }

    pub fn from_symmetry(sym: &OnSiteSymmetry) -> Self {
        Self {
            group: Some(sym.group().to_json()),
            p: Some(sym.twist().clone()),
            u: sym.u.ops().iter().map(SymOpJson::from_op).collect(),
            w: sym.w.ops().iter().map(SymOpJson::from_op).collect(),
            q: sym.q.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{are_cohomologous, TwistedCocycle};
    use crate::linalg::{c, cr, diag, identity, sigma_x, sigma_y, sigma_z};
    use crate::rep::SymOp;

    fn majorana() -> FermionicMPS {
        let h = cr(std::f64::consts::FRAC_1_SQRT_2);
        FermionicMPS::odd(1, vec![identity(1) * h, identity(1) * h], identity(1), 0).unwrap()
    }

    fn pauli_mps() -> FermionicMPS {
        let (a, b, cc, e) = (0.4_f64.sqrt(), 0.3_f64.sqrt(), 0.2_f64.sqrt(), 0.1_f64.sqrt());
        let v = vec![identity(2) * cr(a), sigma_x() * cr(cc), sigma_y() * c(0.0, e), sigma_z() * cr(b)];
        FermionicMPS::even(2, v, identity(2) * cr(0.5), sigma_z()).unwrap()
    }

    fn klein_symmetry() -> OnSiteSymmetry {
        let g = FiniteGroup::klein();
        let p = Z2Hom::trivial(&g);
        // element 2a + b ↔ (a, b)
        let u1 = diag(&[cr(1.0), cr(-1.0)]);
        let u2 = -identity(2);
        let us = vec![identity(2), u2.clone(), u1.clone(), &u1 * &u2];
        let ws = vec![identity(2), sigma_z(), sigma_x(), sigma_x() * sigma_z()];
        let rep = |ms: Vec<CMat>| ProjectiveRep::new(&g, &p, ms.into_iter().map(SymOp::unitary).collect()).unwrap();
        OnSiteSymmetry::new(rep(us), rep(ws), None).unwrap()
    }

    #[test]
    fn identity_element_has_unit_phase() {
        let check = check_symmetry(&pauli_mps(), &klein_symmetry(), FMPS_TOL).unwrap();
        assert!(check.phases[0].is_one(1e-12));
        assert!(check.residuals[0] < 1e-14);
    }

    #[test]
    fn pauli_mps_carries_the_nontrivial_class() {
        let mps = pauli_mps();
        let sym = klein_symmetry();
        let idx = fmps_index(&mps, &sym).unwrap();
        assert_eq!(idx.kappa, 0);
        assert_eq!(idx.q.values(), &[0, 0, 1, 1]);
        let trivial = TwistedCocycle::trivial(sym.group(), sym.twist());
        assert!(!are_cohomologous(&idx.cls, &trivial).unwrap());
    }

    #[test]
    fn majorana_parity_forces_q() {
        let g = FiniteGroup::cyclic(2);
        let p = Z2Hom::trivial(&g);
        let u = ProjectiveRep::new(&g, &p, vec![SymOp::identity(1), SymOp::unitary(-identity(1))]).unwrap();
        let w = ProjectiveRep::new(&g, &p, vec![SymOp::identity(1); 2]).unwrap();
        let sym = OnSiteSymmetry::new(u, w, None).unwrap();
        let check = check_symmetry(&majorana(), &sym, FMPS_TOL).unwrap();
        assert_eq!(check.q.unwrap().values(), &[0, 1]);
        let idx = fmps_index(&majorana(), &sym).unwrap();
        assert_eq!((idx.kappa, idx.q.values()), (1, &[0u8, 1][..]));
        let wrong = OnSiteSymmetry::new(sym.u().clone(), sym.w().clone(), Some(Z2Hom::trivial(&g))).unwrap();
        assert!(matches!(
            check_symmetry(&majorana(), &wrong, FMPS_TOL).unwrap_err(),
            FmpsError::SymmetryViolated(1, _)
        ));
    }

    #[test]
    fn odd_kind_without_any_q() {
        let g = FiniteGroup::cyclic(2);
        let p = Z2Hom::trivial(&g);
        let u =
            ProjectiveRep::new(&g, &p, vec![SymOp::identity(1), SymOp::unitary(identity(1) * c(0.0, 1.0))]).unwrap();
        let w = ProjectiveRep::new(&g, &p, vec![SymOp::identity(1); 2]).unwrap();
        let sym = OnSiteSymmetry::new(u, w, None).unwrap();
        assert_eq!(check_symmetry(&majorana(), &sym, FMPS_TOL).unwrap_err(), FmpsError::NoConsistentQ);
    }

    #[test]
    fn trivial_product_state() {
        let g = FiniteGroup::cyclic(1);
        let p = Z2Hom::trivial(&g);
        let mps = FermionicMPS::even(1, vec![identity(1), linalg::zeros(1)], identity(1), identity(1)).unwrap();
        let u = ProjectiveRep::new(&g, &p, vec![SymOp::identity(1)]).unwrap();
        let sym = OnSiteSymmetry::new(u.clone(), u, None).unwrap();
        let idx = fmps_index(&mps, &sym).unwrap();
        assert!(crate::spt::index_equal(&idx, &SPTIndex::trivial(&g, &p)));
    }

    #[test]
    fn perturbation_is_detected() {
        let mps = pauli_mps().perturbed_unchecked(1, &(sigma_z() * cr(1e-3)));
        match check_symmetry(&mps, &klein_symmetry(), FMPS_TOL).unwrap_err() {
            FmpsError::SymmetryViolated(_, r) => assert!(r > 1e-4),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn json_round_trip() {
        let sym = klein_symmetry();
        let text = serde_json::to_string(&SymmetryJson::from_symmetry(&sym)).unwrap();
        let back: SymmetryJson = serde_json::from_str(&text).unwrap();
        let again = back.into_symmetry().unwrap();
        assert_eq!(serde_json::to_string(&SymmetryJson::from_symmetry(&again)).unwrap(), text);
    }
}
