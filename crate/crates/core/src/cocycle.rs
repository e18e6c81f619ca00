//! 𝔭-twisted U(1)-valued 2-cocycles on finite groups and their cohomology
//! classes.
//!
//! A cocycle `υ: G × G → U(1)` is normalized (`υ(e,g) = υ(g,e) = 1`) and
//! satisfies, for every `f, g, h`,
//!
//! ```text
//! conj^{𝔭(f)}(υ(g,h)) · υ(f,gh) = υ(f,g) · υ(fg,h)
//! ```
//!
//! Two cocycles are cohomologous when they differ by the twisted coboundary
//! `b(g) · conj^{𝔭(g)}(b(h)) · b(gh)⁻¹` of a 1-cochain `b` with `b(e) = 1`.
//! The equivalence test works in exponent space on the lattice of `M`-th
//! roots of unity and solves the resulting congruences with
//! [`crate::snf::solve_congruences`].

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{FiniteGroup, GroupError, GroupJson, Z2Hom};
use crate::linalg::C64;
use crate::phase::{Phase, UNIT_TOL};
use crate::snf::solve_congruences;

/// Tolerance for the cocycle identity in float mode.
pub const COCYCLE_TOL: f64 = 1e-9;

/// Default snapping tolerance used by the equivalence test.
pub const DEFAULT_SNAP_TOL: f64 = 1e-8;

/// Caveat attached to every negative equivalence verdict.
pub const LATTICE_CAVEAT: &str =
    "not cohomologous relative to the chosen lattice modulus; a witness outside the M-th roots of unity is not excluded";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CocycleError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("ShapeMismatch: expected a {n}x{n} phase table")]
    ShapeMismatch { n: usize },
    #[error("NotUnitModulus: |υ({0},{1})| deviates from 1")]
    NotUnitModulus(usize, usize),
    #[error("InvalidRoot: exact phase at ({0},{1}) needs 0 <= k < N and N > 0")]
    InvalidRoot(usize, usize),
    #[error("NotNormalized: υ(e,{0}) or υ({0},e) differs from 1")]
    NotNormalized(usize),
    #[error("CocycleIdentityFails: twisted cocycle identity fails at ({0},{1},{2})")]
    CocycleIdentityFails(usize, usize, usize),
    #[error("MismatchedGroup: cocycles live on different groups or twists")]
    MismatchedGroup,
    #[error("NotRootOfUnity: υ({0},{1}) is not an M-th root of unity for M = {2}")]
    NotRootOfUnity(usize, usize, u64),
}

/// A validated normalized 𝔭-twisted 2-cocycle.
#[derive(Clone, Debug)]
pub struct TwistedCocycle {
    group: FiniteGroup,
    twist: Z2Hom,
    values: Vec<Vec<Phase>>,
}

/// A 1-cochain `b` with `b(e) = 1` whose twisted coboundary carries one
/// cocycle to another.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleWitness {
    pub b: Vec<Phase>,
}

/// Outcome of an equivalence test.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub cohomologous: bool,
    pub witness: Option<CocycleWitness>,
    pub modulus: u64,
}

impl TwistedCocycle {
    /// Validates normalization and the twisted cocycle identity (exactly for
    /// exact phases, within [`COCYCLE_TOL`] otherwise).
    pub fn new(group: &FiniteGroup, twist: &Z2Hom, values: Vec<Vec<Phase>>) -> Result<Self, CocycleError> {
        Self::with_tolerance(group, twist, values, COCYCLE_TOL)
    }

    pub fn with_tolerance(
        group: &FiniteGroup,
        twist: &Z2Hom,
        values: Vec<Vec<Phase>>,
        tol: f64,
    ) -> Result<Self, CocycleError> {
        let n = group.order();
        if twist.len() != n {
            return Err(CocycleError::MismatchedGroup);
        }
        if values.len() != n || values.iter().any(|r| r.len() != n) {
            return Err(CocycleError::ShapeMismatch { n });
        }
        for g in 0..n {
            for h in 0..n {
                match values[g][h] {
                    Phase::Exact { k, n: order } if order == 0 || k >= order => {
                        return Err(CocycleError::InvalidRoot(g, h))
                    }
                    p if p.modulus_error() > UNIT_TOL.max(tol) => return Err(CocycleError::NotUnitModulus(g, h)),
                    _ => {}
                }
            }
        }
        let e = group.identity();
        for g in 0..n {
            if !values[e][g].is_one(tol) || !values[g][e].is_one(tol) {
                return Err(CocycleError::NotNormalized(g));
            }
        }
        for f in 0..n {
            for g in 0..n {
                for h in 0..n {
                    let lhs = values[g][h].conj_if(twist.flag(f)) * values[f][group.mul(g, h)];
                    let rhs = values[f][g] * values[group.mul(f, g)][h];
                    if !lhs.approx_eq(&rhs, tol) {
                        return Err(CocycleError::CocycleIdentityFails(f, g, h));
                    }
                }
            }
        }
        Ok(Self { group: group.clone(), twist: twist.clone(), values })
    }

    pub fn trivial(group: &FiniteGroup, twist: &Z2Hom) -> Self {
        let n = group.order();
        Self { group: group.clone(), twist: twist.clone(), values: vec![vec![Phase::ONE; n]; n] }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn twist(&self) -> &Z2Hom {
        &self.twist
    }

    pub fn value(&self, g: usize, h: usize) -> Phase {
        self.values[g][h]
    }

    pub fn values(&self) -> &[Vec<Phase>] {
        &self.values
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().flatten().all(Phase::is_exact)
    }

    /// Least common multiple of the orders of the exact entries.
    pub fn exact_order(&self) -> u64 {
        self.values.iter().flatten().filter_map(Phase::order).fold(1, |a, b| a.lcm(&b))
    }

    pub fn same_setting(&self, other: &TwistedCocycle) -> bool {
        self.group == other.group && self.twist == other.twist
    }

    /// Pointwise product, revalidated.
    pub fn product(&self, other: &TwistedCocycle) -> Result<TwistedCocycle, CocycleError> {
        if !self.same_setting(other) {
            return Err(CocycleError::MismatchedGroup);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| *x * *y).collect())
            .collect();
        TwistedCocycle::new(&self.group, &self.twist, values)
    }

    /// Multiplies by the twisted coboundary of `b`.
    pub fn apply_coboundary(&self, b: &[Phase]) -> Result<TwistedCocycle, CocycleError> {
        let n = self.group.order();
        if b.len() != n {
            return Err(CocycleError::ShapeMismatch { n });
        }
        let values = (0..n)
            .map(|g| {
                (0..n)
                    .map(|h| {
                        self.values[g][h] * b[g] * b[h].conj_if(self.twist.flag(g)) * b[self.group.mul(g, h)].inv()
                    })
                    .collect()
            })
            .collect();
        TwistedCocycle::new(&self.group, &self.twist, values)
    }

    /// A cohomologous cocycle whose values are exact `|G|`-th roots of unity,
    /// together with the 1-cochain relating the two.
    ///
    /// With `c(g) = Π_h υ(g,h)` the cocycle identity gives `υⁿ = δc`, so
    /// `b = c^{-1/n}` (principal branch) makes `(υ·δb)ⁿ = 1`.
    pub fn root_normal_form(&self, tol: f64) -> Result<(TwistedCocycle, Vec<Phase>), CocycleError> {
        let n = self.group.order() as u64;
        if let Some(snapped) = self.snapped(n, tol) {
            return Ok((snapped, vec![Phase::ONE; n as usize]));
        }
        let e = self.group.identity();
        let b: Vec<Phase> = (0..n as usize)
            .map(|g| {
                if g == e {
                    return Phase::ONE;
                }
                let arg: f64 = self.values[g].iter().map(|v| v.to_complex().arg()).sum();
                Phase::from_complex(C64::from_polar(1.0, -arg / n as f64))
            })
            .collect();
        let moved = self.apply_coboundary(&b)?;
        let snapped = moved.snapped(n, tol).ok_or_else(|| {
            let (g, h) = first_off_lattice(&moved, n, tol);
            CocycleError::NotRootOfUnity(g, h, n)
        })?;
        Ok((snapped, b))
    }

    /// Exact copy with every value snapped to the `m`-th roots, if possible.
    pub fn snapped(&self, m: u64, tol: f64) -> Option<TwistedCocycle> {
        let values: Option<Vec<Vec<Phase>>> =
            self.values.iter().map(|r| r.iter().map(|p| p.snapped(m, tol)).collect()).collect();
        TwistedCocycle::new(&self.group, &self.twist, values?).ok()
    }

    pub fn to_json(&self) -> CocycleJson {
        CocycleJson { group: Some(self.group.to_json()), twist: self.twist.clone(), phases: self.values.clone() }
    }
}

fn first_off_lattice(u: &TwistedCocycle, m: u64, tol: f64) -> (usize, usize) {
    for (g, row) in u.values.iter().enumerate() {
        for (h, p) in row.iter().enumerate() {
            if p.snap(m, tol).is_none() {
                return (g, h);
            }
        }
    }
    (0, 0)
}

impl fmt::Display for TwistedCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.values {
            let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `ε(𝔮₁,𝔮₂)(g,h) = (−1)^{𝔮₁(g)𝔮₂(h)}`, a cocycle for any twist.
pub fn epsilon(group: &FiniteGroup, twist: &Z2Hom, q1: &Z2Hom, q2: &Z2Hom) -> TwistedCocycle {
    let n = group.order();
    let values = (0..n).map(|g| (0..n).map(|h| Phase::sign(q1.at(g) & q2.at(h) == 1)).collect()).collect();
    TwistedCocycle::new(group, twist, values).expect("ε(q1,q2) is a cocycle")
}

/// The stacking correction
/// `(−1)^{𝔮₁(g)𝔮₂(h) + (κ₁−κ₂)(κ₁𝔮₂(g)+κ₂𝔮₁(g))𝔭(h)}`.
pub fn epsilon_p(group: &FiniteGroup, p: &Z2Hom, k1: u8, q1: &Z2Hom, k2: u8, q2: &Z2Hom) -> TwistedCocycle {
    let n = group.order();
    let dk = (k1 ^ k2) & 1;
    let values = (0..n)
        .map(|g| {
            (0..n)
                .map(|h| {
                    let second = dk & ((k1 & q2.at(g)) ^ (k2 & q1.at(g))) & p.at(h);
                    Phase::sign(((q1.at(g) & q2.at(h)) ^ second) == 1)
                })
                .collect()
        })
        .collect();
    TwistedCocycle::new(group, p, values).expect("ε_p is a cocycle")
}

/// The default lattice modulus `lcm(N_inputs, 2|G|)`.
pub fn default_modulus(u1: &TwistedCocycle, u2: &TwistedCocycle) -> u64 {
    let n = 2 * u1.group.order() as u64;
    n.lcm(&u1.exact_order()).lcm(&u2.exact_order())
}

/// Decides whether `u2 = u1 · δb` for some `b` with values in the `M`-th
/// roots of unity.
pub fn cohomologous(
    u1: &TwistedCocycle,
    u2: &TwistedCocycle,
    modulus: Option<u64>,
    tol: f64,
) -> Result<Cohomology, CocycleError> {
    if !u1.same_setting(u2) {
        return Err(CocycleError::MismatchedGroup);
    }
    let m = modulus.unwrap_or_else(|| default_modulus(u1, u2));
    let group = &u1.group;
    let n = group.order();
    let e = group.identity();
    let exps = |u: &TwistedCocycle| -> Result<Vec<Vec<i64>>, CocycleError> {
        (0..n)
            .map(|g| {
                (0..n)
                    .map(|h| u.values[g][h].snap(m, tol).map(|k| k as i64).ok_or(CocycleError::NotRootOfUnity(g, h, m)))
                    .collect()
            })
            .collect()
    };
    let e1 = exps(u1)?;
    let e2 = exps(u2)?;

    // unknowns: β(g) for g != e
    let unknowns: Vec<usize> = (0..n).filter(|&g| g != e).collect();
    let col = |g: usize| unknowns.iter().position(|&x| x == g);
    let mut rows = Vec::with_capacity(n * n);
    let mut rhs = Vec::with_capacity(n * n);
    for g in 0..n {
        for h in 0..n {
            let mut row = vec![0i64; unknowns.len()];
            let gh = group.mul(g, h);
            if let Some(c) = col(g) {
                row[c] += 1;
            }
            if let Some(c) = col(h) {
                row[c] += if u1.twist.flag(g) { -1 } else { 1 };
            }
            if let Some(c) = col(gh) {
                row[c] -= 1;
            }
            rows.push(row);
            rhs.push((e2[g][h] - e1[g][h]).rem_euclid(m as i64));
        }
    }
    let solution = if unknowns.is_empty() {
        rhs.iter().all(|r| *r == 0).then(Vec::new)
    } else {
        solve_congruences(&rows, &rhs, m as i64)
    };
    let Some(beta) = solution else {
        return Ok(Cohomology { cohomologous: false, witness: None, modulus: m });
    };
    let mut b = vec![Phase::ONE; n];
    for (k, &g) in unknowns.iter().enumerate() {
        b[g] = Phase::root(beta[k], m);
    }
    Ok(Cohomology { cohomologous: true, witness: Some(CocycleWitness { b }), modulus: m })
}

/// Convenience wrapper returning only the verdict.
pub fn are_cohomologous(u1: &TwistedCocycle, u2: &TwistedCocycle) -> Result<bool, CocycleError> {
    Ok(cohomologous(u1, u2, None, DEFAULT_SNAP_TOL)?.cohomologous)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupJson>,
    pub twist: Z2Hom,
    pub phases: Vec<Vec<Phase>>,
}

impl CocycleJson {
    pub fn into_cocycle(self, group: Option<&FiniteGroup>) -> Result<TwistedCocycle, CocycleError> {
        let group = match (self.group, group) {
            (Some(g), _) => FiniteGroup::try_from(g)?,
            (None, Some(g)) => g.clone(),
            (None, None) => return Err(CocycleError::MismatchedGroup),
        };
        let twist = Z2Hom::new(&group, self.twist.values().to_vec())?;
        TwistedCocycle::new(&group, &twist, self.phases)
    }
}
