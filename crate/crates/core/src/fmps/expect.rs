use serde::{Deserialize, Serialize};

use super::{FermionicMPS, FmpsError, MpsKind};
use crate::graded::parity;
use crate::linalg::{self, CMat, C64};

/// Largest `d(l+1)` accepted by [`density_matrix`].
pub const MAX_RHO_MODES: usize = 14;

/// The word `E^{(0)}_{μ₀ν₀} E^{(1)}_{μ₁ν₁} ⋯ E^{(l)}_{μ_lν_l}` as bitmask pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SiteWord {
    pub pairs: Vec<(usize, usize)>,
}

impl SiteWord {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Self { pairs }
    }

    /// `Σ_x (|μ_x| + |ν_x|)` mod 2.
    pub fn parity(&self) -> u8 {
        self.pairs.iter().fold(0, |acc, &(mu, nu)| acc ^ parity(mu) ^ parity(nu))
    }

    fn check(&self, local: usize) -> Result<(), FmpsError> {
        match self.pairs.iter().position(|&(mu, nu)| mu >= local || nu >= local) {
            Some(x) => {
                Err(FmpsError::DimensionMismatch(format!("site {x} of the word is outside the local Fock space")))
            }
            None => Ok(()),
        }
    }
}

/// The per-site increment of the Koszul sum: `|ν_j|` for the even kind and
/// `σ₀ + |ν_j|` for the odd kind.
fn koszul_step(mps: &FermionicMPS, nu: usize) -> u8 {
    match mps.kind() {
        MpsKind::Even => parity(nu),
        MpsKind::Odd => mps.sigma0() ^ parity(nu),
    }
}

/// `ω(E^{(0)}_{μ₀ν₀} ⋯ E^{(l)}_{μ_lν_l})`.
///
/// Even kind: `(−1)^{Σ_{k≥1}(|μ_k|+|ν_k|) Σ_{j<k}|ν_j|} Tr(D v_{μ₀}⋯v_{μ_l} v_{ν_l}*⋯v_{ν₀}*)`.
/// Odd kind: the inner sum runs over `σ₀ + |ν_j|`, and words of odd total
/// parity give exactly zero. The empty word gives 1.
pub fn expectation(mps: &FermionicMPS, w: &SiteWord) -> Result<C64, FmpsError> {
    w.check(mps.local_dim())?;
    if w.pairs.is_empty() {
        return Ok(C64::new(1.0, 0.0));
    }
    if mps.kind() == MpsKind::Odd && w.parity() == 1 {
        return Ok(C64::new(0.0, 0.0));
    }
    let mut exponent = 0u8;
    let mut inner = 0u8;
    for &(mu, nu) in &w.pairs {
        exponent ^= (parity(mu) ^ parity(nu)) & inner;
        inner ^= koszul_step(mps, nu);
    }
    let mut ket = mps.density().clone();
    for &(mu, _) in &w.pairs {
        ket *= mps.v(mu);
    }
    for &(_, nu) in w.pairs.iter().rev() {
        ket *= mps.v(nu).adjoint();
    }
    let value = linalg::trace(&ket);
    Ok(if exponent == 1 { -value } else { value })
}

/// The density matrix of `ω` on sites `0..=l` in the Jordan–Wigner picture,
/// `ρ = Σ_B ω(B) X_B†`, where `X_B` is the product of the embedded units
/// `P^{⊗x} ⊗ e_{μν} ⊗ I` (parity string for odd units only). These form a
/// trace-orthonormal basis, so `Tr(ρ X_B) = ω(B)`.
pub fn density_matrix(mps: &FermionicMPS, l: usize) -> Result<CMat, FmpsError> {
    let sites = l + 1;
    let modes = mps.d() * sites;
    if modes > MAX_RHO_MODES {
        return Err(FmpsError::SizeTooLarge(modes));
    }
    let local = mps.local_dim();
    let adjoints: Vec<CMat> = mps.kraus().iter().map(|v| v.adjoint()).collect();
    let mut out = linalg::zeros(1usize << modes);
    let mut walk = Walk { mps, adjoints: &adjoints, local, sites, out: &mut out };
    for mu in 0..local {
        for nu in 0..local {
            let acc = &adjoints[nu] * mps.density() * mps.v(mu);
            let odd = parity(mu) ^ parity(nu);
            walk.descend(1, acc, nu, mu, 0, koszul_step(mps, nu), parity(nu), odd);
        }
    }
    Ok(out)
}

struct Walk<'a> {
    mps: &'a FermionicMPS,
    adjoints: &'a [CMat],
    local: usize,
    sites: usize,
    out: &'a mut CMat,
}

impl Walk<'_> {
    /// `acc = v_{ν_{k−1}}*⋯v_{ν₀}* D v_{μ₀}⋯v_{μ_{k−1}}`, so that the word's
    /// trace is `Tr(acc)` once every site is placed. `sign` collects both the
    /// expectation sign and the Jordan–Wigner sign of `X_B`.
    #[allow(clippy::too_many_arguments)]
    fn descend(&mut self, site: usize, acc: CMat, row: usize, col: usize, sign: u8, koszul: u8, jw: u8, total: u8) {
        if site == self.sites {
            if self.mps.kind() == MpsKind::Odd && total == 1 {
                return;
            }
            let value = linalg::trace(&acc);
            self.out[(row, col)] = if sign == 1 { -value } else { value };
            return;
        }
        for mu in 0..self.local {
            for nu in 0..self.local {
                let odd = parity(mu) ^ parity(nu);
                let next = &self.adjoints[nu] * &acc * self.mps.v(mu);
                self.descend(
                    site + 1,
                    next,
                    row * self.local + nu,
                    col * self.local + mu,
                    sign ^ (odd & koszul) ^ (odd & jw),
                    koszul ^ koszul_step(self.mps, nu),
                    jw ^ parity(nu),
                    total ^ odd,
                );
            }
        }
    }
}

/// Traces out the last tensor factor of dimension `traced`.
pub fn partial_trace_last(rho: &CMat, traced: usize) -> Result<CMat, FmpsError> {
    let n = rho.nrows();
    if traced == 0 || !rho.is_square() || !n.is_multiple_of(traced) {
        return Err(FmpsError::DimensionMismatch(format!("cannot trace a factor of {traced} out of {n}")));
    }
    let keep = n / traced;
    Ok(CMat::from_fn(keep, keep, |i, j| (0..traced).map(|k| rho[(i * traced + k, j * traced + k)]).sum()))
}
