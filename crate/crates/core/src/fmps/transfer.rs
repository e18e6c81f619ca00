use super::state::check_normalized;
use super::{FermionicMPS, FmpsError};
use crate::graded::parity;
use crate::linalg::{self, CMat};

const PERIPHERAL_TOL: f64 = 1e-7;
const NEGATIVE_TOL: f64 = 1e-10;
const KERNEL_TOL: f64 = 1e-9;

/// `T_v(x) = Σ_μ v_μ x v_μ*`.
pub fn transfer_apply(mps: &FermionicMPS, x: &CMat) -> Result<CMat, FmpsError> {
    let m = mps.m();
    if x.shape() != (m, m) {
        return Err(FmpsError::DimensionMismatch(format!("transfer input must be {m}x{m}")));
    }
    Ok(mps.kraus().iter().fold(linalg::zeros(m), |acc, v| acc + v * x * v.adjoint()))
}

/// `T_{v̂}(b)` on `M_m ⊗ M_2` with `v̂_μ = v_μ ⊗ σz^{σ₀+|μ|}`.
pub fn transfer_apply_hat(mps: &FermionicMPS, b: &CMat) -> Result<CMat, FmpsError> {
    let n = 2 * mps.m();
    if b.shape() != (n, n) {
        return Err(FmpsError::DimensionMismatch(format!("hatted transfer input must be {n}x{n}")));
    }
    let z = [linalg::identity(2), linalg::sigma_z()];
    Ok(mps.kraus().iter().enumerate().fold(linalg::zeros(n), |acc, (mu, v)| {
        let hat = linalg::kron(v, &z[usize::from(mps.sigma0() ^ parity(mu))]);
        acc + &hat * b * hat.adjoint()
    }))
}

/// `T^n(x)`, using the hatted map when `hatted` is set.
pub fn transfer_power(mps: &FermionicMPS, x: &CMat, n: usize, hatted: bool) -> Result<CMat, FmpsError> {
    let mut y = x.clone();
    for _ in 0..n {
        y = if hatted { transfer_apply_hat(mps, &y)? } else { transfer_apply(mps, &y)? };
    }
    Ok(y)
}

/// The `m²×m²` matrix of `T_v` on row-major vectorized operators.
pub fn transfer_matrix(v: &[CMat]) -> CMat {
    let m = v.first().map_or(0, |x| x.nrows());
    v.iter().fold(linalg::zeros(m * m), |acc, x| acc + linalg::kron(x, &linalg::conj(x)))
}

/// The unique density matrix `D` with `Σ_μ v_μ* D v_μ = D`.
///
/// Requires `Σ v_μ v_μ* = I` and a primitive channel: eigenvalue 1 simple and
/// no other eigenvalue on the unit circle.
pub fn transfer_fixed_point(v: &[CMat]) -> Result<CMat, FmpsError> {
    if v.is_empty() {
        return Err(FmpsError::DimensionMismatch("no matrices v_mu".into()));
    }
    let m = v[0].nrows();
    if v.iter().any(|x| x.shape() != (m, m)) {
        return Err(FmpsError::DimensionMismatch("v_mu must all be m x m".into()));
    }
    check_normalized(v)?;
    let dual = v.iter().fold(linalg::zeros(m * m), |acc, x| acc + linalg::kron(&x.adjoint(), &x.transpose()));
    let kernel = linalg::nullspace_abs(&(dual - linalg::identity(m * m)), KERNEL_TOL);
    if kernel.len() != 1 {
        return Err(FmpsError::DegenerateFixedPoint(kernel.len()));
    }
    let raw = linalg::unvectorize(&kernel[0], m);
    let tr = linalg::trace(&raw);
    if tr.norm() < 1e-12 {
        return Err(FmpsError::NotPositive(0.0));
    }
    let scaled = raw / tr;
    let density = (&scaled + scaled.adjoint()) * linalg::cr(0.5);
    let lo = linalg::hermitian_eigen(&density).0[0];
    if lo < -NEGATIVE_TOL {
        return Err(FmpsError::NotPositive(lo));
    }
    let mut peripheral: Vec<_> =
        linalg::eigenvalues(&transfer_matrix(v)).into_iter().filter(|z| z.norm() > 1.0 - PERIPHERAL_TOL).collect();
    peripheral.sort_by(|a, b| (a - 1.0).norm().total_cmp(&(b - 1.0).norm()));
    if let Some(z) = peripheral.get(1) {
        return Err(FmpsError::NotPrimitive(format!("{:.6}{:+.6}i", z.re, z.im)));
    }
    Ok(density)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cr, diag, identity, sigma_x, sigma_z, zeros};

    fn pair(t: f64, s: f64) -> Vec<CMat> {
        let mut v1 = zeros(2);
        v1[(0, 1)] = cr(t.sin());
        v1[(1, 0)] = cr(s.sin());
        vec![diag(&[cr(t.cos()), cr(s.cos())]), v1]
    }

    #[test]
    fn scalar_channel_is_identity() {
        let h = cr(std::f64::consts::FRAC_1_SQRT_2);
        let mps = FermionicMPS::odd(1, vec![identity(1) * h, identity(1) * h], identity(1), 0).unwrap();
        let x = identity(1) * linalg::c(0.3, -1.2);
        assert!(linalg::norm(&(transfer_apply(&mps, &x).unwrap() - &x)) < 1e-15);
        assert!(linalg::norm(&(transfer_fixed_point(mps.kraus()).unwrap() - identity(1))) < 1e-12);
    }

    #[test]
    fn fixed_point_of_a_primitive_pair() {
        let (t, s) = (0.7_f64, 1.1_f64);
        let v = pair(t, s);
        let d = transfer_fixed_point(&v).unwrap();
        let p = s.sin().powi(2) / (s.sin().powi(2) + t.sin().powi(2));
        assert!(linalg::norm(&(d.clone() - diag(&[cr(p), cr(1.0 - p)]))) < 1e-10);
        let mps = FermionicMPS::even(1, v, d, sigma_z()).unwrap();
        assert!(linalg::norm(&(transfer_apply(&mps, &identity(2)).unwrap() - identity(2))) < 1e-12);
    }

    #[test]
    fn decoupled_blocks_are_degenerate() {
        let h = cr(std::f64::consts::FRAC_1_SQRT_2);
        let v = vec![identity(2) * h, sigma_z() * h];
        assert_eq!(transfer_fixed_point(&v).unwrap_err(), FmpsError::DegenerateFixedPoint(2));
    }

    #[test]
    fn periodic_channel_is_not_primitive() {
        let h = cr(std::f64::consts::FRAC_1_SQRT_2);
        let v = vec![sigma_x() * h, sigma_x() * sigma_z() * h];
        assert!(matches!(transfer_fixed_point(&v).unwrap_err(), FmpsError::NotPrimitive(_)));
    }

    #[test]
    fn spectral_radius_is_one() {
        let v = pair(0.4, 0.9);
        let ev = linalg::eigenvalues(&transfer_matrix(&v));
        let radius = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((radius - 1.0).abs() < 1e-10);
    }
}
