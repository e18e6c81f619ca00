//! Small dense complex linear algebra on top of `nalgebra`.
//!
//! Everything in this crate works with `DMatrix<Complex64>` at dimensions of
//! at most a few hundred, so the helpers below favour clarity over speed.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Singular values below `RANK_RTOL * largest` are treated as zero.
pub const RANK_RTOL: f64 = 1e-9;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(n: usize) -> CMat {
    CMat::zeros(n, n)
}

pub fn sigma_x() -> CMat {
    CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)])
}

pub fn sigma_y() -> CMat {
    CMat::from_row_slice(2, 2, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)])
}

pub fn sigma_z() -> CMat {
    CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)])
}

/// Matrix unit `E_ij` in `M_n`.
pub fn unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = zeros(n);
    m[(i, j)] = cr(1.0);
    m
}

pub fn diag(entries: &[C64]) -> CMat {
    CMat::from_diagonal(&CVec::from_column_slice(entries))
}

/// Kronecker product `a ⊗ b` in the standard product basis.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a CMat>) -> CMat {
    factors.into_iter().fold(CMat::identity(1, 1), |acc, f| kron(&acc, f))
}

pub fn dagger(a: &CMat) -> CMat {
    a.adjoint()
}

/// Entrywise complex conjugate.
pub fn conj(a: &CMat) -> CMat {
    a.map(|z| z.conj())
}

pub fn conj_if(a: &CMat, flag: bool) -> CMat {
    if flag {
        conj(a)
    } else {
        a.clone()
    }
}

pub fn norm(a: &CMat) -> f64 {
    a.norm()
}

/// Hilbert-Schmidt inner product `Tr(a* b)`.
pub fn hs_inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn trace(a: &CMat) -> C64 {
    a.trace()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

pub fn is_unitary(a: &CMat, tol: f64) -> bool {
    a.is_square() && norm(&(a.adjoint() * a - identity(a.nrows()))) <= tol * (a.nrows() as f64).sqrt().max(1.0)
}

pub fn is_hermitian(a: &CMat, tol: f64) -> bool {
    a.is_square() && norm(&(a - a.adjoint())) <= tol
}

/// Row-major flattening of a matrix into a vector.
pub fn vectorize(a: &CMat) -> CVec {
    let (r, cols) = a.shape();
    CVec::from_fn(r * cols, |k, _| a[(k / cols, k % cols)])
}

pub fn unvectorize(v: &CVec, n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| v[i * n + j])
}

/// Orthonormal basis of the right null space of `m`, using the relative
/// singular value threshold [`RANK_RTOL`].
pub fn nullspace(m: &CMat) -> Vec<CVec> {
    nullspace_with(m, RANK_RTOL)
}

pub fn nullspace_with(m: &CMat, rtol: f64) -> Vec<CVec> {
    null_vectors(m, |smax| if smax == 0.0 { f64::INFINITY } else { rtol * smax })
}

/// Null space under the absolute threshold `s <= tol`.
pub fn nullspace_abs(m: &CMat, tol: f64) -> Vec<CVec> {
    null_vectors(m, |_| tol)
}

fn null_vectors(m: &CMat, cutoff: impl Fn(f64) -> f64) -> Vec<CVec> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Vec::new();
    }
    // Thin SVD only yields a full V^* when rows >= cols.
    let padded;
    let a = if rows < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded = p;
        &padded
    } else {
        m
    };
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = cutoff(smax);
    let mut out = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s <= cutoff {
            out.push(v_t.row(k).adjoint());
        }
    }
    out
}

/// Numerical rank under the relative singular value threshold.
pub fn rank(m: &CMat) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > RANK_RTOL * smax).count()
}

/// Incrementally built orthonormal basis of a subspace of `M_n` under the
/// Hilbert-Schmidt inner product.
#[derive(Clone, Debug)]
pub struct OperatorSpan {
    n: usize,
    basis: Vec<CMat>,
    scale: f64,
}

impl OperatorSpan {
    pub fn new(n: usize) -> Self {
        Self::with_scale(n, 0.0)
    }

    /// A span that treats candidates with residual below `RANK_RTOL * scale`
    /// as numerical noise, whatever their own norm.
    pub fn with_scale(n: usize, scale: f64) -> Self {
        Self { n, basis: Vec::new(), scale }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<CMat> {
        self.basis
    }

    /// Component of `x` orthogonal to the current span (two passes of
    /// modified Gram-Schmidt).
    pub fn residual(&self, x: &CMat) -> CMat {
        let mut r = x.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let coeff = hs_inner(b, &r);
                r -= b * coeff;
            }
        }
        r
    }

    /// Adds `x` if it is not already in the span; returns whether the span grew.
    pub fn insert(&mut self, x: &CMat) -> bool {
        let nx = norm(x);
        if nx == 0.0 {
            return false;
        }
        let r = self.residual(x);
        let nr = norm(&r);
        if nr <= RANK_RTOL * nx.max(self.scale) {
            return false;
        }
        self.basis.push(r / C64::from(nr));
        true
    }

    pub fn contains(&self, x: &CMat, tol: f64) -> bool {
        norm(&self.residual(x)) <= tol * norm(x).max(1.0)
    }

    pub fn coefficients(&self, x: &CMat) -> Vec<C64> {
        self.basis.iter().map(|b| hs_inner(b, x)).collect()
    }

    pub fn combine(&self, coeffs: &[C64]) -> CMat {
        let mut out = zeros(self.n);
        for (b, c) in self.basis.iter().zip(coeffs) {
            out += b * *c;
        }
        out
    }
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in ascending order.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let sym = (h + h.adjoint()) * cr(0.5);
    let eig = sym.symmetric_eigen();
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| eig.eigenvalues[*a].total_cmp(&eig.eigenvalues[*b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Eigenvalues of a general complex matrix via the Schur form.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    let schur = m.clone().schur();
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|k| t[(k, k)]).collect()
}

/// Apply `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_fn(h: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = hermitian_eigen(h);
    let d = diag(&vals.iter().map(|v| cr(f(*v))).collect::<Vec<_>>());
    &vecs * d * vecs.adjoint()
}

pub fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_matrix(n: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(n, n, |_, _| c(gaussian(rng), gaussian(rng)))
}

pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMat {
    let a = random_matrix(n, rng);
    (&a + a.adjoint()) * cr(0.5)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> CMat {
    let qr = random_matrix(n, rng).qr();
    let (q, r) = qr.unpack();
    let phases: Vec<C64> = (0..n)
        .map(|k| {
            let d = r[(k, k)];
            if d.norm() == 0.0 {
                cr(1.0)
            } else {
                d / d.norm()
            }
        })
        .collect();
    q * diag(&phases)
}

pub fn random_phase(rng: &mut impl Rng) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}
