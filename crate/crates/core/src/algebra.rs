//! Finite-dimensional *-algebras of operators on `ℂⁿ`: closures, commutants,
//! block structure and the graded center.
//!
//! The block structure `A ≅ ⊕_α M_{k_α} ⊗ I_{r_α}` is found from the spectrum
//! of a random self-adjoint element. Its spectral projections are minimal
//! projections of `A`; two of them lie in the same block exactly when a
//! random element of `A` connects them. Random draws use fixed seeds, and a
//! draw is rejected unless `Σ_α k_α² = dim A`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graded::GradingUnitary;
use crate::linalg::{self, cr, CMat, OperatorSpan, C64};
use crate::rep::SymOp;

/// Largest ambient dimension accepted by the closure and commutant solvers.
pub const MAX_DIM: usize = 64;

/// Membership tolerance for products, adjoints and automorphism images.
pub const MEMBER_TOL: f64 = 1e-8;

const DECOMPOSITION_ATTEMPTS: u64 = 8;
const SEED: u64 = 0x6672_6d70_7374;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("DimensionTooLarge: ambient dimension {0} exceeds {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("DimensionMismatch: generators must share one square shape")]
    DimensionMismatch,
    #[error("NotGraded: Ad_Γ does not preserve the algebra")]
    NotGraded,
    #[error("CentralityViolation: even center has dimension {0}")]
    CentralityViolation(usize),
    #[error("DecompositionFailed: no consistent block structure after {DECOMPOSITION_ATTEMPTS} random draws")]
    DecompositionFailed,
    #[error("NotAnAutomorphism: operator does not preserve the algebra")]
    NotAnAutomorphism,
}

/// A unital *-subalgebra of `M_n` stored as a Hilbert-Schmidt orthonormal
/// basis together with a generating set.
#[derive(Clone, Debug)]
pub struct OperatorAlgebra {
    span: OperatorSpan,
    generators: Vec<CMat>,
}

impl OperatorAlgebra {
    /// `M_n`, generated by the `E_{i,i+1}` and their adjoints.
    pub fn full(n: usize) -> Self {
        let mut span = OperatorSpan::new(n);
        for i in 0..n {
            for j in 0..n {
                span.insert(&linalg::unit(n, i, j));
            }
        }
        let generators = (0..n.saturating_sub(1)).map(|i| linalg::unit(n, i, i + 1)).collect();
        Self { span, generators }
    }

    /// `ℂ I_n`.
    pub fn scalars(n: usize) -> Self {
        let mut span = OperatorSpan::new(n);
        span.insert(&linalg::identity(n));
        Self { span, generators: Vec::new() }
    }

    /// Wraps a span already known to be a *-algebra generated by `generators`.
    pub(crate) fn from_parts(span: OperatorSpan, generators: Vec<CMat>) -> Self {
        Self { span, generators }
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn ambient(&self) -> usize {
        self.span.ambient()
    }

    pub fn basis(&self) -> &[CMat] {
        self.span.basis()
    }

    pub fn span(&self) -> &OperatorSpan {
        &self.span
    }

    /// The generating set; falls back to the basis when none was recorded.
    pub fn generators(&self) -> &[CMat] {
        if self.generators.is_empty() {
            self.span.basis()
        } else {
            &self.generators
        }
    }

    pub fn contains(&self, x: &CMat) -> bool {
        self.contains_within(x, MEMBER_TOL)
    }

    pub fn contains_within(&self, x: &CMat, tol: f64) -> bool {
        x.shape() == (self.ambient(), self.ambient()) && self.span.contains(x, tol)
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient() * self.ambient()
    }

    /// Checks unit, adjoints and pairwise basis products.
    pub fn is_closed(&self, tol: f64) -> bool {
        let b = self.basis();
        self.contains_within(&linalg::identity(self.ambient()), tol)
            && b.iter().all(|x| self.contains_within(&x.adjoint(), tol))
            && b.iter().all(|x| b.iter().all(|y| self.contains_within(&(x * y), tol)))
    }

    /// Whether every basis element of `other` lies in `self`.
    pub fn contains_algebra(&self, other: &OperatorAlgebra, tol: f64) -> bool {
        other.basis().iter().all(|x| self.contains_within(x, tol))
    }

    /// Orthonormal bases of the even and odd parts under `Ad_Γ`.
    pub fn homogeneous_bases(&self, gamma: &GradingUnitary) -> (Vec<CMat>, Vec<CMat>) {
        let n = self.ambient();
        // the basis is orthonormal, so parts are measured against unit scale
        let mut even = OperatorSpan::with_scale(n, 1.0);
        let mut odd = OperatorSpan::with_scale(n, 1.0);
        for b in self.basis() {
            even.insert(&gamma.even_part(b));
            odd.insert(&gamma.odd_part(b));
        }
        (even.into_basis(), odd.into_basis())
    }

    /// Image under `x ↦ T x T*`.
    pub fn conjugate_by(&self, t: &CMat) -> OperatorAlgebra {
        let mut span = OperatorSpan::new(self.ambient());
        for b in self.basis() {
            span.insert(&(t * b * t.adjoint()));
        }
        let generators = self.generators.iter().map(|g| t * g * t.adjoint()).collect();
        OperatorAlgebra { span, generators }
    }

    /// Whether `Ad_op` maps every generator back into the algebra.
    pub fn preserved_by(&self, op: &SymOp) -> bool {
        self.generators().iter().all(|g| self.contains(&op.ad(g)))
            && self.generators().iter().all(|g| self.contains(&op.ad(&g.adjoint())))
    }

    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> CMat {
        let mut out = linalg::zeros(self.ambient());
        for b in self.basis() {
            out += b * linalg::c(linalg::gaussian(rng), linalg::gaussian(rng));
        }
        out
    }

    pub fn random_hermitian(&self, rng: &mut ChaCha8Rng) -> CMat {
        let x = self.random_element(rng);
        (&x + x.adjoint()) * cr(0.5)
    }
}

/// The smallest unital *-algebra containing `generators`.
///
/// Every element is a combination of words in the generators and their
/// adjoints, so the span is grown by left multiplication until it stabilizes.
pub fn algebra_closure(n: usize, generators: &[CMat]) -> Result<OperatorAlgebra, AlgebraError> {
    if n > MAX_DIM {
        return Err(AlgebraError::DimensionTooLarge(n));
    }
    if generators.iter().any(|g| g.shape() != (n, n)) {
        return Err(AlgebraError::DimensionMismatch);
    }
    let letters: Vec<CMat> = generators.iter().flat_map(|g| [g.clone(), g.adjoint()]).collect();
    let scale = letters.iter().map(linalg::norm).fold(1.0, f64::max);
    let mut span = OperatorSpan::with_scale(n, scale);
    span.insert(&linalg::identity(n));
    let mut next = 0;
    while next < span.dim() {
        let x = span.basis()[next].clone();
        next += 1;
        for g in &letters {
            span.insert(&(g * &x));
        }
        if span.dim() == n * n {
            break;
        }
    }
    Ok(OperatorAlgebra::from_parts(span, generators.to_vec()))
}

/// `{x : [g, x] = [g*, x] = 0 for every generator g}` as the joint nullspace of the
/// commutator maps on the `n²`-dimensional operator space.
pub fn commutant(a: &OperatorAlgebra) -> Result<OperatorAlgebra, AlgebraError> {
    let n = a.ambient();
    if n > MAX_DIM {
        return Err(AlgebraError::DimensionTooLarge(n));
    }
    let gens: Vec<CMat> = a.generators().iter().flat_map(|g| [g.clone(), g.adjoint()]).collect();
    let id = linalg::identity(n);
    let mut stacked = CMat::zeros(gens.len().max(1) * n * n, n * n);
    for (k, g) in gens.iter().enumerate() {
        // row-major vec: vec(g x) = (g ⊗ I) vec(x), vec(x g) = (I ⊗ gᵀ) vec(x)
        let block = linalg::kron(g, &id) - linalg::kron(&id, &g.transpose());
        stacked.view_mut((k * n * n, 0), (n * n, n * n)).copy_from(&block);
    }
    let scale = gens.iter().map(linalg::norm).fold(1.0, f64::max);
    let mut span = OperatorSpan::with_scale(n, 1.0);
    for v in linalg::nullspace_abs(&stacked, linalg::RANK_RTOL * scale) {
        span.insert(&linalg::unvectorize(&v, n));
    }
    let generators = span.basis().to_vec();
    Ok(OperatorAlgebra::from_parts(span, generators))
}

/// Matrix units `e_ij` of one simple block `M_k ⊗ I_r`.
#[derive(Clone, Debug)]
pub struct MatrixUnits {
    k: usize,
    rank: usize,
    units: Vec<Vec<CMat>>,
}

impl MatrixUnits {
    /// Builds `e_ij = e_i0 e_j0*` from the column `e_i0`.
    pub fn from_column(column: Vec<CMat>) -> Self {
        let k = column.len();
        let rank = linalg::trace(&column[0]).re.round() as usize;
        let units = (0..k).map(|i| (0..k).map(|j| &column[i] * column[j].adjoint()).collect()).collect();
        Self { k, rank, units }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Multiplicity `r` of the block.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn unit(&self, i: usize, j: usize) -> &CMat {
        &self.units[i][j]
    }

    /// `Σ c_ab e_ab`.
    pub fn embed(&self, coeffs: &CMat) -> CMat {
        let n = self.units[0][0].nrows();
        let mut out = linalg::zeros(n);
        for a in 0..self.k {
            for b in 0..self.k {
                if coeffs[(a, b)] != C64::new(0.0, 0.0) {
                    out += &self.units[a][b] * coeffs[(a, b)];
                }
            }
        }
        out
    }

    /// Coefficients `c_ab = Tr(e_ab* x) / r`.
    pub fn coefficients(&self, x: &CMat) -> CMat {
        let r = cr(self.rank as f64);
        CMat::from_fn(self.k, self.k, |a, b| linalg::hs_inner(&self.units[a][b], x) / r)
    }

    /// The unitary or anti-unitary `u` on `ℂᵏ` with `Ad_op(e_ab) = u e_ab u*`
    /// in matrix-unit coordinates, where conjugation acts on coefficients.
    ///
    /// With `β = Ad_op`, `X_j = Σ_i β(e_i0) e_ji` equals `conj(u_j0)·u` for
    /// the implementer `u`; the best-conditioned `j` is used.
    pub fn implementer(&self, op: &SymOp) -> Result<SymOp, AlgebraError> {
        let k = self.k;
        let r = cr(self.rank as f64);
        let images: Vec<CMat> = (0..k).map(|i| op.ad(&self.units[i][0])).collect();
        let mut best: Option<(f64, CMat)> = None;
        for j in 0..k {
            // coefficient (a,b) of X_j is Tr(e_ja β(e_b0)) / r
            let u = CMat::from_fn(k, k, |a, b| {
                let e_ja = &self.units[j][a];
                let beta = &images[b];
                let mut acc = C64::new(0.0, 0.0);
                for p in 0..e_ja.nrows() {
                    for q in 0..e_ja.ncols() {
                        acc += e_ja[(p, q)] * beta[(q, p)];
                    }
                }
                acc / r
            });
            let w = linalg::norm(&u);
            if best.as_ref().is_none_or(|(bw, _)| w > *bw) {
                best = Some((w, u));
            }
        }
        let (w, u) = best.expect("k >= 1");
        if w == 0.0 {
            return Err(AlgebraError::NotAnAutomorphism);
        }
        let scale = (w * w / k as f64).sqrt();
        let u = u / cr(scale);
        if !linalg::is_unitary(&u, MEMBER_TOL) {
            return Err(AlgebraError::NotAnAutomorphism);
        }
        Ok(SymOp::new(u, op.flag))
    }
}

/// Block decomposition `A ≅ ⊕_α M_{k_α} ⊗ I_{r_α}`.
#[derive(Clone, Debug)]
pub struct BlockStructure {
    pub blocks: Vec<MatrixUnits>,
}

impl BlockStructure {
    /// Central projections `z_α = Σ_i e_ii^{(α)}`.
    pub fn central_projections(&self) -> Vec<CMat> {
        self.blocks
            .iter()
            .map(|b| (0..b.k()).fold(linalg::zeros(b.unit(0, 0).nrows()), |acc, i| acc + b.unit(i, i)))
            .collect()
    }

    pub fn is_factor(&self) -> bool {
        self.blocks.len() == 1
    }
}

fn cluster_eigenvalues(vals: &[f64]) -> Vec<std::ops::Range<usize>> {
    let scale = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let tol = 1e-8 * scale;
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=vals.len() {
        if i == vals.len() || vals[i] - vals[i - 1] > tol {
            out.push(start..i);
            start = i;
        }
    }
    out
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

fn try_decompose(a: &OperatorAlgebra, rng: &mut ChaCha8Rng) -> Option<BlockStructure> {
    let h = a.random_hermitian(rng);
    let (vals, vecs) = linalg::hermitian_eigen(&h);
    let projections: Vec<CMat> = cluster_eigenvalues(&vals)
        .into_iter()
        .map(|range| {
            let v = vecs.columns(range.start, range.len()).into_owned();
            &v * v.adjoint()
        })
        .collect();
    let x = a.random_element(rng);
    let xn = linalg::norm(&x);
    let m = projections.len();
    let mut parent: Vec<usize> = (0..m).collect();
    let links: Vec<Vec<CMat>> = projections.iter().map(|p| projections.iter().map(|q| p * &x * q).collect()).collect();
    for i in 0..m {
        for j in 0..m {
            if i != j && linalg::norm(&links[i][j]) > 1e-8 * xn {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; m];
    for i in 0..m {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    let mut blocks = Vec::with_capacity(groups.len());
    let mut dim = 0;
    for g in groups {
        let rank = linalg::trace(&projections[g[0]]).re.round() as usize;
        let mut column = Vec::with_capacity(g.len());
        for &i in &g {
            let e = &links[i][g[0]];
            let e = if i == g[0] { projections[i].clone() } else { e.clone() };
            let s = (linalg::trace(&(e.adjoint() * &e)).re / rank as f64).sqrt();
            if s == 0.0 {
                return None;
            }
            let e = e / cr(s);
            let p0 = &projections[g[0]];
            let pi = &projections[i];
            if linalg::norm(&(e.adjoint() * &e - p0)) > MEMBER_TOL
                || linalg::norm(&(&e * e.adjoint() - pi)) > MEMBER_TOL
            {
                return None;
            }
            column.push(e);
        }
        dim += g.len() * g.len();
        blocks.push(MatrixUnits::from_column(column));
    }
    (dim == a.dim()).then_some(BlockStructure { blocks })
}

/// The block structure of `a`, with matrix units for every simple block.
pub fn block_structure(a: &OperatorAlgebra) -> Result<BlockStructure, AlgebraError> {
    for attempt in 0..DECOMPOSITION_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + attempt);
        if let Some(s) = try_decompose(a, &mut rng) {
            return Ok(s);
        }
    }
    Err(AlgebraError::DecompositionFailed)
}

/// Orthonormal basis of `Z(A) = A ∩ A′`.
pub fn center(a: &OperatorAlgebra) -> Result<Vec<CMat>, AlgebraError> {
    let z = block_structure(a)?.central_projections();
    Ok(z.into_iter()
        .map(|p| {
            let nrm = linalg::norm(&p);
            p / cr(nrm)
        })
        .collect())
}

/// Center of a graded algebra split into its even and odd parts.
#[derive(Clone, Debug)]
pub struct GradedCenter {
    pub even: Vec<CMat>,
    pub odd: Vec<CMat>,
    /// Odd central self-adjoint unitary, present when the odd center is nonzero.
    pub b: Option<CMat>,
    pub structure: BlockStructure,
}

/// Splits `Z(A)` by the eigenvalue of `Ad_Γ`.
///
/// `Ad_Γ` permutes the central projections of `A`. Fixed projections and
/// sums over swapped pairs span the even center; differences over swapped
/// pairs span the odd center. A central system has a one-dimensional even
/// center, so the odd center is at most one-dimensional and `b = z₁ − z₂`.
pub fn graded_center_split(a: &OperatorAlgebra, gamma: &GradingUnitary) -> Result<GradedCenter, AlgebraError> {
    if gamma.dim() != a.ambient() {
        return Err(AlgebraError::DimensionMismatch);
    }
    let grading = SymOp::unitary(gamma.matrix().clone());
    if !a.preserved_by(&grading) {
        return Err(AlgebraError::NotGraded);
    }
    let structure = block_structure(a)?;
    let z = structure.central_projections();
    let m = z.len();
    let mut partner = vec![usize::MAX; m];
    for i in 0..m {
        let image = gamma.act(&z[i]);
        partner[i] = (0..m)
            .find(|&j| linalg::norm(&(&image - &z[j])) <= MEMBER_TOL * linalg::norm(&z[j]).max(1.0))
            .ok_or(AlgebraError::NotGraded)?;
    }
    let mut even = Vec::new();
    let mut odd = Vec::new();
    let mut b = None;
    for i in 0..m {
        let j = partner[i];
        if j == i {
            even.push(z[i].clone());
        } else if i < j {
            even.push(&z[i] + &z[j]);
            let d = &z[i] - &z[j];
            b.get_or_insert_with(|| d.clone());
            odd.push(d);
        }
    }
    if even.len() > 1 {
        return Err(AlgebraError::CentralityViolation(even.len()));
    }
    let normalize = |v: Vec<CMat>| -> Vec<CMat> {
        v.into_iter()
            .map(|x| {
                let nrm = linalg::norm(&x);
                x / cr(nrm)
            })
            .collect()
    };
    Ok(GradedCenter { even: normalize(even), odd: normalize(odd), b, structure })
}

/// An odd self-adjoint unitary in `A`, if one is found.
///
/// Draws random odd self-adjoint elements `h`; when `h` is invertible its
/// sign `h|h|⁻¹` lies in `A` and is again odd.
pub fn odd_self_adjoint_unitary(a: &OperatorAlgebra, gamma: &GradingUnitary) -> Option<CMat> {
    for attempt in 0..DECOMPOSITION_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ (0xba1 + attempt));
        let h = gamma.odd_part(&a.random_hermitian(&mut rng));
        let (vals, _) = linalg::hermitian_eigen(&h);
        let top = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let bottom = vals.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        if top > 0.0 && bottom > 1e-6 * top {
            return Some(linalg::hermitian_fn(&h, f64::signum));
        }
    }
    None
}

/// The stacked algebra spanned by `a ⊗̂ b` over homogeneous bases, generated
/// by `a ⊗̂ I` and `I ⊗̂ b` for the homogeneous parts of the generators.
pub fn graded_tensor_algebra(
    a1: &OperatorAlgebra,
    g1: &GradingUnitary,
    a2: &OperatorAlgebra,
    g2: &GradingUnitary,
) -> OperatorAlgebra {
    let (n1, n2) = (a1.ambient(), a2.ambient());
    let (e1, o1) = a1.homogeneous_bases(g1);
    let (e2, o2) = a2.homogeneous_bases(g2);
    let left: Vec<&CMat> = e1.iter().chain(&o1).collect();
    let gamma1 = g1.matrix();
    let mut span = OperatorSpan::with_scale(n1 * n2, 1.0);
    for (deg, part) in [(0u8, &e2), (1u8, &o2)] {
        for b in part {
            for a in &left {
                let x = if deg == 1 { *a * gamma1 } else { (*a).clone() };
                span.insert(&linalg::kron(&x, b));
            }
        }
    }
    let id1 = linalg::identity(n1);
    let id2 = linalg::identity(n2);
    let mut generators = Vec::new();
    for g in a1.generators() {
        for part in [g1.even_part(g), g1.odd_part(g)] {
            if linalg::norm(&part) > MEMBER_TOL {
                generators.push(linalg::kron(&part, &id2));
            }
        }
    }
    for g in a2.generators() {
        let even = g2.even_part(g);
        if linalg::norm(&even) > MEMBER_TOL {
            generators.push(linalg::kron(&id1, &even));
        }
        let odd = g2.odd_part(g);
        if linalg::norm(&odd) > MEMBER_TOL {
            generators.push(linalg::kron(gamma1, &odd));
        }
    }
    OperatorAlgebra::from_parts(span, generators)
}
