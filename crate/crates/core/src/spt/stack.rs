use super::system::{GradedSystem, SystemForm};
use super::SptError;
use crate::algebra::{graded_tensor_algebra, MEMBER_TOL};
use crate::linalg::{self, conj_if};
use crate::rep::{ProjectiveRep, SymOp};

/// `ν(g)` with `Ad_{V_g}(Γ) = (−1)^{ν(g)} Γ` on the ambient space.
fn grading_sign(sys: &GradedSystem, g: usize) -> Result<u8, SptError> {
    let gamma = sys.gamma().matrix();
    let image = sys.action().op(g).ad(gamma);
    let scale = linalg::norm(gamma);
    if linalg::norm(&(&image - gamma)) <= MEMBER_TOL * scale {
        Ok(0)
    } else if linalg::norm(&(&image + gamma)) <= MEMBER_TOL * scale {
        Ok(1)
    } else {
        Err(SptError::GradingActionIndeterminate(g))
    }
}

/// The graded tensor product of two systems over the same `(G, 𝔭)`.
///
/// The algebra is spanned by `a ⊗̂ b`, the grading is `Γ₁ ⊗ Γ₂`, and `g` acts
/// by `V¹_g ⊗ V²_g Γ₂^{ν₁(g)}`, composed in the `(matrix, flag)` calculus.
pub fn stack_systems(s1: &GradedSystem, s2: &GradedSystem) -> Result<GradedSystem, SptError> {
    if s1.group() != s2.group() || s1.twist() != s2.twist() {
        return Err(SptError::GroupMismatch);
    }
    let algebra = graded_tensor_algebra(s1.algebra(), s1.gamma(), s2.algebra(), s2.gamma());
    let gamma = s1.gamma().tensor(s2.gamma());
    let gamma2 = s2.gamma();
    let mut ops = Vec::with_capacity(s1.group().order());
    for g in s1.group().elements() {
        let nu = grading_sign(s1, g)?;
        let v1 = s1.action().op(g);
        let v2 = s2.action().op(g);
        let right = &v2.matrix * conj_if(&gamma2.power(nu), v2.flag);
        ops.push(SymOp::new(linalg::kron(&v1.matrix, &right), v1.flag));
    }
    let action = ProjectiveRep::new(s1.group(), s1.twist(), ops)?;
    GradedSystem::new(SystemForm::Generators, algebra, gamma, action)
}
