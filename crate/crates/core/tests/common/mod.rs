//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use fspt::fmps::{transfer_fixed_point, FermionicMPS, OnSiteSymmetry};
use fspt::group::{FiniteGroup, Z2Hom};
use fspt::linalg::{self, c, cr, diag, identity, kron, sigma_x, sigma_y, sigma_z, CMat};
use fspt::rep::{ProjectiveRep, SymOp};
use fspt::spt::{standard_action, GradedSystem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn z2() -> FiniteGroup {
    FiniteGroup::cyclic(2)
}

/// The group generated by invertible matrices, identity first.
pub fn matrix_group(gens: &[CMat]) -> FiniteGroup {
    let n = gens[0].nrows();
    let mut elems = vec![identity(n)];
    let find = |elems: &[CMat], x: &CMat| elems.iter().position(|y| linalg::norm(&(y - x)) < 1e-9);
    let mut frontier = 0;
    while frontier < elems.len() {
        let a = elems[frontier].clone();
        for g in gens {
            let x = &a * g;
            if find(&elems, &x).is_none() {
                elems.push(x);
            }
        }
        frontier += 1;
    }
    let table = elems.iter().map(|a| elems.iter().map(|b| find(&elems, &(a * b)).expect("closed")).collect()).collect();
    FiniteGroup::from_table(table).expect("valid group")
}

fn perm(p: &[usize]) -> CMat {
    let n = p.len();
    CMat::from_fn(n, n, |i, j| if p[j] == i { cr(1.0) } else { cr(0.0) })
}

/// One representative of every isomorphism class of groups of order at most 8.
pub fn groups_up_to_8() -> Vec<(&'static str, FiniteGroup)> {
    let z = FiniteGroup::cyclic;
    let i = c(0.0, 1.0);
    let qi = diag(&[i, -i]);
    let qj = CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(-1.0), cr(0.0)]);
    vec![
        ("Z1", z(1)),
        ("Z2", z(2)),
        ("Z3", z(3)),
        ("Z4", z(4)),
        ("Z2xZ2", FiniteGroup::klein()),
        ("Z5", z(5)),
        ("Z6", z(6)),
        ("S3", matrix_group(&[perm(&[1, 2, 0]), perm(&[1, 0, 2])])),
        ("Z7", z(7)),
        ("Z8", z(8)),
        ("Z4xZ2", FiniteGroup::product(&z(4), &z(2))),
        ("Z2^3", FiniteGroup::product(&FiniteGroup::klein(), &z(2))),
        ("D4", matrix_group(&[perm(&[1, 2, 3, 0]), perm(&[3, 2, 1, 0])])),
        ("Q8", matrix_group(&[qi, qj])),
    ]
}

pub fn rep(group: &FiniteGroup, p: &Z2Hom, ops: Vec<(CMat, bool)>) -> ProjectiveRep {
    ProjectiveRep::new(group, p, ops.into_iter().map(|(m, f)| SymOp::new(m, f)).collect()).expect("valid rep")
}

/// `W_{(a,b)} = σx^a σz^b` on `ℂ²`, with element `2a + b`.
pub fn pauli_klein(p: &Z2Hom) -> ProjectiveRep {
    let g = FiniteGroup::klein();
    let mats = [identity(2), sigma_z(), sigma_x(), sigma_x() * sigma_z()];
    rep(&g, p, mats.into_iter().enumerate().map(|(e, m)| (m, p.flag(e))).collect())
}

/// One `(G, 𝔭)` setting of the stacking grid with its `V⁰` choices.
pub struct Setting {
    pub name: &'static str,
    pub group: FiniteGroup,
    pub p: Z2Hom,
    pub v0s: Vec<ProjectiveRep>,
}

pub fn settings() -> Vec<Setting> {
    let g2 = z2();
    let trivial2 = Z2Hom::trivial(&g2);
    let tr = Z2Hom::z2_identity();
    let k = FiniteGroup::klein();
    let trivial4 = Z2Hom::trivial(&k);
    let iy = sigma_y() * c(0.0, 1.0);
    vec![
        Setting {
            name: "Z2, p trivial",
            group: g2.clone(),
            p: trivial2.clone(),
            v0s: vec![rep(&g2, &trivial2, vec![(identity(1), false), (identity(1), false)])],
        },
        Setting {
            name: "Z2, p = id",
            group: g2.clone(),
            p: tr.clone(),
            v0s: vec![
                rep(&g2, &tr, vec![(identity(1), false), (identity(1), true)]),
                rep(&g2, &tr, vec![(identity(2), false), (iy, true)]),
            ],
        },
        Setting {
            name: "Z2xZ2, p trivial",
            group: k.clone(),
            p: trivial4.clone(),
            v0s: vec![rep(&k, &trivial4, vec![(identity(1), false); 4]), pauli_klein(&trivial4)],
        },
    ]
}

/// A structured system `R_κ` with action `V⁰ ⊗ X^𝔮`.
pub fn structured(kappa: u8, v0: &ProjectiveRep, q: &Z2Hom) -> GradedSystem {
    let action = standard_action(kappa, v0, q).expect("standard action");
    let k = v0.dim();
    if kappa == 0 {
        GradedSystem::r0(k, action).expect("valid R0")
    } else {
        GradedSystem::r1(k, action).expect("valid R1")
    }
}

/// Every structured system of a setting: `κ ∈ {0,1}`, every `𝔮`, every `V⁰`.
pub fn grid(setting: &Setting) -> Vec<(String, GradedSystem)> {
    let mut out = Vec::new();
    for kappa in 0..2u8 {
        for q in setting.group.z2_homs() {
            for (i, v0) in setting.v0s.iter().enumerate() {
                let label = format!("κ={kappa} q={:?} V0#{i}", q.values());
                out.push((label, structured(kappa, v0, &q)));
            }
        }
    }
    out
}

pub fn majorana(sigma0: u8) -> FermionicMPS {
    let h = cr(std::f64::consts::FRAC_1_SQRT_2);
    FermionicMPS::odd(1, vec![identity(1) * h, identity(1) * h], identity(1), sigma0).expect("valid Majorana MPS")
}

/// `d = 1`, `m = 2`: `v_∅ = diag(cos t, cos s)`, `v_1 = [[0, sin t], [sin s, 0]]`, `Θ = σz`.
pub fn even_pair(t: f64, s: f64) -> FermionicMPS {
    let mut v1 = linalg::zeros(2);
    v1[(0, 1)] = cr(t.sin());
    v1[(1, 0)] = cr(s.sin());
    let v = vec![diag(&[cr(t.cos()), cr(s.cos())]), v1];
    let d = transfer_fixed_point(&v).expect("primitive");
    FermionicMPS::even(1, v, d, sigma_z()).expect("valid even MPS")
}

pub fn even_d1() -> FermionicMPS {
    even_pair(0.4, 1.5)
}

/// `d = 2`, `m = 2` Pauli channel with weights `.4, .2, .1, .3` on `I, σx, iσy, σz`.
pub fn pauli_mps() -> FermionicMPS {
    let (a, b, cc, e) = (0.4_f64.sqrt(), 0.3_f64.sqrt(), 0.2_f64.sqrt(), 0.1_f64.sqrt());
    let v = vec![identity(2) * cr(a), sigma_x() * cr(cc), sigma_y() * c(0.0, e), sigma_z() * cr(b)];
    FermionicMPS::even(2, v, identity(2) * cr(0.5), sigma_z()).expect("valid Pauli MPS")
}

/// `U_{(1,0)} = diag(1,−1)`, `U_{(0,1)} = −I`, `W` the Pauli representation.
pub fn pauli_symmetry() -> OnSiteSymmetry {
    let k = FiniteGroup::klein();
    let p = Z2Hom::trivial(&k);
    let u1 = diag(&[cr(1.0), cr(-1.0)]);
    let u2 = -identity(2);
    let us = vec![identity(2), u2.clone(), u1.clone(), &u1 * &u2];
    let u = rep(&k, &p, us.into_iter().map(|m| (m, false)).collect());
    OnSiteSymmetry::new(u, pauli_klein(&p), None).expect("valid symmetry")
}

/// Fermion parity `U = −1` on `d = 1`, implemented by `W = σz` on the bond.
pub fn parity_symmetry_d1() -> OnSiteSymmetry {
    let g = z2();
    let p = Z2Hom::trivial(&g);
    let u = rep(&g, &p, vec![(identity(1), false), (-identity(1), false)]);
    let w = rep(&g, &p, vec![(identity(2), false), (sigma_z(), false)]);
    OnSiteSymmetry::new(u, w, None).expect("valid symmetry")
}

/// `U = −1` on the Majorana chain with trivial `W`.
pub fn majorana_parity(q: Option<Z2Hom>) -> OnSiteSymmetry {
    let g = z2();
    let p = Z2Hom::trivial(&g);
    let u = rep(&g, &p, vec![(identity(1), false), (-identity(1), false)]);
    let w = rep(&g, &p, vec![(identity(1), false); 2]);
    OnSiteSymmetry::new(u, w, q).expect("valid symmetry")
}

/// A unitary on `ℂ^{2n}` commuting with `I_n ⊗ σz`.
pub fn even_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    let a = linalg::random_unitary(n, rng);
    let b = linalg::random_unitary(n, rng);
    let e0 = diag(&[cr(1.0), cr(0.0)]);
    let e1 = diag(&[cr(0.0), cr(1.0)]);
    kron(&a, &e0) + kron(&b, &e1)
}
