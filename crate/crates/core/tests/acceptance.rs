//! The acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::*;
use fspt::algebra::{algebra_closure, commutant, graded_tensor_algebra, OperatorAlgebra};
use fspt::cocycle::{cohomologous, epsilon, TwistedCocycle, DEFAULT_SNAP_TOL};
use fspt::fmps::{
    check_symmetry, density_matrix, expectation, partial_trace_last, transfer_power, FermionicMPS, FmpsError, MpsKind,
    OnSiteSymmetry, SiteWord,
};
use fspt::graded::{fock_parity, GradingUnitary};
use fspt::group::FiniteGroup;
use fspt::linalg::{self, c, cr, identity, kron, kron_all, sigma_x, sigma_y, sigma_z, CMat, C64};
use fspt::phase::Phase;
use fspt::rep::{cocycle_of_rep, ProjectiveRep, SymOp};
use fspt::spt::{compute_index, index_equal, stack_index, stack_systems, z8_compose, GradedSystem, Z8Element};
use rand::Rng;

const SNAP_TOL: f64 = 1e-8;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:.2?}, limit {limit:?}"))
}

fn z8_structure() -> Outcome {
    let start = Instant::now();
    let all = Z8Element::all();
    ensure(all.len() == 8, || format!("{} elements", all.len()))?;
    let id = Z8Element::IDENTITY;
    for a in &all {
        ensure(z8_compose(a, &id) == *a && z8_compose(&id, a) == *a, || format!("{a} · identity"))?;
        ensure(all.iter().any(|b| z8_compose(a, b) == id), || format!("{a} has no inverse"))?;
        for b in &all {
            ensure(all.contains(&z8_compose(a, b)), || format!("{a} · {b} not closed"))?;
            ensure(z8_compose(a, b) == z8_compose(b, a), || format!("{a}, {b} do not commute"))?;
            for c in &all {
                let left = z8_compose(&z8_compose(a, b), c);
                let right = z8_compose(a, &z8_compose(b, c));
                ensure(left == right, || format!("associativity fails at {a}, {b}, {c}"))?;
            }
        }
    }
    let mut x = Z8Element::GENERATOR;
    for k in 1..=7 {
        ensure(x != id, || format!("[1;0,+]^{k} is the identity"))?;
        x = z8_compose(&x, &Z8Element::GENERATOR);
    }
    ensure(x == id, || format!("[1;0,+]^8 = {x}"))?;
    within(start.elapsed(), Duration::from_secs(1), "ℤ₈ check")?;
    Ok("order 8, generator [1;0,+] has order 8".into())
}

fn group_law() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    let mut cells = Vec::new();
    for setting in settings() {
        let grid = grid(&setting);
        let indices: Vec<_> = grid
            .iter()
            .map(|(label, s)| compute_index(s).map_err(|e| format!("{}: {label}: {e}", setting.name)))
            .collect::<Result<_, _>>()?;
        for i in 0..indices.len() {
            for j in i + 1..indices.len() {
                ensure(!index_equal(&indices[i], &indices[j]), || {
                    format!("{}: {} and {} share an index cell", setting.name, grid[i].0, grid[j].0)
                })?;
            }
        }
        cells.push(format!("{} {}", setting.name, indices.len()));
        for (a, (la, sa)) in grid.iter().enumerate() {
            for (b, (lb, sb)) in grid.iter().enumerate() {
                let stacked = stack_systems(sa, sb).map_err(|e| format!("{la} ⊗̂ {lb}: {e}"))?;
                let direct = compute_index(&stacked).map_err(|e| format!("{la} ⊗̂ {lb}: {e}"))?;
                let law = stack_index(&indices[a], &indices[b]).map_err(|e| e.to_string())?;
                ensure(index_equal(&direct, &law), || format!("{}: {la} ⊗̂ {lb} disagrees with the law", setting.name))?;
                pairs += 1;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(60), "group-law grid")?;
    Ok(format!("{pairs} ordered pairs agree, distinct cells: {}", cells.join("; ")))
}

fn invariance() -> Outcome {
    let mut rng = rng(3);
    let mut fixtures = 0;
    for setting in settings() {
        for (label, s) in grid(&setting) {
            let base = compute_index(&s).map_err(|e| e.to_string())?;
            for trial in 0..100 {
                let t = linalg::random_unitary(s.dim(), &mut rng);
                let moved = s.conjugate_by(&t).map_err(|e| format!("{label} trial {trial}: {e}"))?;
                let idx = compute_index(&moved).map_err(|e| format!("{label} trial {trial}: {e}"))?;
                ensure(index_equal(&idx, &base), || {
                    format!("{}: {label} changed under conjugation {trial}", setting.name)
                })?;
            }
            fixtures += 1;
        }
    }
    Ok(format!("{fixtures} fixtures x 100 conjugations, tolerance {SNAP_TOL:e}"))
}

fn random_cochain(group: &FiniteGroup, rng: &mut impl Rng) -> Vec<Phase> {
    group
        .elements()
        .map(|g| if g == group.identity() { Phase::ONE } else { Phase::from_complex(linalg::random_phase(rng)) })
        .collect()
}

/// Two classes per setting: trivial and one known nontrivial class.
fn cohomology_settings() -> Vec<(&'static str, TwistedCocycle, TwistedCocycle)> {
    let k = FiniteGroup::klein();
    let trivial_k = fspt::group::Z2Hom::trivial(&k);
    let pauli = cocycle_of_rep(&pauli_klein(&trivial_k)).expect("cocycle");
    let g2 = z2();
    let tr = fspt::group::Z2Hom::z2_identity();
    let kramers =
        cocycle_of_rep(&rep(&g2, &tr, vec![(identity(2), false), (sigma_y() * c(0.0, 1.0), true)])).expect("cocycle");
    vec![
        ("Z2xZ2", TwistedCocycle::trivial(&k, &trivial_k), pauli),
        ("Z2 antiunitary", TwistedCocycle::trivial(&g2, &tr), kramers),
    ]
}

fn cohomology_engine() -> Outcome {
    let mut homs_checked = 0;
    for (name, group) in groups_up_to_8() {
        let homs = group.z2_homs();
        for p in &homs {
            for q1 in &homs {
                for q2 in &homs {
                    let a = epsilon(&group, p, q1, q2);
                    let b = epsilon(&group, p, q2, q1);
                    let verdict = cohomologous(&a, &b, None, SNAP_TOL).map_err(|e| format!("{name}: {e}"))?;
                    ensure(verdict.cohomologous, || {
                        format!(
                            "{name}: ε({:?},{:?}) ≁ ε({:?},{:?}) for p = {:?}",
                            q1.values(),
                            q2.values(),
                            q2.values(),
                            q1.values(),
                            p.values()
                        )
                    })?;
                    homs_checked += 1;
                }
            }
        }
    }

    let mut rng = rng(4);
    let cases = cohomology_settings();
    let normal = |u: &TwistedCocycle| u.root_normal_form(DEFAULT_SNAP_TOL).map(|x| x.0).map_err(|e| e.to_string());
    let same = |a: &TwistedCocycle, b: &TwistedCocycle| -> Result<bool, String> {
        Ok(cohomologous(a, b, None, SNAP_TOL).map_err(|e| e.to_string())?.cohomologous)
    };
    for trial in 0..200 {
        let (name, trivial, nontrivial) = &cases[trial % cases.len()];
        let mut triple = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..3 {
            let pick = rng.gen_bool(0.5);
            let base = if pick { nontrivial } else { trivial };
            let moved = base.apply_coboundary(&random_cochain(base.group(), &mut rng)).map_err(|e| e.to_string())?;
            triple.push(normal(&moved)?);
            labels.push(pick);
        }
        let [a, b, c3] = [&triple[0], &triple[1], &triple[2]];
        ensure(same(a, a)?, || format!("{name} trial {trial}: not reflexive"))?;
        let ab = same(a, b)?;
        ensure(ab == same(b, a)?, || format!("{name} trial {trial}: not symmetric"))?;
        ensure(ab == (labels[0] == labels[1]), || format!("{name} trial {trial}: wrong verdict"))?;
        if ab && same(b, c3)? {
            ensure(same(a, c3)?, || format!("{name} trial {trial}: not transitive"))?;
        }
    }

    let (_, trivial, pauli) = &cases[0];
    let pauli = pauli.snapped(8, SNAP_TOL).ok_or("Pauli cocycle is not 8-th root valued")?;
    let group = pauli.group().clone();
    let others: Vec<usize> = group.elements().filter(|&g| g != group.identity()).collect();
    let mut candidates = 0;
    for code in 0..512usize {
        let mut b = vec![Phase::ONE; group.order()];
        for (i, &g) in others.iter().enumerate() {
            b[g] = Phase::root(((code >> (3 * i)) & 7) as i64, 8);
        }
        let moved = pauli.apply_coboundary(&b).map_err(|e| e.to_string())?;
        let hit = moved.values().iter().flatten().all(|v| v.is_one(SNAP_TOL));
        ensure(!hit, || format!("candidate {code} trivializes the Pauli class"))?;
        candidates += 1;
    }
    let engine = cohomologous(&pauli, trivial, Some(8), SNAP_TOL).map_err(|e| e.to_string())?;
    ensure(!engine.cohomologous, || "engine claims the Pauli class is trivial".into())?;
    Ok(format!("{homs_checked} ε symmetry checks on 14 groups, 200 random triples, {candidates} witnesses ruled out"))
}

fn oracle_fixtures() -> Vec<(&'static str, FermionicMPS)> {
    vec![("Majorana d=1 m=1", majorana(1)), ("even d=1 m=2", even_d1()), ("even d=2 m=2", pauli_mps())]
}

fn fmps_oracle() -> Outcome {
    let mut worst = [0.0f64; 4];
    for (name, mps) in oracle_fixtures() {
        let local = mps.local_dim();
        let site_parity = fock_parity(mps.d());
        let mut previous: Option<CMat> = None;
        for l in 0..=4 {
            let rho = density_matrix(&mps, l).map_err(|e| format!("{name}: {e}"))?;
            let lo = -linalg::hermitian_eigen(&rho).0[0];
            let tr = (linalg::trace(&rho) - cr(1.0)).norm();
            let parity = kron_all(std::iter::repeat_n(&site_parity, l + 1));
            let comm = linalg::norm(&linalg::commutator(&rho, &parity));
            let restr = match &previous {
                Some(prev) => linalg::norm(&(partial_trace_last(&rho, local).map_err(|e| e.to_string())? - prev)),
                None => 0.0,
            };
            worst = [worst[0].max(lo), worst[1].max(tr), worst[2].max(restr), worst[3].max(comm)];
            ensure(lo <= 1e-10, || format!("{name} l={l}: min eigenvalue {}", -lo))?;
            ensure(tr <= 1e-10, || format!("{name} l={l}: trace defect {tr:e}"))?;
            ensure(restr <= 1e-9, || format!("{name} l={l}: restriction defect {restr:e}"))?;
            ensure(comm <= 1e-10, || format!("{name} l={l}: parity commutator {comm:e}"))?;
            previous = Some(rho);
        }
    }
    let mut odd_words = 0;
    for sigma0 in 0..2 {
        let mps = majorana(sigma0);
        for len in 1..=4usize {
            for code in 0..(1usize << (2 * len)) {
                let pairs: Vec<_> = (0..len).map(|x| ((code >> (2 * x)) & 1, (code >> (2 * x + 1)) & 1)).collect();
                let w = SiteWord::new(pairs);
                if w.parity() == 1 {
                    let value = expectation(&mps, &w).map_err(|e| e.to_string())?;
                    ensure(value == C64::new(0.0, 0.0), || format!("odd word {w:?} gives {value}"))?;
                    odd_words += 1;
                }
            }
        }
    }
    Ok(format!(
        "3 fixtures, l ≤ 4: max -λmin {:.1e}, trace {:.1e}, restriction {:.1e}, [ρ,P] {:.1e}; {odd_words} odd words exactly 0",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn transfer_convergence() -> Outcome {
    let mut rng = rng(6);
    let mut worst = 0.0f64;
    for (name, mps) in oracle_fixtures() {
        let m = mps.m();
        for _ in 0..20 {
            let (x, limit) = match mps.kind() {
                MpsKind::Even => {
                    let x = linalg::random_matrix(m, &mut rng);
                    let limit = identity(m) * linalg::trace(&(mps.density() * &x));
                    (x, limit)
                }
                MpsKind::Odd => {
                    // b ∈ M_m ⊗ 𝔠
                    let x = kron(&linalg::random_matrix(m, &mut rng), &identity(2))
                        + kron(&linalg::random_matrix(m, &mut rng), &sigma_x());
                    let weight = kron(mps.density(), &(identity(2) * cr(0.5)));
                    let limit = identity(2 * m) * linalg::trace(&(weight * &x));
                    (x, limit)
                }
            };
            let hatted = mps.kind() == MpsKind::Odd;
            let y = transfer_power(&mps, &x, 50, hatted).map_err(|e| e.to_string())?;
            let err = linalg::norm(&(y - limit));
            worst = worst.max(err);
            ensure(err <= 1e-8, || format!("{name}: ‖T^50(x) − limit‖ = {err:e}"))?;
        }
    }
    Ok(format!("3 fixtures x 20 inputs, worst {worst:.1e}"))
}

fn symmetry_fixtures() -> Vec<(&'static str, FermionicMPS, OnSiteSymmetry)> {
    vec![
        ("Majorana parity", majorana(0), majorana_parity(None)),
        ("even d=1 parity", even_d1(), parity_symmetry_d1()),
        ("Pauli Z2xZ2", pauli_mps(), pauli_symmetry()),
    ]
}

fn symmetry_phases() -> Outcome {
    let mut worst_modulus = 0.0f64;
    let mut worst_residual = 0.0f64;
    for (name, mps, sym) in symmetry_fixtures() {
        let check = check_symmetry(&mps, &sym, 1e-8).map_err(|e| format!("{name}: {e}"))?;
        for (g, &r) in check.raw_moduli.iter().enumerate() {
            worst_modulus = worst_modulus.max((r - 1.0).abs());
            ensure((r - 1.0).abs() <= 1e-10, || format!("{name}: |c_{g}| = {r}"))?;
        }
        for (g, &r) in check.residuals.iter().enumerate() {
            worst_residual = worst_residual.max(r);
            ensure(r <= 1e-8, || format!("{name}: residual {r:e} at {g}"))?;
        }
    }
    let perturbed = [
        ("even d=1 parity", even_d1().perturbed_unchecked(1, &(identity(2) * cr(1e-3))), parity_symmetry_d1()),
        ("Pauli Z2xZ2", pauli_mps().perturbed_unchecked(1, &(sigma_z() * cr(1e-3))), pauli_symmetry()),
    ];
    let mut detected = Vec::new();
    for (name, mps, sym) in perturbed {
        match check_symmetry(&mps, &sym, 1e-8) {
            Err(FmpsError::SymmetryViolated(g, r)) if r > 1e-4 => detected.push(format!("{name} at g={g} ({r:.1e})")),
            other => return Err(format!("{name}: perturbation not detected: {other:?}")),
        }
    }
    Ok(format!(
        "max ||c|-1| {worst_modulus:.1e}, max residual {worst_residual:.1e}; perturbations detected: {}",
        detected.join(", ")
    ))
}

fn class_relation() -> Outcome {
    let mut checked = 0;
    for setting in settings() {
        let p = &setting.p;
        for q in setting.group.z2_homs() {
            for v0 in &setting.v0s {
                let ops: Vec<SymOp> = v0
                    .ops()
                    .iter()
                    .enumerate()
                    .map(|(g, op)| {
                        let y = if q.flag(g) { sigma_y() } else { identity(2) };
                        SymOp::new(kron(&op.matrix, &linalg::conj_if(&y, p.flag(g))), p.flag(g))
                    })
                    .collect();
                let v = ProjectiveRep::new(&setting.group, p, ops).map_err(|e| e.to_string())?;
                GradedSystem::r1(v0.dim(), v.clone())
                    .map_err(|e| format!("{}: not an R1 fixture: {e}", setting.name))?;
                let lhs = cocycle_of_rep(&v).map_err(|e| e.to_string())?;
                let rhs = cocycle_of_rep(v0)
                    .and_then(|u| Ok(u.product(&epsilon(&setting.group, p, &q, p))?))
                    .map_err(|e| e.to_string())?;
                let verdict = cohomologous(&lhs, &rhs, None, SNAP_TOL).map_err(|e| e.to_string())?;
                ensure(verdict.cohomologous, || format!("{}: q = {:?}", setting.name, q.values()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} factorized R1 actions"))
}

/// A hand-specified graded algebra with the homogeneous bases of its commutant.
struct Factor {
    name: &'static str,
    algebra: OperatorAlgebra,
    commutant_even: Vec<CMat>,
    commutant_odd: Vec<CMat>,
}

fn factors() -> Vec<Factor> {
    vec![
        Factor {
            name: "M2",
            algebra: OperatorAlgebra::full(2),
            commutant_even: vec![identity(2)],
            commutant_odd: vec![],
        },
        Factor {
            name: "c",
            algebra: algebra_closure(2, &[sigma_x()]).expect("Clifford algebra"),
            commutant_even: vec![identity(2)],
            commutant_odd: vec![sigma_x()],
        },
    ]
}

fn graded_commutant() -> Outcome {
    let gamma = GradingUnitary::new(sigma_z()).expect("grading");
    let expected = [[1usize, 2], [2, 4]];
    let mut report = Vec::new();
    for (i, f1) in factors().iter().enumerate() {
        for (j, f2) in factors().iter().enumerate() {
            let product = graded_tensor_algebra(&f1.algebra, &gamma, &f2.algebra, &gamma);
            let computed = commutant(&product).map_err(|e| e.to_string())?;
            let m2_prime: Vec<CMat> = f2.commutant_even.iter().chain(&f2.commutant_odd).cloned().collect();
            let mut generators = Vec::new();
            for a in &f1.commutant_even {
                generators.extend(m2_prime.iter().map(|b| kron(a, b)));
            }
            for a in &f1.commutant_odd {
                generators.extend(m2_prime.iter().map(|b| kron(a, &(b * sigma_z()))));
            }
            let predicted = algebra_closure(4, &generators).map_err(|e| e.to_string())?;
            let label = format!("{}⊗̂{}", f1.name, f2.name);
            ensure(predicted.dim() == expected[i][j], || format!("{label}: predicted dimension {}", predicted.dim()))?;
            ensure(computed.dim() == predicted.dim(), || {
                format!("{label}: commutant dimension {} vs predicted {}", computed.dim(), predicted.dim())
            })?;
            ensure(computed.contains_algebra(&predicted, 1e-8) && predicted.contains_algebra(&computed, 1e-8), || {
                format!("{label}: spans differ")
            })?;
            report.push(format!("{label} {}", computed.dim()));
        }
    }
    Ok(format!("dimensions {}", report.join(", ")))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Z8 structure", z8_structure),
        ("group-law consistency", group_law),
        ("invariance under conjugation", invariance),
        ("cohomology engine", cohomology_engine),
        ("fMPS density-matrix oracle", fmps_oracle),
        ("transfer convergence", transfer_convergence),
        ("symmetry phases", symmetry_phases),
        ("class relation for factorized actions", class_relation),
        ("graded tensor commutant", graded_commutant),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{elapsed:.2?}]", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} [{elapsed:.2?}]", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
