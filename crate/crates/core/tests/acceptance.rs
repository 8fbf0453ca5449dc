//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

mod common;

use std::process::ExitCode;

use qphi::classical::{intrinsic_difference, kld, ClassicalAnalysis, ClassicalDistinction, ClassicalSystem};
use qphi::partitions::{enumerate_disintegrating, UnitSet};
use qphi::quantum::gates::*;
use qphi::quantum::{
    identity_structure, qid, quantum_relative_entropy, QuantumAnalysis, QuantumDistinction, QuantumSystem,
};
use qphi::search::CausalModel;
use qphi::tensor::{hermitian_eig, is_ppt, partial_trace, tensor_over, CMatrix, CVector, DensityMatrix, Tolerance};
use qphi::{Direction, ExecMode};
use rand::Rng;

use common::*;

const TOL: f64 = 1e-9;
const INSTANCES: usize = 200;

type Outcome = Result<String, String>;

fn set(u: &[usize]) -> UnitSet {
    UnitSet::from(u)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol || (a.is_infinite() && a == b)
}

fn copy_xor() -> ClassicalSystem {
    let mut tpm = vec![vec![0.0; 4]; 4];
    for (s, row) in tpm.iter_mut().enumerate() {
        let (a, b) = (s >> 1, s & 1);
        row[(a << 1) | (a ^ b)] = 1.0;
    }
    ClassicalSystem::new(vec![2, 2], tpm, None, TOL).unwrap()
}

fn cnot_analysis(rho: DensityMatrix) -> QuantumAnalysis {
    QuantumAnalysis::new(QuantumSystem::new(cnot(2, 0, 1)).unwrap(), rho, Tolerance::default()).unwrap()
}

type Summary = Vec<(UnitSet, UnitSet, Vec<usize>, f64)>;
type Suite = fn(&mut rand_chacha::ChaCha8Rng) -> Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn summary_classical(d: &[ClassicalDistinction]) -> Summary {
    d.iter()
        .map(|x| (x.mechanism.clone(), x.purview.clone(), x.states.clone(), x.phi))
        .collect()
}

/// Basis index of a state vector that is (up to phase) a computational basis ket.
fn basis_index(v: &CVector) -> Option<usize> {
    let i = v.iter().position(|z| z.norm_sqr() > 1.0 - 1e-9)?;
    Some(i)
}

fn summary_quantum(d: &[QuantumDistinction]) -> Option<Summary> {
    d.iter()
        .map(|x| {
            let states = x
                .states
                .iter()
                .map(|s| basis_index(&s.vector))
                .collect::<Option<Vec<_>>>()?;
            Some((x.mechanism.clone(), x.purview.clone(), states, x.phi))
        })
        .collect()
}

fn same_structure(a: &[(UnitSet, UnitSet, Vec<usize>, f64)], b: &[(UnitSet, UnitSet, Vec<usize>, f64)]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x.0 == y.0 && x.1 == y.1 && x.2 == y.2 && close(x.3, y.3, TOL))
}

fn criterion_1() -> Outcome {
    let a = ClassicalAnalysis::new(copy_xor(), vec![1, 0], Some(vec![1, 1]), Tolerance::default())
        .map_err(|e| e.to_string())?;
    let effects = summary_classical(
        &a.unfold(Direction::Effect, None, ExecMode::Parallel)
            .map_err(|e| e.to_string())?,
    );
    let expected_effects = vec![
        (set(&[0]), set(&[0]), vec![1], 1.0),
        (set(&[0, 1]), set(&[0, 1]), vec![3], 1.0),
    ];
    check(same_structure(&effects, &expected_effects), || {
        format!("effects {effects:?}")
    })?;
    let causes = summary_classical(
        &a.unfold(Direction::Cause, None, ExecMode::Parallel)
            .map_err(|e| e.to_string())?,
    );
    let expected_causes = vec![
        (set(&[0]), set(&[0]), vec![1], 1.0),
        (set(&[1]), set(&[0, 1]), vec![1, 2], 0.5),
        (set(&[0, 1]), set(&[0, 1]), vec![2], 1.0),
    ];
    check(same_structure(&causes, &expected_causes), || {
        format!("causes {causes:?}")
    })?;
    Ok("2 effects, 3 causes, φ = 1, 1 | 1, 0.5, 1".into())
}

fn criterion_2() -> Outcome {
    let classical =
        ClassicalAnalysis::new(copy_xor(), vec![1, 0], None, Tolerance::default()).map_err(|e| e.to_string())?;
    let quantum = cnot_analysis(pure(&basis_ket(2, 2)));
    for dir in [Direction::Effect, Direction::Cause] {
        let c = summary_classical(
            &classical
                .unfold(dir, None, ExecMode::Parallel)
                .map_err(|e| e.to_string())?,
        );
        let q = summary_quantum(
            &quantum
                .q_unfold(dir, None, ExecMode::Parallel)
                .map_err(|e| e.to_string())?,
        )
        .ok_or("quantum intrinsic state is not a computational basis state")?;
        check(same_structure(&c, &q), || {
            format!("{dir}: classical {c:?} vs quantum {q:?}")
        })?;
    }
    Ok("CNOT |10⟩ distinctions identical to COPY-XOR in both directions".into())
}

fn criterion_3() -> Outcome {
    let a = cnot_analysis(pure(&product_ket(&[ket_minus(), ket_plus()])));
    let d = a
        .q_unfold(Direction::Effect, None, ExecMode::Parallel)
        .map_err(|e| e.to_string())?;
    let mechanisms: Vec<UnitSet> = d.iter().map(|x| x.mechanism.clone()).collect();
    check(mechanisms == vec![set(&[1]), set(&[0, 1])], || {
        format!("effect mechanisms {mechanisms:?}")
    })?;
    for x in &d {
        check(close(x.phi, 1.0, TOL), || format!("{} has φ = {}", x.mechanism, x.phi))?;
    }
    let b = a
        .mechanism_state(Direction::Effect, &set(&[1]))
        .map_err(|e| e.to_string())?;
    let plus = pure(&ket_plus());
    check((b.matrix() - plus.matrix()).norm() < TOL, || {
        "mechanism B is not |+⟩".into()
    })?;
    let alone = a
        .q_phi_max(Direction::Effect, &set(&[0]), ExecMode::Parallel)
        .map_err(|e| e.to_string())?;
    check(alone.is_none(), || "|−⟩_A has a positive effect φ".into())?;
    Ok(format!(
        "|+⟩_B φ = {:.9}, |−+⟩_AB φ = {:.9}, |−⟩_A φ = 0",
        d[0].phi, d[1].phi
    ))
}

fn criterion_4() -> Outcome {
    let a = cnot_analysis(pure(&product_ket(&[ket_plus(), ket0()])));
    let bell = bell_phi_plus();
    for dir in [Direction::Effect, Direction::Cause] {
        let d = a.q_unfold(dir, None, ExecMode::Parallel).map_err(|e| e.to_string())?;
        check(d.len() == 1, || format!("{dir}: {} distinctions", d.len()))?;
        let x = &d[0];
        check(x.mechanism == set(&[0, 1]) && x.purview == set(&[0, 1]), || {
            format!("{dir}: {} → {}", x.mechanism, x.purview)
        })?;
        check(close(x.phi, 2.0, TOL), || format!("{dir}: φ = {}", x.phi))?;
        if dir == Direction::Effect {
            let overlap = x.states[0].vector.dotc(&bell).norm_sqr();
            check(close(overlap, 1.0, TOL), || {
                format!("effect state overlap with Bell {overlap}")
            })?;
        }
        for m in [set(&[0]), set(&[1])] {
            let first = a.q_phi_max(dir, &m, ExecMode::Parallel).map_err(|e| e.to_string())?;
            check(first.is_none(), || format!("{dir}: first-order {m} has φ > 0"))?;
        }
    }
    Ok("only |+0⟩_AB ↔ Bell_CD, φ = 2 both directions".into())
}

fn criterion_5() -> Outcome {
    let a = cnot_analysis(pure(&product_ket(&[ket0(), ket_plus()])));
    let mut counts = Vec::new();
    for dir in [Direction::Effect, Direction::Cause] {
        let d = a.q_unfold(dir, None, ExecMode::Parallel).map_err(|e| e.to_string())?;
        check(!d.is_empty(), || format!("{dir}: no distinctions"))?;
        check(d.iter().all(|x| x.order() == 1), || {
            format!("{dir}: higher-order distinction present")
        })?;
        counts.push(d.len());
    }
    Ok(format!(
        "first-order only ({} effects, {} causes)",
        counts[0], counts[1]
    ))
}

fn correlated_mixture() -> DensityMatrix {
    DensityMatrix::new(vec![2, 2], diag(&[0.5, 0.0, 0.0, 0.5]), TOL).unwrap()
}

/// Checks the mixed-state subsystem results on `analysis`, where `pair` are
/// the CNOT's control and target qubits.
fn mixed_subsystem(analysis: &QuantumAnalysis, pair: [usize; 2]) -> Result<(f64, f64), String> {
    let effect = analysis
        .q_phi_max(Direction::Effect, &set(&pair), ExecMode::Parallel)
        .map_err(|e| e.to_string())?
        .ok_or("full mechanism has no effect")?;
    check(effect.purview == set(&[pair[1]]), || {
        format!("effect purview {}", effect.purview)
    })?;
    check(effect.states.len() == 1, || "effect state is degenerate".into())?;
    let zero = effect.states[0].vector[0].norm_sqr();
    check(close(zero, 1.0, TOL), || "effect state is not |0⟩".into())?;
    check(close(effect.phi, 1.0, TOL), || format!("φ_e = {}", effect.phi))?;

    let cause = analysis
        .q_phi_max(Direction::Cause, &set(&[pair[1]]), ExecMode::Parallel)
        .map_err(|e| e.to_string())?
        .ok_or("|0⟩ on the target has no cause")?;
    check(cause.purview == set(&pair), || {
        format!("cause purview {}", cause.purview)
    })?;
    let vectors: Vec<CVector> = cause.states.iter().map(|s| s.vector.clone()).collect();
    let span = projector(&vectors);
    let expected = diag(&[1.0, 0.0, 0.0, 1.0]);
    check(span.nrows() == 4 && (span - expected).norm() < 1e-8, || {
        "cause subspace is not span{00, 11}".into()
    })?;
    check(close(cause.phi, 0.5, TOL), || format!("φ_c = {}", cause.phi))?;
    Ok((effect.phi, cause.phi))
}

fn criterion_6() -> Outcome {
    let a = cnot_analysis(correlated_mixture());
    let (e, c) = mixed_subsystem(&a, [0, 1])?;
    Ok(format!(
        "effect |0⟩_D φ_e = {e:.9}; cause span{{00,11}}_AB φ_c = {c:.9}"
    ))
}

fn criterion_7() -> Outcome {
    let tol = Tolerance::default();
    let product = identity_structure(&pure(&basis_ket(3, 0)), tol, ExecMode::Parallel).map_err(|e| e.to_string())?;
    check(!product.is_empty() && product.iter().all(|x| x.order() == 1), || {
        "|000⟩ is not first-order only".into()
    })?;
    let g = identity_structure(&pure(&ghz(3)), tol, ExecMode::Parallel).map_err(|e| e.to_string())?;
    check(g.len() == 1 && g[0].order() == 3, || {
        format!("GHZ gives {} distinctions", g.len())
    })?;
    let w = identity_structure(&pure(&w_state(3)), tol, ExecMode::Parallel).map_err(|e| e.to_string())?;
    let orders: std::collections::BTreeSet<usize> = w.iter().map(|x| x.order()).collect();
    check(orders == [1, 2, 3].into_iter().collect(), || {
        format!("W orders {orders:?}")
    })?;
    Ok(format!(
        "|000⟩: {} first-order; GHZ: 1 third-order (φ = {:.6}); W: orders 1, 2, 3 ({} distinctions)",
        product.len(),
        g[0].phi,
        w.len()
    ))
}

fn criterion_8() -> Outcome {
    let u = unitary(kron_all(&[CMatrix::identity(2, 2), cnot(2, 0, 1).matrix().clone()]));
    let sys = QuantumSystem::new(u).map_err(|e| e.to_string())?;
    let a = QuantumAnalysis::new(sys, pure(&ghz(3)), Tolerance::default()).map_err(|e| e.to_string())?;
    mixed_subsystem(&a, [1, 2])?;
    let mut third = Vec::new();
    for dir in [Direction::Effect, Direction::Cause] {
        let d = a.q_unfold(dir, None, ExecMode::Parallel).map_err(|e| e.to_string())?;
        third.extend(d.into_iter().filter(|x| x.order() == 3 && x.purview.len() == 3));
    }
    check(!third.is_empty(), || {
        "no third-order distinction over all three qubits".into()
    })?;
    Ok(format!(
        "subsystem cause/effect preserved; {} third-order distinction(s) over ABC",
        third.len()
    ))
}

fn property_repertoires(rng: &mut impl Rng) -> Result<(), String> {
    for i in 0..INSTANCES {
        let sys = random_classical_system(rng);
        let n = sys.n_units();
        let state_t: Vec<usize> = sys.unit_states().iter().map(|&k| rng.random_range(0..k)).collect();
        let state_t1: Vec<usize> = sys.unit_states().iter().map(|&k| rng.random_range(0..k)).collect();
        let a =
            ClassicalAnalysis::new(sys, state_t, Some(state_t1), Tolerance::default()).map_err(|e| e.to_string())?;
        let units = UnitSet::new(0..n);
        let m = random_subset(&units, rng);
        let z = random_subset(&units, rng);
        for dir in [Direction::Effect, Direction::Cause] {
            let mut reps = Vec::new();
            if let Some(r) = a.repertoire(dir, &m, &z).map_err(|e| e.to_string())? {
                reps.push(r);
            }
            for theta in enumerate_disintegrating(&m, &z).map_err(|e| e.to_string())? {
                reps.push(
                    a.partitioned_repertoire(dir, &m, &z, &theta)
                        .map_err(|e| e.to_string())?,
                );
            }
            for r in reps {
                check(close(r.total(), 1.0, TOL), || {
                    format!("classical instance {i} {dir}: sum {}", r.total())
                })?;
                check(r.probabilities.iter().all(|&p| p >= 0.0), || {
                    format!("classical instance {i}: negative entry")
                })?;
            }
        }
    }
    let tol = Tolerance::default();
    for i in 0..INSTANCES {
        let n = rng.random_range(2..=3);
        let a = QuantumAnalysis::new(
            QuantumSystem::new(random_unitary(n, rng)).unwrap(),
            random_state(n, rng),
            tol,
        )
        .map_err(|e| e.to_string())?;
        let units = UnitSet::new(0..n);
        let m = random_subset(&units, rng);
        let z = random_subset(&units, rng);
        for dir in [Direction::Effect, Direction::Cause] {
            let mut reps = Vec::new();
            let main = a.repertoire(dir, &m, &z).map_err(|e| e.to_string())?;
            if let Some(r) = &main {
                reps.push(r.clone());
            }
            for theta in enumerate_disintegrating(&m, &z).map_err(|e| e.to_string())? {
                reps.push(
                    a.q_partitioned_repertoire(dir, &m, &z, &theta)
                        .map_err(|e| e.to_string())?,
                );
            }
            for r in &reps {
                r.rho
                    .validate(1e-8)
                    .map_err(|e| format!("quantum instance {i} {dir}: {e}"))?;
            }
            if let (Direction::Effect, Some(r)) = (dir, &main) {
                // The effect repertoire is the product of its own block marginals.
                let reduced: Vec<(UnitSet, DensityMatrix)> = r
                    .structure
                    .blocks
                    .iter()
                    .map(|b| {
                        let local: Vec<usize> = b.iter().map(|u| z.position(u).unwrap()).collect();
                        (UnitSet::new(local.clone()), partial_trace(&r.rho, &local).unwrap())
                    })
                    .collect();
                let factors: Vec<(&[usize], &CMatrix)> =
                    reduced.iter().map(|(b, m)| (b.as_slice(), m.matrix())).collect();
                let (_, product) = tensor_over(&factors, |_| 2);
                let gap = (product - r.rho.matrix()).norm();
                check(gap < 1e-8, || {
                    format!("quantum instance {i}: product structure gap {gap:.2e}")
                })?;
            }
        }
    }
    Ok(())
}

fn property_id(rng: &mut impl Rng) -> Result<(), String> {
    for _ in 0..INSTANCES {
        let n = rng.random_range(2..=8);
        let p = random_distribution(n, rng);
        let q = random_distribution(n, rng);
        let id = intrinsic_difference(&p, &q, TOL).value;
        check(id >= 0.0, || format!("ID = {id} < 0"))?;
        check(intrinsic_difference(&p, &p, TOL).value == 0.0, || "ID(P,P) ≠ 0".into())?;
        let mut hot = vec![0.0; n];
        hot[rng.random_range(0..n)] = 1.0;
        let (a, b) = (intrinsic_difference(&hot, &q, TOL).value, kld(&hot, &q));
        check(close(a, b, 1e-12), || format!("ID {a} vs KLD {b} on deterministic P"))?;
    }
    Ok(())
}

fn property_qid(rng: &mut impl Rng) -> Result<(), String> {
    let tol = Tolerance::default();
    for _ in 0..INSTANCES {
        let n_qubits = rng.random_range(1..=3);
        let dim = 1 << n_qubits;
        // Commuting pair: shared random eigenbasis.
        let v = random_unitary_matrix(dim, rng);
        let p = random_distribution(dim, rng);
        let q = random_distribution(dim, rng);
        let rho = &v * diag(&p) * v.adjoint();
        let sigma = &v * diag(&q) * v.adjoint();
        let quantum = qid(&rho, &sigma, tol).map_err(|e| e.to_string())?.value;
        let classical = intrinsic_difference(&p, &q, TOL).value;
        check(close(quantum, classical, 1e-9), || {
            format!("commuting QID {quantum} vs ID {classical}")
        })?;

        // Pure ρ: QID equals the relative entropy.
        let psi = random_ket(dim, rng);
        let pure_rho = &psi * psi.adjoint();
        let sigma = random_density_matrix(dim, rng);
        let a = qid(&pure_rho, &sigma, tol).map_err(|e| e.to_string())?.value;
        let b = quantum_relative_entropy(&pure_rho, &sigma, tol).map_err(|e| e.to_string())?;
        check(close(a, b, 1e-9), || format!("pure QID {a} vs S {b}"))?;

        // Joint unitary conjugation.
        let rho = random_density_matrix(dim, rng);
        let sigma = random_density_matrix(dim, rng);
        let w = random_unitary_matrix(dim, rng);
        let rho_w = &w * &rho * w.adjoint();
        let sigma_w = &w * &sigma * w.adjoint();
        let before = qid(&rho, &sigma, tol).map_err(|e| e.to_string())?.value;
        let after = qid(&rho_w, &sigma_w, tol).map_err(|e| e.to_string())?.value;
        check(close(before, after, 1e-8), || {
            format!("QID {before} → {after} under conjugation")
        })?;
        let before = quantum_relative_entropy(&rho, &sigma, tol).map_err(|e| e.to_string())?;
        let after = quantum_relative_entropy(&rho_w, &sigma_w, tol).map_err(|e| e.to_string())?;
        check(close(before, after, 1e-8), || {
            format!("S {before} → {after} under conjugation")
        })?;
    }
    Ok(())
}

fn property_partitions(rng: &mut rand_chacha::ChaCha8Rng) -> Result<(), String> {
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
        let size: usize = rng.random_range(1..=3);
        UnitSet::new(rand::seq::index::sample(rng, 6, size))
    };
    for _ in 0..INSTANCES {
        let m = draw(rng);
        let z = draw(rng);
        let fast = enumerate_disintegrating(&m, &z).map_err(|e| e.to_string())?;
        let set: std::collections::BTreeSet<_> = fast.iter().cloned().collect();
        check(set.len() == fast.len(), || format!("duplicates for {m} / {z}"))?;
        check(set == disintegrating_oracle(&m, &z), || {
            format!("enumeration differs from oracle for {m} / {z}")
        })?;
    }
    for (a, b) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)] {
        let (m, z) = (UnitSet::new(0..a), UnitSet::new(0..b));
        let fast: std::collections::BTreeSet<_> = enumerate_disintegrating(&m, &z).unwrap().into_iter().collect();
        check(fast == disintegrating_oracle(&m, &z), || {
            format!("enumeration differs for |M|={a} |Z|={b}")
        })?;
    }
    Ok(())
}

fn property_ppt(rng: &mut impl Rng) -> Result<(), String> {
    let tol = Tolerance::default();
    let bell = pure(&bell_phi_plus());
    check(!is_ppt(&bell, &[0], tol).unwrap(), || "Bell state passes PPT".into())?;
    let pt = qphi::tensor::partial_transpose(&bell, 0).unwrap();
    let min = hermitian_eig(&pt, tol).unwrap().values.last().copied().unwrap();
    check(close(min, -0.5, 1e-12), || {
        format!("Bell partial transpose min eigenvalue {min}")
    })?;
    check(is_ppt(&correlated_mixture(), &[0], tol).unwrap(), || {
        "classical mixture fails PPT".into()
    })?;
    for _ in 0..INSTANCES {
        // Local unitaries preserve both verdicts.
        let local = qphi::tensor::kron(&random_unitary_matrix(2, rng), &random_unitary_matrix(2, rng));
        let rotated = |rho: &DensityMatrix| {
            DensityMatrix::new(vec![2, 2], &local * rho.matrix() * local.adjoint(), 1e-9).unwrap()
        };
        check(!is_ppt(&rotated(&bell), &[0], tol).unwrap(), || {
            "rotated Bell state passes PPT".into()
        })?;
        check(is_ppt(&rotated(&correlated_mixture()), &[0], tol).unwrap(), || {
            "rotated mixture fails PPT".into()
        })?;
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let mut rng = rng(0x5eed);
    let suites: [(&str, Suite); 5] = [
        ("repertoire normalization", |r| property_repertoires(r)),
        ("ID/KLD", |r| property_id(r)),
        ("QID", |r| property_qid(r)),
        ("partition oracle", |r| property_partitions(r)),
        ("PPT", |r| property_ppt(r)),
    ];
    for (name, suite) in suites {
        suite(&mut rng).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{INSTANCES} randomized instances per suite"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("classical COPY-XOR reproduction", criterion_1),
        ("quantum-classical convergence", criterion_2),
        ("Hadamard-basis CNOT", criterion_3),
        ("Bell generation", criterion_4),
        ("separable input", criterion_5),
        ("mixed-state input", criterion_6),
        ("identity-dynamics structures", criterion_7),
        ("three-qubit extension", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {reason}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
