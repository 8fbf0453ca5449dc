//! Random instances and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_complex::Complex64;
use qphi::classical::ClassicalSystem;
use qphi::partitions::{DisintegratingPartition, Part, UnitSet};
use qphi::tensor::{CMatrix, CVector, DensityMatrix, UnitaryOperator};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre(dim: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| gaussian(rng))
}

/// Haar-random unitary via QR of a complex Gaussian matrix with the phases of
/// R's diagonal divided out.
pub fn random_unitary_matrix(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let qr = ginibre(dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    q
}

pub fn random_unitary(n_qubits: usize, rng: &mut impl Rng) -> UnitaryOperator {
    UnitaryOperator::new(vec![2; n_qubits], random_unitary_matrix(1 << n_qubits, rng), 1e-9).unwrap()
}

pub fn random_ket(dim: usize, rng: &mut impl Rng) -> CVector {
    let v = CVector::from_fn(dim, |_, _| gaussian(rng));
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// Full-rank random density matrix `G G† / tr`.
pub fn random_density_matrix(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let g = ginibre(dim, rng);
    let m = &g * g.adjoint();
    let t = m.trace();
    m / t
}

pub fn random_state(n_qubits: usize, rng: &mut impl Rng) -> DensityMatrix {
    let dim = 1 << n_qubits;
    if rng.random_bool(0.5) {
        DensityMatrix::from_pure(vec![2; n_qubits], &random_ket(dim, rng), 1e-9).unwrap()
    } else {
        DensityMatrix::new(vec![2; n_qubits], random_density_matrix(dim, rng), 1e-9).unwrap()
    }
}

pub fn random_distribution(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

pub fn diag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        values.len(),
        values.iter().map(|&x| Complex64::new(x, 0.0)),
    ))
}

/// Conditionally independent TPM built from random per-unit conditionals,
/// some of them deterministic.
pub fn random_classical_system(rng: &mut impl Rng) -> ClassicalSystem {
    let n = rng.random_range(1..=3);
    let unit_states: Vec<usize> = (0..n).map(|_| if rng.random_bool(0.2) { 3 } else { 2 }).collect();
    let total: usize = unit_states.iter().product();
    let marginals: Vec<Vec<Vec<f64>>> = unit_states
        .iter()
        .map(|&k| {
            (0..total)
                .map(|_| {
                    if rng.random_bool(0.4) {
                        let mut v = vec![0.0; k];
                        v[rng.random_range(0..k)] = 1.0;
                        v
                    } else {
                        random_distribution(k, rng)
                    }
                })
                .collect()
        })
        .collect();
    let tpm = (0..total)
        .map(|s| {
            (0..total)
                .map(|t| {
                    let d = qphi::tensor::digits(t, &unit_states);
                    (0..n).map(|i| marginals[i][s][d[i]]).product()
                })
                .collect()
        })
        .collect();
    ClassicalSystem::new(unit_states, tpm, None, 1e-9).unwrap()
}

pub fn random_subset(units: &UnitSet, rng: &mut impl Rng) -> UnitSet {
    let subsets = units.nonempty_subsets();
    subsets[rng.random_range(0..subsets.len())].clone()
}

/// Every labelling of mechanism and purview units with part labels, filtered
/// on the definition and canonicalised.
pub fn disintegrating_oracle(mechanism: &UnitSet, purview: &UnitSet) -> BTreeSet<DisintegratingPartition> {
    let m: Vec<usize> = mechanism.iter().collect();
    let z: Vec<usize> = purview.iter().collect();
    let total = m.len() + z.len();
    let k = total;
    let mut found = BTreeSet::new();
    for code in 0..k.pow(total as u32) {
        let mut c = code;
        let mut labels = Vec::with_capacity(total);
        for _ in 0..total {
            labels.push(c % k);
            c /= k;
        }
        let parts: Vec<Part> = (0..k)
            .map(|l| Part {
                mechanism: m
                    .iter()
                    .zip(&labels)
                    .filter(|&(_, &x)| x == l)
                    .map(|(&u, _)| u)
                    .collect(),
                purview: z
                    .iter()
                    .zip(&labels[m.len()..])
                    .filter(|&(_, &x)| x == l)
                    .map(|(&u, _)| u)
                    .collect(),
            })
            .filter(|p| !(p.mechanism.is_empty() && p.purview.is_empty()))
            .collect();
        if parts.len() < 2 {
            continue;
        }
        if parts.iter().any(|p| p.mechanism == *mechanism && !p.purview.is_empty()) {
            continue;
        }
        found.insert(DisintegratingPartition::new(parts));
    }
    found
}

/// Projector onto the span of the given vectors.
pub fn projector(vectors: &[CVector]) -> CMatrix {
    let d = vectors[0].len();
    vectors
        .iter()
        .fold(CMatrix::zeros(d, d), |acc, v| acc + v * v.adjoint())
}
