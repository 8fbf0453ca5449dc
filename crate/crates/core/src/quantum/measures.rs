//! Quantum relative entropy and the quantum intrinsic difference, in bits.
//!
//! Eigenvalues at or below the numeric tolerance count as zero: they carry no
//! weight when they belong to the first argument and mark missing support when
//! they belong to the second.

use crate::error::Result;
use crate::search::approx_eq;
use crate::tensor::{hermitian_eig, CMatrix, CVector, EigenDecomposition, Tolerance};

/// `p·(log₂ p − ⟨v| log₂ σ |v⟩)` for an eigenpair `(p, v)` of the first
/// argument against the decomposition of `σ`.
pub fn eigen_divergence(p: f64, v: &CVector, sigma: &EigenDecomposition, tol: f64) -> f64 {
    if p <= tol {
        return 0.0;
    }
    let mut cross = 0.0;
    for (j, &q) in sigma.values.iter().enumerate() {
        let overlap = sigma.vectors.column(j).dotc(v).norm_sqr();
        if overlap <= tol {
            continue;
        }
        if q <= tol {
            return f64::INFINITY;
        }
        cross += overlap * q.log2();
    }
    p * (p.log2() - cross)
}

/// `tr ρ log₂ ρ − tr ρ log₂ σ`; `+∞` when the support of ρ is not inside that of σ.
pub fn quantum_relative_entropy(rho: &CMatrix, sigma: &CMatrix, tol: Tolerance) -> Result<f64> {
    let r = hermitian_eig(rho, tol)?;
    let s = hermitian_eig(sigma, tol)?;
    let mut total = 0.0;
    for (i, &p) in r.values.iter().enumerate() {
        total += eigen_divergence(p, &r.vector(i), &s, tol.numeric);
    }
    Ok(total)
}

#[derive(Debug, Clone)]
pub struct QuantumIntrinsicDifference {
    pub value: f64,
    /// Eigenvalue and eigenvector of every maximising eigenpair.
    pub states: Vec<(f64, CVector)>,
}

/// Maximum over eigenpairs of ρ of [`eigen_divergence`] against σ.
pub fn qid(rho: &CMatrix, sigma: &CMatrix, tol: Tolerance) -> Result<QuantumIntrinsicDifference> {
    let r = hermitian_eig(rho, tol)?;
    let s = hermitian_eig(sigma, tol)?;
    Ok(qid_decomposed(&r, &s, tol.numeric))
}

pub(crate) fn qid_decomposed(r: &EigenDecomposition, s: &EigenDecomposition, tol: f64) -> QuantumIntrinsicDifference {
    let terms: Vec<f64> = (0..r.len())
        .map(|i| eigen_divergence(r.values[i], &r.vector(i), s, tol))
        .collect();
    let value = terms.iter().copied().fold(0.0, f64::max);
    let states = terms
        .iter()
        .enumerate()
        .filter(|&(i, &t)| r.values[i] > tol && approx_eq(t.max(0.0), value, tol))
        .map(|(i, _)| (r.values[i], r.vector(i)))
        .collect();
    QuantumIntrinsicDifference { value, states }
}
