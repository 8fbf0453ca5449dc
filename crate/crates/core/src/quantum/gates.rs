//! Standard gates and states for small qubit registers, big-endian.

use num_complex::Complex64;

use crate::tensor::{kron, CMatrix, CVector, DensityMatrix, UnitaryOperator};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn ket0() -> CVector {
    CVector::from_vec(vec![re(1.0), re(0.0)])
}

pub fn ket1() -> CVector {
    CVector::from_vec(vec![re(0.0), re(1.0)])
}

pub fn ket_plus() -> CVector {
    CVector::from_vec(vec![re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2)])
}

pub fn ket_minus() -> CVector {
    CVector::from_vec(vec![re(FRAC_1_SQRT_2), re(-FRAC_1_SQRT_2)])
}

/// Tensor product of single-qubit kets, first factor most significant.
pub fn product_ket(factors: &[CVector]) -> CVector {
    let mut out = CVector::from_vec(vec![re(1.0)]);
    for f in factors {
        out = out.kronecker(f);
    }
    out
}

/// Computational basis ket `|index⟩` on `n` qubits.
pub fn basis_ket(n: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(1 << n);
    v[index] = re(1.0);
    v
}

/// (|00⟩ + |11⟩)/√2
pub fn bell_phi_plus() -> CVector {
    let mut v = CVector::zeros(4);
    v[0] = re(FRAC_1_SQRT_2);
    v[3] = re(FRAC_1_SQRT_2);
    v
}

/// (|0…0⟩ + |1…1⟩)/√2 on `n` qubits.
pub fn ghz(n: usize) -> CVector {
    let mut v = CVector::zeros(1 << n);
    v[0] = re(FRAC_1_SQRT_2);
    v[(1 << n) - 1] = re(FRAC_1_SQRT_2);
    v
}

/// Equal superposition of the `n` single-excitation basis states.
pub fn w_state(n: usize) -> CVector {
    let mut v = CVector::zeros(1 << n);
    let amp = 1.0 / (n as f64).sqrt();
    for k in 0..n {
        v[1 << k] = re(amp);
    }
    v
}

pub fn pure(psi: &CVector) -> DensityMatrix {
    let n = psi.len().trailing_zeros() as usize;
    DensityMatrix::from_pure(vec![2; n], psi, 1e-9).expect("normalised ket")
}

pub fn hadamard() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[re(1.0), re(1.0), re(1.0), re(-1.0)]).scale(FRAC_1_SQRT_2)
}

/// Permutation unitary flipping `target` when `control` is 1, on `n` qubits.
pub fn cnot(n: usize, control: usize, target: usize) -> UnitaryOperator {
    assert!(control < n && target < n && control != target, "invalid CNOT wiring");
    let dim = 1 << n;
    let bit = |q: usize| 1 << (n - 1 - q);
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        let j = if i & bit(control) != 0 { i ^ bit(target) } else { i };
        m[(j, i)] = re(1.0);
    }
    UnitaryOperator::new(vec![2; n], m, 1e-12).expect("permutation matrix is unitary")
}

/// Unitary from a matrix that is known to be unitary, e.g. a Kronecker product of gates.
pub fn unitary(matrix: CMatrix) -> UnitaryOperator {
    let n = matrix.nrows().trailing_zeros() as usize;
    UnitaryOperator::new(vec![2; n], matrix, 1e-9).expect("matrix is unitary")
}

pub fn kron_all(factors: &[CMatrix]) -> CMatrix {
    factors.iter().skip(1).fold(factors[0].clone(), |acc, f| kron(&acc, f))
}
