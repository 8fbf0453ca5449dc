//! Dense complex-matrix substrate for the quantum pipeline.
//!
//! Basis indices are big-endian: subsystem 0 is the most significant digit of
//! a computational-basis index. Every function here is a pure function of its
//! inputs.

use std::ops::Range;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default tolerance for Hermiticity, trace, positivity and purity checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Hermiticity, trace, PSD and purity checks.
    pub numeric: f64,
    /// Eigenvalues closer than this are treated as one degenerate level.
    pub degeneracy: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::uniform(DEFAULT_TOLERANCE)
    }
}

impl Tolerance {
    pub fn uniform(tol: f64) -> Self {
        Tolerance {
            numeric: tol,
            degeneracy: tol,
        }
    }
}

/// Mixed-radix digits of `index`, most significant first.
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

/// Inverse of [`digits`].
pub fn index_of(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest entrywise deviation of `m` from its conjugate transpose.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `(m + m†) / 2`
pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order. Inside each degenerate level
/// the basis is made canonical so that repeated runs, and subspaces spanned
/// by computational-basis vectors, always yield the same vectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, paired with `values`.
    pub vectors: CMatrix,
    degeneracy: f64,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.vectors.column(i).into_owned()
    }

    /// Index ranges of degenerate eigenvalue levels, in descending order.
    pub fn levels(&self) -> Vec<Range<usize>> {
        group_levels(&self.values, self.degeneracy)
    }

    /// `Σ λ_i |i⟩⟨i|`
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.vectors.nrows();
        let mut out = CMatrix::zeros(n, n);
        for (i, &lambda) in self.values.iter().enumerate() {
            let v = self.vectors.column(i);
            out += (v * v.adjoint()).scale(lambda);
        }
        out
    }
}

fn group_levels(values: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || (values[start] - values[i]).abs() > tol {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Rotate the global phase of `v` so its first dominant component is real and positive.
fn fix_phase(v: &mut CVector) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    if let Some(pivot) = v.iter().find(|z| z.norm() >= max - 1e-9) {
        let phase = pivot.conj() / pivot.norm();
        *v *= phase;
    }
}

fn sorted_eigen(m: &CMatrix, descending: bool) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (eig.eigenvalues[a], eig.eigenvalues[b]);
        if descending {
            y.total_cmp(&x)
        } else {
            x.total_cmp(&y)
        }
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

pub fn hermitian_eig(m: &CMatrix, tol: Tolerance) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::Numeric(format!(
            "eigendecomposition of a non-square {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    if !is_finite(m) {
        return Err(Error::Numeric("matrix has non-finite entries".into()));
    }
    let residual = hermitian_residual(m);
    if residual > tol.numeric {
        return Err(Error::Numeric(format!(
            "matrix is not Hermitian (max |M - M†| = {residual:.3e})"
        )));
    }
    let n = m.nrows();
    let (values, mut vectors) = sorted_eigen(&symmetrize(m), true);

    // Pin down the basis inside each degenerate level by diagonalising the
    // compressed index operator diag(0, 1, ..., n-1).
    let index_op = CMatrix::from_diagonal(&CVector::from_iterator(n, (0..n).map(|k| c(k as f64))));
    for level in group_levels(&values, tol.degeneracy) {
        if level.len() < 2 {
            continue;
        }
        let basis = vectors.columns(level.start, level.len()).into_owned();
        let compressed = basis.adjoint() * &index_op * &basis;
        let (_, rotation) = sorted_eigen(&symmetrize(&compressed), false);
        let rotated = basis * rotation;
        vectors.columns_mut(level.start, level.len()).copy_from(&rotated);
    }
    for mut col in vectors.column_iter_mut() {
        let mut v = col.clone_owned();
        fix_phase(&mut v);
        col.copy_from(&v);
    }
    Ok(EigenDecomposition {
        values,
        vectors,
        degeneracy: tol.degeneracy,
    })
}

/// Density matrix over a list of subsystems with the given dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validating constructor.
    pub fn new(dims: Vec<usize>, matrix: CMatrix, tol: f64) -> Result<Self> {
        let rho = DensityMatrix { dims, matrix };
        rho.validate(tol)?;
        Ok(rho)
    }

    /// Trusted constructor for matrices produced by invariant-preserving operations.
    pub(crate) fn from_raw(dims: Vec<usize>, matrix: CMatrix) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.nrows());
        DensityMatrix { dims, matrix }
    }

    /// `|ψ⟩⟨ψ|` for a state vector whose squared norm is within `tol` of one.
    /// The vector is renormalised before use.
    pub fn from_pure(dims: Vec<usize>, psi: &CVector, tol: f64) -> Result<Self> {
        let dim: usize = dims.iter().product();
        if psi.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: psi.len(),
            });
        }
        let norm = psi.norm();
        if (norm * norm - 1.0).abs() > tol {
            return Err(Error::validation(
                "amplitudes",
                format!("state vector is not normalised (norm {norm:.12})"),
            ));
        }
        let psi = psi.unscale(norm);
        Ok(DensityMatrix {
            dims,
            matrix: &psi * psi.adjoint(),
        })
    }

    pub fn basis_state(dims: Vec<usize>, index: usize) -> Self {
        let dim: usize = dims.iter().product();
        let mut m = CMatrix::zeros(dim, dim);
        m[(index, index)] = c(1.0);
        DensityMatrix { dims, matrix: m }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let dim: usize = dims.iter().product();
        DensityMatrix {
            dims,
            matrix: CMatrix::identity(dim, dim).unscale(dim as f64),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        purity(self) >= 1.0 - tol
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let dim: usize = self.dims.iter().product();
        if !self.matrix.is_square() || self.matrix.nrows() != dim {
            return Err(Error::validation(
                "matrix",
                format!(
                    "expected {dim}x{dim} for subsystem dims {:?}, got {}x{}",
                    self.dims,
                    self.matrix.nrows(),
                    self.matrix.ncols()
                ),
            ));
        }
        if !is_finite(&self.matrix) {
            return Err(Error::validation("matrix", "non-finite entry"));
        }
        let herm = hermitian_residual(&self.matrix);
        if herm > tol {
            return Err(Error::validation(
                "matrix",
                format!("not Hermitian (max |rho - rho†| = {herm:.3e})"),
            ));
        }
        let tr = self.trace();
        let tr_residual = (tr - c(1.0)).norm();
        if tr_residual > tol {
            return Err(Error::validation(
                "matrix",
                format!("trace is {:.12} (residual {tr_residual:.3e})", tr.re),
            ));
        }
        let eig = hermitian_eig(&self.matrix, Tolerance::uniform(tol))?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::validation(
                "matrix",
                format!("not positive semidefinite (min eigenvalue {min:.3e})"),
            ));
        }
        Ok(())
    }
}

/// Unitary operator on a list of subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl UnitaryOperator {
    pub fn new(dims: Vec<usize>, matrix: CMatrix, tol: f64) -> Result<Self> {
        let dim: usize = dims.iter().product();
        if !matrix.is_square() || matrix.nrows() != dim {
            return Err(Error::validation(
                "unitary",
                format!("expected {dim}x{dim}, got {}x{}", matrix.nrows(), matrix.ncols()),
            ));
        }
        if !is_finite(&matrix) {
            return Err(Error::validation("unitary", "non-finite entry"));
        }
        let residual = unitarity_residual(&matrix);
        if residual > tol {
            return Err(Error::validation(
                "unitary",
                format!("not unitary (||U†U - I||_F = {residual:.3e})"),
            ));
        }
        Ok(UnitaryOperator { dims, matrix })
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let dim: usize = dims.iter().product();
        UnitaryOperator {
            dims,
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        UnitaryOperator {
            dims: self.dims.clone(),
            matrix: self.matrix.adjoint(),
        }
    }
}

/// Frobenius norm of `U†U - I`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - CMatrix::identity(n, n)).norm()
}

fn check_subsystems(dims: &[usize], subsystems: &[usize]) -> Result<()> {
    for (k, &s) in subsystems.iter().enumerate() {
        if s >= dims.len() {
            return Err(Error::Usage(format!(
                "subsystem {s} out of range for {} subsystems",
                dims.len()
            )));
        }
        if subsystems[..k].contains(&s) {
            return Err(Error::Usage(format!("subsystem {s} listed twice")));
        }
    }
    Ok(())
}

/// Reduced density matrix on `keep`, laid out in ascending subsystem order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::Usage("partial trace must keep at least one subsystem".into()));
    }
    check_subsystems(&rho.dims, keep)?;
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    let dims = &rho.dims;
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();

    let dim = rho.dim();
    let split: Vec<(usize, usize)> = (0..dim)
        .map(|i| {
            let d = digits(i, dims);
            let kd: Vec<usize> = keep.iter().map(|&k| d[k]).collect();
            let td: Vec<usize> = traced.iter().map(|&k| d[k]).collect();
            (index_of(&kd, &kept_dims), index_of(&td, &traced_dims))
        })
        .collect();

    let out_dim: usize = kept_dims.iter().product();
    let mut out = CMatrix::zeros(out_dim, out_dim);
    for r in 0..dim {
        for col in 0..dim {
            if split[r].1 == split[col].1 {
                out[(split[r].0, split[col].0)] += rho.matrix[(r, col)];
            }
        }
    }
    Ok(DensityMatrix::from_raw(kept_dims, out))
}

/// Transpose applied to the indices of the listed subsystems only.
pub fn partial_transpose_many(rho: &DensityMatrix, subsystems: &[usize]) -> Result<CMatrix> {
    check_subsystems(&rho.dims, subsystems)?;
    let dims = &rho.dims;
    let dim = rho.dim();
    let table: Vec<Vec<usize>> = (0..dim).map(|i| digits(i, dims)).collect();
    let mut out = CMatrix::zeros(dim, dim);
    for r in 0..dim {
        for col in 0..dim {
            let mut rd = table[r].clone();
            let mut cd = table[col].clone();
            for &s in subsystems {
                std::mem::swap(&mut rd[s], &mut cd[s]);
            }
            out[(index_of(&rd, dims), index_of(&cd, dims))] = rho.matrix[(r, col)];
        }
    }
    Ok(out)
}

pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<CMatrix> {
    partial_transpose_many(rho, &[subsystem])
}

/// Peres–Horodecki test across the cut `subsystems | rest`.
pub fn is_ppt(rho: &DensityMatrix, subsystems: &[usize], tol: Tolerance) -> Result<bool> {
    let pt = partial_transpose_many(rho, subsystems)?;
    let eig = hermitian_eig(&pt, tol)?;
    Ok(eig.values.iter().all(|&v| v >= -tol.numeric))
}

/// `tr(ρ²)`
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix.iter().map(|z| z.norm_sqr()).sum()
}

pub fn apply_unitary(u: &UnitaryOperator, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if u.dims != rho.dims {
        return Err(Error::Dimension {
            expected: u.matrix.nrows(),
            found: rho.dim(),
        });
    }
    let out = &u.matrix * &rho.matrix * u.matrix.adjoint();
    Ok(DensityMatrix::from_raw(rho.dims.clone(), out))
}

/// `U† ρ U`
pub fn apply_adjoint(u: &UnitaryOperator, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if u.dims != rho.dims {
        return Err(Error::Dimension {
            expected: u.matrix.nrows(),
            found: rho.dim(),
        });
    }
    let out = u.matrix.adjoint() * &rho.matrix * &u.matrix;
    Ok(DensityMatrix::from_raw(rho.dims.clone(), out))
}

/// Tensor product of factors living on disjoint, individually sorted subsystem
/// sets, laid out over the union of those sets in ascending order.
///
/// `dim_of` maps a global subsystem index to its dimension.
pub fn tensor_over(factors: &[(&[usize], &CMatrix)], dim_of: impl Fn(usize) -> usize) -> (Vec<usize>, CMatrix) {
    let mut union: Vec<usize> = factors.iter().flat_map(|(u, _)| u.iter().copied()).collect();
    union.sort_unstable();
    debug_assert!(union.windows(2).all(|w| w[0] < w[1]), "factors overlap");
    let dims: Vec<usize> = union.iter().map(|&s| dim_of(s)).collect();
    let dim: usize = dims.iter().product();

    let local: Vec<Vec<usize>> = factors
        .iter()
        .map(|(units, _)| {
            let pos: Vec<usize> = units
                .iter()
                .map(|u| union.binary_search(u).expect("unit in union"))
                .collect();
            let local_dims: Vec<usize> = pos.iter().map(|&p| dims[p]).collect();
            (0..dim)
                .map(|i| {
                    let d = digits(i, &dims);
                    let ld: Vec<usize> = pos.iter().map(|&p| d[p]).collect();
                    index_of(&ld, &local_dims)
                })
                .collect()
        })
        .collect();

    let out = CMatrix::from_fn(dim, dim, |r, col| {
        factors
            .iter()
            .zip(&local)
            .fold(c(1.0), |acc, ((_, m), loc)| acc * m[(loc[r], loc[col])])
    });
    (union, out)
}
