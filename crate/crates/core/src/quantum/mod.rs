//! Mechanism integrated information for qubit registers under unitary
//! dynamics.
//!
//! As in the classical backend, a qubit index names the qubit at `t` and at
//! `t+1`. Effects condition on the state at `t` and land on qubits at `t+1`;
//! causes condition on the state at `t+1` and are traced back through `U†`.

mod analysis;
pub mod gates;
pub mod measures;

pub use analysis::{identity_structure, QState, QuantumAnalysis, QuantumDistinction};
pub use measures::{qid, quantum_relative_entropy, QuantumIntrinsicDifference};

use log::warn;

use crate::error::{Error, Result};
use crate::partitions::{enumerate_set_partitions, SetPartition, UnitSet};
use crate::search::Direction;
use crate::tensor::{
    apply_adjoint, apply_unitary, hermitian_eig, hermitian_residual, is_ppt, partial_trace, purity, symmetrize,
    tensor_over, CMatrix, DensityMatrix, EigenDecomposition, Tolerance, UnitaryOperator,
};

/// Largest register the backend accepts.
pub const MAX_QUBITS: usize = 5;

#[derive(Debug, Clone)]
pub struct QuantumSystem {
    unitary: UnitaryOperator,
}

impl QuantumSystem {
    pub fn new(unitary: UnitaryOperator) -> Result<Self> {
        let n = unitary.dims().len();
        if n == 0 || n > MAX_QUBITS || unitary.dims().iter().any(|&d| d != 2) {
            return Err(Error::validation(
                "unitary",
                format!(
                    "expected an operator on 1 to {MAX_QUBITS} qubits, got dims {:?}",
                    unitary.dims()
                ),
            ));
        }
        Ok(QuantumSystem { unitary })
    }

    pub fn n_qubits(&self) -> usize {
        self.unitary.dims().len()
    }

    pub fn unitary(&self) -> &UnitaryOperator {
        &self.unitary
    }

    pub fn qubits(&self) -> UnitSet {
        UnitSet::new(0..self.n_qubits())
    }

    /// `tr_{S∖Z}( U (ρ^M ⊗ 𝟙/d) U† )` for effects, with `U†·U` for causes.
    /// `mechanism_state` is laid out over `mechanism` in ascending order.
    pub fn conditioned_output(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        mechanism_state: &DensityMatrix,
        purview: &UnitSet,
    ) -> Result<DensityMatrix> {
        let n = self.n_qubits();
        if purview.is_empty() {
            return Err(Error::Usage("purview must be nonempty".into()));
        }
        if let Some(u) = mechanism.iter().chain(purview.iter()).find(|&u| u >= n) {
            return Err(Error::Usage(format!("qubit {u} does not exist")));
        }
        if mechanism_state.dims().len() != mechanism.len() {
            return Err(Error::Dimension {
                expected: 1 << mechanism.len(),
                found: mechanism_state.dim(),
            });
        }
        let rest = self.qubits().difference(mechanism);
        let mixed = DensityMatrix::maximally_mixed(vec![2; rest.len()]);
        let mut factors: Vec<(&[usize], &CMatrix)> = Vec::with_capacity(2);
        if !mechanism.is_empty() {
            factors.push((mechanism.as_slice(), mechanism_state.matrix()));
        }
        if !rest.is_empty() {
            factors.push((rest.as_slice(), mixed.matrix()));
        }
        let (_, joint) = tensor_over(&factors, |_| 2);
        let joint = DensityMatrix::from_raw(vec![2; n], joint);
        let evolved = match direction {
            Direction::Effect => apply_unitary(&self.unitary, &joint)?,
            Direction::Cause => apply_adjoint(&self.unitary, &joint)?,
        };
        partial_trace(&evolved, purview.as_slice())
    }

    /// Effect repertoire: the conditioned output with every entanglement
    /// block of it made independent.
    pub fn effect_repertoire(
        &self,
        mechanism: &UnitSet,
        mechanism_state: &DensityMatrix,
        purview: &UnitSet,
        tol: Tolerance,
    ) -> Result<QuantumRepertoire> {
        let out = self.conditioned_output(Direction::Effect, mechanism, mechanism_state, purview)?;
        let local = entanglement_partition(&out, tol)?;
        let rho = product_over_blocks(&out, &local)?;
        QuantumRepertoire::build(purview.clone(), relabel(&local, purview), rho, tol)
    }

    /// Cause repertoire: normalised product, over entanglement blocks of the
    /// mechanism state, of the block states traced back through `U†`.
    /// `None` when the product has no weight (unreachable mechanism state).
    pub fn cause_repertoire(
        &self,
        mechanism: &UnitSet,
        mechanism_state: &DensityMatrix,
        purview: &UnitSet,
        tol: Tolerance,
    ) -> Result<Option<QuantumRepertoire>> {
        if mechanism.is_empty() {
            return Ok(Some(QuantumRepertoire::maximally_mixed(purview.clone(), tol)?));
        }
        let local = entanglement_partition(mechanism_state, tol)?;
        let d = 1 << purview.len();
        let mut product = CMatrix::identity(d, d);
        for block in &local.blocks {
            let block_state = partial_trace(mechanism_state, block.as_slice())?;
            let units = relabel_set(block, mechanism);
            let back = self.conditioned_output(Direction::Cause, &units, &block_state, purview)?;
            product *= back.matrix();
        }
        let trace = product.trace().re;
        if trace <= tol.numeric {
            return Ok(None);
        }
        product /= num_complex::Complex64::new(trace, 0.0);
        let residual = hermitian_residual(&product);
        if residual > tol.numeric {
            warn!(
                "cause repertoire of {mechanism} over {purview} is not Hermitian \
                 (residual {residual:.3e}); using its Hermitian part"
            );
            product = symmetrize(&product);
            let t = product.trace().re;
            product /= num_complex::Complex64::new(t, 0.0);
        }
        let rho = DensityMatrix::from_raw(vec![2; purview.len()], symmetrize(&product));
        Ok(Some(QuantumRepertoire::build(
            purview.clone(),
            relabel(&local, mechanism),
            rho,
            tol,
        )?))
    }
}

/// A repertoire over purview qubits (ascending), with its eigendecomposition.
#[derive(Debug, Clone)]
pub struct QuantumRepertoire {
    pub purview: UnitSet,
    /// Entanglement blocks the repertoire was built from: purview blocks for
    /// effects, mechanism blocks for causes.
    pub structure: SetPartition,
    pub rho: DensityMatrix,
    pub eig: EigenDecomposition,
}

impl QuantumRepertoire {
    fn build(purview: UnitSet, structure: SetPartition, rho: DensityMatrix, tol: Tolerance) -> Result<Self> {
        let eig = hermitian_eig(rho.matrix(), tol)?;
        Ok(QuantumRepertoire {
            purview,
            structure,
            rho,
            eig,
        })
    }

    pub fn maximally_mixed(purview: UnitSet, tol: Tolerance) -> Result<Self> {
        let rho = DensityMatrix::maximally_mixed(vec![2; purview.len()]);
        let structure = SetPartition {
            blocks: purview.iter().map(|u| UnitSet::new([u])).collect(),
        };
        Self::build(purview, structure, rho, tol)
    }

    /// Tensor product of repertoires on disjoint purviews, laid out over the
    /// union of the purviews.
    pub fn product(factors: &[QuantumRepertoire], tol: Tolerance) -> Result<Self> {
        let parts: Vec<(&[usize], &CMatrix)> = factors.iter().map(|f| (f.purview.as_slice(), f.rho.matrix())).collect();
        let (union, matrix) = tensor_over(&parts, |_| 2);
        let mut blocks: Vec<UnitSet> = factors
            .iter()
            .flat_map(|f| f.structure.blocks.iter().cloned())
            .collect();
        blocks.sort();
        let purview = UnitSet::new(union);
        let rho = DensityMatrix::from_raw(vec![2; purview.len()], matrix);
        Self::build(purview, SetPartition { blocks }, rho, tol)
    }
}

/// Finest partition of the subsystems of `rho` into blocks that are
/// separable from one another, in local subsystem indices.
///
/// Pure states are split greedily: the smallest subset (then lowest indices)
/// whose reduced state is pure is split off, and the rest is scanned again.
/// Mixed states take the first set partition, by decreasing block count, in
/// which every block has a positive partial transpose against the rest. PPT
/// is only necessary for separability, so mixed-state blocks may come out
/// coarser than the true finest partition, never finer.
pub fn entanglement_partition(rho: &DensityMatrix, tol: Tolerance) -> Result<SetPartition> {
    let n = rho.dims().len();
    let all = UnitSet::new(0..n);
    if n == 1 {
        return Ok(SetPartition::single(all));
    }
    if rho.is_pure(tol.numeric) {
        let mut blocks = Vec::new();
        let mut rest = all;
        while !rest.is_empty() {
            let block = rest
                .nonempty_subsets()
                .into_iter()
                .find(|s| {
                    s.len() == rest.len()
                        || partial_trace(rho, s.as_slice()).is_ok_and(|r| purity(&r) >= 1.0 - tol.numeric)
                })
                .expect("the whole remainder is always a block");
            rest = rest.difference(&block);
            blocks.push(block);
        }
        blocks.sort();
        return Ok(SetPartition { blocks });
    }
    let mut candidates = enumerate_set_partitions(&all)?;
    candidates.sort_by_key(|p| std::cmp::Reverse(p.len()));
    for candidate in candidates {
        if candidate.len() == 1 {
            return Ok(candidate);
        }
        let mut separable = true;
        for block in &candidate.blocks {
            if !is_ppt(rho, block.as_slice(), tol)? {
                separable = false;
                break;
            }
        }
        if separable {
            return Ok(candidate);
        }
    }
    unreachable!("the single-block partition is always accepted")
}

/// `⊗_b tr_{S∖b}(ρ)` over the blocks of a local partition, in local layout.
fn product_over_blocks(rho: &DensityMatrix, partition: &SetPartition) -> Result<DensityMatrix> {
    if partition.len() == 1 {
        return Ok(rho.clone());
    }
    let reduced = partition
        .blocks
        .iter()
        .map(|b| partial_trace(rho, b.as_slice()))
        .collect::<Result<Vec<_>>>()?;
    let factors: Vec<(&[usize], &CMatrix)> = partition
        .blocks
        .iter()
        .zip(&reduced)
        .map(|(b, r)| (b.as_slice(), r.matrix()))
        .collect();
    let (_, matrix) = tensor_over(&factors, |_| 2);
    Ok(DensityMatrix::from_raw(rho.dims().to_vec(), matrix))
}

/// Maps local positions in `within` to the units they stand for.
fn relabel_set(local: &UnitSet, within: &UnitSet) -> UnitSet {
    UnitSet::new(local.iter().map(|i| within.as_slice()[i]))
}

fn relabel(partition: &SetPartition, within: &UnitSet) -> SetPartition {
    let mut blocks: Vec<UnitSet> = partition.blocks.iter().map(|b| relabel_set(b, within)).collect();
    blocks.sort();
    SetPartition { blocks }
}
