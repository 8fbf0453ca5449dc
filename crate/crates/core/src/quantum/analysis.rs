use super::measures::{eigen_divergence, qid_decomposed};
use super::{QuantumRepertoire, QuantumSystem};
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::partitions::{DisintegratingPartition, UnitSet};
use crate::search::{self, CausalModel, Direction, Distinction, Mip, PurviewEvaluation};
use crate::tensor::{apply_unitary, partial_trace, CVector, DensityMatrix, Tolerance, UnitaryOperator};

/// An intrinsic state: one eigenvector of a repertoire and its eigenvalue.
#[derive(Debug, Clone)]
pub struct QState {
    pub eigenvalue: f64,
    pub vector: CVector,
}

pub type QuantumDistinction = Distinction<QState>;

/// A qubit register in state `ρ_t`, evolving to `ρ_{t+1} = U ρ_t U†`.
#[derive(Debug, Clone)]
pub struct QuantumAnalysis {
    system: QuantumSystem,
    rho_t: DensityMatrix,
    rho_t1: DensityMatrix,
    tolerance: Tolerance,
}

impl QuantumAnalysis {
    pub fn new(system: QuantumSystem, rho_t: DensityMatrix, tolerance: Tolerance) -> Result<Self> {
        if rho_t.dims() != system.unitary().dims() {
            return Err(Error::validation(
                "state",
                format!(
                    "state has dims {:?} but the unitary acts on {:?}",
                    rho_t.dims(),
                    system.unitary().dims()
                ),
            ));
        }
        let rho_t1 = apply_unitary(system.unitary(), &rho_t)?;
        Ok(QuantumAnalysis {
            system,
            rho_t,
            rho_t1,
            tolerance,
        })
    }

    pub fn system(&self) -> &QuantumSystem {
        &self.system
    }

    pub fn state_t(&self) -> &DensityMatrix {
        &self.rho_t
    }

    pub fn state_t1(&self) -> &DensityMatrix {
        &self.rho_t1
    }

    /// Reduced state of a nonempty `mechanism` at the time the direction
    /// conditions on.
    pub fn mechanism_state(&self, direction: Direction, mechanism: &UnitSet) -> Result<DensityMatrix> {
        let full = match direction {
            Direction::Effect => &self.rho_t,
            Direction::Cause => &self.rho_t1,
        };
        partial_trace(full, mechanism.as_slice())
    }

    fn check_mechanism(&self, mechanism: &UnitSet) -> Result<()> {
        if mechanism.is_empty() {
            return Err(Error::Usage("mechanism must be nonempty".into()));
        }
        if let Some(u) = mechanism.iter().find(|&u| u >= self.system.n_qubits()) {
            return Err(Error::Usage(format!("qubit {u} does not exist")));
        }
        Ok(())
    }

    fn part_repertoire(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
    ) -> Result<Option<QuantumRepertoire>> {
        let tol = self.tolerance;
        if mechanism.is_empty() {
            return QuantumRepertoire::maximally_mixed(purview.clone(), tol).map(Some);
        }
        let state = self.mechanism_state(direction, mechanism)?;
        match direction {
            Direction::Effect => self.system.effect_repertoire(mechanism, &state, purview, tol).map(Some),
            Direction::Cause => self.system.cause_repertoire(mechanism, &state, purview, tol),
        }
    }

    pub fn q_intrinsic_information(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
    ) -> Result<(f64, Vec<QState>)> {
        self.check_mechanism(mechanism)?;
        match self.repertoire(direction, mechanism, purview)? {
            Some(rep) => self.intrinsic(direction, mechanism, purview, &rep),
            None => Ok((0.0, Vec::new())),
        }
    }

    /// Tensor product over the parts of `theta` of the part repertoires.
    pub fn q_partitioned_repertoire(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
        theta: &DisintegratingPartition,
    ) -> Result<QuantumRepertoire> {
        if !theta.is_valid_for(mechanism, purview) {
            return Err(Error::Usage(format!(
                "partition is not a disintegrating partition of {mechanism} over {purview}"
            )));
        }
        let mut factors = Vec::with_capacity(theta.len());
        for part in theta.parts.iter().filter(|p| !p.purview.is_empty()) {
            let rep = match self.part_repertoire(direction, &part.mechanism, &part.purview)? {
                Some(rep) => rep,
                None => QuantumRepertoire::maximally_mixed(part.purview.clone(), self.tolerance)?,
            };
            factors.push(rep);
        }
        QuantumRepertoire::product(&factors, self.tolerance)
    }

    /// Integrated information at one intrinsic eigenstate under `theta`.
    pub fn q_phi(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
        theta: &DisintegratingPartition,
        state: &QState,
    ) -> Result<f64> {
        self.check_mechanism(mechanism)?;
        let Some(rep) = self.repertoire(direction, mechanism, purview)? else {
            return Ok(0.0);
        };
        let part = self.q_partitioned_repertoire(direction, mechanism, purview, theta)?;
        Ok(self.divergence_at(&rep, &part, state).max(0.0))
    }

    pub fn evaluate(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
    ) -> Result<PurviewEvaluation<QState>> {
        self.check_mechanism(mechanism)?;
        search::evaluate_purview(self, direction, mechanism, purview)
    }

    pub fn q_mip(&self, direction: Direction, mechanism: &UnitSet, purview: &UnitSet) -> Result<Option<Mip>> {
        Ok(self.evaluate(direction, mechanism, purview)?.mip)
    }

    pub fn q_phi_max(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        exec: ExecMode,
    ) -> Result<Option<QuantumDistinction>> {
        self.check_mechanism(mechanism)?;
        search::phi_max(self, direction, mechanism, exec)
    }

    pub fn q_unfold(
        &self,
        direction: Direction,
        mechanisms: Option<&[UnitSet]>,
        exec: ExecMode,
    ) -> Result<Vec<QuantumDistinction>> {
        if let Some(list) = mechanisms {
            for m in list {
                self.check_mechanism(m)?;
            }
        }
        search::unfold(self, direction, mechanisms, exec)
    }
}

/// Distinctions of `state` under identity dynamics. Causes and effects
/// coincide there, so only effects are computed.
pub fn identity_structure(
    state: &DensityMatrix,
    tolerance: Tolerance,
    exec: ExecMode,
) -> Result<Vec<QuantumDistinction>> {
    let system = QuantumSystem::new(UnitaryOperator::identity(state.dims().to_vec()))?;
    QuantumAnalysis::new(system, state.clone(), tolerance)?.q_unfold(Direction::Effect, None, exec)
}

impl CausalModel for QuantumAnalysis {
    type Repertoire = QuantumRepertoire;
    type State = QState;

    fn units(&self) -> UnitSet {
        self.system.qubits()
    }

    fn tolerance(&self) -> Tolerance {
        self.tolerance
    }

    fn repertoire(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
    ) -> Result<Option<QuantumRepertoire>> {
        self.part_repertoire(direction, mechanism, purview)
    }

    /// QID against the maximally mixed state; the intrinsic states span the
    /// top eigenspace of the repertoire.
    fn intrinsic(
        &self,
        _direction: Direction,
        _mechanism: &UnitSet,
        purview: &UnitSet,
        repertoire: &QuantumRepertoire,
    ) -> Result<(f64, Vec<QState>)> {
        let mixed = QuantumRepertoire::maximally_mixed(purview.clone(), self.tolerance)?;
        let id = qid_decomposed(&repertoire.eig, &mixed.eig, self.tolerance.numeric);
        let eig = &repertoire.eig;
        let states = eig.levels()[0]
            .clone()
            .filter(|&i| eig.values[i] > self.tolerance.numeric)
            .map(|i| QState {
                eigenvalue: eig.values[i],
                vector: eig.vector(i),
            })
            .collect();
        Ok((id.value, states))
    }

    fn partitioned(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
        theta: &DisintegratingPartition,
    ) -> Result<QuantumRepertoire> {
        self.q_partitioned_repertoire(direction, mechanism, purview, theta)
    }

    fn divergence_at(&self, _repertoire: &QuantumRepertoire, partitioned: &QuantumRepertoire, state: &QState) -> f64 {
        eigen_divergence(
            state.eigenvalue,
            &state.vector,
            &partitioned.eig,
            self.tolerance.numeric,
        )
    }
}
