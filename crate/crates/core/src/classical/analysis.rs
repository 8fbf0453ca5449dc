use super::measures::{intrinsic_difference, pointwise};
use super::{ClassicalRepertoire, ClassicalSystem};
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::partitions::{enumerate_disintegrating, normalization, DisintegratingPartition, UnitSet};
use crate::search::{self, CausalModel, Direction, Distinction, Mip, PurviewEvaluation};
use crate::tensor::Tolerance;

/// Intrinsic states are purview state indices.
pub type ClassicalDistinction = Distinction<usize>;

/// A classical system observed in a state at `t` (for effects) and, when
/// known, the following state at `t+1` (for causes).
#[derive(Debug, Clone)]
pub struct ClassicalAnalysis {
    system: ClassicalSystem,
    state_t: Vec<usize>,
    state_t1: Option<Vec<usize>>,
    tolerance: Tolerance,
}

impl ClassicalAnalysis {
    /// When `state_t1` is omitted it is derived from a deterministic TPM row;
    /// otherwise cause queries fail.
    pub fn new(
        system: ClassicalSystem,
        state_t: Vec<usize>,
        state_t1: Option<Vec<usize>>,
        tolerance: Tolerance,
    ) -> Result<Self> {
        check_state(&system, &state_t, "state_t")?;
        let state_t1 = match state_t1 {
            Some(s) => {
                check_state(&system, &s, "state_t1")?;
                Some(s)
            }
            None => system.deterministic_successor(&state_t),
        };
        Ok(ClassicalAnalysis {
            system,
            state_t,
            state_t1,
            tolerance,
        })
    }

    pub fn system(&self) -> &ClassicalSystem {
        &self.system
    }

    pub fn state_t(&self) -> &[usize] {
        &self.state_t
    }

    pub fn state_t1(&self) -> Option<&[usize]> {
        self.state_t1.as_deref()
    }

    /// State of `mechanism` at the time the direction conditions on.
    pub fn mechanism_state(&self, direction: Direction, mechanism: &UnitSet) -> Result<Vec<usize>> {
        let full = match direction {
            Direction::Effect => &self.state_t,
            Direction::Cause => self.state_t1.as_ref().ok_or_else(|| {
                Error::Usage("cause analysis needs state_t1 (the TPM row of state_t is not deterministic)".into())
            })?,
        };
        mechanism
            .iter()
            .map(|u| {
                full.get(u)
                    .copied()
                    .ok_or_else(|| Error::Usage(format!("unit {u} does not exist")))
            })
            .collect()
    }

    fn check_mechanism(&self, mechanism: &UnitSet) -> Result<()> {
        if mechanism.is_empty() {
            return Err(Error::Usage("mechanism must be nonempty".into()));
        }
        let free = self.system.free_units();
        if let Some(u) = mechanism.iter().find(|&u| !free.contains(u)) {
            return Err(Error::Usage(format!("unit {u} is not a free unit of the system")));
        }
        Ok(())
    }

    fn unconstrained(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
    ) -> Result<ClassicalRepertoire> {
        match direction {
            Direction::Effect => self.system.unconstrained_effect(purview, mechanism),
            Direction::Cause => self.system.unconstrained_cause(purview),
        }
    }

    /// Intrinsic information of `mechanism` over `purview` and the tied
    /// intrinsic states. Unreachable cause states give zero and no states.
    pub fn intrinsic_information(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
    ) -> Result<(f64, Vec<usize>)> {
        self.check_mechanism(mechanism)?;
        match self.repertoire(direction, mechanism, purview)? {
            Some(rep) => self.intrinsic(direction, mechanism, purview, &rep),
            None => Ok((0.0, Vec::new())),
        }
    }

    /// Product over the parts of `theta` of the part repertoires.
    pub fn partitioned_repertoire(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
        theta: &DisintegratingPartition,
    ) -> Result<ClassicalRepertoire> {
        if !theta.is_valid_for(mechanism, purview) {
            return Err(Error::Usage(format!(
                "partition is not a disintegrating partition of {mechanism} over {purview}"
            )));
        }
        let mut factors = Vec::with_capacity(theta.len());
        for part in &theta.parts {
            if part.purview.is_empty() {
                continue;
            }
            let state = self.mechanism_state(direction, &part.mechanism)?;
            let rep = match direction {
                Direction::Effect => self.system.effect_repertoire(&part.mechanism, &state, &part.purview)?,
                Direction::Cause if part.mechanism.is_empty() => self.system.unconstrained_cause(&part.purview)?,
                Direction::Cause => match self.system.cause_repertoire(&part.mechanism, &state, &part.purview)? {
                    Some(rep) => rep,
                    None => self.system.unconstrained_cause(&part.purview)?,
                },
            };
            factors.push(rep);
        }
        Ok(ClassicalRepertoire::product(&factors, self.system.unit_states()))
    }

    /// Integrated information at intrinsic state `state` under `theta`.
    pub fn phi(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
        theta: &DisintegratingPartition,
        state: usize,
    ) -> Result<f64> {
        self.check_mechanism(mechanism)?;
        let Some(rep) = self.repertoire(direction, mechanism, purview)? else {
            return Ok(0.0);
        };
        let part = self.partitioned_repertoire(direction, mechanism, purview, theta)?;
        Ok(self.divergence_at(&rep, &part, &state).max(0.0))
    }

    /// Minimum information partition of `mechanism` over `purview`.
    pub fn evaluate(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
    ) -> Result<PurviewEvaluation<usize>> {
        self.check_mechanism(mechanism)?;
        search::evaluate_purview(self, direction, mechanism, purview)
    }

    pub fn mip(&self, direction: Direction, mechanism: &UnitSet, purview: &UnitSet) -> Result<Option<Mip>> {
        Ok(self.evaluate(direction, mechanism, purview)?.mip)
    }

    pub fn phi_max(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        exec: ExecMode,
    ) -> Result<Option<ClassicalDistinction>> {
        self.check_mechanism(mechanism)?;
        search::phi_max(self, direction, mechanism, exec)
    }

    pub fn unfold(
        &self,
        direction: Direction,
        mechanisms: Option<&[UnitSet]>,
        exec: ExecMode,
    ) -> Result<Vec<ClassicalDistinction>> {
        if let Some(list) = mechanisms {
            for m in list {
                self.check_mechanism(m)?;
            }
        }
        self.mechanism_state(direction, &UnitSet::empty())?;
        search::unfold(self, direction, mechanisms, exec)
    }

    /// All disintegrating partitions with their normalisations, for callers
    /// that want to inspect the whole search space.
    pub fn partitions(&self, mechanism: &UnitSet, purview: &UnitSet) -> Result<Vec<(DisintegratingPartition, usize)>> {
        Ok(enumerate_disintegrating(mechanism, purview)?
            .into_iter()
            .map(|t| {
                let n = normalization(&t, mechanism, purview);
                (t, n)
            })
            .collect())
    }
}

fn check_state(system: &ClassicalSystem, state: &[usize], name: &str) -> Result<()> {
    if state.len() != system.n_units() {
        return Err(Error::validation(
            name,
            format!("expected {} unit states, found {}", system.n_units(), state.len()),
        ));
    }
    for (i, (&v, &k)) in state.iter().zip(system.unit_states()).enumerate() {
        if v >= k {
            return Err(Error::validation(
                format!("{name}[{i}]"),
                format!("state {v} out of range 0..{k}"),
            ));
        }
    }
    if let Some(bg) = system.background() {
        for (u, &v) in bg.units.iter().zip(&bg.state) {
            if state[u] != v {
                return Err(Error::validation(
                    format!("{name}[{u}]"),
                    format!("background unit {u} is held at {v}"),
                ));
            }
        }
    }
    Ok(())
}

impl CausalModel for ClassicalAnalysis {
    type Repertoire = ClassicalRepertoire;
    type State = usize;

    fn units(&self) -> UnitSet {
        self.system.free_units()
    }

    fn tolerance(&self) -> Tolerance {
        self.tolerance
    }

    fn repertoire(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
    ) -> Result<Option<ClassicalRepertoire>> {
        let state = self.mechanism_state(direction, mechanism)?;
        match direction {
            Direction::Effect => self.system.effect_repertoire(mechanism, &state, purview).map(Some),
            Direction::Cause => self.system.cause_repertoire(mechanism, &state, purview),
        }
    }

    fn intrinsic(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
        repertoire: &ClassicalRepertoire,
    ) -> Result<(f64, Vec<usize>)> {
        let unconstrained = self.unconstrained(direction, mechanism, purview)?;
        let id = intrinsic_difference(
            &repertoire.probabilities,
            &unconstrained.probabilities,
            self.tolerance.numeric,
        );
        Ok((id.value, id.states))
    }

    fn partitioned(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
        theta: &DisintegratingPartition,
    ) -> Result<ClassicalRepertoire> {
        self.partitioned_repertoire(direction, mechanism, purview, theta)
    }

    fn divergence_at(&self, repertoire: &ClassicalRepertoire, partitioned: &ClassicalRepertoire, state: &usize) -> f64 {
        pointwise(repertoire.probabilities[*state], partitioned.probabilities[*state])
    }
}
