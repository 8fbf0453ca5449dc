//! Mechanism integrated information for discrete causal networks given by a
//! state-by-state transition probability matrix.
//!
//! Units are indexed `0..n`. A state index encodes unit 0 as the most
//! significant digit. The same unit index names a unit at `t` (mechanisms of
//! effects, purviews of causes) and at `t+1` (purviews of effects,
//! mechanisms of causes).

mod analysis;
pub mod measures;

pub use analysis::{ClassicalAnalysis, ClassicalDistinction};
pub use measures::{intrinsic_difference, kld, IntrinsicDifference};

use crate::error::{Error, Result};
use crate::partitions::UnitSet;
use crate::tensor::{digits, index_of};

/// Units held fixed in a given state throughout the analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct Background {
    pub units: UnitSet,
    /// One state per entry of `units`.
    pub state: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ClassicalSystem {
    unit_states: Vec<usize>,
    tpm: Vec<Vec<f64>>,
    /// `marginals[i][s][v] = p(S_i,t+1 = v | S_t = s)`
    marginals: Vec<Vec<Vec<f64>>>,
    background: Option<Background>,
    /// Digit expansion of every system state.
    table: Vec<Vec<usize>>,
}

impl ClassicalSystem {
    /// Checks shape, row-stochasticity and conditional independence of the
    /// TPM, and the background assignment.
    pub fn new(unit_states: Vec<usize>, tpm: Vec<Vec<f64>>, background: Option<Background>, tol: f64) -> Result<Self> {
        if unit_states.is_empty() {
            return Err(Error::validation("unit_states", "system has no units"));
        }
        if let Some(i) = unit_states.iter().position(|&k| k < 2) {
            return Err(Error::validation(
                format!("unit_states[{i}]"),
                "every unit needs at least two states",
            ));
        }
        let n_states: usize = unit_states.iter().product();
        if tpm.len() != n_states {
            return Err(Error::validation(
                "tpm",
                format!("expected {n_states} rows, found {}", tpm.len()),
            ));
        }
        for (r, row) in tpm.iter().enumerate() {
            if row.len() != n_states {
                return Err(Error::validation(
                    format!("tpm[{r}]"),
                    format!("expected {n_states} columns, found {}", row.len()),
                ));
            }
            if let Some(c) = row.iter().position(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::validation(
                    format!("tpm[{r}][{c}]"),
                    format!("entry {} is not a probability", row[c]),
                ));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::validation(
                    format!("tpm[{r}]"),
                    format!("row sums to {sum} (residual {:.3e})", (sum - 1.0).abs()),
                ));
            }
        }

        let table: Vec<Vec<usize>> = (0..n_states).map(|s| digits(s, &unit_states)).collect();
        let marginals: Vec<Vec<Vec<f64>>> = (0..unit_states.len())
            .map(|i| {
                tpm.iter()
                    .map(|row| {
                        let mut m = vec![0.0; unit_states[i]];
                        for (target, p) in row.iter().enumerate() {
                            m[table[target][i]] += p;
                        }
                        m
                    })
                    .collect()
            })
            .collect();

        for (r, row) in tpm.iter().enumerate() {
            for (target, &p) in row.iter().enumerate() {
                let product: f64 = (0..unit_states.len())
                    .map(|i| marginals[i][r][table[target][i]])
                    .product();
                let residual = (p - product).abs();
                if residual > tol {
                    return Err(Error::validation(
                        format!("tpm[{r}][{target}]"),
                        format!(
                            "units are not conditionally independent given the source state \
                             (product of marginals {product}, residual {residual:.3e})"
                        ),
                    ));
                }
            }
        }

        if let Some(bg) = &background {
            if bg.units.len() != bg.state.len() {
                return Err(Error::validation(
                    "background",
                    "units and state have different lengths",
                ));
            }
            for (k, u) in bg.units.iter().enumerate() {
                if u >= unit_states.len() {
                    return Err(Error::validation(
                        format!("background.units[{k}]"),
                        format!("unit {u} does not exist"),
                    ));
                }
                if bg.state[k] >= unit_states[u] {
                    return Err(Error::validation(
                        format!("background.state[{k}]"),
                        format!("state {} out of range for unit {u}", bg.state[k]),
                    ));
                }
            }
            if bg.units.len() == unit_states.len() {
                return Err(Error::validation("background", "every unit is background"));
            }
        }

        Ok(ClassicalSystem {
            unit_states,
            tpm,
            marginals,
            background,
            table,
        })
    }

    pub fn n_units(&self) -> usize {
        self.unit_states.len()
    }

    pub fn unit_states(&self) -> &[usize] {
        &self.unit_states
    }

    pub fn tpm(&self) -> &[Vec<f64>] {
        &self.tpm
    }

    pub fn background(&self) -> Option<&Background> {
        self.background.as_ref()
    }

    /// Units that are not held as background.
    pub fn free_units(&self) -> UnitSet {
        let all = UnitSet::new(0..self.n_units());
        match &self.background {
            Some(bg) => all.difference(&bg.units),
            None => all,
        }
    }

    pub fn n_states_of(&self, units: &UnitSet) -> usize {
        units.iter().map(|u| self.unit_states[u]).product()
    }

    fn dims_of(&self, units: &UnitSet) -> Vec<usize> {
        units.iter().map(|u| self.unit_states[u]).collect()
    }

    /// Digits of a state index over `units`.
    pub fn state_digits(&self, units: &UnitSet, index: usize) -> Vec<usize> {
        digits(index, &self.dims_of(units))
    }

    pub fn state_index(&self, units: &UnitSet, state: &[usize]) -> usize {
        index_of(state, &self.dims_of(units))
    }

    /// The next state when the TPM row of `state` is deterministic.
    pub fn deterministic_successor(&self, state: &[usize]) -> Option<Vec<usize>> {
        let row = &self.tpm[index_of(state, &self.unit_states)];
        row.iter().position(|&p| p == 1.0).map(|s| self.table[s].clone())
    }

    /// System states agreeing with the fixed assignments and the background.
    fn consistent_states<'a>(&'a self, fixed: &'a [(usize, usize)]) -> impl Iterator<Item = usize> + 'a {
        let bg = self.background.as_ref();
        (0..self.table.len()).filter(move |&s| {
            let d = &self.table[s];
            fixed.iter().all(|&(u, v)| d[u] == v)
                && bg.is_none_or(|bg| bg.units.iter().zip(&bg.state).all(|(u, &v)| d[u] == v))
        })
    }

    fn check_mechanism(&self, units: &UnitSet, state: &[usize]) -> Result<()> {
        if units.len() != state.len() {
            return Err(Error::Usage(format!(
                "mechanism {units} has {} units but {} states",
                units.len(),
                state.len()
            )));
        }
        for (u, &v) in units.iter().zip(state) {
            if u >= self.n_units() {
                return Err(Error::Usage(format!("unit {u} does not exist")));
            }
            if v >= self.unit_states[u] {
                return Err(Error::Usage(format!("state {v} out of range for unit {u}")));
            }
        }
        Ok(())
    }

    fn check_purview(&self, purview: &UnitSet) -> Result<()> {
        if purview.is_empty() {
            return Err(Error::Usage("purview must be nonempty".into()));
        }
        if let Some(u) = purview.iter().find(|&u| u >= self.n_units()) {
            return Err(Error::Usage(format!("unit {u} does not exist")));
        }
        Ok(())
    }

    /// Effect of a mechanism state on one unit, with every other unit
    /// replaced by uniform noise.
    pub fn effect_repertoire_single(
        &self,
        mechanism: &UnitSet,
        state: &[usize],
        unit: usize,
    ) -> Result<ClassicalRepertoire> {
        self.check_mechanism(mechanism, state)?;
        self.check_purview(&UnitSet::new([unit]))?;
        let fixed: Vec<(usize, usize)> = mechanism.iter().zip(state.iter().copied()).collect();
        let mut probs = vec![0.0; self.unit_states[unit]];
        let mut count = 0usize;
        for s in self.consistent_states(&fixed) {
            for (acc, p) in probs.iter_mut().zip(&self.marginals[unit][s]) {
                *acc += p;
            }
            count += 1;
        }
        for p in &mut probs {
            *p /= count as f64;
        }
        Ok(ClassicalRepertoire {
            purview: UnitSet::new([unit]),
            probabilities: probs,
        })
    }

    /// Product over purview units of the single-unit effect repertoires. An
    /// empty mechanism yields the fully partitioned effect repertoire.
    pub fn effect_repertoire(
        &self,
        mechanism: &UnitSet,
        state: &[usize],
        purview: &UnitSet,
    ) -> Result<ClassicalRepertoire> {
        self.check_purview(purview)?;
        let singles = purview
            .iter()
            .map(|z| self.effect_repertoire_single(mechanism, state, z))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassicalRepertoire::product(&singles, &self.unit_states))
    }

    /// Average of the effect repertoire over all states of `mechanism`.
    pub fn unconstrained_effect(&self, purview: &UnitSet, mechanism: &UnitSet) -> Result<ClassicalRepertoire> {
        self.check_purview(purview)?;
        let n = self.n_states_of(mechanism);
        let mut probs = vec![0.0; self.n_states_of(purview)];
        for m in 0..n {
            let rep = self.effect_repertoire(mechanism, &self.state_digits(mechanism, m), purview)?;
            for (acc, p) in probs.iter_mut().zip(&rep.probabilities) {
                *acc += p;
            }
        }
        for p in &mut probs {
            *p /= n as f64;
        }
        Ok(ClassicalRepertoire {
            purview: purview.clone(),
            probabilities: probs,
        })
    }

    /// Cause repertoire by Bayes' rule over per-unit likelihoods with units
    /// outside the purview marginalised uniformly. `None` when the mechanism
    /// state is unreachable from every purview state. An empty mechanism
    /// yields the uniform distribution.
    pub fn cause_repertoire(
        &self,
        mechanism: &UnitSet,
        state: &[usize],
        purview: &UnitSet,
    ) -> Result<Option<ClassicalRepertoire>> {
        self.check_mechanism(mechanism, state)?;
        self.check_purview(purview)?;
        let n = self.n_states_of(purview);
        let mut probs = vec![1.0; n];
        for (z, slot) in probs.iter_mut().enumerate() {
            let fixed: Vec<(usize, usize)> = purview.iter().zip(self.state_digits(purview, z)).collect();
            for (unit, &value) in mechanism.iter().zip(state) {
                let mut sum = 0.0;
                let mut count = 0usize;
                for s in self.consistent_states(&fixed) {
                    sum += self.marginals[unit][s][value];
                    count += 1;
                }
                *slot *= sum / count as f64;
            }
        }
        let total: f64 = probs.iter().sum();
        if total <= 0.0 {
            return Ok(None);
        }
        for p in &mut probs {
            *p /= total;
        }
        Ok(Some(ClassicalRepertoire {
            purview: purview.clone(),
            probabilities: probs,
        }))
    }

    pub fn unconstrained_cause(&self, purview: &UnitSet) -> Result<ClassicalRepertoire> {
        self.check_purview(purview)?;
        let n = self.n_states_of(purview);
        Ok(ClassicalRepertoire {
            purview: purview.clone(),
            probabilities: vec![1.0 / n as f64; n],
        })
    }
}

/// Distribution over the joint states of a purview (units ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalRepertoire {
    pub purview: UnitSet,
    pub probabilities: Vec<f64>,
}

impl ClassicalRepertoire {
    /// Product distribution over the union of the factors' purviews.
    /// Factors must have pairwise disjoint purviews; empty ones count as 1.
    pub fn product(factors: &[ClassicalRepertoire], unit_states: &[usize]) -> ClassicalRepertoire {
        let factors: Vec<&ClassicalRepertoire> = factors.iter().filter(|f| !f.purview.is_empty()).collect();
        let purview = UnitSet::new(factors.iter().flat_map(|f| f.purview.iter()));
        let dims: Vec<usize> = purview.iter().map(|u| unit_states[u]).collect();
        let n: usize = dims.iter().product();
        let probabilities = (0..n)
            .map(|joint| {
                let d = digits(joint, &dims);
                factors
                    .iter()
                    .map(|f| {
                        let local: Vec<usize> = f
                            .purview
                            .iter()
                            .map(|u| d[purview.position(u).expect("unit in union")])
                            .collect();
                        let local_dims: Vec<usize> = f.purview.iter().map(|u| unit_states[u]).collect();
                        f.probabilities[index_of(&local, &local_dims)]
                    })
                    .product()
            })
            .collect();
        ClassicalRepertoire { purview, probabilities }
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}
