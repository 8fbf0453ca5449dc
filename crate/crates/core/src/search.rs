//! Backend-independent search: minimum information partition, purview
//! maximisation and unfolding over mechanisms.
//!
//! Both backends implement [`CausalModel`]; everything in this module is
//! shared so the classical and quantum pipelines apply identical selection
//! and tie rules.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exec::ExecMode;
use crate::partitions::{enumerate_disintegrating, normalization, DisintegratingPartition, UnitSet};
use crate::tensor::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Cause,
    Effect,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Cause => "cause",
            Direction::Effect => "effect",
        })
    }
}

/// Analysis settings shared by both backends.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Options {
    pub tolerance: Tolerance,
    pub exec: ExecMode,
}

/// A system in a fixed state, viewed through the operations the search needs.
///
/// Mechanism states are owned by the implementor: effects are taken from the
/// state at `t`, causes from the state at `t+1`.
pub trait CausalModel: Sync {
    type Repertoire: Send + Sync;
    type State: Clone + fmt::Debug + Send + Sync;

    /// Units that mechanisms and purviews are drawn from.
    fn units(&self) -> UnitSet;

    fn tolerance(&self) -> Tolerance;

    /// Constrained repertoire, or `None` when the mechanism state cannot be
    /// produced by any purview state.
    fn repertoire(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
    ) -> Result<Option<Self::Repertoire>>;

    /// Intrinsic information of `repertoire` relative to the unconstrained
    /// repertoire, with every state that attains it.
    fn intrinsic(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
        repertoire: &Self::Repertoire,
    ) -> Result<(f64, Vec<Self::State>)>;

    fn partitioned(
        &self,
        direction: Direction,
        mechanism: &UnitSet,
        purview: &UnitSet,
        theta: &DisintegratingPartition,
    ) -> Result<Self::Repertoire>;

    /// Pointwise divergence at `state` between the constrained and
    /// partitioned repertoires. May be negative or `+inf`.
    fn divergence_at(&self, repertoire: &Self::Repertoire, partitioned: &Self::Repertoire, state: &Self::State) -> f64;
}

pub(crate) fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        a == b
    } else {
        (a - b).abs() <= tol
    }
}

/// Minimum information partition for one intrinsic state.
#[derive(Debug, Clone, PartialEq)]
pub struct Mip {
    pub partition: DisintegratingPartition,
    pub normalization: usize,
    /// Unnormalised integrated information at the partition.
    pub phi: f64,
}

/// Result of evaluating one mechanism over one purview.
#[derive(Debug, Clone)]
pub struct PurviewEvaluation<S> {
    pub purview: UnitSet,
    /// False when the cause repertoire is empty (unreachable mechanism state).
    pub reachable: bool,
    pub ii: f64,
    /// Intrinsic states tied on `ii`.
    pub states: Vec<S>,
    /// Integrated information of each entry of `states` at its own MIP.
    pub state_phis: Vec<f64>,
    pub phi: f64,
    pub mip: Option<Mip>,
}

fn select_mip<M: CausalModel + ?Sized>(
    model: &M,
    repertoire: &M::Repertoire,
    candidates: &[(DisintegratingPartition, usize, M::Repertoire)],
    state: &M::State,
) -> Option<(usize, f64)> {
    let tol = model.tolerance().numeric;
    let mut best: Option<(usize, f64, f64)> = None;
    for (i, (_, norm, partitioned)) in candidates.iter().enumerate() {
        let phi = model.divergence_at(repertoire, partitioned, state).max(0.0);
        let scaled = phi / *norm as f64;
        let better = match best {
            None => true,
            Some((_, best_scaled, best_phi)) => {
                if approx_eq(scaled, best_scaled, tol) {
                    phi < best_phi && !approx_eq(phi, best_phi, tol)
                } else {
                    scaled < best_scaled
                }
            }
        };
        if better {
            best = Some((i, scaled, phi));
        }
    }
    best.map(|(i, _, phi)| (i, phi))
}

/// Intrinsic information, intrinsic states and MIP of a mechanism over one purview.
pub fn evaluate_purview<M: CausalModel + ?Sized>(
    model: &M,
    direction: Direction,
    mechanism: &UnitSet,
    purview: &UnitSet,
) -> Result<PurviewEvaluation<M::State>> {
    let tol = model.tolerance().numeric;
    let Some(repertoire) = model.repertoire(direction, mechanism, purview)? else {
        return Ok(PurviewEvaluation {
            purview: purview.clone(),
            reachable: false,
            ii: 0.0,
            states: Vec::new(),
            state_phis: Vec::new(),
            phi: 0.0,
            mip: None,
        });
    };
    let (ii, states) = model.intrinsic(direction, mechanism, purview, &repertoire)?;
    if ii <= tol {
        let n = states.len();
        return Ok(PurviewEvaluation {
            purview: purview.clone(),
            reachable: true,
            ii,
            states,
            state_phis: vec![0.0; n],
            phi: 0.0,
            mip: None,
        });
    }

    let candidates = enumerate_disintegrating(mechanism, purview)?
        .into_iter()
        .map(|theta| {
            let norm = normalization(&theta, mechanism, purview);
            let rep = model.partitioned(direction, mechanism, purview, &theta)?;
            Ok((theta, norm, rep))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut state_phis = Vec::with_capacity(states.len());
    let mut best: Option<(usize, f64)> = None;
    for state in &states {
        let (idx, phi) = select_mip(model, &repertoire, &candidates, state).expect("at least one partition");
        state_phis.push(phi);
        let replace = match best {
            None => true,
            Some((_, b)) => phi > b && !approx_eq(phi, b, tol),
        };
        if replace {
            best = Some((idx, phi));
        }
    }
    let (idx, phi) = best.expect("at least one intrinsic state");
    let (theta, norm, _) = &candidates[idx];
    Ok(PurviewEvaluation {
        purview: purview.clone(),
        reachable: true,
        ii,
        states,
        state_phis,
        phi,
        mip: Some(Mip {
            partition: theta.clone(),
            normalization: *norm,
            phi,
        }),
    })
}

/// Another purview that reached the maximal integrated information.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurviewTie {
    pub purview: UnitSet,
    pub phi: f64,
}

/// A mechanism with its maximally irreducible cause or effect.
#[derive(Debug, Clone)]
pub struct Distinction<S> {
    pub mechanism: UnitSet,
    pub direction: Direction,
    pub purview: UnitSet,
    pub ii: f64,
    /// Intrinsic states of the selected purview (tied states, or a degenerate eigenbasis).
    pub states: Vec<S>,
    pub phi: f64,
    pub mip: Mip,
    /// Other purviews with the same integrated information.
    pub ties: Vec<PurviewTie>,
}

impl<S> Distinction<S> {
    pub fn order(&self) -> usize {
        self.mechanism.len()
    }
}

/// Maximally irreducible cause or effect of `mechanism`, or `None` when every
/// purview is reducible.
///
/// Among purviews tied on φ the largest one wins; remaining ties are recorded.
pub fn phi_max<M: CausalModel + ?Sized>(
    model: &M,
    direction: Direction,
    mechanism: &UnitSet,
    exec: ExecMode,
) -> Result<Option<Distinction<M::State>>> {
    let tol = model.tolerance().numeric;
    let purviews = model.units().nonempty_subsets();
    let evaluations = exec
        .map(purviews, |purview| {
            evaluate_purview(model, direction, mechanism, &purview)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let max = evaluations.iter().map(|e| e.phi).fold(0.0, f64::max);
    if max <= tol {
        return Ok(None);
    }
    let tied: Vec<&PurviewEvaluation<M::State>> = evaluations.iter().filter(|e| approx_eq(e.phi, max, tol)).collect();
    let largest = tied.iter().map(|e| e.purview.len()).max().unwrap_or(0);
    let chosen = tied
        .iter()
        .find(|e| e.purview.len() == largest)
        .expect("nonempty tie set");
    let ties = tied
        .iter()
        .filter(|e| e.purview != chosen.purview)
        .map(|e| PurviewTie {
            purview: e.purview.clone(),
            phi: e.phi,
        })
        .collect();
    Ok(Some(Distinction {
        mechanism: mechanism.clone(),
        direction,
        purview: chosen.purview.clone(),
        ii: chosen.ii,
        states: chosen.states.clone(),
        phi: chosen.phi,
        mip: chosen.mip.clone().expect("positive phi has a MIP"),
        ties,
    }))
}

/// Distinctions of every requested mechanism (all nonempty subsets by
/// default), in mechanism order. Mechanisms with φ = 0 are omitted.
pub fn unfold<M: CausalModel + ?Sized>(
    model: &M,
    direction: Direction,
    mechanisms: Option<&[UnitSet]>,
    exec: ExecMode,
) -> Result<Vec<Distinction<M::State>>> {
    let mechanisms: Vec<UnitSet> = match mechanisms {
        Some(list) => list.to_vec(),
        None => model.units().nonempty_subsets(),
    };
    let found = exec
        .map(mechanisms, |mechanism| phi_max(model, direction, &mechanism, exec))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().collect())
}
