//! Declarative analysis requests, their execution, and report rendering.
//!
//! Documents are JSON. Complex numbers are `[re, im]` pairs, matrices are
//! row-major nested arrays, and basis indices are big-endian (unit 0 is the
//! most significant digit).

pub mod examples;
mod format;
mod render;

pub use format::{fmt_number, ket_label};
pub use render::{render, Format};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::classical::{Background, ClassicalAnalysis, ClassicalSystem};
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::partitions::{Part, UnitSet};
use crate::quantum::{QuantumAnalysis, QuantumSystem, MAX_QUBITS};
use crate::search::{Direction, Distinction};
use crate::tensor::{partial_trace, CMatrix, CVector, DensityMatrix, Tolerance, UnitaryOperator, DEFAULT_TOLERANCE};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `[re, im]`
pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "lowercase")]
pub enum SystemSpec {
    Classical {
        unit_states: Vec<usize>,
        /// State-by-state, rows are source states.
        tpm: Vec<Vec<f64>>,
        state_t: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        state_t1: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        background: Option<BackgroundSpec>,
    },
    Quantum {
        qubits: usize,
        unitary: Vec<Vec<ComplexPair>>,
        state: StateSpec,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackgroundSpec {
    pub units: Vec<usize>,
    pub state: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateSpec {
    Pure { amplitudes: Vec<ComplexPair> },
    Density { matrix: Vec<Vec<ComplexPair>> },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionChoice {
    Cause,
    Effect,
    #[default]
    Both,
}

impl DirectionChoice {
    pub fn directions(self) -> Vec<Direction> {
        match self {
            DirectionChoice::Cause => vec![Direction::Cause],
            DirectionChoice::Effect => vec![Direction::Effect],
            DirectionChoice::Both => vec![Direction::Effect, Direction::Cause],
        }
    }
}

impl FromStr for DirectionChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cause" => Ok(DirectionChoice::Cause),
            "effect" => Ok(DirectionChoice::Effect),
            "both" => Ok(DirectionChoice::Both),
            other => Err(Error::Usage(format!(
                "unknown direction {other:?} (cause, effect or both)"
            ))),
        }
    }
}

/// `"all"` or an explicit list of unit-index lists.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum MechanismChoice {
    #[default]
    All,
    List(Vec<Vec<usize>>),
}

impl Serialize for MechanismChoice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MechanismChoice::All => s.serialize_str("all"),
            MechanismChoice::List(list) => list.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for MechanismChoice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Keyword(String),
            List(Vec<Vec<usize>>),
        }
        match Raw::deserialize(d)? {
            Raw::Keyword(k) if k == "all" => Ok(MechanismChoice::All),
            Raw::Keyword(k) => Err(serde::de::Error::custom(format!(
                "mechanisms must be \"all\" or a list of unit lists, got {k:?}"
            ))),
            Raw::List(l) => Ok(MechanismChoice::List(l)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Labels {
    /// Unit names at `t`.
    pub t: Vec<String>,
    /// Unit names at `t+1`.
    pub t1: Vec<String>,
}

impl Labels {
    /// `A, B, …` at `t`, continuing the alphabet at `t+1`.
    pub fn default_for(n: usize) -> Self {
        let letter = |i: usize| {
            if i < 26 {
                char::from(b'A' + i as u8).to_string()
            } else {
                format!("U{i}")
            }
        };
        Labels {
            t: (0..n).map(letter).collect(),
            t1: (n..2 * n).map(letter).collect(),
        }
    }

    /// Concatenated names of `units` at `t` or `t+1`.
    pub fn join(&self, units: &[usize], at_t: bool) -> String {
        let names = if at_t { &self.t } else { &self.t1 };
        let sep = if names.iter().all(|s| s.chars().count() == 1) {
            ""
        } else {
            ","
        };
        units.iter().map(|&u| names[u].as_str()).collect::<Vec<_>>().join(sep)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub system: SystemSpec,
    #[serde(default)]
    pub direction: DirectionChoice,
    #[serde(default)]
    pub mechanisms: MechanismChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Labels>,
}

/// The model a request describes, ready to run.
pub enum Model {
    Classical(ClassicalAnalysis),
    Quantum(QuantumAnalysis),
}

impl Model {
    pub fn n_units(&self) -> usize {
        match self {
            Model::Classical(a) => a.system().n_units(),
            Model::Quantum(a) => a.system().n_qubits(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Model::Classical(a) => format!(
                "classical system, {} units with states {:?}",
                a.system().n_units(),
                a.system().unit_states()
            ),
            Model::Quantum(a) => format!("quantum system, {} qubits", a.system().n_qubits()),
        }
    }
}

/// Parses and validates a request document.
pub fn parse_request(bytes: &[u8]) -> Result<AnalysisRequest> {
    let request: AnalysisRequest = serde_json::from_slice(bytes)?;
    request.prepare()?;
    Ok(request)
}

fn complex_matrix(rows: &[Vec<ComplexPair>], path: &str) -> Result<CMatrix> {
    let n = rows.len();
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::validation(
                format!("{path}[{r}]"),
                format!("expected {n} entries for a square matrix, found {}", row.len()),
            ));
        }
    }
    Ok(CMatrix::from_fn(n, n, |r, c| {
        Complex64::new(rows[r][c][0], rows[r][c][1])
    }))
}

pub fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<ComplexPair>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn vector_to_pairs(v: &CVector) -> Vec<ComplexPair> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// Re-roots a validation error raised by a constructor at `path`.
fn at(path: &str, err: Error) -> Error {
    match err {
        Error::Validation { message, .. } => Error::validation(path, message),
        other => other,
    }
}

impl AnalysisRequest {
    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(DEFAULT_TOLERANCE)
    }

    pub fn n_units(&self) -> usize {
        match &self.system {
            SystemSpec::Classical { unit_states, .. } => unit_states.len(),
            SystemSpec::Quantum { qubits, .. } => *qubits,
        }
    }

    pub fn labels(&self) -> Labels {
        self.labels
            .clone()
            .unwrap_or_else(|| Labels::default_for(self.n_units()))
    }

    /// Validates every part of the request and builds the model.
    pub fn prepare(&self) -> Result<Model> {
        let tol = self.tolerance();
        if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
            return Err(Error::validation("tolerance", format!("must be in (0, 1), got {tol}")));
        }
        let tolerance = Tolerance::uniform(tol);
        let n = self.n_units();
        if let Some(labels) = &self.labels {
            for (field, names) in [("labels.t", &labels.t), ("labels.t1", &labels.t1)] {
                if names.len() != n {
                    return Err(Error::validation(
                        field,
                        format!("expected {n} names, found {}", names.len()),
                    ));
                }
                if let Some(i) = names.iter().position(|s| s.is_empty()) {
                    return Err(Error::validation(format!("{field}[{i}]"), "empty name"));
                }
            }
        }
        let model = match &self.system {
            SystemSpec::Classical {
                unit_states,
                tpm,
                state_t,
                state_t1,
                background,
            } => {
                let background = match background {
                    None => None,
                    Some(b) => {
                        if b.units.len() != b.state.len() {
                            return Err(Error::validation(
                                "background",
                                "units and state have different lengths",
                            ));
                        }
                        // Keep states aligned with the sorted unit order.
                        let mut pairs: Vec<(usize, usize)> =
                            b.units.iter().copied().zip(b.state.iter().copied()).collect();
                        pairs.sort_unstable();
                        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
                            return Err(Error::validation("background.units", "duplicate unit"));
                        }
                        Some(Background {
                            units: UnitSet::new(b.units.iter().copied()),
                            state: pairs.into_iter().map(|(_, s)| s).collect(),
                        })
                    }
                };
                let system = ClassicalSystem::new(unit_states.clone(), tpm.clone(), background, tol)?;
                Model::Classical(ClassicalAnalysis::new(
                    system,
                    state_t.clone(),
                    state_t1.clone(),
                    tolerance,
                )?)
            }
            SystemSpec::Quantum { qubits, unitary, state } => {
                if *qubits == 0 || *qubits > MAX_QUBITS {
                    return Err(Error::validation(
                        "qubits",
                        format!("must be between 1 and {MAX_QUBITS}, got {qubits}"),
                    ));
                }
                let dim = 1usize << qubits;
                if unitary.len() != dim {
                    return Err(Error::validation(
                        "unitary",
                        format!("expected {dim} rows for {qubits} qubits, found {}", unitary.len()),
                    ));
                }
                let u = complex_matrix(unitary, "unitary")?;
                let u = UnitaryOperator::new(vec![2; *qubits], u, tol).map_err(|e| at("unitary", e))?;
                let rho = match state {
                    StateSpec::Pure { amplitudes } => {
                        if amplitudes.len() != dim {
                            return Err(Error::validation(
                                "state.amplitudes",
                                format!("expected {dim} amplitudes, found {}", amplitudes.len()),
                            ));
                        }
                        let psi = CVector::from_iterator(dim, amplitudes.iter().map(|a| Complex64::new(a[0], a[1])));
                        DensityMatrix::from_pure(vec![2; *qubits], &psi, tol).map_err(|e| at("state.amplitudes", e))?
                    }
                    StateSpec::Density { matrix } => {
                        if matrix.len() != dim {
                            return Err(Error::validation(
                                "state.matrix",
                                format!("expected {dim} rows, found {}", matrix.len()),
                            ));
                        }
                        let m = complex_matrix(matrix, "state.matrix")?;
                        DensityMatrix::new(vec![2; *qubits], m, tol).map_err(|e| at("state.matrix", e))?
                    }
                };
                Model::Quantum(QuantumAnalysis::new(QuantumSystem::new(u)?, rho, tolerance)?)
            }
        };
        if let MechanismChoice::List(list) = &self.mechanisms {
            let free = match &model {
                Model::Classical(a) => a.system().free_units(),
                Model::Quantum(a) => a.system().qubits(),
            };
            for (i, m) in list.iter().enumerate() {
                if m.is_empty() {
                    return Err(Error::validation(format!("mechanisms[{i}]"), "mechanism is empty"));
                }
                if let Some(u) = m.iter().find(|&&u| !free.contains(u)) {
                    return Err(Error::validation(
                        format!("mechanisms[{i}]"),
                        format!("unit {u} is not a free unit"),
                    ));
                }
                if UnitSet::new(m.iter().copied()).len() != m.len() {
                    return Err(Error::validation(format!("mechanisms[{i}]"), "duplicate unit"));
                }
            }
        }
        if let (Model::Classical(a), DirectionChoice::Cause | DirectionChoice::Both) = (&model, self.direction) {
            if a.state_t1().is_none() {
                return Err(Error::validation(
                    "state_t1",
                    "required for cause analysis when the TPM row of state_t is not deterministic",
                ));
            }
        }
        Ok(model)
    }
}

/// Parses a mechanism list such as `A,AB` or `0,0+1` against unit labels.
/// Names at `t` and at `t+1` both resolve to the unit's index.
pub fn parse_mechanism_spec(spec: &str, labels: &Labels) -> Result<MechanismChoice> {
    let spec = spec.trim();
    if spec == "all" {
        return Ok(MechanismChoice::All);
    }
    let single_chars = labels.t.iter().chain(&labels.t1).all(|s| s.chars().count() == 1);
    let resolve = |token: &str| -> Result<usize> {
        if let Ok(i) = token.parse::<usize>() {
            return Ok(i);
        }
        labels
            .t
            .iter()
            .position(|s| s == token)
            .or_else(|| labels.t1.iter().position(|s| s == token))
            .ok_or_else(|| Error::Usage(format!("unknown unit {token:?} in mechanism spec")))
    };
    let mut out = Vec::new();
    for group in spec.split(',') {
        let group = group.trim();
        if group.is_empty() {
            return Err(Error::Usage(format!("empty mechanism in {spec:?}")));
        }
        let tokens: Vec<String> = if group.contains('+') {
            group.split('+').map(|t| t.trim().to_string()).collect()
        } else if single_chars && !group.chars().all(|c| c.is_ascii_digit())
            || group.chars().all(|c| c.is_ascii_digit())
        {
            group.chars().map(String::from).collect()
        } else {
            vec![group.to_string()]
        };
        let units = tokens.iter().map(|t| resolve(t)).collect::<Result<Vec<_>>>()?;
        out.push(units);
    }
    Ok(MechanismChoice::List(out))
}

/// Infinite-capable number: finite values serialize as JSON numbers, `+∞`
/// as the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phi(pub f64);

impl Serialize for Phi {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("inf")
        }
    }
}

impl<'de> Deserialize<'de> for Phi {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(x) => Ok(Phi(x)),
            Raw::Text(t) if t == "inf" => Ok(Phi(f64::INFINITY)),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got {t:?}"
            ))),
        }
    }
}

impl fmt::Display for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_number(self.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MechanismState {
    /// Unit states, one per mechanism unit.
    Classical(Vec<usize>),
    Quantum {
        label: String,
        matrix: Vec<Vec<ComplexPair>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateVectors {
    /// Unit states over the purview, one list per state.
    Classical(Vec<Vec<usize>>),
    /// Amplitudes over the purview qubits, one list per basis vector.
    Quantum(Vec<Vec<ComplexPair>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    /// A single state.
    State,
    /// Several classical states tied on intrinsic information.
    Tied,
    /// An orthonormal basis of a degenerate eigenspace.
    Subspace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicState {
    pub kind: StateKind,
    pub vectors: StateVectors,
    /// One display label per vector.
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MipRecord {
    pub parts: Vec<Part>,
    pub normalization: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TieRecord {
    pub purview: Vec<usize>,
    pub purview_label: String,
    pub phi: Phi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinctionRecord {
    pub mechanism_units: Vec<usize>,
    pub mechanism_label: String,
    pub mechanism_state: MechanismState,
    pub direction: Direction,
    pub purview: Vec<usize>,
    pub purview_label: String,
    pub intrinsic_state: IntrinsicState,
    pub phi: Phi,
    pub ii: Phi,
    pub mip: MipRecord,
    pub ties: Vec<TieRecord>,
}

impl DistinctionRecord {
    pub fn order(&self) -> usize {
        self.mechanism_units.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tolerance: f64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub request: AnalysisRequest,
    pub distinctions: Vec<DistinctionRecord>,
    pub meta: Meta,
}

fn common_fields<S>(
    d: &Distinction<S>,
    labels: &Labels,
    mechanism_state: MechanismState,
    intrinsic_state: IntrinsicState,
) -> DistinctionRecord {
    // Effects: mechanism at t, purview at t+1. Causes the other way round.
    let mech_at_t = d.direction == Direction::Effect;
    DistinctionRecord {
        mechanism_units: d.mechanism.as_slice().to_vec(),
        mechanism_label: labels.join(d.mechanism.as_slice(), mech_at_t),
        mechanism_state,
        direction: d.direction,
        purview: d.purview.as_slice().to_vec(),
        purview_label: labels.join(d.purview.as_slice(), !mech_at_t),
        intrinsic_state,
        phi: Phi(d.phi),
        ii: Phi(d.ii),
        mip: MipRecord {
            parts: d.mip.partition.parts.clone(),
            normalization: d.mip.normalization,
        },
        ties: d
            .ties
            .iter()
            .map(|t| TieRecord {
                purview: t.purview.as_slice().to_vec(),
                purview_label: labels.join(t.purview.as_slice(), !mech_at_t),
                phi: Phi(t.phi),
            })
            .collect(),
    }
}

fn classical_state_label(digits: &[usize]) -> String {
    if digits.iter().all(|&d| d < 10) {
        digits.iter().map(|d| d.to_string()).collect()
    } else {
        digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Executes a request. The report is deterministic for a given request.
pub fn run(request: &AnalysisRequest, exec: ExecMode) -> Result<AnalysisReport> {
    let model = request.prepare()?;
    let labels = request.labels();
    let mechanisms: Option<Vec<UnitSet>> = match &request.mechanisms {
        MechanismChoice::All => None,
        MechanismChoice::List(list) => Some(list.iter().map(|m| UnitSet::new(m.iter().copied())).collect()),
    };
    let mut distinctions = Vec::new();
    for direction in request.direction.directions() {
        match &model {
            Model::Classical(a) => {
                for d in a.unfold(direction, mechanisms.as_deref(), exec)? {
                    let mstate = a.mechanism_state(direction, &d.mechanism)?;
                    let states: Vec<Vec<usize>> = d
                        .states
                        .iter()
                        .map(|&s| a.system().state_digits(&d.purview, s))
                        .collect();
                    let intrinsic = IntrinsicState {
                        kind: if states.len() == 1 {
                            StateKind::State
                        } else {
                            StateKind::Tied
                        },
                        labels: states.iter().map(|s| classical_state_label(s)).collect(),
                        vectors: StateVectors::Classical(states),
                    };
                    distinctions.push(common_fields(&d, &labels, MechanismState::Classical(mstate), intrinsic));
                }
            }
            Model::Quantum(a) => {
                let tol = request.tolerance();
                for d in a.q_unfold(direction, mechanisms.as_deref(), exec)? {
                    let full = match direction {
                        Direction::Effect => a.state_t(),
                        Direction::Cause => a.state_t1(),
                    };
                    let reduced = partial_trace(full, d.mechanism.as_slice())?;
                    let mstate = MechanismState::Quantum {
                        label: format::density_label(&reduced, tol)?,
                        matrix: matrix_to_pairs(reduced.matrix()),
                    };
                    let intrinsic = IntrinsicState {
                        kind: if d.states.len() == 1 {
                            StateKind::State
                        } else {
                            StateKind::Subspace
                        },
                        labels: d.states.iter().map(|s| ket_label(&s.vector, tol)).collect(),
                        vectors: StateVectors::Quantum(d.states.iter().map(|s| vector_to_pairs(&s.vector)).collect()),
                    };
                    distinctions.push(common_fields(&d, &labels, mstate, intrinsic));
                }
            }
        }
    }
    Ok(AnalysisReport {
        request: request.clone(),
        distinctions,
        meta: Meta {
            tolerance: request.tolerance(),
            version: VERSION.to_string(),
        },
    })
}
