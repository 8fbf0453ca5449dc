//! Built-in example requests.

use std::f64::consts::FRAC_1_SQRT_2;

use super::{matrix_to_pairs, AnalysisRequest, ComplexPair, DirectionChoice, MechanismChoice, StateSpec, SystemSpec};
use crate::quantum::gates::{cnot, kron_all};
use crate::tensor::CMatrix;

pub struct Example {
    pub name: &'static str,
    pub summary: &'static str,
    build: fn() -> AnalysisRequest,
}

impl Example {
    pub fn request(&self) -> AnalysisRequest {
        (self.build)()
    }
}

const EXAMPLES: [Example; 10] = [
    Example {
        name: "copy-xor-10",
        summary: "classical COPY/XOR pair in state 10",
        build: copy_xor_10,
    },
    Example {
        name: "cnot-10",
        summary: "CNOT on |10⟩, the quantum counterpart of copy-xor-10",
        build: cnot_10,
    },
    Example {
        name: "cnot-hadamard",
        summary: "CNOT on |−+⟩, where the target controls the control in the Hadamard basis",
        build: cnot_hadamard,
    },
    Example {
        name: "cnot-bell",
        summary: "CNOT on |+0⟩, producing a Bell pair",
        build: cnot_bell,
    },
    Example {
        name: "cnot-0plus",
        summary: "CNOT on the separable input |0+⟩",
        build: cnot_0plus,
    },
    Example {
        name: "cnot-mixed",
        summary: "CNOT on the classically correlated mixture (|00⟩⟨00| + |11⟩⟨11|)/2",
        build: cnot_mixed,
    },
    Example {
        name: "icnot-ghz",
        summary: "identity on A and CNOT on BC, applied to the GHZ state",
        build: icnot_ghz,
    },
    Example {
        name: "ghz-identity",
        summary: "three-qubit identity dynamics on the GHZ state",
        build: ghz_identity,
    },
    Example {
        name: "w-identity",
        summary: "three-qubit identity dynamics on the W state",
        build: w_identity,
    },
    Example {
        name: "classical-identity",
        summary: "three binary units copying themselves, state 000",
        build: classical_identity,
    },
];

pub fn all() -> &'static [Example] {
    &EXAMPLES
}

pub fn names() -> Vec<&'static str> {
    EXAMPLES.iter().map(|e| e.name).collect()
}

pub fn get(name: &str) -> Option<AnalysisRequest> {
    EXAMPLES.iter().find(|e| e.name == name).map(Example::request)
}

fn real(values: &[f64]) -> Vec<ComplexPair> {
    values.iter().map(|&x| [x, 0.0]).collect()
}

fn basis(n: usize, index: usize) -> Vec<ComplexPair> {
    let mut v = vec![[0.0, 0.0]; 1 << n];
    v[index] = [1.0, 0.0];
    v
}

fn request(name: &str, system: SystemSpec, direction: DirectionChoice) -> AnalysisRequest {
    AnalysisRequest {
        name: Some(name.to_string()),
        system,
        direction,
        mechanisms: MechanismChoice::All,
        tolerance: None,
        labels: None,
    }
}

fn quantum(name: &str, unitary: &CMatrix, state: StateSpec, direction: DirectionChoice) -> AnalysisRequest {
    let qubits = unitary.nrows().trailing_zeros() as usize;
    let system = SystemSpec::Quantum {
        qubits,
        unitary: matrix_to_pairs(unitary),
        state,
    };
    request(name, system, direction)
}

fn pure(amplitudes: Vec<ComplexPair>) -> StateSpec {
    StateSpec::Pure { amplitudes }
}

fn cnot2() -> CMatrix {
    cnot(2, 0, 1).matrix().clone()
}

fn copy_xor_10() -> AnalysisRequest {
    let mut tpm = vec![vec![0.0; 4]; 4];
    for (s, row) in tpm.iter_mut().enumerate() {
        let (a, b) = (s >> 1, s & 1);
        row[(a << 1) | (a ^ b)] = 1.0;
    }
    let system = SystemSpec::Classical {
        unit_states: vec![2, 2],
        tpm,
        state_t: vec![1, 0],
        state_t1: None,
        background: None,
    };
    request("copy-xor-10", system, DirectionChoice::Both)
}

fn cnot_10() -> AnalysisRequest {
    quantum("cnot-10", &cnot2(), pure(basis(2, 2)), DirectionChoice::Both)
}

fn cnot_hadamard() -> AnalysisRequest {
    quantum(
        "cnot-hadamard",
        &cnot2(),
        pure(real(&[0.5, 0.5, -0.5, -0.5])),
        DirectionChoice::Both,
    )
}

fn cnot_bell() -> AnalysisRequest {
    let h = FRAC_1_SQRT_2;
    quantum(
        "cnot-bell",
        &cnot2(),
        pure(real(&[h, 0.0, h, 0.0])),
        DirectionChoice::Both,
    )
}

fn cnot_0plus() -> AnalysisRequest {
    let h = FRAC_1_SQRT_2;
    quantum(
        "cnot-0plus",
        &cnot2(),
        pure(real(&[h, h, 0.0, 0.0])),
        DirectionChoice::Both,
    )
}

fn cnot_mixed() -> AnalysisRequest {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = 0.5.into();
    m[(3, 3)] = 0.5.into();
    let state = StateSpec::Density {
        matrix: matrix_to_pairs(&m),
    };
    quantum("cnot-mixed", &cnot2(), state, DirectionChoice::Both)
}

fn ghz3() -> Vec<ComplexPair> {
    let h = FRAC_1_SQRT_2;
    real(&[h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, h])
}

fn icnot_ghz() -> AnalysisRequest {
    let u = kron_all(&[CMatrix::identity(2, 2), cnot2()]);
    quantum("icnot-ghz", &u, pure(ghz3()), DirectionChoice::Both)
}

fn ghz_identity() -> AnalysisRequest {
    quantum(
        "ghz-identity",
        &CMatrix::identity(8, 8),
        pure(ghz3()),
        DirectionChoice::Effect,
    )
}

fn w_identity() -> AnalysisRequest {
    let w = 1.0 / 3f64.sqrt();
    let amps = real(&[0.0, w, w, 0.0, w, 0.0, 0.0, 0.0]);
    quantum(
        "w-identity",
        &CMatrix::identity(8, 8),
        pure(amps),
        DirectionChoice::Effect,
    )
}

fn classical_identity() -> AnalysisRequest {
    let tpm = (0..8)
        .map(|s| (0..8).map(|t| if s == t { 1.0 } else { 0.0 }).collect())
        .collect();
    let system = SystemSpec::Classical {
        unit_states: vec![2, 2, 2],
        tpm,
        state_t: vec![0, 0, 0],
        state_t1: None,
        background: None,
    };
    request("classical-identity", system, DirectionChoice::Effect)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_example_validates() {
        for e in all() {
            let r = e.request();
            assert_eq!(r.name.as_deref(), Some(e.name));
            r.prepare().unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }

    #[test]
    fn names_are_unique() {
        let mut n = names();
        n.sort_unstable();
        n.dedup();
        assert_eq!(n.len(), all().len());
        assert!(get("nope").is_none());
    }
}
