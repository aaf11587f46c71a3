//! Clifford circuits shared by the tableau sampler and the dense oracles.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Supported Clifford gates. Qubit indices are zero-based; the dense and
/// tableau backends both identify qubit q with bit q of a basis index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    S(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
}

impl Gate {
    pub fn qubits(self) -> (usize, Option<usize>) {
        match self {
            Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => (q, None),
            Gate::Cnot(a, b) | Gate::Cz(a, b) => (a, Some(b)),
        }
    }

    /// Same gate with all qubit indices shifted by `offset`.
    pub fn shifted(self, offset: usize) -> Gate {
        match self {
            Gate::H(q) => Gate::H(q + offset),
            Gate::S(q) => Gate::S(q + offset),
            Gate::X(q) => Gate::X(q + offset),
            Gate::Y(q) => Gate::Y(q + offset),
            Gate::Z(q) => Gate::Z(q + offset),
            Gate::Cnot(a, b) => Gate::Cnot(a + offset, b + offset),
            Gate::Cz(a, b) => Gate::Cz(a + offset, b + offset),
        }
    }
}

/// A gate list acting on `n` qubits, applied to |0…0⟩.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let c = Circuit { n, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            let (a, b) = g.qubits();
            if a >= self.n || b.is_some_and(|b| b >= self.n) {
                return Err(Error::contract(format!(
                    "gate {g:?} out of range for {} qubits",
                    self.n
                )));
            }
            if let Some(b) = b {
                if a == b {
                    return Err(Error::contract(format!(
                        "two-qubit gate {g:?} needs distinct qubits"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Cnot(..) | Gate::Cz(..)))
            .count()
    }

    /// Encoder for the logical zero state of the ⟦7,1,3⟧ color code:
    /// Hadamards on the X-generator pivots followed by CNOT fan-outs over
    /// the generator supports.
    pub fn steane_zero_encoder() -> Circuit {
        let mut gates = vec![Gate::H(0), Gate::H(1), Gate::H(3)];
        // pivot 3 spans {3,4,5,6}; pivot 1 spans {1,2,5,6}; pivot 0 spans {0,2,4,6}
        gates.extend([4, 5, 6].map(|t| Gate::Cnot(3, t)));
        gates.extend([2, 5, 6].map(|t| Gate::Cnot(1, t)));
        gates.extend([2, 4, 6].map(|t| Gate::Cnot(0, t)));
        Circuit { n: 7, gates }
    }
}
