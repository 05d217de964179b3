use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    X,
    Z,
    H,
}

impl GateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::H => "H",
        }
    }
}

/// One entry of a control string: the gate fires only if `qubit` holds `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub value: bool,
}

impl Control {
    pub fn new(qubit: usize, value: bool) -> Self {
        Control { qubit, value }
    }
}

/// A single-qubit X, Z or H acting on `target`, optionally conditioned on a
/// control string. With controls `(c_1, s_1) … (c_k, s_k)` the base gate is
/// applied to the target iff every `c_j` is in state `s_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gate {
    kind: GateKind,
    target: usize,
    controls: Vec<Control>,
}

impl Gate {
    pub fn x(target: usize) -> Self {
        Gate { kind: GateKind::X, target, controls: Vec::new() }
    }

    pub fn z(target: usize) -> Self {
        Gate { kind: GateKind::Z, target, controls: Vec::new() }
    }

    pub fn h(target: usize) -> Self {
        Gate { kind: GateKind::H, target, controls: Vec::new() }
    }

    /// CNOT with a single control that must be `|1⟩`.
    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        Gate::controlled(GateKind::X, target, vec![Control::new(control, true)])
    }

    pub fn controlled(kind: GateKind, target: usize, controls: Vec<Control>) -> Result<Self> {
        for (i, c) in controls.iter().enumerate() {
            if c.qubit == target {
                return Err(Error::argument(format!(
                    "target qubit {target} also appears as a control"
                )));
            }
            if controls[..i].iter().any(|o| o.qubit == c.qubit) {
                return Err(Error::argument(format!("control qubit {} repeated", c.qubit)));
            }
        }
        Ok(Gate { kind, target, controls })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    /// Tally label: `H`, `CX` for one control, `MCX` for two or more.
    pub fn label(&self) -> &'static str {
        match (self.controls.len(), self.kind) {
            (0, k) => k.as_str(),
            (1, GateKind::X) => "CX",
            (1, GateKind::Z) => "CZ",
            (1, GateKind::H) => "CH",
            (_, GateKind::X) => "MCX",
            (_, GateKind::Z) => "MCZ",
            (_, GateKind::H) => "MCH",
        }
    }

    /// Largest qubit index the gate touches.
    pub fn max_qubit(&self) -> usize {
        self.controls.iter().map(|c| c.qubit).fold(self.target, usize::max)
    }

    pub(crate) fn validate(&self, num_qubits: usize) -> Result<()> {
        let max = self.max_qubit();
        if max >= num_qubits {
            return Err(Error::QubitIndex { index: max, num_qubits });
        }
        Ok(())
    }

    /// Estimated two-qubit gate cost after compilation. This is a cost model
    /// linear in the number of controls (V-chain of Toffolis with clean
    /// ancillas, six CNOTs per Toffoli), not a real compilation.
    pub fn compiled_cnot_estimate(&self) -> usize {
        match self.controls.len() {
            0 => 0,
            1 => 1,
            k => 6 * (2 * k - 3),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.label(), self.target)?;
        if !self.controls.is_empty() {
            f.write_str(" [")?;
            for (i, c) in self.controls.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}={}", c.qubit, u8::from(c.value))?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}
