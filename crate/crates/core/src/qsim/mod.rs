//! Dense statevector simulator over the X, Z, H gate set and their
//! multicontrolled versions.
//!
//! Bit ordering is little-endian: qubit 0 is the rightmost character of a
//! printed bitstring, so a 4-qubit basis state prints as `q3 q2 q1 q0`.

mod circuit;
mod gate;
mod state;

pub use circuit::{parity_phase_circuit, zero_phase_circuit, Circuit, GateTally};
pub use gate::{Control, Gate, GateKind};
pub use state::{bitstring, init_state, MeasurementDistribution, StateVector, NORM_TOLERANCE};

/// Largest register the dense simulator will allocate.
pub const MAX_QUBITS: usize = 26;
