use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::gate::{Control, Gate, GateKind};
use super::state::{StateVector, NORM_TOLERANCE};
use crate::error::{Error, Result};

/// Ordered gate list over a fixed register width.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, gates: Vec::new() }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::shape(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.num_qubits, self.num_qubits
            )));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// Adjoint. Every gate in the set is Hermitian, so this is the gate
    /// list reversed.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().cloned().collect(),
        }
    }

    /// Applies the gates in order and re-checks normalization afterwards.
    pub fn run(&self, state: &mut StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::shape(format!(
                "circuit has {} qubits, state has {}",
                self.num_qubits,
                state.num_qubits()
            )));
        }
        for g in &self.gates {
            state.apply(g)?;
        }
        state.check_normalized(NORM_TOLERANCE)
    }

    /// Gates tallied by label. Multicontrolled gates count once each.
    pub fn gate_count(&self) -> GateTally {
        let mut t = GateTally::default();
        for g in &self.gates {
            *t.counts.entry(g.label().to_string()).or_insert(0) += 1;
        }
        t
    }

    /// Sum of [`Gate::compiled_cnot_estimate`] over the circuit.
    pub fn compiled_cnot_estimate(&self) -> usize {
        self.gates.iter().map(Gate::compiled_cnot_estimate).sum()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct GateTally {
    counts: BTreeMap<String, usize>,
}

impl GateTally {
    pub fn get(&self, label: &str) -> usize {
        self.counts.get(label).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.counts.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn merge(&mut self, other: &GateTally) {
        for (k, v) in &other.counts {
            *self.counts.entry(k.clone()).or_insert(0) += v;
        }
    }

    pub fn scaled(&self, factor: usize) -> GateTally {
        GateTally {
            counts: self.counts.iter().map(|(k, v)| (k.clone(), v * factor)).collect(),
        }
    }
}

/// Flips the sign of every basis state with an odd number of ones: a CNOT
/// ladder accumulates parity onto the top qubit, Z reads it out as a phase,
/// and the ladder is undone.
pub fn parity_phase_circuit(num_qubits: usize) -> Result<Circuit> {
    let mut c = Circuit::new(num_qubits);
    for q in 0..num_qubits.saturating_sub(1) {
        c.push(Gate::cnot(q, q + 1)?)?;
    }
    c.push(Gate::z(num_qubits - 1))?;
    for q in (0..num_qubits.saturating_sub(1)).rev() {
        c.push(Gate::cnot(q, q + 1)?)?;
    }
    Ok(c)
}

/// Flips the sign of the all-zeros basis state of `qubits` only: X on the
/// first listed qubit, Z on it conditioned on every other listed qubit
/// being 0, X again.
pub fn zero_phase_circuit(num_qubits: usize, qubits: &[usize]) -> Result<Circuit> {
    let (&target, rest) = qubits
        .split_first()
        .ok_or_else(|| Error::argument("zero reflection needs at least one qubit"))?;
    let mut c = Circuit::new(num_qubits);
    c.push(Gate::x(target))?;
    let controls = rest.iter().map(|&q| Control::new(q, false)).collect();
    c.push(Gate::controlled(GateKind::Z, target, controls)?)?;
    c.push(Gate::x(target))?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn uniform(n: usize) -> StateVector {
        let mut s = StateVector::zero(n).unwrap();
        for q in 0..n {
            s.apply(&Gate::h(q)).unwrap();
        }
        s
    }

    #[test]
    fn empty_circuit_is_identity() {
        let mut s = uniform(3);
        let before = s.clone();
        let c = Circuit::new(3);
        c.run(&mut s).unwrap();
        assert_eq!(s, before);
        assert_eq!(c.gate_count().total(), 0);
        assert_eq!(c.gate_count().get("H"), 0);
    }

    #[test]
    fn qubit_count_mismatch() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(matches!(Circuit::new(3).run(&mut s), Err(Error::Shape(_))));
        assert!(Circuit::new(2).push(Gate::x(2)).is_err());
    }

    #[test]
    fn parity_circuit_negates_odd_weight() {
        let mut s = uniform(3);
        let before = s.clone();
        parity_phase_circuit(3).unwrap().run(&mut s).unwrap();
        for i in 0..8usize {
            let sign = if i.count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            assert!((s.amplitude(i) - before.amplitude(i) * sign).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_marking_circuit_negates_only_000() {
        let mut s = uniform(3);
        let before = s.clone();
        zero_phase_circuit(3, &[0, 1, 2]).unwrap().run(&mut s).unwrap();
        assert!((s.amplitude(0) + before.amplitude(0)).norm() < 1e-12);
        for i in 1..8 {
            assert_eq!(s.amplitude(i), before.amplitude(i));
        }
    }

    #[test]
    fn five_hadamards() {
        let c = Circuit::from_gates(5, (0..5).map(Gate::h).collect()).unwrap();
        let t = c.gate_count();
        assert_eq!(t.get("H"), 5);
        assert_eq!(t.total(), 5);
    }

    #[test]
    fn inverse_undoes() {
        let mut c = Circuit::new(3);
        c.push(Gate::h(0)).unwrap();
        c.push(Gate::cnot(0, 2).unwrap()).unwrap();
        c.push(Gate::z(2)).unwrap();
        c.push(Gate::h(1)).unwrap();
        let mut s = StateVector::zero(3).unwrap();
        c.run(&mut s).unwrap();
        c.inverse().run(&mut s).unwrap();
        assert!((s.amplitude(0) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn debug_dump_is_one_gate_per_line() {
        let c = zero_phase_circuit(3, &[0, 2, 1]).unwrap();
        assert_eq!(c.to_string(), "X 0\nMCZ 0 [2=0,1=0]\nX 0\n");
    }
}
