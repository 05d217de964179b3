use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gate::{Gate, GateKind};
use super::MAX_QUBITS;
use crate::error::{Error, Result};

/// Tolerance on `Σ|c_j|² = 1` checked after circuit execution.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Prints basis index `index` of an `n`-qubit register, qubit `n-1` leftmost.
pub fn bitstring(index: usize, num_qubits: usize) -> String {
    (0..num_qubits)
        .rev()
        .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// `|0…0⟩` on `num_qubits` qubits.
pub fn init_state(num_qubits: usize) -> Result<StateVector> {
    StateVector::zero(num_qubits)
}

impl StateVector {
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::zero_with_limit(num_qubits, MAX_QUBITS)
    }

    /// Like [`StateVector::zero`] with a lower qubit ceiling.
    pub fn zero_with_limit(num_qubits: usize, max_qubits: usize) -> Result<Self> {
        let limit = max_qubits.min(MAX_QUBITS);
        if num_qubits == 0 || num_qubits > limit {
            return Err(Error::Capacity {
                what: "statevector qubits".into(),
                required: num_qubits,
                limit,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amplitudes })
    }

    /// Wraps raw amplitudes. The length must be a power of two and the
    /// vector must already be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::shape(format!("{len} amplitudes is not 2^n with n >= 1")));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                what: "statevector qubits".into(),
                required: num_qubits,
                limit: MAX_QUBITS,
            });
        }
        let state = StateVector { num_qubits, amplitudes };
        state.check_normalized(NORM_TOLERANCE)?;
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, basis: usize) -> Complex64 {
        self.amplitudes[basis]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > tol {
            return Err(Error::Normalization { norm });
        }
        Ok(())
    }

    /// Applies `gate` in place by visiting only the amplitude pairs whose
    /// control bits match, never forming the full unitary.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        let target_bit = 1usize << gate.target();
        let mut control_mask = 0usize;
        let mut control_value = 0usize;
        for c in gate.controls() {
            control_mask |= 1 << c.qubit;
            if c.value {
                control_value |= 1 << c.qubit;
            }
        }
        let free = (self.dimension() - 1) & !(control_mask | target_bit);
        let amps = &mut self.amplitudes;
        let kind = gate.kind();
        // Enumerate every subset of the free bits; each gives one (|…0…⟩, |…1…⟩)
        // pair on the target with the controls fixed to their required values.
        let mut sub = 0usize;
        loop {
            let lo = sub | control_value;
            let hi = lo | target_bit;
            match kind {
                GateKind::X => amps.swap(lo, hi),
                GateKind::Z => amps[hi] = -amps[hi],
                GateKind::H => {
                    let (a, b) = (amps[lo], amps[hi]);
                    amps[lo] = (a + b) * std::f64::consts::FRAC_1_SQRT_2;
                    amps[hi] = (a - b) * std::f64::consts::FRAC_1_SQRT_2;
                }
            }
            sub = sub.wrapping_sub(free) & free;
            if sub == 0 {
                break;
            }
        }
        Ok(())
    }

    pub fn probabilities(&self) -> MeasurementDistribution {
        MeasurementDistribution {
            num_qubits: self.num_qubits,
            probabilities: self.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    /// Draws `shots` computational-basis measurements with a seeded
    /// ChaCha stream. Returns bitstring counts.
    pub fn sample(&self, seed: u64, shots: usize) -> Result<BTreeMap<String, usize>> {
        let counts = self.probabilities().sample_indices(seed, shots)?;
        Ok(counts
            .into_iter()
            .map(|(i, c)| (bitstring(i, self.num_qubits), c))
            .collect())
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Born-rule probabilities indexed by basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDistribution {
    num_qubits: usize,
    probabilities: Vec<f64>,
}

impl MeasurementDistribution {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn get(&self, bits: &str) -> Option<f64> {
        if bits.len() != self.num_qubits {
            return None;
        }
        let index = usize::from_str_radix(bits, 2).ok()?;
        self.probabilities.get(index).copied()
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Non-zero entries keyed by bitstring.
    pub fn to_map(&self) -> BTreeMap<String, f64> {
        self.probabilities
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(i, p)| (bitstring(i, self.num_qubits), *p))
            .collect()
    }

    pub(crate) fn sample_indices(&self, seed: u64, shots: usize) -> Result<BTreeMap<usize, usize>> {
        if shots == 0 {
            return Err(Error::argument("shots must be at least 1"));
        }
        let dist = WeightedIndex::new(&self.probabilities)
            .map_err(|e| Error::argument(format!("cannot sample distribution: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(dist.sample(&mut rng)).or_insert(0) += 1;
        }
        Ok(counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{Control, GateKind};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn init_state_examples() {
        let s = init_state(1).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0), c(0.0)]);
        let s = init_state(4).unwrap();
        assert_eq!(s.probabilities().get("0000"), Some(1.0));
        for k in 1..=10 {
            assert_eq!(init_state(k).unwrap().norm_sqr(), 1.0);
        }
    }

    #[test]
    fn init_state_capacity() {
        assert!(matches!(init_state(0), Err(Error::Capacity { .. })));
        assert!(matches!(init_state(MAX_QUBITS + 1), Err(Error::Capacity { .. })));
        assert!(matches!(
            StateVector::zero_with_limit(12, 10),
            Err(Error::Capacity { limit: 10, .. })
        ));
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = init_state(1).unwrap();
        s.apply(&Gate::h(0)).unwrap();
        assert!((s.amplitude(0) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((s.amplitude(1) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        let p = s.probabilities();
        assert!((p.get("0").unwrap() - 0.5).abs() < 1e-15);
        assert!((p.get("1").unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn x_uses_little_endian_printing() {
        let mut s = init_state(3).unwrap();
        s.apply(&Gate::x(2)).unwrap();
        assert_eq!(s.probabilities().get("100"), Some(1.0));
    }

    // Controlled-Z with control string 00 on (q2, q1) and target q0. Z acts
    // on the target only, so |001⟩ picks up the sign and |000⟩ does not;
    // X-conjugating the target moves the sign onto |000⟩.
    #[test]
    fn controlled_z_with_zero_control_string() {
        let cz00 = Gate::controlled(
            GateKind::Z,
            0,
            vec![Control::new(2, false), Control::new(1, false)],
        )
        .unwrap();
        let mut s = init_state(3).unwrap();
        s.apply(&Gate::x(0)).unwrap();
        s.apply(&cz00).unwrap();
        assert_eq!(s.amplitude(0b001), c(-1.0));

        let mut s = init_state(3).unwrap();
        s.apply(&cz00).unwrap();
        assert_eq!(s.amplitude(0b000), c(1.0));

        let mut s = init_state(3).unwrap();
        s.apply(&Gate::x(0)).unwrap();
        s.apply(&cz00).unwrap();
        s.apply(&Gate::x(0)).unwrap();
        assert_eq!(s.amplitude(0b000), c(-1.0));
    }

    #[test]
    fn out_of_range_gate_rejected() {
        let mut s = init_state(2).unwrap();
        assert!(matches!(s.apply(&Gate::x(2)), Err(Error::QubitIndex { index: 2, .. })));
        let g = Gate::cnot(5, 0).unwrap();
        assert!(matches!(s.apply(&g), Err(Error::QubitIndex { index: 5, .. })));
    }

    #[test]
    fn sampling() {
        let s = init_state(3).unwrap();
        let counts = s.sample(7, 100).unwrap();
        assert_eq!(counts.len(), 1);
        assert_eq!(counts["000"], 100);
        assert!(s.sample(7, 0).is_err());

        let mut u = init_state(2).unwrap();
        u.apply(&Gate::h(0)).unwrap();
        u.apply(&Gate::h(1)).unwrap();
        let shots = 100_000;
        let a = u.sample(42, shots).unwrap();
        assert_eq!(a.values().sum::<usize>(), shots);
        for count in a.values() {
            let freq = *count as f64 / shots as f64;
            assert!((freq - 0.25).abs() < 0.01, "{freq}");
        }
        assert_eq!(a, u.sample(42, shots).unwrap());
    }

    #[test]
    fn from_amplitudes_checks_shape_and_norm() {
        assert!(StateVector::from_amplitudes(vec![c(1.0); 3]).is_err());
        assert!(matches!(
            StateVector::from_amplitudes(vec![c(1.0), c(1.0)]),
            Err(Error::Normalization { .. })
        ));
        let s = StateVector::from_amplitudes(vec![c(0.6), c(0.8)]).unwrap();
        assert_eq!(s.num_qubits(), 1);
    }
}
