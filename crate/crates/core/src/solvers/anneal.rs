use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fields::LocalFields;
use crate::error::{Error, Result};
use crate::qubo::QuadraticModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpolation {
    Linear,
    Geometric,
}

impl fmt::Display for Interpolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Interpolation::Linear => "linear",
            Interpolation::Geometric => "geometric",
        })
    }
}

impl FromStr for Interpolation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Interpolation::Linear),
            "geometric" => Ok(Interpolation::Geometric),
            other => Err(Error::Config(format!("unknown interpolation {other:?}"))),
        }
    }
}

/// Inverse-temperature ladder, one rung per sweep. A sweep is `n`
/// sequential single-variable update attempts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub sweeps: usize,
    pub beta_start: f64,
    pub beta_end: f64,
    pub interpolation: Interpolation,
}

impl AnnealSchedule {
    pub const DEFAULT_BETA_START: f64 = 0.1;
    pub const DEFAULT_BETA_END: f64 = 10.0;

    pub fn new(sweeps: usize, beta_start: f64, beta_end: f64, interpolation: Interpolation) -> Result<Self> {
        if sweeps == 0 {
            return Err(Error::argument("schedule needs at least one sweep"));
        }
        if !(beta_start > 0.0 && beta_start <= beta_end && beta_end.is_finite()) {
            return Err(Error::argument(format!(
                "need 0 < beta_start <= beta_end, got {beta_start} and {beta_end}"
            )));
        }
        Ok(AnnealSchedule { sweeps, beta_start, beta_end, interpolation })
    }

    /// Geometric 0.1 → 10 ladder.
    pub fn with_sweeps(sweeps: usize) -> Result<Self> {
        Self::new(sweeps, Self::DEFAULT_BETA_START, Self::DEFAULT_BETA_END, Interpolation::Geometric)
    }

    /// Same ladder shape at a different length.
    pub fn resized(&self, sweeps: usize) -> Result<Self> {
        Self::new(sweeps, self.beta_start, self.beta_end, self.interpolation)
    }

    /// Beta for sweep `k`; a one-sweep schedule runs at `beta_end`.
    pub fn beta(&self, k: usize) -> f64 {
        if self.sweeps == 1 {
            return self.beta_end;
        }
        let f = k as f64 / (self.sweeps - 1) as f64;
        match self.interpolation {
            Interpolation::Linear => self.beta_start + f * (self.beta_end - self.beta_start),
            Interpolation::Geometric => self.beta_start * (self.beta_end / self.beta_start).powf(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverRun {
    pub assignment: Vec<i8>,
    pub energy: f64,
    /// Best energy seen by the end of each sweep.
    pub trace: Vec<f64>,
    pub seed: u64,
}

/// Metropolis acceptance probability `min(1, exp(−β ΔE))`.
#[inline]
pub fn acceptance_probability(beta: f64, delta: f64) -> f64 {
    if delta <= 0.0 {
        1.0
    } else {
        (-beta * delta).exp()
    }
}

/// Single-variable Metropolis annealing from a uniformly random start.
/// Variables are visited in index order within each sweep.
pub fn simulated_annealing(model: &QuadraticModel, schedule: &AnnealSchedule, seed: u64) -> SolverRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = model.num_vars();
    let values = model.convention().values();
    let start: Vec<i8> = (0..n).map(|_| values[usize::from(rng.gen::<bool>())]).collect();
    let mut lf = LocalFields::new(model, start);
    let mut e = model.energy_unchecked(lf.assignment());
    let mut best_e = e;
    let mut best = lf.assignment().to_vec();
    let mut trace = Vec::with_capacity(schedule.sweeps);
    for k in 0..schedule.sweeps {
        let beta = schedule.beta(k);
        for i in 0..n {
            let d = lf.delta(i);
            if d <= 0.0 || rng.gen::<f64>() < acceptance_probability(beta, d) {
                e += lf.flip(i);
                if e < best_e {
                    best_e = e;
                    best.copy_from_slice(lf.assignment());
                }
            }
        }
        trace.push(best_e);
    }
    let energy = model.energy_unchecked(&best);
    SolverRun { assignment: best, energy, trace, seed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::Convention;
    use crate::solvers::brute_force;

    fn glass(n: usize, seed: u64) -> QuadraticModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = QuadraticModel::new(Convention::Spin, n).unwrap();
        for i in 0..n {
            m.add_linear(i, rng.gen_range(-0.5..0.5)).unwrap();
            for j in i + 1..n {
                if rng.gen_bool(0.4) {
                    m.add_quadratic(i, j, rng.gen_range(-1.0..1.0)).unwrap();
                }
            }
        }
        m
    }

    #[test]
    fn incremental_delta_matches_full_energy() {
        for conv in [Convention::Spin, Convention::Binary] {
            let mut m = glass(9, 5);
            if conv == Convention::Binary {
                m = m.to_binary();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            let vals = conv.values();
            let x: Vec<i8> = (0..9).map(|_| vals[usize::from(rng.gen::<bool>())]).collect();
            let mut lf = LocalFields::new(&m, x);
            for step in 0..200 {
                let i = (step * 7) % 9;
                let before = m.energy(lf.assignment()).unwrap();
                let mut y = lf.assignment().to_vec();
                y[i] = conv.flipped(y[i]);
                let full = m.energy(&y).unwrap() - before;
                assert!((lf.delta(i) - full).abs() < 1e-10);
                let d = lf.flip(i);
                assert!((d - full).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn acceptance_rule() {
        assert_eq!(acceptance_probability(2.0, -1.0), 1.0);
        assert_eq!(acceptance_probability(2.0, 0.0), 1.0);
        assert_eq!(acceptance_probability(2.0, 0.5), (-1.0f64).exp());
    }

    #[test]
    fn ladder_shapes() {
        let g = AnnealSchedule::with_sweeps(3).unwrap();
        assert!((g.beta(0) - 0.1).abs() < 1e-15);
        assert!((g.beta(1) - 1.0).abs() < 1e-12);
        assert!((g.beta(2) - 10.0).abs() < 1e-12);
        let l = AnnealSchedule::new(3, 1.0, 3.0, Interpolation::Linear).unwrap();
        assert_eq!(l.beta(1), 2.0);
        assert_eq!(AnnealSchedule::with_sweeps(1).unwrap().beta(0), 10.0);
        assert!(AnnealSchedule::new(0, 1.0, 2.0, Interpolation::Linear).is_err());
        assert!(AnnealSchedule::new(5, 2.0, 1.0, Interpolation::Linear).is_err());
        assert!(AnnealSchedule::new(5, 0.0, 1.0, Interpolation::Linear).is_err());
        assert!(AnnealSchedule::new(5, 1.0, 1.0, Interpolation::Geometric).is_ok());
    }

    #[test]
    fn deterministic_and_trace_non_increasing() {
        let m = glass(16, 2);
        let s = AnnealSchedule::with_sweeps(50).unwrap();
        let a = simulated_annealing(&m, &s, 11);
        assert_eq!(a, simulated_annealing(&m, &s, 11));
        assert_eq!(a.trace.len(), 50);
        assert!(a.trace.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(a.energy, m.energy(&a.assignment).unwrap());
        assert!((a.trace[49] - a.energy).abs() < 1e-9);
    }

    #[test]
    fn one_sweep_respects_ground_energy() {
        let m = glass(16, 8);
        let ground = brute_force(&m).unwrap().energy;
        for seed in 0..20 {
            let r = simulated_annealing(&m, &AnnealSchedule::with_sweeps(1).unwrap(), seed);
            assert!(r.energy >= ground - 1e-12);
            assert_eq!(r.trace.len(), 1);
        }
    }

    #[test]
    fn fixed_temperature_schedule() {
        let m = glass(8, 3);
        let s = AnnealSchedule::new(20, 1.5, 1.5, Interpolation::Geometric).unwrap();
        assert!((0..20).all(|k| s.beta(k) == 1.5));
        let r = simulated_annealing(&m, &s, 4);
        assert_eq!(r.energy, m.energy(&r.assignment).unwrap());
    }

    #[test]
    fn ferromagnetic_chain() {
        let mut m = QuadraticModel::new(Convention::Spin, 8).unwrap();
        for i in 0..7 {
            m.add_quadratic(i, i + 1, -1.0).unwrap();
        }
        let ground = brute_force(&m).unwrap().energy;
        assert_eq!(ground, -7.0);
        let s = AnnealSchedule::with_sweeps(200).unwrap();
        let hits = (0..100).filter(|&seed| simulated_annealing(&m, &s, seed).energy == ground).count();
        assert!(hits >= 99, "{hits}/100");
    }
}
