//! Grover search over a read-window database without QRAM.
//!
//! The index register is put in uniform superposition and every data word is
//! written next to its index by multicontrolled X gates (the preparation
//! unitary `V`). The oracle marks basis states whose data register equals the
//! key, and the diffusion is `V · R₀ · V†` with `R₀` the sign flip of the
//! all-zeros state of the whole register.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{power_law_fit, LinearFit};
use crate::genome::{
    build_window_db, encode_window, Base, ReadWindowDatabase, RegisterLayout, Sequence,
};
use crate::qsim::{
    bitstring, zero_phase_circuit, Circuit, Control, Gate, GateKind, GateTally, StateVector,
    MAX_QUBITS,
};

/// Probabilities closer than this are treated as tied when picking the most
/// likely outcome.
const ARGMAX_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SearchProblem {
    db: ReadWindowDatabase,
    key: Vec<Base>,
    layout: RegisterLayout,
}

impl SearchProblem {
    pub fn new(db: ReadWindowDatabase, key: Vec<Base>) -> Result<Self> {
        if key.len() != db.window_length() {
            return Err(Error::shape(format!(
                "key has {} bases, windows have {}",
                key.len(),
                db.window_length()
            )));
        }
        let layout = db.layout();
        Ok(SearchProblem { db, key, layout })
    }

    pub fn from_text(genome: &str, key: &str) -> Result<Self> {
        let genome: Sequence = genome.parse()?;
        let key: Sequence = key.parse()?;
        let db = build_window_db(genome, key.len())?;
        SearchProblem::new(db, key.bases().to_vec())
    }

    pub fn db(&self) -> &ReadWindowDatabase {
        &self.db
    }

    pub fn key(&self) -> &[Base] {
        &self.key
    }

    pub fn key_word(&self) -> usize {
        encode_window(&self.key) as usize
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    fn check_capacity(&self) -> Result<()> {
        check_layout(&self.layout)
    }
}

fn check_layout(layout: &RegisterLayout) -> Result<()> {
    if layout.total > MAX_QUBITS {
        return Err(Error::Capacity {
            what: "search register qubits".into(),
            required: layout.total,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

/// The three circuits of one search plus the per-iteration gate tally
/// (oracle + diffusion, including X conjugations).
#[derive(Debug, Clone)]
pub struct PreparedDatabaseCircuit {
    pub state_prep: Circuit,
    pub oracle: Circuit,
    pub diffusion: Circuit,
    pub iteration_tally: GateTally,
}

impl PreparedDatabaseCircuit {
    pub fn build(problem: &SearchProblem) -> Result<Self> {
        let state_prep = build_state_prep(problem.db())?;
        let oracle = build_oracle(problem)?;
        let diffusion = build_diffusion(&state_prep)?;
        let mut iteration_tally = oracle.gate_count();
        iteration_tally.merge(&diffusion.gate_count());
        Ok(PreparedDatabaseCircuit { state_prep, oracle, diffusion, iteration_tally })
    }
}

fn index_controls(layout: &RegisterLayout, index: usize) -> Vec<Control> {
    (0..layout.index_qubits)
        .rev()
        .map(|j| Control::new(layout.index_qubit(j), index >> j & 1 == 1))
        .collect()
}

fn flip(target: usize, controls: Vec<Control>) -> Result<Gate> {
    if controls.is_empty() {
        Ok(Gate::x(target))
    } else {
        Gate::controlled(GateKind::X, target, controls)
    }
}

/// Builds `V`: Hadamards on the index register, then for each index `i` and
/// each set bit of `d_i` one X on that data qubit controlled on the index
/// string of `i`. Padding indices additionally set the flag qubit.
pub fn build_state_prep(db: &ReadWindowDatabase) -> Result<Circuit> {
    let layout = db.layout();
    check_layout(&layout)?;
    let mut c = Circuit::new(layout.total);
    for j in (0..layout.index_qubits).rev() {
        c.push(Gate::h(layout.index_qubit(j)))?;
    }
    for index in 0..db.padded_size() {
        let word = db.data_word(index);
        for bit in 0..layout.data_qubits {
            if word >> bit & 1 == 1 {
                c.push(flip(layout.data_qubit(bit), index_controls(&layout, index))?)?;
            }
        }
        if index >= db.num_windows() {
            let flag = layout.flag_qubit().expect("padding implies a flag qubit");
            c.push(flip(flag, index_controls(&layout, index))?)?;
        }
    }
    Ok(c)
}

/// Phase −1 on exactly the basis states whose data register equals the key
/// and whose padding flag (if any) is clear: Z on data qubit 0, conditioned
/// on the remaining key bits, with X conjugation when the key's low bit is 0.
pub fn build_oracle(problem: &SearchProblem) -> Result<Circuit> {
    let layout = problem.layout();
    check_layout(layout)?;
    let key = problem.key_word();
    let mut c = Circuit::new(layout.total);
    let target = layout.data_qubit(0);
    let conjugate = key & 1 == 0;
    if conjugate {
        c.push(Gate::x(target))?;
    }
    let mut controls: Vec<Control> = (1..layout.data_qubits)
        .rev()
        .map(|b| Control::new(layout.data_qubit(b), key >> b & 1 == 1))
        .collect();
    if let Some(flag) = layout.flag_qubit() {
        controls.insert(0, Control::new(flag, false));
    }
    c.push(Gate::controlled(GateKind::Z, target, controls)?)?;
    if conjugate {
        c.push(Gate::x(target))?;
    }
    Ok(c)
}

/// `V · R₀ · V†` (applied right to left): undo the preparation, reflect
/// about the all-zeros state of the full register, prepare again.
pub fn build_diffusion(state_prep: &Circuit) -> Result<Circuit> {
    let n = state_prep.num_qubits();
    let mut c = state_prep.inverse();
    let all: Vec<usize> = (0..n).collect();
    c.extend(&zero_phase_circuit(n, &all)?)?;
    c.extend(state_prep)?;
    Ok(c)
}

/// `floor(π/4 · √(n/s))`, at least 1.
pub fn optimal_iterations(num_windows: usize, num_solutions: usize) -> Result<usize> {
    if num_solutions == 0 {
        return Err(Error::argument(
            "solution count is zero; use the unknown-count driver",
        ));
    }
    if num_solutions > num_windows {
        return Err(Error::argument(format!(
            "{num_solutions} solutions among {num_windows} windows"
        )));
    }
    let k = (PI / 4.0 * (num_windows as f64 / num_solutions as f64).sqrt()).floor() as usize;
    Ok(k.max(1))
}

/// Most likely basis state, split into registers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub bitstring: String,
    pub index: usize,
    pub data: String,
    pub padding: bool,
    pub probability: f64,
    pub matches_key: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Match {
    pub index: usize,
    pub window: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroverRun {
    pub iterations: usize,
    pub p_exact: f64,
    pub histogram: BTreeMap<String, usize>,
    pub matches: Vec<Match>,
    #[serde(skip)]
    pub argmax: Outcome,
    #[serde(skip)]
    pub final_state: StateVector,
}

impl GroverRun {
    /// Matched indices in ascending order.
    pub fn match_indices(&self) -> Vec<usize> {
        self.matches.iter().map(|m| m.index).collect()
    }
}

fn window_string(w: &[Base]) -> String {
    w.iter().map(|b| b.as_char()).collect()
}

/// Prepares `V|0…0⟩`, applies `iterations` rounds of oracle then diffusion,
/// and reports the exact success probability alongside a sampled histogram.
/// Every sampled outcome whose data register equals the key (and is not
/// padding) is reported as a match, so repeated windows all surface.
pub fn run_search(
    problem: &SearchProblem,
    iterations: usize,
    shots: usize,
    seed: u64,
) -> Result<GroverRun> {
    problem.check_capacity()?;
    let circuits = PreparedDatabaseCircuit::build(problem)?;
    run_prepared(problem, &circuits, iterations, shots, seed)
}

pub fn run_prepared(
    problem: &SearchProblem,
    circuits: &PreparedDatabaseCircuit,
    iterations: usize,
    shots: usize,
    seed: u64,
) -> Result<GroverRun> {
    let layout = *problem.layout();
    let key = problem.key_word();
    let mut state = StateVector::zero(layout.total)?;
    circuits.state_prep.run(&mut state)?;
    for _ in 0..iterations {
        circuits.oracle.run(&mut state)?;
        circuits.diffusion.run(&mut state)?;
    }

    let dist = state.probabilities();
    let probs = dist.as_slice();
    let is_hit = |basis: usize| {
        let (_, data, flag) = layout.decode(basis);
        data == key && !flag
    };
    let p_exact: f64 = probs
        .iter()
        .enumerate()
        .filter(|(b, _)| is_hit(*b))
        .map(|(_, p)| p)
        .sum();

    // Ties go to key-matching outcomes, then to the lowest basis index.
    let mut best = 0usize;
    for (b, &p) in probs.iter().enumerate().skip(1) {
        let diff = p - probs[best];
        if diff > ARGMAX_TIE_TOLERANCE
            || (diff.abs() <= ARGMAX_TIE_TOLERANCE && is_hit(b) && !is_hit(best))
        {
            best = b;
        }
    }
    let (index, data, padding) = layout.decode(best);
    let argmax = Outcome {
        bitstring: bitstring(best, layout.total),
        index,
        data: bitstring(data, layout.data_qubits),
        padding,
        probability: probs[best],
        matches_key: is_hit(best),
    };

    // Zero shots gives the exact distribution only, with no sampled matches.
    let counts = if shots == 0 { BTreeMap::new() } else { dist.sample_indices(seed, shots)? };
    let mut matched = BTreeSet::new();
    for &basis in counts.keys() {
        let (index, _, _) = layout.decode(basis);
        if is_hit(basis) && index < problem.db().num_windows() {
            matched.insert(index);
        }
    }
    let matches = matched
        .into_iter()
        .map(|index| Match { index, window: window_string(problem.db().window(index)) })
        .collect();
    let histogram = counts
        .into_iter()
        .map(|(b, c)| (bitstring(b, layout.total), c))
        .collect();

    Ok(GroverRun { iterations, p_exact, histogram, matches, argmax, final_state: state })
}

/// Exhaustive scan returning `(index, mismatches)` for every window within
/// `max_mismatches` base substitutions of `key`.
pub fn classical_scan(
    db: &ReadWindowDatabase,
    key: &[Base],
    max_mismatches: usize,
) -> Vec<(usize, usize)> {
    db.windows()
        .filter_map(|(i, w)| {
            let d = w.iter().zip(key).filter(|(a, b)| a != b).count();
            (d <= max_mismatches && w.len() == key.len()).then_some((i, d))
        })
        .collect()
}

/// Outcome of the doubling driver for an unknown number of matches.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnknownCountSearch {
    /// `(iterations, verified matches found)` per round.
    pub rounds: Vec<(usize, usize)>,
    pub matches: Vec<Match>,
}

/// Tries `k = 1, 2, 4, …` iterations, verifying every sampled candidate
/// against the classical database, and stops at the first round with a
/// verified match or once `k` exceeds the single-solution optimum.
pub fn search_unknown_count(
    problem: &SearchProblem,
    shots: usize,
    seed: u64,
) -> Result<UnknownCountSearch> {
    problem.check_capacity()?;
    let circuits = PreparedDatabaseCircuit::build(problem)?;
    let n = problem.db().padded_size();
    let k_max = optimal_iterations(n, 1)?;
    let mut rounds = Vec::new();
    let mut k = 1;
    loop {
        let run = run_prepared(problem, &circuits, k, shots, seed.wrapping_add(k as u64))?;
        let verified: Vec<Match> = run
            .matches
            .into_iter()
            .filter(|m| problem.db().window(m.index) == problem.key())
            .collect();
        rounds.push((k, verified.len()));
        if !verified.is_empty() || k >= k_max {
            return Ok(UnknownCountSearch { rounds, matches: verified });
        }
        k = (2 * k).min(k_max);
    }
}

/// One genome size of a data-loading cost sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadingRow {
    pub n: usize,
    pub prep_gates: usize,
    pub iter_gates: usize,
    pub iterations: usize,
    pub total_gates: usize,
    pub qubits: usize,
    /// Whether `V|0…0⟩` was simulated and checked for this row.
    pub simulated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadingScan {
    pub window_length: usize,
    pub rows: Vec<LoadingRow>,
    pub prep_fit: LinearFit,
    pub total_fit: LinearFit,
}

impl LoadingScan {
    pub fn prep_exponent(&self) -> f64 {
        self.prep_fit.slope
    }

    pub fn total_exponent(&self) -> f64 {
        self.total_fit.slope
    }

    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "N,prep_gates,iter_gates,total_gates")?;
        for r in &self.rows {
            writeln!(out, "{},{},{},{}", r.n, r.prep_gates, r.iter_gates, r.total_gates)?;
        }
        Ok(())
    }
}

/// Uniformly random genome of `len` bases.
pub fn random_genome<R: Rng>(rng: &mut R, len: usize) -> Sequence {
    let bases = (0..len).map(|_| Base::ALL[rng.gen_range(0..4)]).collect();
    Sequence::new(bases).expect("non-empty genome")
}

/// Counts gates of the preparation, one iteration, and the full search
/// with the single-solution optimal iteration count, over random genomes of
/// each size. Rows whose register has at most `simulate_up_to` qubits also
/// execute `V` and check the prepared state.
pub fn loading_cost_scan(
    sizes: &[usize],
    window_length: usize,
    seed: u64,
    simulate_up_to: usize,
) -> Result<LoadingScan> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let genome = random_genome(&mut rng, n);
        let key = genome.bases()[..window_length.min(n)].to_vec();
        let problem = SearchProblem::new(build_window_db(genome, window_length)?, key)?;
        rows.push(loading_row(&problem, simulate_up_to)?);
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let prep: Vec<f64> = rows.iter().map(|r| r.prep_gates as f64).collect();
    let total: Vec<f64> = rows.iter().map(|r| r.total_gates as f64).collect();
    Ok(LoadingScan {
        window_length,
        prep_fit: power_law_fit(&xs, &prep)?,
        total_fit: power_law_fit(&xs, &total)?,
        rows,
    })
}

pub(crate) fn loading_row(problem: &SearchProblem, simulate_up_to: usize) -> Result<LoadingRow> {
    let circuits = PreparedDatabaseCircuit::build(problem)?;
    let prep_gates = circuits.state_prep.len();
    let iter_gates = circuits.iteration_tally.total();
    let iterations = optimal_iterations(problem.db().padded_size(), 1)?;
    let qubits = problem.layout().total;
    let simulated = qubits <= simulate_up_to;
    if simulated {
        let err = prepared_state_error(problem.db(), &circuits.state_prep)?;
        if err > 1e-10 {
            return Err(Error::Infeasible(format!(
                "prepared database state deviates by {err:e}"
            )));
        }
    }
    Ok(LoadingRow {
        n: problem.db().genome().len(),
        prep_gates,
        iter_gates,
        iterations,
        total_gates: prep_gates + iterations * iter_gates,
        qubits,
        simulated,
    })
}

/// Largest amplitude deviation of `V|0…0⟩` from the ideal
/// `Σ_i |i⟩|d_i⟩ / √padded_size` (padding entries carry the flag bit).
pub fn prepared_state_error(db: &ReadWindowDatabase, state_prep: &Circuit) -> Result<f64> {
    let layout = db.layout();
    let mut state = StateVector::zero(layout.total)?;
    state_prep.run(&mut state)?;
    let amp = 1.0 / (db.padded_size() as f64).sqrt();
    let mut expected = vec![0.0; state.dimension()];
    for i in 0..db.padded_size() {
        let basis = layout.encode(i, db.data_word(i) as usize, i >= db.num_windows());
        expected[basis] = amp;
    }
    Ok(state
        .amplitudes()
        .iter()
        .zip(&expected)
        .map(|(a, e)| (a - e).norm())
        .fold(0.0, f64::max))
}

/// Closed-form success probability `sin²((2k+1)·asin(√(s/n)))`.
pub fn closed_form_success(num_windows: usize, num_solutions: usize, iterations: usize) -> f64 {
    let theta = (num_solutions as f64 / num_windows as f64).sqrt().asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}
