//! Command-line front end. Every data file starts with a metadata header
//! (`#` lines for CSV and model files, a `metadata` object for JSON) and all
//! floats are written with 17 significant digits.
//!
//! Exit codes: 0 success, 1 domain failure, 2 capacity, 3 parse or config.
//!
//! `--config FILE` reads flat `key=value` lines (`#` comments allowed) that
//! act as defaults for the subcommand's flags; flags on the command line
//! win. `GENOQUANT_THREADS` sets the worker thread count.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::genome::{build_window_db, decode_window, parse_sequence, Sequence};
use crate::grover::{
    classical_scan, loading_cost_scan, optimal_iterations, run_search, GroverRun, PreparedDatabaseCircuit,
    SearchProblem,
};
use crate::output::{fmt_f64, Metadata};
use crate::qubo::{
    embedding_overhead, Connectivity, Convention, NativeInstance, Problem, QuadraticModel, DEFAULT_ASSEMBLY_CAP,
};
use crate::runtime::{
    crossover_size, grover_calls, max_depth_per_call, parse_frequency, quantum_runtime, runtime_sweep,
    write_sweep_csv, HardwareProfile, PowerLaw,
};
use crate::solvers::{
    brute_force, estimate_success_probability, simulated_annealing, write_batch_csv, AnnealSchedule,
    Interpolation,
};
use crate::tts::{
    tts_curve, tts_scan, tts_scan_with, write_curves_csv, write_summary_csv, ScanConfig,
    StubSource, TtsScan,
};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "GENOQUANT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "genoquant", version, about = "Grover read search, QUBO encoders and time-to-solution experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverKind {
    Brute,
    Anneal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TtsSolver {
    Anneal,
    Stub,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Seed for every random choice; required by stochastic runs
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output path (a directory for tts-scan); stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Flat key=value file with defaults for this subcommand's flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Leave the timestamp out of metadata headers
    #[arg(long)]
    pub no_timestamp: bool,
}

impl Common {
    fn metadata(&self, command: &str) -> Metadata {
        Metadata::new(command, self.seed, !self.no_timestamp)
    }

    fn require_seed(&self, what: &str) -> Result<u64> {
        self.seed.ok_or_else(|| Error::Config(format!("{what} is stochastic and needs --seed")))
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScheduleArgs {
    /// Initial inverse temperature
    #[arg(long, default_value_t = AnnealSchedule::DEFAULT_BETA_START)]
    pub beta_start: f64,
    /// Final inverse temperature
    #[arg(long, default_value_t = AnnealSchedule::DEFAULT_BETA_END)]
    pub beta_end: f64,
    /// Beta interpolation between start and end
    #[arg(long, default_value = "geometric")]
    pub interpolation: String,
}

impl ScheduleArgs {
    fn schedule(&self, sweeps: usize) -> Result<AnnealSchedule> {
        AnnealSchedule::new(sweeps, self.beta_start, self.beta_end, self.interpolation.parse::<Interpolation>()?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Problem family: max-cut, phasing, assembly (alias tsp-path), knapsack, mis
    #[arg(long)]
    pub problem: Option<String>,
    /// Native instance size (vertices, alleles, reads or items)
    #[arg(long)]
    pub n: Option<usize>,
    /// Native instance as JSON (overrides --problem/--n)
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Largest overlap graph accepted by the assembly encoder
    #[arg(long, default_value_t = DEFAULT_ASSEMBLY_CAP)]
    pub assembly_cap: usize,
}

impl InstanceArgs {
    /// JSON file, else a random instance when seeded, else the fixed
    /// reference instance.
    fn load(&self, seed: Option<u64>) -> Result<Option<NativeInstance>> {
        if let Some(path) = &self.instance {
            return NativeInstance::from_json(&read_text(path)?).map(Some);
        }
        let (Some(p), Some(n)) = (&self.problem, self.n) else {
            return Ok(None);
        };
        let problem: Problem = p.parse()?;
        Ok(Some(match seed {
            Some(s) => {
                use rand::SeedableRng;
                NativeInstance::random(problem, n, &mut rand_chacha::ChaCha8Rng::seed_from_u64(s))?
            }
            None => NativeInstance::reference(problem, n)?,
        }))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Four-read toy search {T,A,T,G} for key A, printing circuits and result
    #[command(args_override_self = true)]
    GroverDemo {
        /// Grover iterations (default: the optimum for one solution)
        #[arg(long)]
        iterations: Option<usize>,
        /// Measurement shots to sample (needs --seed when nonzero)
        #[arg(long, default_value_t = 0)]
        shots: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Grover search of a genome's length-M windows for a key, with a classical cross-check
    #[command(args_override_self = true)]
    GroverSearch {
        /// Genome file (FASTA or bare sequence)
        #[arg(long)]
        genome: PathBuf,
        /// Key read; its length sets the window length M
        #[arg(long)]
        key: String,
        /// Grover iterations (default: optimum for --solutions)
        #[arg(long)]
        iterations: Option<usize>,
        /// Assumed number of matching windows when choosing iterations
        #[arg(long, default_value_t = 1)]
        solutions: usize,
        /// Measurement shots
        #[arg(long, default_value_t = 1024)]
        shots: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Gate counts of database loading and full search over random genomes
    #[command(args_override_self = true)]
    LoadingScan {
        /// Genome lengths, comma separated
        #[arg(long, value_delimiter = ',', default_value = "64,128,256,512,1024,2048,4096")]
        sizes: Vec<usize>,
        /// Window length M
        #[arg(long, default_value_t = 2)]
        window: usize,
        /// Simulate and verify the prepared state up to this many qubits
        #[arg(long, default_value_t = 20)]
        simulate_up_to: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Oracle-call count and per-call depth budget on given hardware
    #[command(args_override_self = true)]
    Runtime {
        /// Database size N (e.g. 3e9)
        #[arg(long = "N")]
        n: f64,
        /// Logical gate frequency (e.g. 10kHz, 10MHz)
        #[arg(long)]
        freq: Option<String>,
        /// Built-in hardware profile: surface-10kHz or optimistic-10MHz
        #[arg(long)]
        profile: Option<String>,
        /// Time budget in seconds for the whole search
        #[arg(long, default_value_t = crate::runtime::DEFAULT_CLASSICAL_SECONDS)]
        budget: f64,
        /// Per-call circuit depth, to report the quantum runtime
        #[arg(long)]
        depth: Option<u64>,
        /// Write a log-spaced sweep of both runtime curves instead
        #[arg(long)]
        sweep: bool,
        /// Classical runtime law "prefactor,exponent" (default: budget seconds at N, linear)
        #[arg(long)]
        classical: Option<String>,
        /// Quantum runtime law "prefactor,exponent" (default: depth/frequency per call, exponent 0.5)
        #[arg(long)]
        quantum: Option<String>,
        /// Smallest N of the sweep
        #[arg(long, default_value_t = 1.0)]
        n_min: f64,
        /// Largest N of the sweep (default: N)
        #[arg(long)]
        n_max: Option<f64>,
        /// Sweep points
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Build or solve QUBO/Ising models of genomics problems
    Qubo {
        #[command(subcommand)]
        action: QuboAction,
    },
    /// Time-to-solution curves and TTS* scaling on planted ferromagnets
    #[command(args_override_self = true)]
    TtsScan {
        /// Problem sizes, comma separated
        #[arg(long, value_delimiter = ',', default_value = "8,12,16,20,24")]
        sizes: Vec<usize>,
        /// Instances per size
        #[arg(long, default_value_t = 1)]
        instances: usize,
        /// Sweep counts t, comma separated and increasing
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64,128,256,512")]
        grid: Vec<usize>,
        /// Runs per grid point
        #[arg(long, default_value_t = 200)]
        runs: usize,
        /// Target overall success probability p_d
        #[arg(long, default_value_t = crate::tts::DEFAULT_TARGET)]
        target: f64,
        /// Success source: annealing, or the analytic stub p(t) = 1 - exp(-(t/tau)^2)
        #[arg(long, value_enum, default_value = "anneal")]
        solver: TtsSolver,
        /// Stub time scale per variable, tau = stub_tau * N
        #[arg(long, default_value_t = 1.0)]
        stub_tau: f64,
        #[command(flatten)]
        schedule: ScheduleArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Subcommand)]
pub enum QuboAction {
    /// Encode a native instance and write the model file
    #[command(args_override_self = true)]
    Build {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Convert the model to this convention: spin or binary
        #[arg(long)]
        convention: Option<String>,
        /// Hardware connectivity for the embedding estimate: all-to-all, grid or gridD
        #[arg(long, default_value = "all-to-all")]
        connectivity: String,
        #[command(flatten)]
        common: Common,
    },
    /// Solve a model file or native instance by brute force or annealing
    #[command(args_override_self = true)]
    Solve {
        /// Model file to solve
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        instance: InstanceArgs,
        /// Solver
        #[arg(long, value_enum, default_value = "brute")]
        solver: SolverKind,
        /// Annealing sweeps per run
        #[arg(long, default_value_t = 1000)]
        sweeps: usize,
        /// Annealing runs; more than one reports success statistics
        #[arg(long, default_value_t = 1)]
        runs: usize,
        /// Success threshold energy (default: brute-force optimum)
        #[arg(long)]
        threshold: Option<f64>,
        #[command(flatten)]
        schedule: ScheduleArgs,
        #[command(flatten)]
        common: Common,
    },
}

/// The clap command tree, for help rendering and tests.
pub fn command() -> clap::Command {
    Cli::command()
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

/// Finds `--config PATH` and splices the file's entries in as flags right
/// after the (innermost) subcommand name, so later command-line flags
/// override them.
fn expand_config(args: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            path = args.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = read_text(Path::new(&path))?;
    let mut injected = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            position: ln + 1,
            message: format!("expected key=value in config, got {line:?}"),
        })?;
        let key = k.trim().replace('_', "-");
        let value = v.trim();
        if key == "config" {
            continue;
        }
        match value {
            "true" => injected.push(format!("--{key}")),
            "false" => {}
            _ => {
                injected.push(format!("--{key}"));
                injected.push(value.to_string());
            }
        }
    }
    let mut pos = args.iter().skip(1).position(|a| !a.starts_with('-')).map(|p| p + 1);
    if let Some(p) = pos {
        if args[p] == "qubo" && args.get(p + 1).is_some_and(|a| !a.starts_with('-')) {
            pos = Some(p + 1);
        }
    }
    let at = pos.map_or(args.len(), |p| p + 1);
    let mut out = args[..at].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        // A pool may already exist when called repeatedly in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<String> = args.into_iter().map(|a| a.into().to_string_lossy().into_owned()).collect();
    let result = init_threads().and_then(|()| expand_config(args)).and_then(|args| {
        match Cli::try_parse_from(args) {
            Ok(cli) => dispatch(cli.command, stdout, stderr),
            Err(e) => {
                use clap::error::ErrorKind;
                let shown = e.render().to_string();
                if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                    let _ = write!(stdout, "{shown}");
                    Ok(0)
                } else {
                    Err(Error::Config(shown.trim_end().to_string()))
                }
            }
        }
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(common: &Common, stdout: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    match &common.out {
        Some(path) => fs::write(path, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

fn json_bytes(value: &impl Serialize) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

fn csv_with_header(meta: &Metadata, body: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    meta.write_csv_header(&mut buf)?;
    body(&mut buf)?;
    Ok(buf)
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::GroverDemo { iterations, shots, common } => grover_demo(iterations, shots, &common, stdout, stderr),
        Command::GroverSearch { genome, key, iterations, solutions, shots, common } => {
            grover_search(&genome, &key, iterations, solutions, shots, &common, stdout)
        }
        Command::LoadingScan { sizes, window, simulate_up_to, common } => {
            loading_scan(&sizes, window, simulate_up_to, &common, stdout)
        }
        Command::Runtime { n, freq, profile, budget, depth, sweep, classical, quantum, n_min, n_max, points, common } => {
            let hw = hardware(freq.as_deref(), profile.as_deref())?;
            if sweep {
                runtime_sweep_cmd(n, &hw, budget, depth, classical, quantum, n_min, n_max, points, &common, stdout)
            } else {
                runtime_row(n, &hw, budget, depth, &common, stdout)
            }
        }
        Command::Qubo { action: QuboAction::Build { instance, convention, connectivity, common } } => {
            qubo_build(&instance, convention.as_deref(), &connectivity, &common, stdout)
        }
        Command::Qubo {
            action: QuboAction::Solve { model, instance, solver, sweeps, runs, threshold, schedule, common },
        } => qubo_solve(model.as_deref(), &instance, solver, sweeps, runs, threshold, &schedule, &common, stdout),
        Command::TtsScan { sizes, instances, grid, runs, target, solver, stub_tau, schedule, common } => {
            tts_scan_cmd(&sizes, instances, &grid, runs, target, solver, stub_tau, &schedule, &common, stdout, stderr)
        }
    }
}

fn window_of(run: &GroverRun, window_length: usize) -> String {
    let data = u128::from_str_radix(&run.argmax.data, 2).unwrap_or(0);
    decode_window(data, window_length).iter().map(|b| b.as_char()).collect()
}

const DEMO_GENOME: &str = "TATG";
const DEMO_KEY: &str = "A";
const DEMO_INDEX: usize = 1;

fn grover_demo(
    iterations: Option<usize>,
    shots: usize,
    common: &Common,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let problem = SearchProblem::from_text(DEMO_GENOME, DEMO_KEY)?;
    let k = match iterations {
        Some(k) => k,
        None => optimal_iterations(problem.db().padded_size(), 1)?,
    };
    let seed = if shots > 0 { common.require_seed("sampling shots")? } else { common.seed.unwrap_or(0) };
    let circuits = PreparedDatabaseCircuit::build(&problem)?;
    let run = run_search(&problem, k, shots, seed)?;
    let window = window_of(&run, 1);
    let meta = common.metadata("grover-demo").param("iterations", k).param("shots", shots);
    let bytes = match common.format {
        Some(Format::Json) => json_bytes(&json!({
            "metadata": meta,
            "genome": DEMO_GENOME,
            "key": DEMO_KEY,
            "circuits": {
                "state_prep": circuits.state_prep.to_string(),
                "oracle": circuits.oracle.to_string(),
                "diffusion": circuits.diffusion.to_string(),
            },
            "iterations": k,
            "p_exact": run.p_exact,
            "argmax": {
                "bitstring": run.argmax.bitstring,
                "index": run.argmax.index,
                "window": window,
                "probability": run.argmax.probability,
            },
            "histogram": run.histogram,
        }))?,
        Some(Format::Csv) => csv_with_header(&meta, |b| {
            writeln!(b, "bitstring,count")?;
            for (s, c) in &run.histogram {
                writeln!(b, "{s},{c}")?;
            }
            Ok(())
        })?,
        None => {
            let mut b = Vec::new();
            meta.write_csv_header(&mut b)?;
            writeln!(b, "database {DEMO_GENOME} (M=1), key {DEMO_KEY}")?;
            writeln!(b, "state preparation V:\n{}", circuits.state_prep)?;
            writeln!(b, "oracle:\n{}", circuits.oracle)?;
            writeln!(b, "diffusion:\n{}", circuits.diffusion)?;
            writeln!(b, "iterations={k}")?;
            writeln!(b, "p_exact={}", fmt_f64(run.p_exact))?;
            writeln!(b, "most likely state |{}> p={}", run.argmax.bitstring, fmt_f64(run.argmax.probability))?;
            writeln!(b, "decoded index={} window={window}", run.argmax.index)?;
            for (s, c) in &run.histogram {
                writeln!(b, "shots {s} {c}")?;
            }
            b
        }
    };
    emit(common, stdout, &bytes)?;
    if run.p_exact >= 0.999 && run.argmax.index == DEMO_INDEX && run.argmax.matches_key {
        Ok(0)
    } else {
        writeln!(
            stderr,
            "advisory: p_exact={} after {k} iterations, most likely index {}; expected >= 0.999 at index {DEMO_INDEX}",
            fmt_f64(run.p_exact),
            run.argmax.index
        )?;
        Ok(1)
    }
}

fn grover_search(
    genome_path: &Path,
    key: &str,
    iterations: Option<usize>,
    solutions: usize,
    shots: usize,
    common: &Common,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let seed = common.require_seed("grover-search")?;
    let genome = parse_sequence(&read_text(genome_path)?)?;
    let key_seq: Sequence = key.parse()?;
    let db = build_window_db(genome, key_seq.len())?;
    let problem = SearchProblem::new(db, key_seq.bases().to_vec())?;
    let k = match iterations {
        Some(k) => k,
        None => optimal_iterations(problem.db().padded_size(), solutions.max(1))?,
    };
    let run = run_search(&problem, k, shots, seed)?;
    let classical: Vec<usize> = classical_scan(problem.db(), problem.key(), 0).into_iter().map(|m| m.0).collect();
    let classical_set: BTreeSet<usize> = classical.iter().copied().collect();
    let sampled: BTreeSet<usize> = run.match_indices().into_iter().collect();
    let agreement = if classical_set.is_empty() {
        sampled.is_empty() && !run.argmax.matches_key
    } else {
        run.argmax.matches_key
            && classical_set.contains(&run.argmax.index)
            && sampled.is_subset(&classical_set)
    };
    let layout = *problem.layout();
    let meta = common
        .metadata("grover-search")
        .param("genome", genome_path.display())
        .param("key", key)
        .param("iterations", k)
        .param("shots", shots);
    let bytes = match common.format {
        Some(Format::Csv) => csv_with_header(&meta, |b| {
            writeln!(b, "bitstring,count")?;
            for (s, c) in &run.histogram {
                writeln!(b, "{s},{c}")?;
            }
            Ok(())
        })?,
        _ => json_bytes(&json!({
            "metadata": meta,
            "genome_length": problem.db().genome().len(),
            "window_length": problem.db().window_length(),
            "num_windows": problem.db().num_windows(),
            "layout": {
                "index_qubits": layout.index_qubits,
                "data_qubits": layout.data_qubits,
                "padding_flag": layout.padding_flag,
                "total": layout.total,
            },
            "iterations": k,
            "p_exact": run.p_exact,
            "argmax": {
                "index": run.argmax.index,
                "window": window_of(&run, problem.db().window_length()),
                "probability": run.argmax.probability,
                "matches_key": run.argmax.matches_key,
            },
            "matches": run.matches,
            "classical_matches": classical,
            "agreement": agreement,
        }))?,
    };
    emit(common, stdout, &bytes)?;
    Ok(0)
}

fn loading_scan(
    sizes: &[usize],
    window: usize,
    simulate_up_to: usize,
    common: &Common,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let seed = common.require_seed("loading-scan")?;
    let scan = loading_cost_scan(sizes, window, seed, simulate_up_to)?;
    let meta = common
        .metadata("loading-scan")
        .param("sizes", sizes.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        .param("window", window)
        .param("simulate_up_to", simulate_up_to)
        .param("prep_exponent", fmt_f64(scan.prep_exponent()))
        .param("total_exponent", fmt_f64(scan.total_exponent()));
    let bytes = match common.format {
        Some(Format::Json) => json_bytes(&json!({ "metadata": meta, "scan": scan }))?,
        _ => csv_with_header(&meta, |b| scan.write_csv(b))?,
    };
    emit(common, stdout, &bytes)?;
    Ok(0)
}

fn hardware(freq: Option<&str>, profile: Option<&str>) -> Result<HardwareProfile> {
    match (freq, profile) {
        (Some(_), Some(_)) => Err(Error::Config("give either --freq or --profile, not both".into())),
        (Some(f), None) => HardwareProfile::new(f, parse_frequency(f)?),
        (None, Some(p)) => HardwareProfile::builtin(p).ok_or_else(|| Error::Config(format!("unknown profile {p:?}"))),
        (None, None) => Ok(HardwareProfile::surface_10khz()),
    }
}

fn problem_size(n: f64) -> Result<u64> {
    if !(n >= 1.0 && n.fract() == 0.0 && n < u64::MAX as f64) {
        return Err(Error::Config(format!("--N must be a positive integer, got {n}")));
    }
    Ok(n as u64)
}

fn runtime_row(
    n: f64,
    hw: &HardwareProfile,
    budget: f64,
    depth: Option<u64>,
    common: &Common,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let n = problem_size(n)?;
    let calls = grover_calls(n);
    let max_depth = max_depth_per_call(n, budget, hw)?;
    let estimate = depth.map(|d| quantum_runtime(n, d, hw)).transpose()?;
    let meta = common
        .metadata("runtime")
        .param("N", n)
        .param("hardware", &hw.name)
        .param("frequency_hz", fmt_f64(hw.logical_gate_frequency))
        .param("budget_s", fmt_f64(budget));
    let bytes = match common.format {
        Some(Format::Json) => json_bytes(&json!({
            "metadata": meta,
            "N": n,
            "calls": calls,
            "max_depth_per_call": max_depth,
            "estimate": estimate,
        }))?,
        _ => csv_with_header(&meta, |b| {
            writeln!(b, "N,frequency_hz,budget_s,calls,max_depth_per_call,depth,T_quantum")?;
            writeln!(
                b,
                "{n},{},{},{calls},{max_depth},{},{}",
                fmt_f64(hw.logical_gate_frequency),
                fmt_f64(budget),
                depth.map(|d| d.to_string()).unwrap_or_default(),
                estimate.as_ref().map(|e| fmt_f64(e.seconds_total)).unwrap_or_default()
            )?;
            Ok(())
        })?,
    };
    emit(common, stdout, &bytes)?;
    Ok(0)
}

fn power_law_arg(text: &str) -> Result<PowerLaw> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let nums: Option<Vec<f64>> = parts.iter().map(|p| p.parse().ok()).collect();
    match nums.as_deref() {
        Some([a, b]) => PowerLaw::new(*a, *b).map_err(|e| Error::Config(e.to_string())),
        _ => Err(Error::Config(format!("expected \"prefactor,exponent\", got {text:?}"))),
    }
}

#[allow(clippy::too_many_arguments)]
fn runtime_sweep_cmd(
    n: f64,
    hw: &HardwareProfile,
    budget: f64,
    depth: Option<u64>,
    classical: Option<String>,
    quantum: Option<String>,
    n_min: f64,
    n_max: Option<f64>,
    points: usize,
    common: &Common,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let n_ref = problem_size(n)? as f64;
    let classical = match classical {
        Some(t) => power_law_arg(&t)?,
        None => PowerLaw::new(budget / n_ref, 1.0)?,
    };
    let quantum = match quantum {
        Some(t) => power_law_arg(&t)?,
        None => PowerLaw::new(depth.unwrap_or(1) as f64 / hw.logical_gate_frequency, 0.5)?,
    };
    let rows = runtime_sweep(classical, quantum, n_min, n_max.unwrap_or(n_ref), points)?;
    let crossover = crossover_size(classical, quantum);
    let meta = common
        .metadata("runtime --sweep")
        .param("classical", format!("{},{}", fmt_f64(classical.prefactor), fmt_f64(classical.exponent)))
        .param("quantum", format!("{},{}", fmt_f64(quantum.prefactor), fmt_f64(quantum.exponent)))
        .param("crossover_N", crossover.map(fmt_f64).unwrap_or_else(|| "none".into()));
    let bytes = match common.format {
        Some(Format::Json) => json_bytes(&json!({ "metadata": meta, "crossover_N": crossover, "rows": rows }))?,
        _ => csv_with_header(&meta, |b| write_sweep_csv(&rows, b))?,
    };
    emit(common, stdout, &bytes)?;
    Ok(0)
}

fn model_from(
    model: Option<&Path>,
    instance: &InstanceArgs,
    seed: Option<u64>,
) -> Result<(QuadraticModel, Option<NativeInstance>)> {
    if let Some(path) = model {
        let f = fs::File::open(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        return Ok((QuadraticModel::read_from(BufReader::new(f))?, None));
    }
    let inst = instance
        .load(seed)?
        .ok_or_else(|| Error::Config("give --model, --instance, or --problem with --n".into()))?;
    Ok((inst.encode(instance.assembly_cap)?, Some(inst)))
}

fn qubo_build(
    instance: &InstanceArgs,
    convention: Option<&str>,
    connectivity: &str,
    common: &Common,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let (mut model, inst) = model_from(None, instance, common.seed)?;
    if let Some(c) = convention {
        model = match c.parse::<Convention>()? {
            Convention::Spin => model.to_spin(),
            Convention::Binary => model.to_binary(),
        };
    }
    let conn: Connectivity = connectivity.parse()?;
    let emb = embedding_overhead(&model, conn);
    let mut meta = common
        .metadata("qubo build")
        .param("variables", model.num_vars())
        .param("couplings", model.quadratic().len())
        .param("embedding_connectivity", conn)
        .param("embedding_physical", emb.physical_variables)
        .param("embedding_formula", &emb.formula);
    if let Some(i) = &inst {
        meta = meta.param("problem", i.problem());
    }
    let bytes = match common.format {
        Some(Format::Json) => {
            json_bytes(&json!({ "metadata": meta, "instance": inst, "model": model, "embedding": emb }))?
        }
        _ => csv_with_header(&meta, |b| model.write_to(b))?,
    };
    emit(common, stdout, &bytes)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn qubo_solve(
    model_path: Option<&Path>,
    instance: &InstanceArgs,
    solver: SolverKind,
    sweeps: usize,
    runs: usize,
    threshold: Option<f64>,
    schedule: &ScheduleArgs,
    common: &Common,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let (model, inst) = model_from(model_path, instance, common.seed)?;
    let meta = common
        .metadata("qubo solve")
        .param("variables", model.num_vars())
        .param("solver", format!("{solver:?}").to_lowercase());
    let decode = |a: &[i8]| inst.as_ref().map(|i| i.decode(a));
    let bytes = match solver {
        SolverKind::Brute => {
            let bf = brute_force(&model)?;
            let optima: Vec<Vec<i8>> = bf.assignments().collect();
            match common.format {
                Some(Format::Csv) => csv_with_header(&meta, |b| {
                    writeln!(b, "assignment,energy")?;
                    for a in &optima {
                        let s: Vec<String> = a.iter().map(ToString::to_string).collect();
                        writeln!(b, "{},{}", s.join(" "), fmt_f64(bf.energy))?;
                    }
                    Ok(())
                })?,
                _ => {
                    let decoded: Vec<_> = optima.iter().map(|a| decode(a)).collect();
                    json_bytes(&json!({
                        "metadata": meta,
                        "energy": bf.energy,
                        "count": bf.count(),
                        "optima": optima,
                        "decoded": decoded,
                    }))?
                }
            }
        }
        SolverKind::Anneal => {
            let seed = common.require_seed("annealing")?;
            let sched = schedule.schedule(sweeps)?;
            let meta = meta
                .param("sweeps", sweeps)
                .param("beta_start", fmt_f64(sched.beta_start))
                .param("beta_end", fmt_f64(sched.beta_end))
                .param("interpolation", sched.interpolation)
                .param("runs", runs);
            if runs <= 1 {
                let run = simulated_annealing(&model, &sched, seed);
                json_bytes(&json!({ "metadata": meta, "run": run, "decoded": decode(&run.assignment) }))?
            } else {
                let threshold = match threshold {
                    Some(t) => t,
                    None => brute_force(&model)
                        .map_err(|_| Error::Config("model too large for brute force; give --threshold".into()))?
                        .energy,
                };
                let stats = estimate_success_probability(&model, &sched, runs, threshold, seed)?;
                let meta = meta.param("threshold", fmt_f64(threshold)).param("p_hat", fmt_f64(stats.p_hat));
                match common.format {
                    Some(Format::Json) => json_bytes(&json!({ "metadata": meta, "stats": stats }))?,
                    _ => csv_with_header(&meta, |b| write_batch_csv(&stats, b))?,
                }
            }
        }
    };
    emit(common, stdout, &bytes)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn tts_scan_cmd(
    sizes: &[usize],
    instances: usize,
    grid: &[usize],
    runs: usize,
    target: f64,
    solver: TtsSolver,
    stub_tau: f64,
    schedule: &ScheduleArgs,
    common: &Common,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let clock = std::time::Instant::now();
    let sched = schedule.schedule(1)?;
    let list = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    let mut meta = common
        .metadata("tts-scan")
        .param("sizes", list(sizes))
        .param("instances", instances)
        .param("grid", list(grid))
        .param("runs", runs)
        .param("target", fmt_f64(target))
        .param("solver", format!("{solver:?}").to_lowercase());
    let scan: TtsScan = match solver {
        TtsSolver::Anneal => {
            let seed = common.require_seed("tts-scan with annealing")?;
            meta = meta
                .param("beta_start", fmt_f64(sched.beta_start))
                .param("beta_end", fmt_f64(sched.beta_end))
                .param("interpolation", sched.interpolation)
                .param("instance_family", "planted-ferromagnet");
            tts_scan(&ScanConfig {
                sizes: sizes.to_vec(),
                instances,
                grid: grid.to_vec(),
                runs,
                target,
                schedule: sched,
                seed,
            })?
        }
        TtsSolver::Stub => {
            if !(stub_tau > 0.0) {
                return Err(Error::Config("--stub-tau must be positive".into()));
            }
            meta = meta.param("stub", "p(t) = 1 - exp(-(t/tau)^2), tau = stub_tau * N").param("stub_tau", fmt_f64(stub_tau));
            tts_scan_with(sizes, instances, common.seed.unwrap_or(0), |n, _, s| {
                let tau = stub_tau * n as f64;
                let src = StubSource(move |t| 1.0 - (-(t as f64 / tau).powi(2)).exp());
                Ok((None, tts_curve(&src, grid, runs, target, s)?))
            })?
        }
    };
    writeln!(stderr, "tts-scan finished in {:.3} s", clock.elapsed().as_secs_f64())?;
    let report = json!({
        "metadata": meta,
        "mean": { "rows": scan.mean, "fit": scan.mean_fit },
        "median": { "rows": scan.median, "fit": scan.median_fit },
    });
    match &common.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let curves = csv_with_header(&meta, |b| write_curves_csv(&scan, b))?;
            fs::write(dir.join("tts_curves.csv"), curves)?;
            let mean = csv_with_header(&meta.clone().param("aggregate", "mean"), |b| write_summary_csv(&scan.mean, b))?;
            fs::write(dir.join("tts_star_mean.csv"), mean)?;
            let median =
                csv_with_header(&meta.clone().param("aggregate", "median"), |b| write_summary_csv(&scan.median, b))?;
            fs::write(dir.join("tts_star_median.csv"), median)?;
            fs::write(dir.join("tts_fit.json"), json_bytes(&report)?)?;
        }
        None => {
            let bytes = match common.format {
                Some(Format::Json) => json_bytes(&report)?,
                _ => csv_with_header(&meta.clone().param("aggregate", "median"), |b| {
                    write_summary_csv(&scan.median, b)
                })?,
            };
            stdout.write_all(&bytes)?;
        }
    }
    Ok(0)
}
