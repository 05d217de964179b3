//! Acceptance gate. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; the process fails if any criterion does.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use genoquant::genome::{Alphabet, RegisterLayout};
use genoquant::grover::{
    closed_form_success, loading_cost_scan, optimal_iterations, run_prepared, run_search, PreparedDatabaseCircuit,
    SearchProblem,
};
use genoquant::qubo::{NativeInstance, NativeSolution, Problem, DEFAULT_ASSEMBLY_CAP};
use genoquant::runtime::{grover_calls, max_depth_per_call, HardwareProfile};
use genoquant::solvers::{brute_force, AnnealSchedule};
use genoquant::tts::{
    optimal_tts, repetitions_needed, scaling_fit, tts_curve, tts_scan, ScanConfig, StubSource,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("genoquant").chain(args.iter().copied());
    let code = genoquant::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn demo_reproduction() -> Check {
    let (code, out, err) = cli(&["grover-demo", "--format", "json", "--no-timestamp"]);
    ensure(code == 0, || format!("exit {code}: {err}"))?;
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let p1 = v["p_exact"].as_f64().unwrap_or(f64::NAN);
    ensure(v["iterations"] == 1, || format!("iterations {}", v["iterations"]))?;
    ensure(v["argmax"]["bitstring"] == "0100", || format!("final state {}", v["argmax"]["bitstring"]))?;
    ensure(p1 >= 0.999, || format!("p_exact {p1} after one iteration"))?;
    let (_, out, _) = cli(&["grover-demo", "--iterations", "0", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let p0 = v["p_exact"].as_f64().unwrap_or(f64::NAN);
    ensure((p0 - 0.25).abs() < 1e-12, || format!("p_exact {p0} at zero iterations"))?;
    Ok(format!("|0100> p(k=1)={p1:.6} p(k=0)={p0}"))
}

fn register_sizing() -> Check {
    let l = RegisterLayout::for_sizes(3_000_000_000, 100, Alphabet::Dna).map_err(|e| e.to_string())?;
    ensure(l.index_qubits == 32 && l.data_qubits == 200, || format!("q_i={} q_d={}", l.index_qubits, l.data_qubits))?;
    Ok(format!("q_i={} q_d={}", l.index_qubits, l.data_qubits))
}

fn loading_scaling() -> Check {
    let sizes: Vec<usize> = (6..=12).map(|e| 1usize << e).collect();
    let scan = loading_cost_scan(&sizes, 2, 20240101, 20).map_err(|e| e.to_string())?;
    let (a, b) = (scan.prep_exponent(), scan.total_exponent());
    ensure((a - 1.0).abs() <= 0.15, || format!("prep exponent {a}"))?;
    ensure((b - 1.5).abs() <= 0.15, || format!("total exponent {b}"))?;
    ensure(scan.rows.iter().any(|r| r.simulated), || "no row was simulated".into())?;
    Ok(format!("prep exponent {a:.4}, total exponent {b:.4}"))
}

fn runtime_numbers() -> Check {
    let n = 3_000_000_000u64;
    let calls = grover_calls(n);
    ensure((54_000..=60_000).contains(&calls), || format!("calls {calls}"))?;
    let slow = max_depth_per_call(n, 60.0, &HardwareProfile::surface_10khz()).map_err(|e| e.to_string())?;
    let fast = max_depth_per_call(n, 60.0, &HardwareProfile::optimistic_10mhz()).map_err(|e| e.to_string())?;
    // floor(60 / 54773 · f)
    ensure(slow == 10, || format!("10 kHz depth {slow}"))?;
    ensure(fast == 10_954, || format!("10 MHz depth {fast}"))?;
    Ok(format!("calls={calls} depth@10kHz={slow} depth@10MHz={fast}"))
}

const BASES: [char; 4] = ['A', 'C', 'G', 'T'];

fn unique_key_instance(rng: &mut ChaCha8Rng) -> (String, String, usize) {
    loop {
        let m = rng.gen_range(1..=4);
        let windows = rng.gen_range(1..=64);
        let len = windows + m - 1;
        let mut g: Vec<char> = (0..len).map(|_| BASES[rng.gen_range(0..4)]).collect();
        let key: String = (0..m).map(|_| BASES[rng.gen_range(0..4)]).collect();
        let pos = rng.gen_range(0..windows);
        for (i, c) in key.chars().enumerate() {
            g[pos + i] = c;
        }
        let genome: String = g.into_iter().collect();
        let hits: Vec<usize> = (0..windows).filter(|&i| genome[i..i + m] == key).collect();
        if hits == [pos] {
            return (genome, key, pos);
        }
    }
}

fn grover_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let instances = 200;
    for case in 0..instances {
        let (genome, key, pos) = unique_key_instance(&mut rng);
        let p = SearchProblem::from_text(&genome, &key).map_err(|e| e.to_string())?;
        let k = optimal_iterations(p.db().padded_size(), 1).map_err(|e| e.to_string())?;
        let run = run_search(&p, k, 0, 0).map_err(|e| e.to_string())?;
        let window: String = p.db().window(run.argmax.index.min(p.db().num_windows() - 1)).iter().map(|b| b.as_char()).collect();
        ensure(run.argmax.matches_key && run.argmax.index == pos && window == key, || {
            format!("case {case}: argmax index {} vs planted {pos} ({genome}/{key})", run.argmax.index)
        })?;
    }
    // Closed form over s copies of `A` among n single-base windows. The
    // amplitude lives on the padded power-of-two register.
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for n in 1..=32usize {
        for s in 0..=n {
            let mut g: Vec<char> = vec!['T'; n];
            let mut idx: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                idx.swap(i, rng.gen_range(0..=i));
            }
            for &i in &idx[..s] {
                g[i] = 'A';
            }
            let genome: String = g.into_iter().collect();
            let p = SearchProblem::from_text(&genome, "A").map_err(|e| e.to_string())?;
            let circuits = PreparedDatabaseCircuit::build(&p).map_err(|e| e.to_string())?;
            for k in 0..=10 {
                let run = run_prepared(&p, &circuits, k, 0, 0).map_err(|e| e.to_string())?;
                let d = (run.p_exact - closed_form_success(p.db().padded_size(), s, k)).abs();
                worst = worst.max(d);
                checked += 1;
            }
        }
    }
    ensure(worst <= 1e-9, || format!("closed form deviates by {worst:e}"))?;
    Ok(format!("{instances}/{instances} argmax = scan; {checked} closed-form cases, max |dp| {worst:.1e}"))
}

fn native_optimum(inst: &NativeInstance) -> f64 {
    fn subsets(n: usize) -> impl Iterator<Item = Vec<bool>> {
        (0u32..1 << n).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
    }
    fn permutations(items: Vec<usize>) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.clone();
            let head = rest.remove(i);
            for mut p in permutations(rest) {
                p.insert(0, head);
                out.push(p);
            }
        }
        out
    }
    let best = |it: &mut dyn Iterator<Item = f64>| it.fold(f64::NEG_INFINITY, f64::max);
    match inst {
        NativeInstance::MaxCut(g) => best(&mut subsets(g.num_vertices).map(|s| {
            g.edges.iter().filter(|e| s[e.0] != s[e.1]).map(|e| e.2).sum::<f64>()
        })),
        NativeInstance::Phasing(f) => best(&mut subsets(f.num_alleles).map(|s| {
            f.edges.iter().map(|e| if s[e.0] == s[e.1] { e.2 } else { -e.2 }).sum::<f64>()
        })),
        NativeInstance::Assembly(o) => best(&mut permutations((0..o.num_reads).collect()).into_iter().map(|p| {
            p.windows(2)
                .map(|w| o.overlaps.iter().filter(|e| e.0 == w[0] && e.1 == w[1]).map(|e| e.2).sum::<f64>())
                .sum::<f64>()
        })),
        NativeInstance::Knapsack(k) => best(&mut subsets(k.items.len()).filter_map(|s| {
            let w: u64 = k.items.iter().zip(&s).filter(|p| *p.1).map(|p| p.0 .1).sum();
            (w <= k.capacity).then(|| k.items.iter().zip(&s).filter(|p| *p.1).map(|p| p.0 .0).sum::<f64>())
        })),
        NativeInstance::Mis(g) => best(&mut subsets(g.num_vertices).filter_map(|s| {
            g.edges.iter().all(|e| !(s[e.0] && s[e.1])).then(|| s.iter().filter(|b| **b).count() as f64)
        })),
    }
}

fn natively_feasible(inst: &NativeInstance, sol: &NativeSolution) -> bool {
    match (inst, sol) {
        (NativeInstance::Assembly(o), NativeSolution::Path { order, .. }) => {
            let mut seen = order.clone();
            seen.sort_unstable();
            seen == (0..o.num_reads).collect::<Vec<_>>()
        }
        (NativeInstance::Knapsack(k), NativeSolution::Knapsack { items, .. }) => {
            k.items.iter().zip(items).filter(|p| *p.1).map(|p| p.0 .1).sum::<u64>() <= k.capacity
        }
        (NativeInstance::Mis(g), NativeSolution::IndependentSet { vertices, .. }) => {
            g.edges.iter().all(|e| !(vertices[e.0] && vertices[e.1]))
        }
        (NativeInstance::MaxCut(_), NativeSolution::Cut { .. })
        | (NativeInstance::Phasing(_), NativeSolution::Phasing { .. }) => true,
        _ => false,
    }
}

fn encoder_soundness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let per_problem = 100;
    let mut optima_checked = 0;
    for problem in Problem::ALL {
        for case in 0..per_problem {
            let size = match problem {
                Problem::Assembly => rng.gen_range(2..=4),
                Problem::Knapsack => rng.gen_range(1..=10),
                _ => rng.gen_range(2..=16),
            };
            let inst = NativeInstance::random(problem, size, &mut rng).map_err(|e| e.to_string())?;
            let model = inst.encode(DEFAULT_ASSEMBLY_CAP).map_err(|e| e.to_string())?;
            ensure(model.num_vars() <= 16, || format!("{problem} case {case}: {} variables", model.num_vars()))?;
            if problem == Problem::Assembly {
                ensure(model.num_vars() == size * size, || format!("assembly n={size}: {} variables", model.num_vars()))?;
            }
            let truth = native_optimum(&inst);
            let bf = brute_force(&model).map_err(|e| e.to_string())?;
            for x in bf.assignments() {
                let sol = inst
                    .decode(&x)
                    .ok_or_else(|| format!("{problem} case {case}: ground state {x:?} is infeasible"))?;
                ensure(natively_feasible(&inst, &sol), || format!("{problem} case {case}: decoded {sol:?} infeasible"))?;
                let got = sol.objective();
                ensure((got - truth).abs() <= 1e-9 * (1.0 + truth.abs()), || {
                    format!("{problem} case {case}: decoded objective {got} vs native optimum {truth}")
                })?;
                optima_checked += 1;
            }
        }
    }
    Ok(format!("{} instances, {optima_checked} ground states decoded to native optima", 5 * per_problem))
}

fn closed_form_repetitions(p: f64, p_d: f64) -> f64 {
    if p >= p_d {
        1.0
    } else {
        ((1.0 - p_d).ln() / (1.0 - p).ln()).ceil()
    }
}

fn tts_protocol() -> Check {
    let r = repetitions_needed(0.5, 0.9).map_err(|e| e.to_string())?;
    ensure(r == Some(4), || format!("R(0.5, 0.9) = {r:?}"))?;

    let tau = 20.0;
    let grid: Vec<usize> = (0..10).map(|e| 1usize << e).collect();
    let stub = StubSource(move |t: usize| 1.0 - (-(t as f64) / tau).exp());
    let curve = tts_curve(&stub, &grid, 1000, 0.99, 1).map_err(|e| e.to_string())?;
    for pt in &curve.points {
        let t = pt.t as f64;
        let expected = closed_form_repetitions(1.0 - (-t / tau).exp(), 0.99) * t;
        let got = pt.tts.unwrap_or(f64::NAN);
        ensure((got - expected).abs() <= f64::EPSILON * expected, || format!("stub t={t}: {got} vs {expected}"))?;
    }

    for (exponent, prefactor) in [(2.5, 3.0), (1.2, 0.7)] {
        let n: Vec<f64> = (8..=24).step_by(2).map(f64::from).collect();
        let y: Vec<f64> = n.iter().map(|x| prefactor * x.powf(exponent)).collect();
        let fit = scaling_fit(&n, &y).map_err(|e| e.to_string())?;
        let rel = (fit.power_law.exponent - exponent).abs() / exponent;
        ensure(rel < 0.01, || format!("power-law exponent {} vs {exponent}", fit.power_law.exponent))?;
    }
    let n: Vec<f64> = (8..=24).step_by(2).map(f64::from).collect();
    let y: Vec<f64> = n.iter().map(|x| 2.0 * 1.3f64.powf(*x)).collect();
    let fit = scaling_fit(&n, &y).map_err(|e| e.to_string())?;
    ensure((fit.exponential.base - 1.3).abs() / 1.3 < 0.01, || format!("exponential base {}", fit.exponential.base))?;

    let cfg = ScanConfig {
        sizes: (8..=24).step_by(4).collect(),
        instances: 3,
        grid,
        runs: 100,
        target: 0.99,
        schedule: AnnealSchedule::with_sweeps(1).map_err(|e| e.to_string())?,
        seed: 2024,
    };
    let scan = tts_scan(&cfg).map_err(|e| e.to_string())?;
    ensure(scan.instances.len() == 15, || format!("{} curves", scan.instances.len()))?;
    let interior: Vec<usize> = scan.median.iter().filter(|s| !s.optimum.boundary).map(|s| s.n).collect();
    ensure(!interior.is_empty(), || "no size has an interior TTS optimum".into())?;
    for c in &scan.instances {
        let o = optimal_tts(&c.curve).map_err(|e| e.to_string())?;
        ensure(o == c.optimum, || format!("n={} instance {} optimum mismatch", c.n, c.instance))?;
    }
    Ok(format!("R(0.5,0.9)=4, stub exact on {} points, interior optimum at N={interior:?}", curve.points.len()))
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Check {
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let genome = root.path().join("genome.fa");
    fs::write(&genome, ">g\nACGTTGCAAGGCTTACCGATGACTGACCATGCA\n").map_err(|e| e.to_string())?;
    let cfg = root.path().join("scan.cfg");
    fs::write(&cfg, "seed=3\nsizes=8,12,16\ngrid=1,2,4,8,16\nruns=50\ninstances=2\nno_timestamp=true\n")
        .map_err(|e| e.to_string())?;
    let g = genome.to_str().unwrap().to_string();
    let c = cfg.to_str().unwrap().to_string();
    let experiments: Vec<(&str, Vec<String>)> = vec![
        ("grover.json", vec!["grover-search", "--genome", &g, "--key", "TGA", "--seed", "9", "--shots", "500"]),
        ("loading.csv", vec!["loading-scan", "--seed", "4", "--sizes", "64,128,256,512"]),
        ("runtime.csv", vec!["runtime", "--N", "1e3", "--sweep", "--classical", "1,1", "--quantum", "10,0.5"]),
        ("batch.csv", vec!["qubo", "solve", "--problem", "mis", "--n", "10", "--seed", "6", "--solver", "anneal", "--runs", "30"]),
        ("tts", vec!["tts-scan", "--config", &c]),
    ]
    .into_iter()
    .map(|(name, args)| (name, args.into_iter().map(String::from).collect()))
    .collect();
    let mut files = 0;
    for (name, args) in &experiments {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let target = root.path().join(format!("{rep}-{name}"));
            let mut argv: Vec<&str> = args.iter().map(String::as_str).collect();
            let t = target.to_str().unwrap().to_string();
            argv.extend(["--no-timestamp", "--out", &t]);
            let (code, _, err) = cli(&argv);
            ensure(code == 0, || format!("{name}: exit {code}: {err}"))?;
            outputs.push(if target.is_dir() {
                read_dir_bytes(&target)
            } else {
                vec![(name.to_string(), fs::read(&target).map_err(|e| e.to_string())?)]
            });
        }
        ensure(outputs[0] == outputs[1], || format!("{name}: reruns differ"))?;
        files += outputs[0].len();
    }
    Ok(format!("{} experiments, {files} data files byte-identical on rerun", experiments.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("demo circuit reproduction", Duration::from_secs(1), demo_reproduction),
        ("register sizing", Duration::from_secs(1), register_sizing),
        ("data-loading scaling", Duration::from_secs(60), loading_scaling),
        ("runtime crossover numbers", Duration::from_secs(1), runtime_numbers),
        ("grover correctness oracle", Duration::from_secs(120), grover_oracle),
        ("encoder soundness", Duration::from_secs(300), encoder_soundness),
        ("annealing and TTS protocol", Duration::from_secs(600), tts_protocol),
        ("determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > *limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("criterion {}: PASS {name} [{elapsed:.2?}] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} [{elapsed:.2?}] {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
