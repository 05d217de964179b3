//! Quantum vs classical runtime arithmetic under a logical gate frequency.
//!
//! A Grover search over `N` entries makes `ceil(√N)` oracle calls; each call
//! is a circuit of some depth executed at the hardware's logical gate
//! frequency. The helpers here size the per-call depth budget and locate the
//! crossover of two power-law runtime curves.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default classical time for exact matching of one read against a human
/// genome, in seconds.
pub const DEFAULT_CLASSICAL_SECONDS: f64 = 60.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardwareProfile {
    pub name: String,
    /// Logical gates per second.
    pub logical_gate_frequency: f64,
}

impl HardwareProfile {
    pub fn new(name: impl Into<String>, logical_gate_frequency: f64) -> Result<Self> {
        if !(logical_gate_frequency > 0.0 && logical_gate_frequency.is_finite()) {
            return Err(Error::argument(format!(
                "gate frequency must be positive, got {logical_gate_frequency}"
            )));
        }
        Ok(HardwareProfile { name: name.into(), logical_gate_frequency })
    }

    /// Surface-code style estimate, 10 kHz.
    pub fn surface_10khz() -> Self {
        HardwareProfile { name: "surface-10kHz".into(), logical_gate_frequency: 1e4 }
    }

    /// Optimistic error-corrected architecture, 10 MHz.
    pub fn optimistic_10mhz() -> Self {
        HardwareProfile { name: "optimistic-10MHz".into(), logical_gate_frequency: 1e7 }
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "surface-10kHz" => Some(Self::surface_10khz()),
            "optimistic-10MHz" => Some(Self::optimistic_10mhz()),
            _ => None,
        }
    }
}

/// Parses frequencies such as `10kHz`, `10 MHz`, `1e4`, `2.5GHz`.
pub fn parse_frequency(text: &str) -> Result<f64> {
    let t = text.trim();
    let lower = t.to_ascii_lowercase();
    let (num, scale) = if let Some(n) = lower.strip_suffix("ghz") {
        (n, 1e9)
    } else if let Some(n) = lower.strip_suffix("mhz") {
        (n, 1e6)
    } else if let Some(n) = lower.strip_suffix("khz") {
        (n, 1e3)
    } else if let Some(n) = lower.strip_suffix("hz") {
        (n, 1.0)
    } else {
        (lower.as_str(), 1.0)
    };
    let v: f64 = num
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse frequency {text:?}")))?;
    let f = v * scale;
    if !(f > 0.0 && f.is_finite()) {
        return Err(Error::Config(format!("frequency must be positive: {text:?}")));
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuntimeEstimate {
    pub problem_size: u64,
    pub calls: u64,
    pub seconds_per_call: f64,
    pub seconds_total: f64,
}

/// `ceil(√n)` computed exactly on integers.
pub fn grover_calls(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

pub fn quantum_runtime(n: u64, depth_per_call: u64, hw: &HardwareProfile) -> Result<RuntimeEstimate> {
    if n == 0 || depth_per_call == 0 {
        return Err(Error::argument("problem size and depth must be at least 1"));
    }
    let calls = grover_calls(n);
    let seconds_per_call = depth_per_call as f64 / hw.logical_gate_frequency;
    Ok(RuntimeEstimate {
        problem_size: n,
        calls,
        seconds_per_call,
        seconds_total: calls as f64 * seconds_per_call,
    })
}

/// Deepest oracle-call circuit that keeps `ceil(√n)` calls within `budget`
/// seconds: `floor(budget / ceil(√n) · f)`. A result below 1 is reported as
/// infeasible.
pub fn max_depth_per_call(n: u64, budget_seconds: f64, hw: &HardwareProfile) -> Result<u64> {
    if !(budget_seconds > 0.0) {
        return Err(Error::argument("time budget must be positive"));
    }
    if n == 0 {
        return Err(Error::argument("problem size must be at least 1"));
    }
    let calls = grover_calls(n);
    let depth = (budget_seconds / calls as f64 * hw.logical_gate_frequency).floor();
    if depth < 1.0 {
        return Err(Error::Infeasible(format!(
            "{calls} calls at {} Hz cannot fit in {budget_seconds} s even at depth 1",
            hw.logical_gate_frequency
        )));
    }
    Ok(depth as u64)
}

/// Runtime model `prefactor · N^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub prefactor: f64,
    pub exponent: f64,
}

impl PowerLaw {
    pub fn new(prefactor: f64, exponent: f64) -> Result<Self> {
        if !(prefactor > 0.0) {
            return Err(Error::argument("power-law prefactor must be positive"));
        }
        Ok(PowerLaw { prefactor, exponent })
    }

    pub fn eval(&self, n: f64) -> f64 {
        self.prefactor * n.powf(self.exponent)
    }
}

/// Problem size `N* = (a/b)^(1/(q−c))` at which `b·N^q` meets `a·N^c`, or
/// `None` when the curves do not meet at any `N ≥ 1`. Identical models meet
/// everywhere and report `N* = 1`.
pub fn crossover_size(classical: PowerLaw, quantum: PowerLaw) -> Option<f64> {
    let (a, c) = (classical.prefactor, classical.exponent);
    let (b, q) = (quantum.prefactor, quantum.exponent);
    if q == c {
        return (a == b).then_some(1.0);
    }
    let n_star = (a / b).powf(1.0 / (q - c));
    (n_star >= 1.0 && n_star.is_finite()).then_some(n_star)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuntimeRow {
    pub n: f64,
    pub t_classical: f64,
    pub t_quantum: f64,
    pub crossover: bool,
}

/// Log-spaced sweep of both curves over `[n_min, n_max]`; `crossover` marks
/// rows where the quantum curve is at or below the classical one.
pub fn runtime_sweep(
    classical: PowerLaw,
    quantum: PowerLaw,
    n_min: f64,
    n_max: f64,
    points: usize,
) -> Result<Vec<RuntimeRow>> {
    if !(n_min >= 1.0 && n_max >= n_min) || points < 2 {
        return Err(Error::argument("sweep needs 1 <= n_min <= n_max and >= 2 points"));
    }
    let (l0, l1) = (n_min.log10(), n_max.log10());
    Ok((0..points)
        .map(|i| {
            let n = 10f64.powf(l0 + (l1 - l0) * i as f64 / (points - 1) as f64);
            let t_classical = classical.eval(n);
            let t_quantum = quantum.eval(n);
            RuntimeRow { n, t_classical, t_quantum, crossover: t_quantum <= t_classical }
        })
        .collect())
}

pub fn write_sweep_csv<W: Write>(rows: &[RuntimeRow], mut out: W) -> Result<()> {
    writeln!(out, "N,T_classical,T_quantum,crossover_flag")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            crate::output::fmt_f64(r.n),
            crate::output::fmt_f64(r.t_classical),
            crate::output::fmt_f64(r.t_quantum),
            u8::from(r.crossover)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn human_genome_calls() {
        let est = quantum_runtime(3_000_000_000, 10, &HardwareProfile::surface_10khz()).unwrap();
        assert_eq!(est.calls, 54_773);
        assert!((5.4e4..=6e4).contains(&(est.calls as f64)));
        assert_eq!(quantum_runtime(1, 1, &HardwareProfile::surface_10khz()).unwrap().calls, 1);
    }

    #[test]
    fn millisecond_per_call() {
        let est = quantum_runtime(100, 10, &HardwareProfile::surface_10khz()).unwrap();
        assert!((est.seconds_per_call - 1e-3).abs() < 1e-15);
        assert!((est.seconds_total - est.calls as f64 * est.seconds_per_call).abs() < 1e-12);
    }

    #[test]
    fn depth_budgets() {
        let n = 3_000_000_000;
        assert_eq!(max_depth_per_call(n, 60.0, &HardwareProfile::surface_10khz()).unwrap(), 10);
        // 60 / 54773 · 1e7 = 10954.3…
        assert_eq!(max_depth_per_call(n, 60.0, &HardwareProfile::optimistic_10mhz()).unwrap(), 10_954);
        let khz = HardwareProfile::new("1kHz", 1e3).unwrap();
        assert_eq!(max_depth_per_call(1, 1.0, &khz).unwrap(), 1000);
        assert!(matches!(
            max_depth_per_call(n, 1.0, &HardwareProfile::surface_10khz()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn depth_and_runtime_consistent() {
        let hw = HardwareProfile::surface_10khz();
        for &(n, budget) in &[(3_000_000_000u64, 60.0), (12345, 0.7), (1, 2.0), (999_999, 33.3)] {
            let d = max_depth_per_call(n, budget, &hw).unwrap();
            assert!(quantum_runtime(n, d, &hw).unwrap().seconds_total <= budget);
            assert!(quantum_runtime(n, d + 1, &hw).unwrap().seconds_total > budget);
        }
    }

    #[test]
    fn ceil_sqrt_exact() {
        for n in 1..2000u64 {
            let r = grover_calls(n);
            assert!(r * r >= n && (r - 1) * (r - 1) < n);
        }
    }

    #[test]
    fn crossover_examples() {
        let c = PowerLaw::new(1.0, 1.0).unwrap();
        let q = PowerLaw::new(1e6, 0.5).unwrap();
        let n = crossover_size(c, q).unwrap();
        assert!((n / 1e12 - 1.0).abs() < 1e-9);
        assert!((q.eval(n) / c.eval(n) - 1.0).abs() < 1e-9);
        assert_eq!(crossover_size(c, c), Some(1.0));
        assert_eq!(crossover_size(c, PowerLaw::new(2.0, 1.5).unwrap()), None);
        assert_eq!(crossover_size(c, PowerLaw::new(2.0, 1.0).unwrap()), None);
    }

    #[test]
    fn crossover_equalizes_runtimes() {
        for &(a, cexp, b, qexp) in &[(1.0, 1.0, 1e6, 0.5), (3.0, 2.0, 50.0, 1.2), (1e-3, 1.5, 7.0, 0.25)] {
            let c = PowerLaw::new(a, cexp).unwrap();
            let q = PowerLaw::new(b, qexp).unwrap();
            let n = crossover_size(c, q).unwrap();
            assert!((q.eval(n) / c.eval(n) - 1.0).abs() < 1e-9);
        }
        // Quantum cheaper at every N >= 1 with slower growth: the curves met below 1.
        assert_eq!(crossover_size(PowerLaw::new(5.0, 1.0).unwrap(), PowerLaw::new(1.0, 0.5).unwrap()), None);
    }

    #[test]
    fn frequency_parsing() {
        assert_eq!(parse_frequency("10kHz").unwrap(), 1e4);
        assert_eq!(parse_frequency("10 MHz").unwrap(), 1e7);
        assert_eq!(parse_frequency("2500").unwrap(), 2500.0);
        assert!(parse_frequency("fast").is_err());
        assert!(parse_frequency("-3Hz").is_err());
    }

    #[test]
    fn sweep_flags_crossover() {
        let rows = runtime_sweep(
            PowerLaw::new(1.0, 1.0).unwrap(),
            PowerLaw::new(1e6, 0.5).unwrap(),
            1e6,
            1e18,
            13,
        )
        .unwrap();
        assert!(!rows[0].crossover);
        assert!(rows.last().unwrap().crossover);
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("N,T_classical,T_quantum,crossover_flag\n"));
    }
}
