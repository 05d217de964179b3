//! Time-to-solution benchmarking: repetitions `R(t)` for a target success
//! probability, `TTS(t) = R(t)·t` over a grid of per-run times, its grid
//! minimum `TTS*`, and scaling fits of `TTS*` against problem size.
//!
//! Time is measured in sweeps, so results do not depend on the machine.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{exponential_fit, power_law_fit, LinearFit};
use crate::output::fmt_f64;
use crate::qubo::{Convention, QuadraticModel};
use crate::solvers::{brute_force, estimate_success_probability, AnnealSchedule};

/// Default target success probability.
pub const DEFAULT_TARGET: f64 = 0.99;

/// Repetitions needed to reach `p_d` overall when one run succeeds with
/// probability `p_hat`: `ceil(ln(1 − p_d) / ln(1 − p_hat))`, and 1 once
/// `p_hat ≥ p_d`. `None` means no finite count suffices (`p_hat = 0`).
pub fn repetitions_needed(p_hat: f64, p_d: f64) -> Result<Option<u64>> {
    if !(p_d > 0.0 && p_d < 1.0) {
        return Err(Error::argument(format!("target probability {p_d} not in (0, 1)")));
    }
    if !(0.0..=1.0).contains(&p_hat) {
        return Err(Error::argument(format!("success probability {p_hat} not in [0, 1]")));
    }
    if p_hat == 0.0 {
        return Ok(None);
    }
    if p_hat >= p_d {
        return Ok(Some(1));
    }
    let r = (-p_d).ln_1p() / (-p_hat).ln_1p();
    Ok(Some(r.ceil().max(1.0) as u64))
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, runs: usize, z: f64) -> (f64, f64) {
    if runs == 0 {
        return (0.0, 1.0);
    }
    let n = runs as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Success-probability estimate at per-run time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessEstimate {
    pub successes: usize,
    pub runs: usize,
    pub p_hat: f64,
}

/// Anything that can report how often a run of length `t` succeeds.
pub trait SuccessSource: Sync {
    fn estimate(&self, t: usize, runs: usize, seed: u64) -> Result<SuccessEstimate>;
}

/// Simulated annealing on one model, success meaning reaching `threshold`.
pub struct AnnealingSource<'a> {
    pub model: &'a QuadraticModel,
    /// Ladder shape; its length is replaced by each grid `t`.
    pub schedule: AnnealSchedule,
    pub threshold: f64,
}

impl SuccessSource for AnnealingSource<'_> {
    fn estimate(&self, t: usize, runs: usize, seed: u64) -> Result<SuccessEstimate> {
        let s = estimate_success_probability(self.model, &self.schedule.resized(t)?, runs, self.threshold, seed)?;
        Ok(SuccessEstimate { successes: s.successes, runs, p_hat: s.p_hat })
    }
}

/// Deterministic `p(t)` with no sampling noise, for checking the protocol
/// against closed forms.
pub struct StubSource<F: Fn(usize) -> f64 + Sync>(pub F);

impl<F: Fn(usize) -> f64 + Sync> SuccessSource for StubSource<F> {
    fn estimate(&self, t: usize, runs: usize, _seed: u64) -> Result<SuccessEstimate> {
        let p = (self.0)(t);
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::argument(format!("stub probability {p} at t={t} not in [0, 1]")));
        }
        Ok(SuccessEstimate { successes: (p * runs as f64).round() as usize, runs, p_hat: p })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TtsPoint {
    pub t: usize,
    pub p_hat: f64,
    pub successes: usize,
    pub runs: usize,
    /// `None` when `p_hat = 0`: the point is excluded from the curve.
    pub repetitions: Option<u64>,
    pub tts: Option<f64>,
    /// TTS at the Wilson 95% bounds of `p_hat`; the upper end is `None`
    /// when the lower probability bound is zero.
    pub tts_low: Option<f64>,
    pub tts_high: Option<f64>,
}

impl TtsPoint {
    pub fn excluded(&self) -> bool {
        self.tts.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TtsCurve {
    pub target: f64,
    pub points: Vec<TtsPoint>,
}

impl TtsCurve {
    pub fn excluded_points(&self) -> impl Iterator<Item = &TtsPoint> {
        self.points.iter().filter(|p| p.excluded())
    }
}

fn check_grid(grid: &[usize]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::argument("t grid is empty"));
    }
    if grid[0] == 0 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::argument("t grid must be positive and strictly increasing"));
    }
    Ok(())
}

fn tts_at(p: f64, p_d: f64, t: usize) -> Result<Option<f64>> {
    Ok(repetitions_needed(p, p_d)?.map(|r| r as f64 * t as f64))
}

/// Estimates `p` at every grid time (grid cell `k` uses seeds starting at
/// `seed + k·runs`) and converts to `TTS(t)`.
pub fn tts_curve(source: &dyn SuccessSource, grid: &[usize], runs: usize, p_d: f64, seed: u64) -> Result<TtsCurve> {
    check_grid(grid)?;
    if runs == 0 {
        return Err(Error::argument("need at least one run per grid point"));
    }
    let mut points = Vec::with_capacity(grid.len());
    for (k, &t) in grid.iter().enumerate() {
        let est = source.estimate(t, runs, seed.wrapping_add(k as u64 * runs as u64))?;
        let repetitions = repetitions_needed(est.p_hat, p_d)?;
        let (lo, hi) = wilson_interval(est.successes, est.runs, 1.96);
        points.push(TtsPoint {
            t,
            p_hat: est.p_hat,
            successes: est.successes,
            runs: est.runs,
            repetitions,
            tts: repetitions.map(|r| r as f64 * t as f64),
            tts_low: tts_at(hi, p_d, t)?,
            tts_high: tts_at(lo, p_d, t)?,
        });
    }
    if points.iter().all(TtsPoint::excluded) {
        return Err(Error::Infeasible("no grid point had a nonzero success probability".into()));
    }
    Ok(TtsCurve { target: p_d, points })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalTts {
    pub t_star: usize,
    pub tts_star: f64,
    /// The optimum is not bracketed by grid points on both sides, so the
    /// true minimum may lie outside the grid.
    pub boundary: bool,
}

/// Grid minimum of `TTS(t)`, ties going to the smaller `t`.
pub fn optimal_tts(curve: &TtsCurve) -> Result<OptimalTts> {
    let mut best: Option<(usize, &TtsPoint)> = None;
    for (k, p) in curve.points.iter().enumerate() {
        if let Some(v) = p.tts {
            if best.is_none_or(|(_, b)| v < b.tts.unwrap_or(f64::INFINITY)) {
                best = Some((k, p));
            }
        }
    }
    let (k, p) = best.ok_or_else(|| Error::Infeasible("curve has no included points".into()))?;
    Ok(OptimalTts {
        t_star: p.t,
        tts_star: p.tts.unwrap_or(f64::INFINITY),
        boundary: k == 0 || k + 1 == curve.points.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub exponent_stderr: f64,
    pub prefactor: f64,
    /// Residuals of `ln TTS*`.
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentialFit {
    /// `TTS* ≈ prefactor · base^N`.
    pub base: f64,
    /// `ln(base)` with its standard error.
    pub rate: f64,
    pub rate_stderr: f64,
    pub prefactor: f64,
    pub residuals: Vec<f64>,
}

/// Both candidate scaling laws for `TTS*(N)`. Which one describes the data
/// better is left to the reader.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub sizes: Vec<f64>,
    pub tts_star: Vec<f64>,
    pub power_law: PowerLawFit,
    pub exponential: ExponentialFit,
}

pub fn scaling_fit(sizes: &[f64], tts_star: &[f64]) -> Result<ScalingFit> {
    if sizes.len() != tts_star.len() {
        return Err(Error::shape(format!("{} sizes vs {} TTS* values", sizes.len(), tts_star.len())));
    }
    if sizes.len() < 3 {
        return Err(Error::argument("a scaling fit needs at least three sizes"));
    }
    let p: LinearFit = power_law_fit(sizes, tts_star)?;
    let e: LinearFit = exponential_fit(sizes, tts_star)?;
    Ok(ScalingFit {
        sizes: sizes.to_vec(),
        tts_star: tts_star.to_vec(),
        power_law: PowerLawFit {
            exponent: p.slope,
            exponent_stderr: p.slope_stderr,
            prefactor: p.intercept.exp(),
            residuals: p.residuals,
        },
        exponential: ExponentialFit {
            base: e.slope.exp(),
            rate: e.slope,
            rate_stderr: e.slope_stderr,
            prefactor: e.intercept.exp(),
            residuals: e.residuals,
        },
    })
}

/// A frustration-free Ising instance with a known ground state.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub model: QuadraticModel,
    pub planted: Vec<i8>,
    pub ground_energy: f64,
}

/// Ferromagnet hidden behind a random gauge: a ring plus random chords
/// (mean extra degree 2), `J_ij = −w_ij σ_i σ_j` with `w ∈ [0.5, 1.5)`.
/// Every coupling is satisfied by the planted `σ` (and `−σ`), so that pair
/// is the ground state with energy `−Σ w`.
pub fn planted_ferromagnet(n: usize, seed: u64) -> Result<PlantedInstance> {
    if n < 2 {
        return Err(Error::argument("planted ferromagnet needs at least two spins"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let planted: Vec<i8> = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
    let mut m = QuadraticModel::new(Convention::Spin, n)?;
    let couple = |m: &mut QuadraticModel, rng: &mut ChaCha8Rng, i: usize, j: usize| -> Result<()> {
        let w = rng.gen_range(0.5..1.5);
        m.add_quadratic(i, j, -w * f64::from(planted[i] * planted[j]))
    };
    for i in 0..n {
        let j = (i + 1) % n;
        if n > 2 || i == 0 {
            couple(&mut m, &mut rng, i, j)?;
        }
    }
    let p_extra = (2.0 / n as f64).min(1.0);
    for i in 0..n {
        for j in i + 2..n {
            if !(i == 0 && j == n - 1) && rng.gen_bool(p_extra) {
                couple(&mut m, &mut rng, i, j)?;
            }
        }
    }
    let ground_energy = m.energy_unchecked(&planted);
    Ok(PlantedInstance { model: m, planted, ground_energy })
}

/// How per-instance curves of one size are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregate {
    Mean,
    Median,
}

impl Aggregate {
    fn apply(self, v: &mut [f64]) -> f64 {
        match self {
            Aggregate::Mean => v.iter().sum::<f64>() / v.len() as f64,
            Aggregate::Median => {
                v.sort_by(f64::total_cmp);
                let m = v.len() / 2;
                if v.len() % 2 == 1 {
                    v[m]
                } else {
                    0.5 * (v[m - 1] + v[m])
                }
            }
        }
    }
}

/// Point-wise aggregate of several curves over the same grid. A grid time
/// is excluded if any instance is excluded there.
pub fn aggregate_curves(curves: &[TtsCurve], how: Aggregate) -> Result<TtsCurve> {
    let first = curves.first().ok_or_else(|| Error::argument("no curves to aggregate"))?;
    let mut points = Vec::with_capacity(first.points.len());
    for (k, p0) in first.points.iter().enumerate() {
        if curves.iter().any(|c| c.points.get(k).map(|p| p.t) != Some(p0.t)) {
            return Err(Error::shape("curves use different t grids"));
        }
        let mut p: Vec<f64> = curves.iter().map(|c| c.points[k].p_hat).collect();
        let tts: Option<Vec<f64>> = curves.iter().map(|c| c.points[k].tts).collect();
        let tts = tts.map(|mut v| how.apply(&mut v));
        points.push(TtsPoint {
            t: p0.t,
            p_hat: how.apply(&mut p),
            successes: curves.iter().map(|c| c.points[k].successes).sum(),
            runs: curves.iter().map(|c| c.points[k].runs).sum(),
            repetitions: tts.map(|v| (v / p0.t as f64).round() as u64),
            tts,
            tts_low: None,
            tts_high: None,
        });
    }
    Ok(TtsCurve { target: first.target, points })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanConfig {
    pub sizes: Vec<usize>,
    pub instances: usize,
    pub grid: Vec<usize>,
    pub runs: usize,
    pub target: f64,
    pub schedule: AnnealSchedule,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceCurve {
    pub n: usize,
    pub instance: usize,
    /// Certified ground energy, when the source has one.
    pub ground_energy: Option<f64>,
    pub curve: TtsCurve,
    pub optimum: OptimalTts,
}

#[derive(Debug, Clone, Serialize)]
pub struct SizeSummary {
    pub n: usize,
    pub optimum: OptimalTts,
}

#[derive(Debug, Clone, Serialize)]
pub struct TtsScan {
    pub instances: Vec<InstanceCurve>,
    pub mean: Vec<SizeSummary>,
    pub median: Vec<SizeSummary>,
    pub mean_fit: Option<ScalingFit>,
    pub median_fit: Option<ScalingFit>,
}

/// Per-size `TTS*` from curves produced by `curve_for(n, instance, seed)`.
/// Fits need at least three sizes and are `None` otherwise.
pub fn tts_scan_with<F>(sizes: &[usize], instances: usize, seed: u64, mut curve_for: F) -> Result<TtsScan>
where
    F: FnMut(usize, usize, u64) -> Result<(Option<f64>, TtsCurve)>,
{
    if sizes.is_empty() || instances == 0 {
        return Err(Error::argument("need at least one size and one instance"));
    }
    let mut all = Vec::new();
    let mut mean = Vec::new();
    let mut median = Vec::new();
    for &n in sizes {
        let mut curves = Vec::with_capacity(instances);
        for instance in 0..instances {
            let inst_seed = seed.wrapping_add(((n as u64) << 40) ^ ((instance as u64) << 20));
            let (ground_energy, curve) = curve_for(n, instance, inst_seed)?;
            let optimum = optimal_tts(&curve)?;
            curves.push(curve.clone());
            all.push(InstanceCurve { n, instance, ground_energy, curve, optimum });
        }
        mean.push(SizeSummary { n, optimum: optimal_tts(&aggregate_curves(&curves, Aggregate::Mean)?)? });
        median.push(SizeSummary { n, optimum: optimal_tts(&aggregate_curves(&curves, Aggregate::Median)?)? });
    }
    let fit = |rows: &[SizeSummary]| -> Result<Option<ScalingFit>> {
        if rows.len() < 3 {
            return Ok(None);
        }
        let x: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
        let y: Vec<f64> = rows.iter().map(|r| r.optimum.tts_star).collect();
        scaling_fit(&x, &y).map(Some)
    };
    Ok(TtsScan { mean_fit: fit(&mean)?, median_fit: fit(&median)?, instances: all, mean, median })
}

/// Annealing scan over planted ferromagnets; success means reaching the
/// brute-force ground energy.
pub fn tts_scan(cfg: &ScanConfig) -> Result<TtsScan> {
    check_grid(&cfg.grid)?;
    tts_scan_with(&cfg.sizes, cfg.instances, cfg.seed, |n, _, s| {
        let inst = planted_ferromagnet(n, s)?;
        let ground = brute_force(&inst.model)?.energy;
        let src = AnnealingSource { model: &inst.model, schedule: cfg.schedule, threshold: ground };
        Ok((Some(ground), tts_curve(&src, &cfg.grid, cfg.runs, cfg.target, s)?))
    })
}

fn opt_cell<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// `N,t,p_hat,R,TTS`, one block per instance introduced by a
/// `# instance=k` line. Excluded points have empty `R` and `TTS`.
pub fn write_curves_csv<W: Write>(scan: &TtsScan, mut out: W) -> Result<()> {
    writeln!(out, "N,t,p_hat,R,TTS")?;
    for ic in &scan.instances {
        writeln!(out, "# instance={} N={}", ic.instance, ic.n)?;
        for p in &ic.curve.points {
            writeln!(
                out,
                "{},{},{},{},{}",
                ic.n,
                p.t,
                fmt_f64(p.p_hat),
                opt_cell(p.repetitions),
                opt_cell(p.tts.map(fmt_f64))
            )?;
        }
    }
    Ok(())
}

/// `N,TTS_star,t_star,boundary_flag`.
pub fn write_summary_csv<W: Write>(rows: &[SizeSummary], mut out: W) -> Result<()> {
    writeln!(out, "N,TTS_star,t_star,boundary_flag")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.n,
            fmt_f64(r.optimum.tts_star),
            r.optimum.t_star,
            u8::from(r.optimum.boundary)
        )?;
    }
    Ok(())
}
