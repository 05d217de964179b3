//! Time-to-solution curves over planted ferromagnets and the scaling of
//! their optima with problem size.

use genoquant::solvers::AnnealSchedule;
use genoquant::tts::{tts_scan, write_curves_csv, write_summary_csv, ScanConfig};

fn main() -> genoquant::Result<()> {
    let cfg = ScanConfig {
        sizes: vec![8, 12, 16, 20],
        instances: 2,
        grid: (0..9).map(|e| 1 << e).collect(),
        runs: 100,
        target: 0.99,
        schedule: AnnealSchedule::with_sweeps(1)?,
        seed: 5,
    };
    let scan = tts_scan(&cfg)?;
    write_curves_csv(&scan, std::io::stdout().lock())?;
    write_summary_csv(&scan.median, std::io::stdout().lock())?;
    if let Some(fit) = &scan.median_fit {
        println!("power-law exponent {:.3} ± {:.3}", fit.power_law.exponent, fit.power_law.exponent_stderr);
        println!("exponential base   {:.4}", fit.exponential.base);
    }
    Ok(())
}
