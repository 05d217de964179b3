//! Oracle-call counts and depth budgets for a human-genome-sized search,
//! and where a sqrt-scaling quantum cost would overtake a linear scan.

use genoquant::runtime::{
    crossover_size, grover_calls, max_depth_per_call, runtime_sweep, HardwareProfile, PowerLaw,
};

fn main() -> genoquant::Result<()> {
    let n = 3_000_000_000u64;
    println!("calls for N={n}: {}", grover_calls(n));
    for hw in [HardwareProfile::surface_10khz(), HardwareProfile::optimistic_10mhz()] {
        println!("{}: depth per call within 60 s = {}", hw.name, max_depth_per_call(n, 60.0, &hw)?);
    }
    let classical = PowerLaw::new(1e-9, 1.0)?;
    let quantum = PowerLaw::new(1e-3, 0.5)?;
    println!("crossover N* = {:?}", crossover_size(classical, quantum));
    for row in runtime_sweep(classical, quantum, 1e6, 1e16, 6)? {
        println!("{:>10.3e} {:>10.3e} {:>10.3e} {}", row.n, row.t_classical, row.t_quantum, row.crossover);
    }
    Ok(())
}
