//! Simulated annealing on a planted ferromagnet: success rate against
//! sweep count, checked against the exact ground energy.

use genoquant::solvers::{brute_force, estimate_success_probability, simulated_annealing, AnnealSchedule};
use genoquant::tts::planted_ferromagnet;

fn main() -> genoquant::Result<()> {
    let inst = planted_ferromagnet(16, 3)?;
    let ground = brute_force(&inst.model)?.energy;
    println!("planted energy {:.4}, brute force {:.4}", inst.ground_energy, ground);

    let one = simulated_annealing(&inst.model, &AnnealSchedule::with_sweeps(50)?, 1);
    println!("single run: E={:.4}, trace head {:?}", one.energy, &one.trace[..5]);

    for sweeps in [1, 4, 16, 64, 256] {
        let stats = estimate_success_probability(&inst.model, &AnnealSchedule::with_sweeps(sweeps)?, 200, ground, 0)?;
        println!("sweeps={sweeps:<4} p_hat={:.3}", stats.p_hat);
    }
    Ok(())
}
