//! Encodes one reference instance of every problem family, solves it
//! exhaustively and decodes the ground state.

use genoquant::qubo::{embedding_overhead, Connectivity, NativeInstance, Problem, DEFAULT_ASSEMBLY_CAP};
use genoquant::solvers::brute_force;

fn main() -> genoquant::Result<()> {
    for problem in Problem::ALL {
        let inst = NativeInstance::reference(problem, 4)?;
        let model = inst.encode(DEFAULT_ASSEMBLY_CAP)?;
        let ground = brute_force(&model)?;
        let x = ground.assignments().next().expect("at least one optimum");
        let grid = embedding_overhead(&model, Connectivity::Grid { degree: 4 });
        println!(
            "{problem}: {} vars, E0={}, {} optima, grid4 physical={}",
            model.num_vars(),
            ground.energy,
            ground.count(),
            grid.physical_variables
        );
        println!("  decoded {:?}", inst.decode(&x));
    }
    Ok(())
}
