//! Four-window toy database `TATG`, key `A`: prints the three circuits and
//! the amplitude evolution over a few iterations.

use genoquant::grover::{run_search, PreparedDatabaseCircuit, SearchProblem};

fn main() -> genoquant::Result<()> {
    let problem = SearchProblem::from_text("TATG", "A")?;
    let c = PreparedDatabaseCircuit::build(&problem)?;
    println!("state preparation:\n{}", c.state_prep);
    println!("oracle:\n{}", c.oracle);
    println!("diffusion:\n{}", c.diffusion);
    for k in 0..=3 {
        let run = run_search(&problem, k, 0, 0)?;
        println!("k={k} p_exact={:.6} argmax=|{}>", run.p_exact, run.argmax.bitstring);
    }
    Ok(())
}
