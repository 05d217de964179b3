//! Searches a random genome for a planted 3-mer and compares the sampled
//! matches with an exhaustive scan.

use genoquant::genome::{build_window_db, parse_sequence};
use genoquant::grover::{classical_scan, optimal_iterations, random_genome, run_search, SearchProblem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> genoquant::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut text: String = random_genome(&mut rng, 40).bases().iter().map(|b| b.as_char()).collect();
    text.replace_range(17..20, "GAT");
    let key = parse_sequence("GAT")?;
    let db = build_window_db(parse_sequence(&text)?, 3)?;
    let hits = classical_scan(&db, key.bases(), 0);
    let problem = SearchProblem::new(db, key.bases().to_vec())?;
    println!("genome {text}");
    println!("layout {:?}", problem.layout());

    let k = optimal_iterations(problem.db().padded_size(), hits.len().max(1))?;
    let run = run_search(&problem, k, 256, 7)?;
    println!("k={k} p_exact={:.4}", run.p_exact);
    println!("argmax index {} (data bits {})", run.argmax.index, run.argmax.data);
    println!("sampled matches {:?}", run.match_indices());
    println!("classical hits  {:?}", hits.iter().map(|h| h.0).collect::<Vec<_>>());
    println!("one-mismatch neighbours {:?}", classical_scan(problem.db(), key.bases(), 1));
    Ok(())
}
