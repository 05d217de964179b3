//! Gate counts of database loading against genome size, with fitted
//! log-log exponents.

use genoquant::grover::loading_cost_scan;

fn main() -> genoquant::Result<()> {
    let sizes: Vec<usize> = (6..=12).map(|e| 1 << e).collect();
    let scan = loading_cost_scan(&sizes, 2, 1, 18)?;
    scan.write_csv(std::io::stdout().lock())?;
    println!("prep exponent  {:.3}", scan.prep_exponent());
    println!("total exponent {:.3}", scan.total_exponent());
    Ok(())
}
