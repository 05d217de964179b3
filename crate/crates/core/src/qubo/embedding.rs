//! Rough physical-variable estimate for placing a model on limited
//! hardware connectivity. This is a counting model, not an embedder.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::model::QuadraticModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Connectivity {
    AllToAll,
    /// Planar lattice where each physical qubit couples to at most `degree`
    /// others.
    Grid { degree: usize },
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Connectivity::AllToAll => f.write_str("all-to-all"),
            Connectivity::Grid { degree } => write!(f, "grid{degree}"),
        }
    }
}

impl FromStr for Connectivity {
    type Err = Error;

    /// `all-to-all`, `grid` (degree 4) or `gridD`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-to-all" | "complete" => Ok(Connectivity::AllToAll),
            "grid" => Ok(Connectivity::Grid { degree: 4 }),
            _ => {
                let d = s
                    .strip_prefix("grid")
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&d| d >= 2)
                    .ok_or_else(|| Error::Config(format!("unknown connectivity {s:?}")))?;
                Ok(Connectivity::Grid { degree: d })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingEstimate {
    pub logical_variables: usize,
    pub connectivity: Connectivity,
    /// Physical qubits per logical variable.
    pub chain_length: usize,
    pub physical_variables: usize,
    /// Human-readable statement of the counting model used.
    pub formula: String,
}

/// Models that already fit the topology's degree map one-to-one. Denser
/// models are charged as a clique embedding: each logical variable becomes
/// a chain of `ceil(2n / d)` physical qubits, `n · ceil(2n / d)` in total,
/// i.e. quadratic in `n`.
pub fn embedding_overhead(model: &QuadraticModel, connectivity: Connectivity) -> EmbeddingEstimate {
    let n = model.num_vars();
    let (chain_length, formula) = match connectivity {
        Connectivity::AllToAll => (1, "physical = n".to_string()),
        Connectivity::Grid { degree } if model.max_degree() <= degree => {
            (1, format!("physical = n (max degree {} <= {degree})", model.max_degree()))
        }
        Connectivity::Grid { degree } => (
            (2 * n).div_ceil(degree),
            format!("physical = n * ceil(2n / {degree}) (clique-embedding chain estimate)"),
        ),
    };
    EmbeddingEstimate {
        logical_variables: n,
        connectivity,
        chain_length,
        physical_variables: n * chain_length,
        formula,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::Convention;

    fn dense(n: usize) -> QuadraticModel {
        let mut m = QuadraticModel::new(Convention::Spin, n).unwrap();
        for i in 0..n {
            for j in i + 1..n {
                m.add_quadratic(i, j, 1.0).unwrap();
            }
        }
        m
    }

    #[test]
    fn dense_ten_on_grid_is_quadratic() {
        let e = embedding_overhead(&dense(10), Connectivity::Grid { degree: 4 });
        assert_eq!(e.chain_length, 5);
        assert_eq!(e.physical_variables, 50);
        assert!(e.formula.contains("ceil(2n / 4)"));
        let e20 = embedding_overhead(&dense(20), Connectivity::Grid { degree: 4 });
        assert_eq!(e20.physical_variables, 200);
    }

    #[test]
    fn sparse_and_single() {
        let mut chain = QuadraticModel::new(Convention::Spin, 6).unwrap();
        for i in 0..5 {
            chain.add_quadratic(i, i + 1, -1.0).unwrap();
        }
        assert_eq!(embedding_overhead(&chain, Connectivity::AllToAll).physical_variables, 6);
        assert_eq!(embedding_overhead(&chain, Connectivity::Grid { degree: 4 }).physical_variables, 6);
        let one = QuadraticModel::new(Convention::Binary, 1).unwrap();
        for c in [Connectivity::AllToAll, Connectivity::Grid { degree: 4 }] {
            assert_eq!(embedding_overhead(&one, c).physical_variables, 1);
        }
    }

    #[test]
    fn parse_connectivity() {
        assert_eq!("grid".parse::<Connectivity>().unwrap(), Connectivity::Grid { degree: 4 });
        assert_eq!("grid6".parse::<Connectivity>().unwrap(), Connectivity::Grid { degree: 6 });
        assert!("torus".parse::<Connectivity>().is_err());
    }
}
