//! Native problem instances as they arrive from JSON, with a uniform
//! encode/decode surface and random generators for test corpora.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::encoders::*;
use super::model::QuadraticModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    MaxCut,
    Phasing,
    /// Read ordering as a Hamiltonian path over the overlap graph.
    Assembly,
    Knapsack,
    Mis,
}

impl Problem {
    pub const ALL: [Problem; 5] =
        [Problem::MaxCut, Problem::Phasing, Problem::Assembly, Problem::Knapsack, Problem::Mis];
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::MaxCut => "max-cut",
            Problem::Phasing => "phasing",
            Problem::Assembly => "assembly",
            Problem::Knapsack => "knapsack",
            Problem::Mis => "mis",
        })
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max-cut" | "maxcut" => Ok(Problem::MaxCut),
            "phasing" => Ok(Problem::Phasing),
            "assembly" | "tsp-path" | "assembly-path" => Ok(Problem::Assembly),
            "knapsack" => Ok(Problem::Knapsack),
            "mis" => Ok(Problem::Mis),
            other => Err(Error::Config(format!("unknown problem {other:?}"))),
        }
    }
}

/// A native instance; the JSON form is tagged by `"problem"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "kebab-case")]
pub enum NativeInstance {
    MaxCut(WeightedGraph),
    Phasing(FragmentGraph),
    Assembly(OverlapInstance),
    Knapsack(KnapsackInstance),
    Mis(WeightedGraph),
}

/// A decoded feasible solution with its native objective (to maximize).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NativeSolution {
    Cut { side: Vec<bool>, value: f64 },
    Phasing { haplotype: Vec<u8>, agreement: f64 },
    Path { order: Vec<usize>, overlap: f64 },
    Knapsack { items: Vec<bool>, value: f64, weight: u64 },
    IndependentSet { vertices: Vec<bool>, size: usize },
}

impl NativeSolution {
    pub fn objective(&self) -> f64 {
        match self {
            NativeSolution::Cut { value, .. } => *value,
            NativeSolution::Phasing { agreement, .. } => *agreement,
            NativeSolution::Path { overlap, .. } => *overlap,
            NativeSolution::Knapsack { value, .. } => *value,
            NativeSolution::IndependentSet { size, .. } => *size as f64,
        }
    }
}

impl NativeInstance {
    pub fn problem(&self) -> Problem {
        match self {
            NativeInstance::MaxCut(_) => Problem::MaxCut,
            NativeInstance::Phasing(_) => Problem::Phasing,
            NativeInstance::Assembly(_) => Problem::Assembly,
            NativeInstance::Knapsack(_) => Problem::Knapsack,
            NativeInstance::Mis(_) => Problem::Mis,
        }
    }

    /// Re-runs the constructor checks; JSON input bypasses them.
    pub fn validate(&self) -> Result<()> {
        match self {
            NativeInstance::MaxCut(g) | NativeInstance::Mis(g) => {
                WeightedGraph::new(g.num_vertices, g.edges.clone()).map(drop)
            }
            NativeInstance::Phasing(f) => FragmentGraph::new(f.num_alleles, f.edges.clone()).map(drop),
            NativeInstance::Assembly(o) => OverlapInstance::new(o.num_reads, o.overlaps.clone()).map(drop),
            NativeInstance::Knapsack(k) => KnapsackInstance::new(k.items.clone(), k.capacity).map(drop),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: NativeInstance = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn encode(&self, assembly_cap: usize) -> Result<QuadraticModel> {
        match self {
            NativeInstance::MaxCut(g) => maxcut_to_ising(g),
            NativeInstance::Phasing(f) => maxcut_to_ising(&phasing_to_maxcut(f)),
            NativeInstance::Assembly(o) => assembly_to_qubo(o, assembly_cap),
            NativeInstance::Knapsack(k) => knapsack_to_qubo(k),
            NativeInstance::Mis(g) => mis_to_qubo(g),
        }
    }

    /// Native reading of a model assignment; `None` when it violates a
    /// constraint.
    pub fn decode(&self, assignment: &[i8]) -> Option<NativeSolution> {
        match self {
            NativeInstance::MaxCut(g) => {
                let side = decode_cut(assignment);
                let value = g.cut_value(&side);
                Some(NativeSolution::Cut { side, value })
            }
            NativeInstance::Phasing(f) => {
                let haplotype = decode_phasing(&decode_cut(assignment));
                let agreement = f.agreement(&haplotype);
                Some(NativeSolution::Phasing { haplotype, agreement })
            }
            NativeInstance::Assembly(o) => {
                let order = decode_assembly(o.num_reads, assignment)?;
                let overlap = o.path_overlap(&order);
                Some(NativeSolution::Path { order, overlap })
            }
            NativeInstance::Knapsack(k) => {
                let items = decode_knapsack(k, assignment);
                let weight = k.weight(&items);
                (weight <= k.capacity).then(|| NativeSolution::Knapsack {
                    value: k.value(&items),
                    items,
                    weight,
                })
            }
            NativeInstance::Mis(g) => {
                let vertices = decode_selection(assignment);
                g.is_independent(&vertices).then(|| NativeSolution::IndependentSet {
                    size: vertices.iter().filter(|v| **v).count(),
                    vertices,
                })
            }
        }
    }

    /// Fixed instance of native size `size`: a unit cycle for Max-Cut and
    /// MIS, a chain with alternating evidence for phasing, a read chain for
    /// assembly and items `(i+1, i+1)` at half the total weight for knapsack.
    pub fn reference(problem: Problem, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::argument("instance size must be positive"));
        }
        let cycle: Vec<(usize, usize)> = match size {
            1 => vec![],
            2 => vec![(0, 1)],
            _ => (0..size).map(|i| (i, (i + 1) % size)).collect(),
        };
        let chain = || (0..size.saturating_sub(1)).map(|i| (i, i + 1));
        Ok(match problem {
            Problem::MaxCut => NativeInstance::MaxCut(WeightedGraph::unweighted(size, &cycle)?),
            Problem::Mis => NativeInstance::Mis(WeightedGraph::unweighted(size, &cycle)?),
            Problem::Phasing => NativeInstance::Phasing(FragmentGraph::new(
                size,
                chain().map(|(u, v)| (u, v, if u % 2 == 0 { 1.0 } else { -1.0 })).collect(),
            )?),
            Problem::Assembly => {
                NativeInstance::Assembly(OverlapInstance::new(size, chain().map(|(u, v)| (u, v, 1.0)).collect())?)
            }
            Problem::Knapsack => {
                let items: Vec<(f64, u64)> = (1..=size as u64).map(|i| (i as f64, i)).collect();
                let total: u64 = items.iter().map(|i| i.1).sum();
                NativeInstance::Knapsack(KnapsackInstance::new(items, (total / 2).max(1))?)
            }
        })
    }

    /// Random instance whose native size is `size` (vertices, alleles,
    /// reads or items). Knapsack capacities stay below 64 so the slack
    /// register is at most 6 bits.
    pub fn random<R: Rng>(problem: Problem, size: usize, rng: &mut R) -> Result<Self> {
        if size == 0 {
            return Err(Error::argument("instance size must be positive"));
        }
        let pairs = |rng: &mut R, p: f64, lo: f64, hi: f64| -> Vec<(usize, usize, f64)> {
            let mut e = Vec::new();
            for u in 0..size {
                for v in u + 1..size {
                    if rng.gen_bool(p) {
                        e.push((u, v, rng.gen_range(lo..hi)));
                    }
                }
            }
            e
        };
        Ok(match problem {
            Problem::MaxCut => NativeInstance::MaxCut(WeightedGraph::new(size, pairs(rng, 0.5, 0.1, 2.0))?),
            Problem::Phasing => {
                NativeInstance::Phasing(FragmentGraph::new(size, pairs(rng, 0.6, -2.0, 2.0))?)
            }
            Problem::Mis => {
                let e = pairs(rng, 0.35, 0.0, 1.0);
                NativeInstance::Mis(WeightedGraph::new(size, e.into_iter().map(|(u, v, _)| (u, v, 1.0)).collect())?)
            }
            Problem::Assembly => {
                let mut o = Vec::new();
                for u in 0..size {
                    for v in 0..size {
                        if u != v && rng.gen_bool(0.6) {
                            o.push((u, v, f64::from(rng.gen_range(1u8..=9))));
                        }
                    }
                }
                NativeInstance::Assembly(OverlapInstance::new(size, o)?)
            }
            Problem::Knapsack => {
                let items: Vec<(f64, u64)> =
                    (0..size).map(|_| (f64::from(rng.gen_range(1u8..=20)), rng.gen_range(1..=8))).collect();
                let total: u64 = items.iter().map(|i| i.1).sum();
                let capacity = rng.gen_range(1..=total.min(63));
                NativeInstance::Knapsack(KnapsackInstance::new(items, capacity)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn json_round_trip_and_validation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in Problem::ALL {
            let inst = NativeInstance::random(p, 4, &mut rng).unwrap();
            let text = serde_json::to_string(&inst).unwrap();
            assert_eq!(NativeInstance::from_json(&text).unwrap(), inst);
        }
        let bad = r#"{"problem":"knapsack","items":[[1.0,0]],"capacity":3}"#;
        assert!(NativeInstance::from_json(bad).is_err());
        let looped = r#"{"problem":"assembly","num_reads":2,"overlaps":[[1,1,2.0]]}"#;
        assert!(NativeInstance::from_json(looped).is_err());
    }

    #[test]
    fn reference_instances() {
        for p in Problem::ALL {
            for n in 1..5 {
                let inst = NativeInstance::reference(p, n).unwrap();
                inst.validate().unwrap();
                inst.encode(DEFAULT_ASSEMBLY_CAP).unwrap();
            }
        }
        let m = NativeInstance::reference(Problem::Assembly, 4).unwrap().encode(DEFAULT_ASSEMBLY_CAP).unwrap();
        assert_eq!(m.num_vars(), 16);
    }

    #[test]
    fn problem_names() {
        assert_eq!("tsp-path".parse::<Problem>().unwrap(), Problem::Assembly);
        for p in Problem::ALL {
            assert_eq!(p.to_string().parse::<Problem>().unwrap(), p);
        }
    }

    #[test]
    fn infeasible_assignments_decode_to_none() {
        let k = NativeInstance::Knapsack(KnapsackInstance::new(vec![(5.0, 4), (5.0, 4)], 5).unwrap());
        assert!(k.decode(&[1, 1, 0, 0, 0]).is_none());
        let g = NativeInstance::Mis(WeightedGraph::unweighted(2, &[(0, 1)]).unwrap());
        assert!(g.decode(&[1, 1]).is_none());
        assert_eq!(g.decode(&[1, 0]).unwrap().objective(), 1.0);
    }
}
