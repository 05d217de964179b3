//! Genomics problem encoders onto [`QuadraticModel`] and their decoders.
//!
//! Constraint penalties use `A = 1 + Σ|objective coefficients|`, which puts
//! every infeasible assignment strictly above every feasible one: feasible
//! energies lie in `[−Σ|c|, 0]` and any violated constraint costs at least
//! `A`.

use serde::{Deserialize, Serialize};

use super::model::{Convention, QuadraticModel};
use crate::error::{Error, Result};

/// Default ceiling on overlap-graph nodes for the `n²`-variable encoding,
/// keeping the model brute-force verifiable (25 variables).
pub const DEFAULT_ASSEMBLY_CAP: usize = 5;

fn check_edges(n: usize, edges: &[(usize, usize, f64)], allow_loops: bool) -> Result<()> {
    for &(u, v, w) in edges {
        if u >= n || v >= n {
            return Err(Error::argument(format!("edge ({u},{v}) outside {n} vertices")));
        }
        if u == v && !allow_loops {
            return Err(Error::argument(format!("self-loop on vertex {u}")));
        }
        if !w.is_finite() {
            return Err(Error::argument(format!("edge ({u},{v}) has non-finite weight")));
        }
    }
    Ok(())
}

/// Undirected weighted graph; parallel edges add up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl WeightedGraph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::argument("graph needs at least one vertex"));
        }
        check_edges(num_vertices, &edges, false)?;
        Ok(WeightedGraph { num_vertices, edges })
    }

    pub fn unweighted(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(num_vertices, edges.iter().map(|&(u, v)| (u, v, 1.0)).collect())
    }

    /// Total weight of edges whose endpoints sit on different sides.
    pub fn cut_value(&self, side: &[bool]) -> f64 {
        self.edges.iter().filter(|(u, v, _)| side[*u] != side[*v]).map(|e| e.2).sum()
    }

    pub fn is_independent(&self, chosen: &[bool]) -> bool {
        !self.edges.iter().any(|&(u, v, _)| chosen[u] && chosen[v])
    }
}

/// Ising form of Max-Cut: `J_ij = w_ij / 2`, offset `−Σw / 2`, so the
/// energy of a spin assignment is minus the weight it cuts.
pub fn maxcut_to_ising(g: &WeightedGraph) -> Result<QuadraticModel> {
    let mut m = QuadraticModel::new(Convention::Spin, g.num_vertices)?;
    for &(u, v, w) in &g.edges {
        m.add_quadratic(u, v, w / 2.0)?;
        m.add_offset(-w / 2.0);
    }
    m.prune();
    Ok(m)
}

/// Partition side of each vertex (`true` for spin +1).
pub fn decode_cut(spins: &[i8]) -> Vec<bool> {
    spins.iter().map(|&s| s > 0).collect()
}

/// Allele co-occurrence graph for haplotype phasing. Positive weight is
/// evidence that two alleles share a haplotype, negative that they do not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FragmentGraph {
    pub num_alleles: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl FragmentGraph {
    pub fn new(num_alleles: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if num_alleles == 0 {
            return Err(Error::argument("fragment graph needs at least one allele"));
        }
        check_edges(num_alleles, &edges, false)?;
        Ok(FragmentGraph { num_alleles, edges })
    }

    /// Evidence agreement of a phasing: same-haplotype pairs add their
    /// weight, split pairs subtract it.
    pub fn agreement(&self, haplotype: &[u8]) -> f64 {
        self.edges
            .iter()
            .map(|&(u, v, w)| if haplotype[u] == haplotype[v] { w } else { -w })
            .sum()
    }
}

/// Max-Cut instance whose optimum is the best phasing. Edge weights are
/// negated: cutting negative evidence is rewarded and cutting positive
/// evidence penalized, so positive pairs end up within a partition.
pub fn phasing_to_maxcut(fg: &FragmentGraph) -> WeightedGraph {
    WeightedGraph {
        num_vertices: fg.num_alleles,
        edges: fg.edges.iter().map(|&(u, v, w)| (u, v, -w)).collect(),
    }
}

/// Haplotype label (0 or 1) of every allele from a cut.
pub fn decode_phasing(side: &[bool]) -> Vec<u8> {
    side.iter().map(|&s| u8::from(s)).collect()
}

/// Directed overlap graph over reads; `overlaps` holds `(from, to, weight)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapInstance {
    pub num_reads: usize,
    pub overlaps: Vec<(usize, usize, f64)>,
}

impl OverlapInstance {
    pub fn new(num_reads: usize, overlaps: Vec<(usize, usize, f64)>) -> Result<Self> {
        if num_reads == 0 {
            return Err(Error::argument("overlap graph needs at least one read"));
        }
        check_edges(num_reads, &overlaps, false)?;
        Ok(OverlapInstance { num_reads, overlaps })
    }

    /// Dense `from × to` weight matrix; parallel entries add up.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let n = self.num_reads;
        let mut w = vec![vec![0.0; n]; n];
        for &(u, v, x) in &self.overlaps {
            w[u][v] += x;
        }
        w
    }

    /// Summed overlap between consecutive reads of `path`.
    pub fn path_overlap(&self, path: &[usize]) -> f64 {
        let w = self.matrix();
        path.windows(2).map(|p| w[p[0]][p[1]]).sum()
    }
}

/// Index of `x_{v,p}` (read `v` at path position `p`).
pub fn assembly_var(num_reads: usize, read: usize, position: usize) -> usize {
    read * num_reads + position
}

/// Position-based Hamiltonian-path encoding with `n²` binary variables.
/// Minimizes `−Σ_p Σ_{u≠v} o(u,v) x_{u,p} x_{v,p+1}` plus
/// `A Σ_p (1 − Σ_v x_{v,p})² + A Σ_v (1 − Σ_p x_{v,p})²`.
pub fn assembly_to_qubo(o: &OverlapInstance, cap: usize) -> Result<QuadraticModel> {
    let n = o.num_reads;
    if n > cap {
        return Err(Error::Capacity { what: "overlap graph reads".into(), required: n, limit: cap });
    }
    let w = o.matrix();
    let mut m = QuadraticModel::new(Convention::Binary, n * n)?;
    let mut objective_abs = 0.0;
    for p in 0..n.saturating_sub(1) {
        for u in 0..n {
            for v in 0..n {
                if u != v && w[u][v] != 0.0 {
                    m.add_quadratic(assembly_var(n, u, p), assembly_var(n, v, p + 1), -w[u][v])?;
                    objective_abs += w[u][v].abs();
                }
            }
        }
    }
    let a = 1.0 + objective_abs;
    // (1 − Σ_k x_k)² = 1 − Σ_k x_k + 2 Σ_{k<l} x_k x_l over bits.
    let mut one_hot = |vars: &[usize]| -> Result<()> {
        m.add_offset(a);
        for (k, &x) in vars.iter().enumerate() {
            m.add_linear(x, -a)?;
            for &y in &vars[k + 1..] {
                m.add_quadratic(x, y, 2.0 * a)?;
            }
        }
        Ok(())
    };
    for p in 0..n {
        let vars: Vec<usize> = (0..n).map(|v| assembly_var(n, v, p)).collect();
        one_hot(&vars)?;
    }
    for v in 0..n {
        let vars: Vec<usize> = (0..n).map(|p| assembly_var(n, v, p)).collect();
        one_hot(&vars)?;
    }
    m.prune();
    Ok(m)
}

/// Read order of a feasible assignment, or `None` if some position or read
/// is not covered exactly once.
pub fn decode_assembly(num_reads: usize, bits: &[i8]) -> Option<Vec<usize>> {
    let n = num_reads;
    let mut path = vec![usize::MAX; n];
    for v in 0..n {
        let positions: Vec<usize> = (0..n).filter(|&p| bits[assembly_var(n, v, p)] == 1).collect();
        if positions.len() != 1 {
            return None;
        }
        if path[positions[0]] != usize::MAX {
            return None;
        }
        path[positions[0]] = v;
    }
    Some(path)
}

/// 0/1 knapsack with integer weights and capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnapsackInstance {
    /// `(value, weight)` per item.
    pub items: Vec<(f64, u64)>,
    pub capacity: u64,
}

impl KnapsackInstance {
    pub fn new(items: Vec<(f64, u64)>, capacity: u64) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::argument("knapsack needs at least one item"));
        }
        if capacity == 0 || items.iter().any(|&(_, w)| w == 0) {
            return Err(Error::argument("knapsack weights and capacity must be positive"));
        }
        if items.iter().any(|(v, _)| !v.is_finite()) {
            return Err(Error::argument("knapsack values must be finite"));
        }
        Ok(KnapsackInstance { items, capacity })
    }

    /// Accepts real-valued weights only if they are whole numbers.
    pub fn from_real_weights(items: &[(f64, f64)], capacity: f64) -> Result<Self> {
        let int = |x: f64| -> Result<u64> {
            if x.fract() != 0.0 || x <= 0.0 || x > u32::MAX as f64 {
                return Err(Error::argument(format!(
                    "knapsack weight {x} is not a positive integer; pre-scale the instance"
                )));
            }
            Ok(x as u64)
        };
        let items = items.iter().map(|&(v, w)| Ok((v, int(w)?))).collect::<Result<_>>()?;
        Self::new(items, int(capacity)?)
    }

    pub fn slack_bits(&self) -> usize {
        knapsack_slack_bits(self.capacity)
    }

    pub fn weight(&self, chosen: &[bool]) -> u64 {
        self.items.iter().zip(chosen).filter(|(_, c)| **c).map(|(i, _)| i.1).sum()
    }

    pub fn value(&self, chosen: &[bool]) -> f64 {
        self.items.iter().zip(chosen).filter(|(_, c)| **c).map(|(i, _)| i.0).sum()
    }
}

/// `ceil(log2(capacity + 1))`: enough binary slack to represent `0..=capacity`.
pub fn knapsack_slack_bits(capacity: u64) -> usize {
    (u64::BITS - capacity.leading_zeros()) as usize
}

/// Item bits followed by binary slack bits `y_j` (weight `2^j`), with
/// `−Σ v_i x_i + A (C − Σ w_i x_i − Σ 2^j y_j)²`.
pub fn knapsack_to_qubo(k: &KnapsackInstance) -> Result<QuadraticModel> {
    let n_items = k.items.len();
    let slack = k.slack_bits();
    let mut m = QuadraticModel::new(Convention::Binary, n_items + slack)?;
    let a = 1.0 + k.items.iter().map(|i| i.0.abs()).sum::<f64>();
    let mut coef: Vec<f64> = k.items.iter().map(|i| i.1 as f64).collect();
    coef.extend((0..slack).map(|j| (1u64 << j) as f64));
    let cap = k.capacity as f64;
    for (i, &(v, _)) in k.items.iter().enumerate() {
        m.add_linear(i, -v)?;
    }
    // A (C − Σ c_i z_i)² = A C² − 2AC Σ c_i z_i + A Σ c_i² z_i + 2A Σ_{i<j} c_i c_j z_i z_j
    m.add_offset(a * cap * cap);
    for (i, &ci) in coef.iter().enumerate() {
        m.add_linear(i, a * (ci * ci - 2.0 * cap * ci))?;
        for (j, &cj) in coef.iter().enumerate().skip(i + 1) {
            m.add_quadratic(i, j, 2.0 * a * ci * cj)?;
        }
    }
    m.prune();
    Ok(m)
}

/// Chosen items (the first `items.len()` bits).
pub fn decode_knapsack(k: &KnapsackInstance, bits: &[i8]) -> Vec<bool> {
    bits[..k.items.len()].iter().map(|&b| b == 1).collect()
}

/// `−Σ x_i + A Σ_{(i,j)∈E} x_i x_j` with `A = 1 + n`; couplings exist only
/// on graph edges.
pub fn mis_to_qubo(g: &WeightedGraph) -> Result<QuadraticModel> {
    let n = g.num_vertices;
    let mut m = QuadraticModel::new(Convention::Binary, n)?;
    let a = 1.0 + n as f64;
    for i in 0..n {
        m.add_linear(i, -1.0)?;
    }
    for &(u, v, _) in &g.edges {
        if !m.quadratic().contains_key(&(u.min(v), u.max(v))) {
            m.add_quadratic(u, v, a)?;
        }
    }
    Ok(m)
}

pub fn decode_selection(bits: &[i8]) -> Vec<bool> {
    bits.iter().map(|&b| b == 1).collect()
}
