use crate::qubo::{Convention, QuadraticModel};

/// Assignment plus cached local fields `h_i + Σ_j J_ij x_j`, so a
/// single-variable flip costs `O(degree)`.
#[derive(Debug, Clone)]
pub struct LocalFields {
    convention: Convention,
    x: Vec<i8>,
    field: Vec<f64>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
}

impl LocalFields {
    /// `x` must already be a valid assignment for `model`.
    pub fn new(model: &QuadraticModel, x: Vec<i8>) -> Self {
        let adj = model.adjacency();
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        let mut neighbors = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for row in &adj {
            for &(j, c) in row {
                neighbors.push(j);
                weights.push(c);
            }
            offsets.push(neighbors.len());
        }
        let field = (0..x.len())
            .map(|i| {
                model.linear()[i]
                    + adj[i].iter().map(|&(j, c)| c * f64::from(x[j])).sum::<f64>()
            })
            .collect();
        LocalFields { convention: model.convention(), x, field, offsets, neighbors, weights }
    }

    pub fn assignment(&self) -> &[i8] {
        &self.x
    }

    pub fn into_assignment(self) -> Vec<i8> {
        self.x
    }

    /// Energy change if variable `i` were flipped.
    #[inline]
    pub fn delta(&self, i: usize) -> f64 {
        let v = self.x[i];
        f64::from(self.convention.flipped(v) - v) * self.field[i]
    }

    /// Flips variable `i` and returns the energy change.
    #[inline]
    pub fn flip(&mut self, i: usize) -> f64 {
        let v = self.x[i];
        let nv = self.convention.flipped(v);
        let step = f64::from(nv - v);
        let d = step * self.field[i];
        self.x[i] = nv;
        for k in self.offsets[i]..self.offsets[i + 1] {
            self.field[self.neighbors[k]] += self.weights[k] * step;
        }
        d
    }
}
