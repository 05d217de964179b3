use serde::Serialize;

use super::fields::LocalFields;
use crate::error::{Error, Result};
use crate::qubo::{Convention, QuadraticModel};

/// Largest model the exhaustive enumerator accepts.
pub const MAX_BRUTE_FORCE_VARS: usize = 25;

/// Exact ground energy and every assignment that attains it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceResult {
    pub energy: f64,
    convention: Convention,
    num_vars: usize,
    /// Bit `i` set means variable `i` takes the convention's upper value.
    optima: Vec<u32>,
}

impl BruteForceResult {
    pub fn count(&self) -> usize {
        self.optima.len()
    }

    pub fn masks(&self) -> &[u32] {
        &self.optima
    }

    pub fn assignments(&self) -> impl Iterator<Item = Vec<i8>> + '_ {
        self.optima.iter().map(|&m| mask_to_assignment(m, self.num_vars, self.convention))
    }
}

pub fn mask_to_assignment(mask: u32, n: usize, convention: Convention) -> Vec<i8> {
    let [lo, hi] = convention.values();
    (0..n).map(|i| if mask >> i & 1 == 1 { hi } else { lo }).collect()
}

fn tie_tolerance(e: f64) -> f64 {
    1e-9 * (1.0 + e.abs())
}

/// Enumerates all `2^n` assignments in Gray-code order with incremental
/// energy updates, then re-evaluates the surviving candidates exactly so
/// that the reported energy equals `model.energy` of every optimum.
pub fn brute_force(model: &QuadraticModel) -> Result<BruteForceResult> {
    let n = model.num_vars();
    if n > MAX_BRUTE_FORCE_VARS {
        return Err(Error::Capacity {
            what: "brute-force variables".into(),
            required: n,
            limit: MAX_BRUTE_FORCE_VARS,
        });
    }
    let convention = model.convention();
    let start = mask_to_assignment(0, n, convention);
    let mut lf = LocalFields::new(model, start);
    let mut e = model.energy_unchecked(lf.assignment());
    let mut best = e;
    let mut candidates = vec![0u32];
    let mut mask = 0u32;
    for k in 1u64..(1u64 << n) {
        let i = k.trailing_zeros() as usize;
        e += lf.flip(i);
        mask ^= 1 << i;
        if e < best - tie_tolerance(best) {
            best = e;
            candidates.clear();
            candidates.push(mask);
        } else if e <= best + tie_tolerance(best) {
            if e < best {
                best = e;
            }
            candidates.push(mask);
        }
    }
    let exact: Vec<(u32, f64)> = candidates
        .into_iter()
        .map(|m| (m, model.energy_unchecked(&mask_to_assignment(m, n, convention))))
        .collect();
    let energy = exact.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let mut optima: Vec<u32> =
        exact.into_iter().filter(|c| c.1 <= energy + tie_tolerance(energy)).map(|c| c.0).collect();
    optima.sort_unstable();
    Ok(BruteForceResult { energy, convention, num_vars: n, optima })
}
