use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::fmt_f64;

/// Variable domain of a [`QuadraticModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Ising spins in {−1, +1}.
    Spin,
    /// QUBO bits in {0, 1}.
    Binary,
}

impl Convention {
    pub fn values(self) -> [i8; 2] {
        match self {
            Convention::Spin => [-1, 1],
            Convention::Binary => [0, 1],
        }
    }

    /// The other value of a variable currently at `v`.
    pub fn flipped(self, v: i8) -> i8 {
        match self {
            Convention::Spin => -v,
            Convention::Binary => 1 - v,
        }
    }

    fn accepts(self, v: i8) -> bool {
        self.values().contains(&v)
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Spin => "spin",
            Convention::Binary => "binary",
        })
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spin" | "ising" => Ok(Convention::Spin),
            "binary" | "qubo" => Ok(Convention::Binary),
            other => Err(Error::Config(format!("unknown convention {other:?}"))),
        }
    }
}

/// `E(x) = Σ h_i x_i + Σ_{i<j} J_ij x_i x_j + offset` over spin or binary
/// variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticModel {
    convention: Convention,
    linear: Vec<f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

/// A model over ±1 spins.
pub type IsingModel = QuadraticModel;
/// A model over {0, 1} bits.
pub type BinaryModel = QuadraticModel;

impl QuadraticModel {
    pub fn new(convention: Convention, num_vars: usize) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::argument("a model needs at least one variable"));
        }
        Ok(QuadraticModel {
            convention,
            linear: vec![0.0; num_vars],
            quadratic: BTreeMap::new(),
            offset: 0.0,
        })
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn num_vars(&self) -> usize {
        self.linear.len()
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quadratic
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    fn check_var(&self, i: usize) -> Result<()> {
        if i >= self.num_vars() {
            return Err(Error::shape(format!(
                "variable {i} out of range for {} variables",
                self.num_vars()
            )));
        }
        Ok(())
    }

    pub fn add_linear(&mut self, i: usize, value: f64) -> Result<()> {
        self.check_var(i)?;
        self.linear[i] += value;
        Ok(())
    }

    /// Adds `value · x_i x_j`. A diagonal term is folded using `x² = x`
    /// (binary) or `s² = 1` (spin), so no self-coupling is ever stored.
    pub fn add_quadratic(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        self.check_var(i)?;
        self.check_var(j)?;
        if i == j {
            match self.convention {
                Convention::Binary => self.linear[i] += value,
                Convention::Spin => self.offset += value,
            }
            return Ok(());
        }
        let key = (i.min(j), i.max(j));
        *self.quadratic.entry(key).or_insert(0.0) += value;
        Ok(())
    }

    pub fn add_offset(&mut self, value: f64) {
        self.offset += value;
    }

    /// Drops couplings that cancelled to exactly zero.
    pub fn prune(&mut self) {
        self.quadratic.retain(|_, v| *v != 0.0);
    }

    pub fn validate(&self, assignment: &[i8]) -> Result<()> {
        if assignment.len() != self.num_vars() {
            return Err(Error::shape(format!(
                "assignment has {} values, model has {} variables",
                assignment.len(),
                self.num_vars()
            )));
        }
        if let Some(v) = assignment.iter().find(|v| !self.convention.accepts(**v)) {
            return Err(Error::shape(format!("value {v} is not a {} value", self.convention)));
        }
        Ok(())
    }

    pub fn energy(&self, assignment: &[i8]) -> Result<f64> {
        self.validate(assignment)?;
        Ok(self.energy_unchecked(assignment))
    }

    pub(crate) fn energy_unchecked(&self, x: &[i8]) -> f64 {
        let lin: f64 = self.linear.iter().zip(x).map(|(h, &v)| h * f64::from(v)).sum();
        let quad: f64 = self
            .quadratic
            .iter()
            .map(|(&(i, j), &c)| c * f64::from(x[i]) * f64::from(x[j]))
            .sum();
        lin + quad + self.offset
    }

    /// Neighbour lists `(j, J_ij)` for every variable.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.num_vars()];
        for (&(i, j), &c) in &self.quadratic {
            adj[i].push((j, c));
            adj[j].push((i, c));
        }
        adj
    }

    /// Largest number of couplings on any single variable.
    pub fn max_degree(&self) -> usize {
        self.adjacency().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Same energies over spins, substituting `x = (1 + s) / 2`.
    pub fn to_spin(&self) -> QuadraticModel {
        if self.convention == Convention::Spin {
            return self.clone();
        }
        let mut m = QuadraticModel {
            convention: Convention::Spin,
            linear: vec![0.0; self.num_vars()],
            quadratic: BTreeMap::new(),
            offset: self.offset,
        };
        for (i, &h) in self.linear.iter().enumerate() {
            m.linear[i] += h / 2.0;
            m.offset += h / 2.0;
        }
        for (&(i, j), &c) in &self.quadratic {
            let q = c / 4.0;
            m.offset += q;
            m.linear[i] += q;
            m.linear[j] += q;
            m.quadratic.insert((i, j), q);
        }
        m
    }

    /// Same energies over bits, substituting `s = 2x − 1`.
    pub fn to_binary(&self) -> QuadraticModel {
        if self.convention == Convention::Binary {
            return self.clone();
        }
        let mut m = QuadraticModel {
            convention: Convention::Binary,
            linear: vec![0.0; self.num_vars()],
            quadratic: BTreeMap::new(),
            offset: self.offset,
        };
        for (i, &h) in self.linear.iter().enumerate() {
            m.linear[i] += 2.0 * h;
            m.offset -= h;
        }
        for (&(i, j), &c) in &self.quadratic {
            m.quadratic.insert((i, j), 4.0 * c);
            m.linear[i] -= 2.0 * c;
            m.linear[j] -= 2.0 * c;
            m.offset += c;
        }
        m
    }

    /// Maps an assignment between conventions (`x = (1 + s) / 2`).
    pub fn convert_assignment(from: Convention, to: Convention, x: &[i8]) -> Vec<i8> {
        match (from, to) {
            (Convention::Spin, Convention::Binary) => x.iter().map(|&s| (1 + s) / 2).collect(),
            (Convention::Binary, Convention::Spin) => x.iter().map(|&b| 2 * b - 1).collect(),
            _ => x.to_vec(),
        }
    }

    /// Writes the plain-text model format:
    ///
    /// ```text
    /// QUBO <n> <offset> <convention>
    /// i i h_i
    /// i j J_ij
    /// ```
    ///
    /// with zero-based indices, `i < j` for couplings, non-zero terms only
    /// and 17 significant digits. Reading skips `#` comment lines, so a
    /// metadata header may precede the model.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "QUBO {} {} {}", self.num_vars(), fmt_f64(self.offset), self.convention)?;
        for (i, &h) in self.linear.iter().enumerate() {
            if h != 0.0 {
                writeln!(out, "{i} {i} {}", fmt_f64(h))?;
            }
        }
        for (&(i, j), &c) in &self.quadratic {
            if c != 0.0 {
                writeln!(out, "{i} {j} {}", fmt_f64(c))?;
            }
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input
            .lines()
            .enumerate()
            .filter(|(_, l)| !matches!(l, Ok(s) if s.trim_start().starts_with('#')));
        let parse_err = |line: usize, message: String| Error::Parse { position: line + 1, message };
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(0, "empty model file".into()))?;
        let header = header?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "QUBO" {
            return Err(parse_err(0, format!("bad header {header:?}")));
        }
        let n: usize = fields[1].parse().map_err(|_| parse_err(0, "bad variable count".into()))?;
        let offset: f64 = fields[2].parse().map_err(|_| parse_err(0, "bad offset".into()))?;
        let convention: Convention =
            fields[3].parse().map_err(|_| parse_err(0, "bad convention".into()))?;
        let mut m = QuadraticModel::new(convention, n)?;
        m.offset = offset;
        for (ln, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(parse_err(ln, format!("expected 3 fields, got {line:?}")));
            }
            let i: usize = f[0].parse().map_err(|_| parse_err(ln, "bad index".into()))?;
            let j: usize = f[1].parse().map_err(|_| parse_err(ln, "bad index".into()))?;
            let v: f64 = f[2].parse().map_err(|_| parse_err(ln, "bad coefficient".into()))?;
            if i >= n || j >= n || i > j {
                return Err(parse_err(ln, format!("invalid term indices {i} {j}")));
            }
            if i == j {
                m.linear[i] += v;
            } else {
                *m.quadratic.entry((i, j)).or_insert(0.0) += v;
            }
        }
        Ok(m)
    }
}
