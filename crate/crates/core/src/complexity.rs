//! Quadratic-trace complexity scores.
//!
//! `C(𝒜) = tr(V²)/N²` for the covariance `V` of an agents × steps strategy
//! matrix, and `C(p) = tr(M²)/n²` for the normalized distance matrix `M`. Both
//! matrices are symmetric, so `tr(X²)` is the sum of squared entries and no
//! eigen-decomposition is needed.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Agents × steps record of strategy choices: `+1` random, `-1` greedy.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StrategyMatrix {
    agents: usize,
    steps: usize,
    entries: Vec<i8>,
}

impl StrategyMatrix {
    pub fn new(agents: usize, steps: usize, entries: Vec<i8>) -> Result<Self> {
        if agents == 0 || steps == 0 {
            return Err(Error::invalid("strategy matrix dimensions must be positive"));
        }
        if entries.len() != agents * steps {
            return Err(Error::invalid(format!(
                "{} entries for a {agents}x{steps} strategy matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::invalid("strategy entries must be +1 or -1"));
        }
        Ok(StrategyMatrix { agents, steps, entries })
    }

    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let steps = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != steps) {
            return Err(Error::invalid("ragged strategy rows"));
        }
        StrategyMatrix::new(rows.len(), steps, rows.concat())
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn get(&self, agent: usize, step: usize) -> i8 {
        self.entries[agent * self.steps + step]
    }

    pub fn row(&self, agent: usize) -> &[i8] {
        &self.entries[agent * self.steps..(agent + 1) * self.steps]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.entries.chunks(self.steps)
    }

    /// Row as a string of `+`/`-`.
    pub fn row_string(&self, agent: usize) -> String {
        self.row(agent).iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
    }
}

impl fmt::Display for StrategyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in 0..self.agents {
            writeln!(f, "{}", self.row_string(a))?;
        }
        Ok(())
    }
}

/// Symmetric agent × agent covariance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix(DMatrix<f64>);

impl CovarianceMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }
}

/// Rows are centered by their own mean over steps; `V = Ŝ·Ŝᵀ / steps`.
pub fn covariance_matrix(s: &StrategyMatrix) -> Result<CovarianceMatrix> {
    if s.steps < 2 {
        return Err(Error::invalid("covariance needs at least two steps"));
    }
    let centered = DMatrix::from_fn(s.agents, s.steps, |i, j| {
        let row = s.row(i);
        let mean = row.iter().map(|&x| f64::from(x)).sum::<f64>() / s.steps as f64;
        f64::from(row[j]) - mean
    });
    let v = &centered * centered.transpose() / s.steps as f64;
    // exact symmetry regardless of summation order
    let v = DMatrix::from_fn(s.agents, s.agents, |i, j| if i <= j { v[(i, j)] } else { v[(j, i)] });
    Ok(CovarianceMatrix(v))
}

/// Dimensionless quadratic-trace score.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ComplexityScore(pub f64);

impl ComplexityScore {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// `(1/N²)·Σ_ij V_ij²`.
pub fn quadratic_trace_system(v: &CovarianceMatrix) -> ComplexityScore {
    ComplexityScore(squared_entry_sum(&v.0) / (v.dim() * v.dim()) as f64)
}

fn squared_entry_sum(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x * x).sum()
}

/// `C(𝒜)` straight from a strategy matrix.
pub fn system_complexity(s: &StrategyMatrix) -> Result<ComplexityScore> {
    Ok(quadratic_trace_system(&covariance_matrix(s)?))
}

/// `M = d/d_max`, symmetric with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrixNormalized(DMatrix<f64>);

impl DistanceMatrixNormalized {
    /// Validates a raw row-major `n×n` distance matrix and normalizes it.
    pub fn from_raw(n: usize, d: &[f64]) -> Result<Self> {
        if n == 0 || d.len() != n * n {
            return Err(Error::invalid(format!("{} entries for a {n}x{n} matrix", d.len())));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::invalid(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let x = d[i * n + j];
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::invalid(format!("bad distance {x} at ({i}, {j})")));
                }
                if x != d[j * n + i] {
                    return Err(Error::invalid(format!("asymmetric distance at ({i}, {j})")));
                }
            }
        }
        let d_max = d.iter().copied().fold(0.0, f64::max);
        if d_max <= 0.0 {
            return Err(Error::DegenerateInstance("all distances are zero".into()));
        }
        Ok(DistanceMatrixNormalized(DMatrix::from_row_slice(n, n, d) / d_max))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

/// `C(p) = (1/n²)·Σ_ij (d_ij/d_max)²` for a row-major distance matrix.
pub fn problem_complexity(n: usize, d: &[f64]) -> Result<ComplexityScore> {
    let m = DistanceMatrixNormalized::from_raw(n, d)?;
    Ok(ComplexityScore(squared_entry_sum(&m.0) / (n * n) as f64))
}

/// Writes `(C_p, C_A)` pairs as CSV.
pub fn pairs_csv(pairs: &[(f64, f64)]) -> String {
    let mut out = String::from("c_p,c_a\n");
    for (cp, ca) in pairs {
        out.push_str(&format!("{cp:.12},{ca:.12}\n"));
    }
    out
}
