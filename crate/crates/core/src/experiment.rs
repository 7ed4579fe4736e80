//! Sweeps of the control parameter `v` and the complexity fit.
//!
//! For each problem the heuristic is run on a grid of `v` values with several
//! replicates. The grid point with the smallest mean average distance is
//! `v*`. Collecting `(C(p), C(𝒜))` at `v*` over a set of problems and fitting
//! a line gives the empirical optimality condition.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexity::{problem_complexity, system_complexity};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::tsp::{run, ProblemInstance, PtmOffsets, RunConfig, TourMode};

/// Default coefficients of the linear optimality condition.
pub const DEFAULT_SLOPE: f64 = 0.67;
pub const DEFAULT_INTERCEPT: f64 = 0.33;

/// Spread of each Gaussian blob in `clustered` instances.
const CLUSTER_SIGMA: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    /// Cities uniform in the unit square.
    UniformSquare,
    /// Gaussian blobs around `max(2, n/10)` uniform centers.
    Clustered,
    /// All pairwise distances equal to 1 (no coordinates).
    Equidistant,
}

impl ProblemKind {
    fn tag(self) -> u64 {
        match self {
            ProblemKind::UniformSquare => 1,
            ProblemKind::Clustered => 2,
            ProblemKind::Equidistant => 3,
        }
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform_square" => Ok(ProblemKind::UniformSquare),
            "clustered" => Ok(ProblemKind::Clustered),
            "equidistant" => Ok(ProblemKind::Equidistant),
            other => Err(Error::invalid(format!("unsupported problem kind {other:?}"))),
        }
    }
}

/// Deterministic instance for `(kind, n, seed)`.
pub fn generate_problem(kind: ProblemKind, n: usize, seed: u64) -> Result<ProblemInstance> {
    if n < 2 {
        return Err(Error::invalid("need at least two cities"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[kind.tag(), n as u64]));
    match kind {
        ProblemKind::UniformSquare => {
            let coords = (0..n).map(|_| [rng.random::<f64>(), rng.random::<f64>()]).collect();
            ProblemInstance::from_coords(coords, Default::default())
        }
        ProblemKind::Clustered => {
            let k = (n / 10).max(2);
            let centers: Vec<[f64; 2]> = (0..k).map(|_| [rng.random::<f64>(), rng.random::<f64>()]).collect();
            let noise = Normal::new(0.0, CLUSTER_SIGMA).expect("valid normal");
            let coords = (0..n)
                .map(|i| {
                    let c = centers[i % k];
                    [c[0] + noise.sample(&mut rng), c[1] + noise.sample(&mut rng)]
                })
                .collect();
            ProblemInstance::from_coords(coords, Default::default())
        }
        ProblemKind::Equidistant => {
            let dist = (0..n * n).map(|k| if k / n == k % n { 0.0 } else { 1.0 }).collect();
            ProblemInstance::from_matrix(n, dist)
        }
    }
}

/// `0, 1/(points-1), ..., 1`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points).map(|i| i as f64 / (points - 1) as f64).collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub grid: Vec<f64>,
    pub replicates: usize,
    pub agents: usize,
    pub seed: u64,
    pub tour: TourMode,
    pub ptm_offsets: PtmOffsets,
    /// Worker threads; `None` uses the global pool, `Some(1)` runs inline.
    pub jobs: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            grid: uniform_grid(21),
            replicates: 20,
            agents: 50,
            seed: 0,
            tour: TourMode::Open,
            ptm_offsets: PtmOffsets::Staggered,
            jobs: None,
        }
    }
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::invalid("v grid is empty"));
        }
        if self.grid.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid("v grid must lie in [0, 1]"));
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("v grid must be strictly increasing"));
        }
        if self.replicates == 0 {
            return Err(Error::invalid("need at least one replicate"));
        }
        Ok(())
    }

    /// Seed of replicate `r` at grid index `vi`.
    pub fn replicate_seed(&self, vi: usize, r: usize) -> u64 {
        derive_seed(self.seed, &[vi as u64, r as u64])
    }

    fn run_config(&self, v: f64, seed: u64) -> RunConfig {
        RunConfig {
            agents: self.agents,
            v,
            seed,
            tour: self.tour,
            ptm_offsets: self.ptm_offsets,
        }
    }
}

/// Runs `f` over `items` in order, in parallel unless `jobs == Some(1)`.
fn ordered_map<T, U, F>(items: Vec<T>, jobs: Option<usize>, f: F) -> Result<Vec<U>>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Result<U> + Sync + Send,
{
    match jobs {
        Some(1) => items.into_iter().map(f).collect(),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| Error::invalid(format!("cannot start {j} workers: {e}")))?;
            pool.install(|| items.into_par_iter().map(&f).collect())
        }
        None => items.into_par_iter().map(f).collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub grid: Vec<f64>,
    /// Mean of `D̄` over replicates, per grid point.
    pub means: Vec<f64>,
    /// Sample standard deviation of `D̄` (0 for a single replicate).
    pub stds: Vec<f64>,
    /// Mean `C(𝒜)` over replicates; `None` when runs have fewer than two steps.
    pub system_complexity: Vec<Option<f64>>,
    /// `seeds[vi][r]`.
    pub seeds: Vec<Vec<u64>>,
    pub v_star_index: usize,
    pub v_star: f64,
}

struct Replicate {
    average_distance: f64,
    complexity: Option<f64>,
}

pub fn sweep_v(p: &ProblemInstance, cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let tasks: Vec<(usize, usize)> = (0..cfg.grid.len())
        .flat_map(|vi| (0..cfg.replicates).map(move |r| (vi, r)))
        .collect();
    let replicates = ordered_map(tasks, cfg.jobs, |(vi, r)| {
        let result = run(p, &cfg.run_config(cfg.grid[vi], cfg.replicate_seed(vi, r)))?;
        let complexity = if result.strategies.steps() >= 2 {
            Some(system_complexity(&result.strategies)?.value())
        } else {
            None
        };
        Ok(Replicate {
            average_distance: result.average_distance,
            complexity,
        })
    })?;

    let mut means = Vec::with_capacity(cfg.grid.len());
    let mut stds = Vec::with_capacity(cfg.grid.len());
    let mut system = Vec::with_capacity(cfg.grid.len());
    for chunk in replicates.chunks(cfg.replicates) {
        let (mean, std) = mean_std(chunk.iter().map(|r| r.average_distance));
        means.push(mean);
        stds.push(std);
        let cs: Option<Vec<f64>> = chunk.iter().map(|r| r.complexity).collect();
        system.push(cs.map(|c| c.iter().sum::<f64>() / c.len() as f64));
    }
    let seeds = (0..cfg.grid.len())
        .map(|vi| (0..cfg.replicates).map(|r| cfg.replicate_seed(vi, r)).collect())
        .collect();
    let v_star_index = find_v_star_index(&means);
    Ok(SweepResult {
        v_star: cfg.grid[v_star_index],
        grid: cfg.grid.clone(),
        means,
        stds,
        system_complexity: system,
        seeds,
        v_star_index,
    })
}

fn mean_std(xs: impl ExactSizeIterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Index of the smallest mean (first one on ties).
pub fn find_v_star_index(means: &[f64]) -> usize {
    means
        .iter()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |(bi, bm), (i, &m)| if m < bm { (i, m) } else { (bi, bm) },
        )
        .0
}

/// Grid value minimizing mean `D̄`, i.e. maximizing performance `-D̄`.
pub fn find_v_star(s: &SweepResult) -> f64 {
    s.grid[find_v_star_index(&s.means)]
}

/// Shape of a performance curve sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcavityReport {
    /// `[c0, c1, c2]` of the least-squares fit `c0 + c1·v + c2·v²`.
    pub quadratic: [f64; 3],
    pub curvature: f64,
    pub concave: bool,
    /// Vertex of the fitted parabola, when it has one.
    pub vertex: Option<f64>,
    /// Concave fit whose vertex lies strictly inside the grid range.
    pub interior_max: bool,
    /// Sign changes between successive nonzero differences.
    pub sign_changes: usize,
    /// `sign_changes` over the number of possible changes.
    pub sign_change_fraction: f64,
    /// Rises, then falls, with exactly one change of direction.
    pub unimodal: bool,
}

impl ConcavityReport {
    pub fn concave_with_interior_max(&self) -> bool {
        self.concave && self.interior_max
    }
}

/// Concavity of performance `-mean D̄` over the sweep grid.
pub fn concavity_report(s: &SweepResult) -> Result<ConcavityReport> {
    let perf: Vec<f64> = s.means.iter().map(|m| -m).collect();
    curve_concavity(&s.grid, &perf)
}

pub fn curve_concavity(grid: &[f64], performance: &[f64]) -> Result<ConcavityReport> {
    if grid.len() != performance.len() {
        return Err(Error::invalid("grid and curve lengths differ"));
    }
    if grid.len() < 3 {
        return Err(Error::invalid("concavity needs at least three grid points"));
    }
    let design = DMatrix::from_fn(grid.len(), 3, |i, j| grid[i].powi(j as i32));
    let y = DVector::from_column_slice(performance);
    let coef = design
        .svd(true, true)
        .solve(&y, 1e-12)
        .map_err(|e| Error::RankDeficient(e.to_string()))?;
    let (c1, c2) = (coef[1], coef[2]);
    let vertex = (c2 != 0.0).then(|| -c1 / (2.0 * c2));
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let concave = c2 < 0.0;
    let interior_max = concave && vertex.is_some_and(|x| x > lo && x < hi);

    let diffs: Vec<f64> = performance
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d != 0.0)
        .collect();
    let sign_changes = diffs.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    let possible = diffs.len().saturating_sub(1);
    Ok(ConcavityReport {
        quadratic: [coef[0], c1, c2],
        curvature: c2,
        concave,
        vertex,
        interior_max,
        sign_changes,
        sign_change_fraction: if possible == 0 {
            0.0
        } else {
            sign_changes as f64 / possible as f64
        },
        unimodal: sign_changes == 1 && diffs.first().is_some_and(|d| *d > 0.0),
    })
}

/// Ordinary least squares of `y` on `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimalityFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub residuals: Vec<f64>,
}

pub fn fit_line(points: &[(f64, f64)]) -> Result<OptimalityFit> {
    if points.len() < 2 {
        return Err(Error::invalid("need at least two points"));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    if sxx <= f64::EPSILON * mx.abs().max(1.0) * mx.abs().max(1.0) * k {
        return Err(Error::RankDeficient("all x values are identical".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = points.iter().map(|p| p.1 - (intercept + slope * p.0)).collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(OptimalityFit {
        points: points.to_vec(),
        slope,
        intercept,
        r_squared,
        residuals,
    })
}

/// Per-problem outcome of the optimality pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemRow {
    pub id: String,
    pub n: usize,
    pub c_p: f64,
    pub v_star: f64,
    /// Mean `C(𝒜)` over the replicates at `v*`.
    pub c_a: f64,
    pub concavity: Option<ConcavityReport>,
    pub sweep: SweepResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimalityStudy {
    pub rows: Vec<ProblemRow>,
    pub fit: OptimalityFit,
}

/// Sweep each problem, read off `C(𝒜)` at `v*` and `C(p)`, then fit.
pub fn optimality_fit(problems: &[(String, ProblemInstance)], cfg: &SweepConfig) -> Result<OptimalityStudy> {
    if problems.len() < 2 {
        return Err(Error::invalid("need at least two problems"));
    }
    let mut rows = Vec::with_capacity(problems.len());
    for (id, p) in problems {
        rows.push(study_problem(id, p, cfg)?);
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.c_p, r.c_a)).collect();
    let fit = fit_line(&points)?;
    Ok(OptimalityStudy { rows, fit })
}

pub fn study_problem(id: &str, p: &ProblemInstance, cfg: &SweepConfig) -> Result<ProblemRow> {
    let sweep = sweep_v(p, cfg)?;
    let c_a = sweep.system_complexity[sweep.v_star_index]
        .ok_or_else(|| Error::invalid(format!("problem {id} has too few cities for C(A)")))?;
    let concavity = if sweep.grid.len() >= 3 {
        Some(concavity_report(&sweep)?)
    } else {
        None
    };
    Ok(ProblemRow {
        id: id.to_string(),
        n: p.n(),
        c_p: problem_complexity(p.n(), p.distances())?.value(),
        v_star: sweep.v_star,
        c_a,
        concavity,
        sweep,
    })
}

/// `slope·C(p) + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearCondition {
    pub slope: f64,
    pub intercept: f64,
}

impl Default for LinearCondition {
    fn default() -> Self {
        LinearCondition {
            slope: DEFAULT_SLOPE,
            intercept: DEFAULT_INTERCEPT,
        }
    }
}

pub fn predict_complexity(c_p: f64, condition: LinearCondition) -> f64 {
    condition.slope * c_p + condition.intercept
}

/// Fixed-point decimal text, trailing zeros trimmed to at least one decimal.
pub fn format_decimal(x: f64, places: usize) -> String {
    let mut s = format!("{x:.places$}");
    if s.contains('.') {
        while s.ends_with('0') && !s.ends_with(".0") {
            s.pop();
        }
    }
    if s == "-0.0" {
        s = "0.0".into();
    }
    s
}

pub fn sweep_csv(s: &SweepResult) -> String {
    let mut out = String::from("v,mean,std\n");
    for ((v, m), sd) in s.grid.iter().zip(&s.means).zip(&s.stds) {
        let _ = writeln!(out, "{v:.6},{m:.12},{sd:.12}");
    }
    out
}

pub fn problems_csv(rows: &[ProblemRow]) -> String {
    let mut out = String::from("id,n,c_p,v_star,c_a\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{:.6},{}", r.id, r.n, r.c_p, r.v_star, r.c_a);
    }
    out
}

pub fn concavity_csv(rows: &[ProblemRow]) -> String {
    let mut out = String::from("id,curvature,vertex,concave,interior_max,sign_changes,unimodal\n");
    for r in rows {
        if let Some(c) = &r.concavity {
            let vertex = c.vertex.map(|x| format!("{x:.6}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{:.12},{},{},{},{},{}",
                r.id, c.curvature, vertex, c.concave, c.interior_max, c.sign_changes, c.unimodal
            );
        }
    }
    out
}

pub fn fit_csv(fit: &OptimalityFit) -> String {
    format!(
        "slope,intercept,r_squared,k\n{:.12},{:.12},{:.12},{}\n",
        fit.slope,
        fit.intercept,
        fit.r_squared,
        fit.points.len()
    )
}

/// Reads `(c_p, c_a)` points from per-problem rows CSV.
pub fn parse_problem_points(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::format(format!("missing column {name}")))
    };
    let (xi, yi) = (col("c_p")?, col("c_a")?);
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record?;
        let parse = |i: usize| {
            record
                .get(i)
                .and_then(|f| f.parse::<f64>().ok())
                .ok_or_else(|| Error::format(format!("bad number in row {:?}", record)))
        };
        points.push((parse(xi)?, parse(yi)?));
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equidistant_complexity() {
        let p = generate_problem(ProblemKind::Equidistant, 5, 0).unwrap();
        let c = problem_complexity(5, p.distances()).unwrap().value();
        assert!((c - 0.8).abs() < 1e-15);
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in [
            ProblemKind::UniformSquare,
            ProblemKind::Clustered,
            ProblemKind::Equidistant,
        ] {
            assert_eq!(
                generate_problem(kind, 12, 9).unwrap(),
                generate_problem(kind, 12, 9).unwrap()
            );
        }
        assert_ne!(
            generate_problem(ProblemKind::UniformSquare, 12, 9).unwrap(),
            generate_problem(ProblemKind::UniformSquare, 12, 10).unwrap()
        );
    }

    #[test]
    fn uniform_square_bound() {
        let p = generate_problem(ProblemKind::UniformSquare, 40, 3).unwrap();
        assert!(p.d_max() <= 2f64.sqrt());
    }

    #[test]
    fn unknown_kind() {
        assert!(matches!(
            "hexagonal".parse::<ProblemKind>(),
            Err(Error::InvalidArgument(_))
        ));
        assert!(generate_problem(ProblemKind::Clustered, 1, 0).is_err());
    }

    #[test]
    fn single_point_single_replicate() {
        let p = generate_problem(ProblemKind::UniformSquare, 8, 1).unwrap();
        let cfg = SweepConfig {
            grid: vec![0.35],
            replicates: 1,
            agents: 6,
            seed: 4,
            ..Default::default()
        };
        let s = sweep_v(&p, &cfg).unwrap();
        let direct = run(&p, &cfg.run_config(0.35, cfg.replicate_seed(0, 0))).unwrap();
        assert_eq!(s.means, vec![direct.average_distance]);
        assert_eq!(s.stds, vec![0.0]);
        assert_eq!(s.v_star, 0.35);
    }

    #[test]
    fn forced_route_sweep() {
        let p = ProblemInstance::from_coords(vec![[0.0, 0.0], [3.0, 4.0]], Default::default()).unwrap();
        let cfg = SweepConfig {
            grid: uniform_grid(5),
            replicates: 3,
            agents: 4,
            ..Default::default()
        };
        let s = sweep_v(&p, &cfg).unwrap();
        assert!(s.means.iter().all(|&m| m == 5.0));
        assert!(s.system_complexity.iter().all(Option::is_none));
    }

    #[test]
    fn bad_sweep_configs() {
        let p = generate_problem(ProblemKind::UniformSquare, 5, 0).unwrap();
        let base = SweepConfig {
            agents: 3,
            replicates: 1,
            ..Default::default()
        };
        for cfg in [
            SweepConfig {
                grid: vec![],
                ..base.clone()
            },
            SweepConfig {
                grid: vec![0.5, 0.2],
                ..base.clone()
            },
            SweepConfig {
                grid: vec![0.5, 1.2],
                ..base.clone()
            },
            SweepConfig {
                replicates: 0,
                ..base.clone()
            },
        ] {
            assert!(sweep_v(&p, &cfg).is_err());
        }
    }

    #[test]
    fn v_star_examples() {
        assert_eq!(find_v_star_index(&[3.0, 1.0, 2.0]), 1);
        assert_eq!(find_v_star_index(&[2.0, 2.0, 2.0]), 0);
        assert_eq!(find_v_star_index(&[5.0, 1.0, 1.0, 4.0]), 1);
    }

    #[test]
    fn exact_quadratic_curves() {
        let grid = uniform_grid(21);
        let down: Vec<f64> = grid.iter().map(|v| -(v - 0.4) * (v - 0.4)).collect();
        let r = curve_concavity(&grid, &down).unwrap();
        assert!(r.concave && r.interior_max && r.unimodal);
        assert!((r.curvature + 1.0).abs() < 1e-9);
        assert!((r.vertex.unwrap() - 0.4).abs() < 1e-9);
        assert_eq!(r.sign_changes, 1);

        let up: Vec<f64> = grid.iter().map(|v| (v - 0.5) * (v - 0.5)).collect();
        let r = curve_concavity(&grid, &up).unwrap();
        assert!(!r.concave && !r.interior_max);
    }

    #[test]
    fn concave_but_boundary_max() {
        let grid = uniform_grid(11);
        let perf: Vec<f64> = grid.iter().map(|v| -(v + 0.2) * (v + 0.2)).collect();
        let r = curve_concavity(&grid, &perf).unwrap();
        assert!(r.concave && !r.interior_max && !r.unimodal);
    }

    #[test]
    fn concavity_needs_three_points() {
        assert!(curve_concavity(&[0.0, 1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn line_fit_examples() {
        let f = fit_line(&[(0.0, 1.0), (2.0, 5.0)]).unwrap();
        assert_eq!((f.slope, f.intercept, f.r_squared), (2.0, 1.0, 1.0));
        assert!(matches!(
            fit_line(&[(1.0, 1.0), (1.0, 2.0)]),
            Err(Error::RankDeficient(_))
        ));
        assert!(fit_line(&[(1.0, 1.0)]).is_err());
    }

    #[test]
    fn prediction() {
        let c = LinearCondition::default();
        assert!((predict_complexity(0.0, c) - 0.33).abs() < 1e-15);
        assert!((predict_complexity(1.0, c) - 1.0).abs() < 1e-15);
        assert!((predict_complexity(0.5, c) - 0.665).abs() < 1e-15);
        assert_eq!(format_decimal(predict_complexity(0.0, c), 6), "0.33");
        assert_eq!(format_decimal(predict_complexity(1.0, c), 6), "1.0");
        assert_eq!(format_decimal(predict_complexity(0.5, c), 6), "0.665");
    }

    #[test]
    fn points_csv_roundtrip() {
        let text = "id,n,c_p,v_star,c_a\na,10,0.25,0.5,0.5\nb,12,0.5,0.1,0.66\n";
        assert_eq!(parse_problem_points(text).unwrap(), vec![(0.25, 0.5), (0.5, 0.66)]);
        assert!(parse_problem_points("id,x\n1,2\n").is_err());
    }
}
