//! Multi-agent TSP heuristic steered by a success threshold and the PTM rule.
//!
//! `N` agents start at city 0 and extend their routes one city per step. A
//! step is either random (uniform over unvisited cities) or greedy (nearest
//! unvisited city). The first step is random for everyone. After each step the
//! agents' cumulative distances are pooled and an agent counts as successful
//! iff its distance is at most `d_min + v·(d_max - d_min)`. A successful agent
//! keeps its strategy; an unsuccessful one reads the next symbol of its PTM
//! cursor (`+1` random, `-1` greedy).

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complexity::StrategyMatrix;
use crate::error::{Error, Result};
use crate::relations::ptm_sign;
use crate::rng::keyed_stream;

/// How coordinates become distances.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceRounding {
    #[default]
    Exact,
    /// TSPLIB `nint(sqrt(dx² + dy²))`.
    Nint,
}

/// Symmetric TSP instance over cities `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    n: usize,
    coords: Option<Vec<[f64; 2]>>,
    dist: Vec<f64>,
    d_max: f64,
    degenerate: bool,
}

impl ProblemInstance {
    pub fn from_coords(coords: Vec<[f64; 2]>, rounding: DistanceRounding) -> Result<Self> {
        let n = coords.len();
        if coords.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::format("non-finite coordinate"));
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let (dx, dy) = (coords[i][0] - coords[j][0], coords[i][1] - coords[j][1]);
                let mut d = dx.hypot(dy);
                if rounding == DistanceRounding::Nint {
                    d = (d + 0.5).floor();
                }
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        let mut p = ProblemInstance::from_matrix(n, dist)?;
        p.coords = Some(coords);
        Ok(p)
    }

    /// Row-major `n×n` matrix; must be symmetric, non-negative, zero diagonal.
    pub fn from_matrix(n: usize, dist: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::format("instance has no cities"));
        }
        if dist.len() != n * n {
            return Err(Error::format(format!("{} distances for {n} cities", dist.len())));
        }
        let mut degenerate = false;
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::format(format!("nonzero diagonal at city {i}")));
            }
            for j in 0..n {
                let d = dist[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::format(format!(
                        "negative or non-finite distance {d} at ({i}, {j})"
                    )));
                }
                if d != dist[j * n + i] {
                    return Err(Error::format(format!("asymmetric distance at ({i}, {j})")));
                }
                if i != j && d == 0.0 {
                    degenerate = true;
                }
            }
        }
        let d_max = dist.iter().copied().fold(0.0, f64::max);
        Ok(ProblemInstance {
            n,
            coords: None,
            dist,
            d_max,
            degenerate,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    pub fn distances(&self) -> &[f64] {
        &self.dist
    }

    pub fn coords(&self) -> Option<&[[f64; 2]]> {
        self.coords.as_deref()
    }

    /// Some pair of distinct cities is at distance zero.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Length of a route that starts at city 0 and visits `route` in order.
    pub fn route_length(&self, route: &[usize], tour: TourMode) -> f64 {
        let mut total = 0.0;
        let mut at = 0;
        for &c in route {
            total += self.d(at, c);
            at = c;
        }
        if tour == TourMode::Closed {
            total += self.d(at, 0);
        }
        total
    }

    /// Distance matrix as headerless CSV, one row per city.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.d(i, j).to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Option<String> {
        self.coords
            .as_ref()
            .map(|c| serde_json::to_string(&CoordsJson { coords: c.clone() }).expect("coordinates serialize"))
    }
}

#[derive(Serialize, Deserialize)]
struct CoordsJson {
    coords: Vec<[f64; 2]>,
}

/// `{"coords": [[x, y], ...]}`.
pub fn parse_json_instance(text: &str, rounding: DistanceRounding) -> Result<ProblemInstance> {
    let doc: CoordsJson = serde_json::from_str(text)?;
    ProblemInstance::from_coords(doc.coords, rounding)
}

/// Square distance matrix, comma separated, no header.
pub fn parse_csv_matrix(text: &str) -> Result<ProblemInstance> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::format(format!("bad distance {f:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::format("distance matrix is not square"));
    }
    ProblemInstance::from_matrix(n, rows.concat())
}

/// The `EUC_2D` subset of TSPLIB: header lines, `NODE_COORD_SECTION`, `EOF`.
pub fn parse_tsplib(text: &str, rounding: DistanceRounding) -> Result<ProblemInstance> {
    let mut dimension = None;
    let mut edge_type = None;
    let mut coords: Vec<(usize, [f64; 2])> = Vec::new();
    let mut in_coords = false;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if line == "EOF" {
            break;
        }
        if in_coords {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::format(format!("bad coordinate line {line:?}")));
            }
            let id = fields[0]
                .parse::<usize>()
                .map_err(|_| Error::format(format!("bad node id in {line:?}")))?;
            let x = fields[1]
                .parse::<f64>()
                .map_err(|_| Error::format(format!("bad x in {line:?}")))?;
            let y = fields[2]
                .parse::<f64>()
                .map_err(|_| Error::format(format!("bad y in {line:?}")))?;
            coords.push((id, [x, y]));
            continue;
        }
        if line.starts_with("NODE_COORD_SECTION") {
            in_coords = true;
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(Error::format(format!("unexpected TSPLIB line {line:?}")));
        };
        let value = value.trim();
        match key.trim() {
            "DIMENSION" => {
                dimension = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| Error::format(format!("bad DIMENSION {value:?}")))?,
                )
            }
            "EDGE_WEIGHT_TYPE" => edge_type = Some(value.to_string()),
            "TYPE" if value != "TSP" => {
                return Err(Error::format(format!("unsupported TSPLIB TYPE {value}")));
            }
            _ => {}
        }
    }
    match edge_type.as_deref() {
        Some("EUC_2D") => {}
        Some(other) => return Err(Error::format(format!("unsupported EDGE_WEIGHT_TYPE {other}"))),
        None => return Err(Error::format("missing EDGE_WEIGHT_TYPE")),
    }
    let dimension = dimension.ok_or_else(|| Error::format("missing DIMENSION"))?;
    if coords.len() != dimension {
        return Err(Error::format(format!(
            "DIMENSION is {dimension} but {} coordinates were given",
            coords.len()
        )));
    }
    coords.sort_by_key(|(id, _)| *id);
    if coords.iter().enumerate().any(|(k, (id, _))| *id != k + 1) {
        return Err(Error::format("node ids must be 1..DIMENSION"));
    }
    ProblemInstance::from_coords(coords.into_iter().map(|(_, c)| c).collect(), rounding)
}

/// Loads by extension: `.json` coordinates, `.csv` matrix, `.tsp` TSPLIB.
pub fn load_instance(path: &Path, rounding: DistanceRounding) -> Result<ProblemInstance> {
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => parse_json_instance(&text, rounding),
        Some("csv") => parse_csv_matrix(&text),
        Some("tsp") => parse_tsplib(&text, rounding),
        _ => Err(Error::format(format!(
            "cannot tell the format of {} (expected .json, .csv or .tsp)",
            path.display()
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Random,
    Greedy,
}

impl Strategy {
    /// `+1` random, `-1` greedy.
    pub fn sign(self) -> i8 {
        match self {
            Strategy::Random => 1,
            Strategy::Greedy => -1,
        }
    }

    pub fn from_ptm(symbol: i8) -> Self {
        if symbol > 0 {
            Strategy::Random
        } else {
            Strategy::Greedy
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TourMode {
    /// Route ends at the last visited city.
    #[default]
    Open,
    /// Adds the leg back to city 0.
    Closed,
}

/// Where each agent's PTM cursor starts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PtmOffsets {
    /// Agent `i` (0-based) starts at PTM position `i`.
    #[default]
    Staggered,
    /// Every agent starts at position 0.
    Zero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AgentState {
    pub current: usize,
    pub visited: Vec<bool>,
    /// Cities visited after the start city 0.
    pub route: Vec<usize>,
    pub distance: f64,
    pub last_strategy: Strategy,
    pub last_success: bool,
    pub ptm_cursor: usize,
}

impl AgentState {
    pub fn new(n: usize, ptm_cursor: usize) -> Self {
        let mut visited = vec![false; n];
        visited[0] = true;
        AgentState {
            current: 0,
            visited,
            route: Vec::with_capacity(n.saturating_sub(1)),
            distance: 0.0,
            last_strategy: Strategy::Random,
            last_success: true,
            ptm_cursor,
        }
    }

    /// Unvisited cities in ascending order.
    pub fn unvisited(&self) -> Vec<usize> {
        (0..self.visited.len()).filter(|&c| !self.visited[c]).collect()
    }

    pub fn visit(&mut self, city: usize, p: &ProblemInstance) {
        self.distance += p.d(self.current, city);
        self.visited[city] = true;
        self.route.push(city);
        self.current = city;
    }
}

/// Nearest unvisited city, ties to the smallest index.
pub fn greedy_next(agent: &AgentState, p: &ProblemInstance) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for c in agent.unvisited() {
        let d = p.d(agent.current, c);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((c, d));
        }
    }
    best.map(|(c, _)| c)
        .ok_or_else(|| Error::InvalidState("no unvisited city left".into()))
}

/// Uniform draw over unvisited cities.
pub fn random_next(agent: &AgentState, rng: &mut impl Rng) -> Result<usize> {
    let open = agent.unvisited();
    if open.is_empty() {
        return Err(Error::InvalidState("no unvisited city left".into()));
    }
    Ok(open[rng.random_range(0..open.len())])
}

/// Successful iff distance `<= d_min + v·(d_max - d_min)` over the pool.
pub fn classify_success(distances: &[f64], v: f64) -> Vec<bool> {
    let lo = distances.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = distances.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let threshold = lo + v * (hi - lo);
    distances.iter().map(|&d| d <= threshold).collect()
}

/// Keeps a successful strategy; otherwise consumes one PTM symbol.
pub fn choose_strategy(agent: &mut AgentState) -> Strategy {
    if agent.last_success {
        return agent.last_strategy;
    }
    let s = Strategy::from_ptm(ptm_sign(agent.ptm_cursor));
    agent.ptm_cursor += 1;
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub agents: usize,
    pub v: f64,
    pub seed: u64,
    #[serde(default)]
    pub tour: TourMode,
    #[serde(default)]
    pub ptm_offsets: PtmOffsets,
}

impl RunConfig {
    pub fn new(agents: usize, v: f64, seed: u64) -> Self {
        RunConfig {
            agents,
            v,
            seed,
            tour: TourMode::Open,
            ptm_offsets: PtmOffsets::Staggered,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.agents == 0 {
            return Err(Error::invalid("need at least one agent"));
        }
        if !(0.0..=1.0).contains(&self.v) {
            return Err(Error::invalid(format!("v = {} outside [0, 1]", self.v)));
        }
        Ok(())
    }
}

/// Source of random-move choices, addressed by position so runs replay.
pub trait MoveSource {
    /// Index in `0..choices` into the ascending list of unvisited cities.
    fn pick(&self, agent: usize, step: usize, choices: usize) -> usize;
}

/// ChaCha streams keyed by `(seed, agent, step)`.
#[derive(Clone, Copy, Debug)]
pub struct KeyedStreams {
    pub seed: u64,
}

impl MoveSource for KeyedStreams {
    fn pick(&self, agent: usize, step: usize, choices: usize) -> usize {
        keyed_stream(self.seed, agent as u64, step as u64).random_range(0..choices)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub config: RunConfig,
    pub strategies: StrategyMatrix,
    pub routes: Vec<Vec<usize>>,
    pub distances: Vec<f64>,
    /// `D̄ = (1/N)·Σ d(route_a)`.
    pub average_distance: f64,
    /// `γ`: how many agents followed each route.
    pub route_counts: BTreeMap<Vec<usize>, usize>,
}

/// Runs the heuristic with keyed ChaCha streams.
pub fn run(p: &ProblemInstance, cfg: &RunConfig) -> Result<RunResult> {
    run_with(p, cfg, &KeyedStreams { seed: cfg.seed })
}

pub fn run_with(p: &ProblemInstance, cfg: &RunConfig, source: &impl MoveSource) -> Result<RunResult> {
    cfg.validate()?;
    let n = p.n();
    if n < 2 {
        return Err(Error::invalid("need at least two cities"));
    }
    let steps = n - 1;
    let mut agents: Vec<AgentState> = (0..cfg.agents)
        .map(|a| {
            let cursor = match cfg.ptm_offsets {
                PtmOffsets::Staggered => a,
                PtmOffsets::Zero => 0,
            };
            AgentState::new(n, cursor)
        })
        .collect();
    let mut strategies = vec![0i8; cfg.agents * steps];

    for step in 0..steps {
        for (a, agent) in agents.iter_mut().enumerate() {
            let strategy = if step == 0 {
                Strategy::Random
            } else {
                choose_strategy(agent)
            };
            let next = match strategy {
                Strategy::Random => {
                    let open = agent.unvisited();
                    open[source.pick(a, step, open.len())]
                }
                Strategy::Greedy => greedy_next(agent, p)?,
            };
            agent.visit(next, p);
            agent.last_strategy = strategy;
            strategies[a * steps + step] = strategy.sign();
        }
        let pooled: Vec<f64> = agents.iter().map(|a| a.distance).collect();
        for (agent, ok) in agents.iter_mut().zip(classify_success(&pooled, cfg.v)) {
            agent.last_success = ok;
        }
    }

    let mut routes = Vec::with_capacity(cfg.agents);
    let mut distances = Vec::with_capacity(cfg.agents);
    let mut route_counts = BTreeMap::new();
    for agent in agents {
        let mut d = agent.distance;
        if cfg.tour == TourMode::Closed {
            d += p.d(agent.current, 0);
        }
        *route_counts.entry(agent.route.clone()).or_insert(0) += 1;
        routes.push(agent.route);
        distances.push(d);
    }
    let average_distance = distances.iter().sum::<f64>() / cfg.agents as f64;
    Ok(RunResult {
        config: cfg.clone(),
        strategies: StrategyMatrix::new(cfg.agents, steps, strategies)?,
        routes,
        distances,
        average_distance,
        route_counts,
    })
}

/// One route's share of the agents and its length.
#[derive(Clone, Debug, PartialEq)]
pub struct RouteShare {
    pub route: Vec<usize>,
    pub count: usize,
    pub probability: f64,
    pub distance: f64,
}

/// `D̄` rewritten as `Σ_route (γ/N)·d(route)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RouteDistribution {
    pub shares: Vec<RouteShare>,
    pub weighted_distance: f64,
}

/// Absolute tolerance for the decomposition, scaled by `max(1, D̄)`.
pub const DECOMPOSITION_TOL: f64 = 1e-12;

pub fn route_distribution(r: &RunResult, p: &ProblemInstance) -> Result<RouteDistribution> {
    let agents = r.routes.len() as f64;
    let shares: Vec<RouteShare> = r
        .route_counts
        .iter()
        .map(|(route, &count)| RouteShare {
            route: route.clone(),
            count,
            probability: count as f64 / agents,
            distance: p.route_length(route, r.config.tour),
        })
        .collect();
    let weighted_distance = shares.iter().map(|s| s.probability * s.distance).sum::<f64>();
    let total: usize = shares.iter().map(|s| s.count).sum();
    if total != r.routes.len() {
        return Err(Error::InternalConsistency(format!(
            "route counts sum to {total}, expected {}",
            r.routes.len()
        )));
    }
    let gap = (weighted_distance - r.average_distance).abs();
    if gap > DECOMPOSITION_TOL * r.average_distance.abs().max(1.0) {
        return Err(Error::InternalConsistency(format!(
            "route decomposition {weighted_distance} differs from average distance {} by {gap:e}",
            r.average_distance
        )));
    }
    Ok(RouteDistribution {
        shares,
        weighted_distance,
    })
}

#[derive(Serialize)]
struct RouteRow<'a> {
    route: &'a [usize],
    count: usize,
    distance: f64,
}

#[derive(Serialize)]
struct RunResultJson<'a> {
    agents: usize,
    cities: usize,
    v: f64,
    seed: u64,
    tour: TourMode,
    ptm_offsets: PtmOffsets,
    strategy_matrix: Vec<String>,
    routes: &'a [Vec<usize>],
    distances: &'a [f64],
    average_distance: f64,
    route_table: Vec<RouteRow<'a>>,
}

impl RunResult {
    /// JSON export: strategy rows as `+`/`-` strings, routes, `D̄`, `γ` table.
    pub fn to_json(&self, p: &ProblemInstance) -> String {
        let doc = RunResultJson {
            agents: self.config.agents,
            cities: p.n(),
            v: self.config.v,
            seed: self.config.seed,
            tour: self.config.tour,
            ptm_offsets: self.config.ptm_offsets,
            strategy_matrix: (0..self.strategies.agents())
                .map(|a| self.strategies.row_string(a))
                .collect(),
            routes: &self.routes,
            distances: &self.distances,
            average_distance: self.average_distance,
            route_table: self
                .route_counts
                .iter()
                .map(|(route, &count)| RouteRow {
                    route,
                    count,
                    distance: p.route_length(route, self.config.tour),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("run result serializes");
        s.push('\n');
        s
    }
}
