//! Command-line front end. Exit status: 0 success, 1 data error, 2 usage error.
//! Errors are reported on stderr as one JSON object.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use pirlab::experiment::{
    concavity_csv, fit_csv, fit_line, format_decimal, parse_problem_points, predict_complexity, problems_csv,
    study_problem, sweep_csv, uniform_grid, LinearCondition, SweepConfig, DEFAULT_INTERCEPT, DEFAULT_SLOPE,
};
use pirlab::geometry::{build_pattern_stack_with_tol, metrics_csv, parse_rational, render_svg, GridSpec, SvgOptions};
use pirlab::relations::{build_hierarchy, ptm_sequence, IntegerAssignment, SignSequence};
use pirlab::tsp::{load_instance, run, DistanceRounding, PtmOffsets, RunConfig, TourMode};
use pirlab::{Error, Result};

#[derive(Parser)]
#[command(
    name = "pirlab",
    version,
    about = "Prime integer relation hierarchies, pattern geometry and the PTM-guided swarm TSP heuristic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a Prouhet-Thue-Morse prefix as a string of + and -
    Ptm {
        #[arg(long)]
        length: usize,
    },
    /// Build the relation hierarchy and print it as JSON
    Hierarchy {
        #[command(flatten)]
        signs: SignArgs,
        /// File of whitespace- or comma-separated integers (default L, L-1, ..., 1)
        #[arg(long)]
        integers: Option<PathBuf>,
    },
    /// Print per-pattern metrics (level, block, W, H, S, arc length) as CSV
    Geometry {
        #[command(flatten)]
        pattern: PatternArgs,
        /// Absolute tolerance for arc-length quadrature
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Render the pattern stack as SVG
    Render {
        #[command(flatten)]
        pattern: PatternArgs,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the swarm heuristic once and print the result as JSON
    TspRun {
        /// Instance file: .json coordinates, .csv matrix or .tsp (TSPLIB EUC_2D)
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 50)]
        agents: usize,
        /// Success threshold position in [0, 1]
        #[arg(long)]
        v: f64,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep v over every instance in a directory and write CSV reports
    Sweep {
        /// Directory of .json/.csv/.tsp instances
        #[arg(long)]
        instances: PathBuf,
        /// Number of evenly spaced v values in [0, 1]
        #[arg(long, default_value_t = 21)]
        grid: usize,
        #[arg(long, default_value_t = 20)]
        replicates: usize,
        #[arg(long, default_value_t = 50)]
        agents: usize,
        #[command(flatten)]
        run: RunArgs,
        /// Worker threads (results do not depend on this)
        #[arg(long)]
        jobs: Option<usize>,
        /// Output directory for sweep_<id>.csv, problems.csv, concavity.csv, fit.csv
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit C(A) against C(p) from a problems.csv written by `sweep`
    Fit {
        #[arg(long)]
        input: PathBuf,
    },
    /// Predict C(A) from C(p) with the linear optimality condition
    Predict {
        #[arg(long)]
        cp: f64,
        #[arg(long, default_value_t = DEFAULT_SLOPE)]
        slope: f64,
        #[arg(long, default_value_t = DEFAULT_INTERCEPT)]
        intercept: f64,
    },
}

#[derive(Args)]
struct SignArgs {
    /// Use the PTM prefix of this length
    #[arg(long, required_unless_present = "signs")]
    length: Option<usize>,
    /// Explicit signs such as +--+ (overrides --length)
    #[arg(long, allow_hyphen_values = true)]
    signs: Option<String>,
}

impl SignArgs {
    fn resolve(&self) -> Result<SignSequence> {
        match (&self.signs, self.length) {
            (Some(s), _) => s.parse(),
            (None, Some(len)) => ptm_sequence(len),
            (None, None) => Err(Error::InvalidArgument("need --length or --signs".into())),
        }
    }
}

#[derive(Args)]
struct PatternArgs {
    #[command(flatten)]
    signs: SignArgs,
    /// Abscissa unit as p/q
    #[arg(long, default_value = "1")]
    eps: String,
    /// Ordinate unit as p/q
    #[arg(long, default_value = "1")]
    delta: String,
    /// Highest level to build (default: the structural level)
    #[arg(long)]
    levels: Option<usize>,
}

impl PatternArgs {
    fn resolve(&self) -> Result<(SignSequence, GridSpec, usize)> {
        let signs = self.signs.resolve()?;
        let grid = GridSpec::new(parse_rational(&self.eps)?, parse_rational(&self.delta)?, signs.len())?;
        let levels = match self.levels {
            Some(l) => l,
            None => build_hierarchy(&signs, &IntegerAssignment::descending(signs.len()))?.structural_level,
        };
        Ok((signs, grid, levels))
    }
}

#[derive(Args)]
struct RunArgs {
    /// Master seed (falls back to PIRLAB_SEED, then 0)
    #[arg(long, env = "PIRLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Add the return leg to city 0
    #[arg(long)]
    closed: bool,
    /// Start every agent's PTM cursor at 0 instead of staggering by agent index
    #[arg(long)]
    zero_offsets: bool,
    /// Round coordinate distances TSPLIB-style (nint)
    #[arg(long)]
    tsplib_round: bool,
}

impl RunArgs {
    fn tour(&self) -> TourMode {
        if self.closed {
            TourMode::Closed
        } else {
            TourMode::Open
        }
    }

    fn offsets(&self) -> PtmOffsets {
        if self.zero_offsets {
            PtmOffsets::Zero
        } else {
            PtmOffsets::Staggered
        }
    }

    fn rounding(&self) -> DistanceRounding {
        if self.tsplib_round {
            DistanceRounding::Nint
        } else {
            DistanceRounding::Exact
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_integers(path: &Path) -> Result<IntegerAssignment> {
    let text = fs::read_to_string(path)?;
    let ints = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Error::Format(format!("bad integer {t:?} in {}", path.display())))
        })
        .collect::<Result<Vec<_>>>()?;
    IntegerAssignment::new(ints)
}

fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && matches!(p.extension().and_then(|e| e.to_str()), Some("json" | "csv" | "tsp")))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no instances found in {}",
            dir.display()
        )));
    }
    Ok(files)
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Ptm { length } => {
            println!("{}", ptm_sequence(length)?);
        }
        Command::Hierarchy { signs, integers } => {
            let signs = signs.resolve()?;
            let ints = match integers {
                Some(path) => read_integers(&path)?,
                None => IntegerAssignment::descending(signs.len()),
            };
            let h = build_hierarchy(&signs, &ints)?;
            println!("{}", h.to_json());
        }
        Command::Geometry { pattern, tol } => {
            let (signs, grid, levels) = pattern.resolve()?;
            let stack = build_pattern_stack_with_tol(&signs, &grid, levels, tol)?;
            print!("{}", metrics_csv(&stack));
        }
        Command::Render { pattern, out } => {
            let (signs, grid, levels) = pattern.resolve()?;
            let stack = build_pattern_stack_with_tol(&signs, &grid, levels, 1e-6)?;
            emit(out.as_deref(), &render_svg(&stack, &SvgOptions::default()))?;
        }
        Command::TspRun {
            instance,
            agents,
            v,
            run: args,
            out,
        } => {
            let p = load_instance(&instance, args.rounding())?;
            let cfg = RunConfig {
                agents,
                v,
                seed: args.seed,
                tour: args.tour(),
                ptm_offsets: args.offsets(),
            };
            let result = run(&p, &cfg)?;
            emit(out.as_deref(), &result.to_json(&p))?;
        }
        Command::Sweep {
            instances,
            grid,
            replicates,
            agents,
            run: args,
            jobs,
            out,
        } => {
            if grid < 3 {
                return Err(Error::InvalidArgument("--grid needs at least 3 points".into()));
            }
            let cfg = SweepConfig {
                grid: uniform_grid(grid),
                replicates,
                agents,
                seed: args.seed,
                tour: args.tour(),
                ptm_offsets: args.offsets(),
                jobs,
            };
            fs::create_dir_all(&out)?;
            let mut rows = Vec::new();
            for path in instance_files(&instances)? {
                let id = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("instance")
                    .to_string();
                let p = load_instance(&path, args.rounding())?;
                let row = study_problem(&id, &p, &cfg)?;
                fs::write(out.join(format!("sweep_{id}.csv")), sweep_csv(&row.sweep))?;
                rows.push(row);
            }
            let table = problems_csv(&rows);
            fs::write(out.join("problems.csv"), &table)?;
            fs::write(out.join("concavity.csv"), concavity_csv(&rows))?;
            let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.c_p, r.c_a)).collect();
            match fit_line(&points) {
                Ok(fit) => fs::write(out.join("fit.csv"), fit_csv(&fit))?,
                Err(e) => eprintln!("{}", json!({"warning": e.kind(), "message": format!("no fit: {e}")})),
            }
            print!("{table}");
        }
        Command::Fit { input } => {
            let points = parse_problem_points(&fs::read_to_string(&input)?)?;
            print!("{}", fit_csv(&fit_line(&points)?));
        }
        Command::Predict { cp, slope, intercept } => {
            let y = predict_complexity(cp, LinearCondition { slope, intercept });
            println!("{}", format_decimal(y, 6));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!(
                "{}",
                json!({"error": "usage", "message": e.render().to_string().trim_end()})
            );
            return ExitCode::from(2);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::from(1)
        }
    }
}
