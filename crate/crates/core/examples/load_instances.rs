//! Reads the same four cities from JSON coordinates, a CSV matrix and a
//! TSPLIB file, then runs the heuristic on each.
//!
//! Run with: `cargo run -p pirlab --example load_instances`

use pirlab::tsp::{parse_csv_matrix, parse_json_instance, parse_tsplib, run, DistanceRounding, RunConfig};

const TSPLIB: &str = "NAME : square4
TYPE : TSP
DIMENSION : 4
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 30 0
3 30 40
4 0 40
EOF
";

fn main() -> pirlab::Result<()> {
    let json = parse_json_instance(
        r#"{"coords": [[0, 0], [30, 0], [30, 40], [0, 40]]}"#,
        DistanceRounding::Exact,
    )?;
    let csv = parse_csv_matrix(&json.to_csv())?;
    let tsp = parse_tsplib(TSPLIB, DistanceRounding::Nint)?;

    for (name, p) in [("json", &json), ("csv", &csv), ("tsplib", &tsp)] {
        let r = run(p, &RunConfig::new(8, 0.5, 1))?;
        println!(
            "{name:<7} d(0,2) = {:>4}  average distance = {:.3}",
            p.d(0, 2),
            r.average_distance
        );
    }
    Ok(())
}
