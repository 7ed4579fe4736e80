//! Quadratic-trace complexity of a few hand-made strategy matrices and of
//! generated TSP instances.
//!
//! Run with: `cargo run -p pirlab --example complexity_traces`

use pirlab::complexity::{problem_complexity, system_complexity, StrategyMatrix};
use pirlab::experiment::{generate_problem, ProblemKind};
use pirlab::relations::ptm_sequence;

fn main() -> pirlab::Result<()> {
    let ptm = ptm_sequence(16)?.as_slice().to_vec();
    let flipped: Vec<i8> = ptm.iter().map(|s| -s).collect();
    let alternating: Vec<i8> = (0..16).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();

    let cases = [
        ("identical PTM rows", vec![ptm.clone(), ptm.clone(), ptm.clone()]),
        ("PTM and its mirror", vec![ptm.clone(), flipped]),
        ("PTM and alternating", vec![ptm, alternating]),
    ];
    for (name, rows) in cases {
        let s = StrategyMatrix::from_rows(&rows)?;
        println!("{name:<22} C(A) = {:.6}", system_complexity(&s)?.value());
    }
    println!();
    for kind in [
        ProblemKind::UniformSquare,
        ProblemKind::Clustered,
        ProblemKind::Equidistant,
    ] {
        let p = generate_problem(kind, 30, 1)?;
        println!(
            "{:<16} n = 30  C(p) = {:.6}",
            format!("{kind:?}"),
            problem_complexity(p.n(), p.distances())?.value()
        );
    }
    Ok(())
}
