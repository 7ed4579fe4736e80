//! The full pipeline on a small mixed problem set: sweep v, take C(A) at v*,
//! compute C(p), and fit the line. Also evaluates the default condition.
//!
//! Run with: `cargo run --release -p pirlab --example optimality_condition`

use pirlab::experiment::{
    fit_csv, generate_problem, optimality_fit, predict_complexity, problems_csv, LinearCondition, ProblemKind,
    SweepConfig,
};

fn main() -> pirlab::Result<()> {
    let mut problems = Vec::new();
    for seed in 0..5 {
        problems.push((
            format!("uniform-{seed}"),
            generate_problem(ProblemKind::UniformSquare, 30, seed)?,
        ));
        problems.push((
            format!("clustered-{seed}"),
            generate_problem(ProblemKind::Clustered, 30, seed)?,
        ));
    }
    let cfg = SweepConfig::default();
    let study = optimality_fit(&problems, &cfg)?;
    print!("{}", problems_csv(&study.rows));
    println!();
    print!("{}", fit_csv(&study.fit));

    println!("\ndefault condition C(A) = 0.67 C(p) + 0.33:");
    for row in &study.rows {
        println!(
            "  {:<12} C(p) = {:.4}  predicted {:.4}  measured {:.4}",
            row.id,
            row.c_p,
            predict_complexity(row.c_p, LinearCondition::default()),
            row.c_a
        );
    }
    Ok(())
}
