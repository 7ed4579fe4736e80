//! Sweeps the control parameter `v` on generated instances and reports the
//! shape of the performance curve.
//!
//! Run with: `cargo run --release -p pirlab --example v_sweep [instances]`

use pirlab::experiment::{concavity_report, generate_problem, sweep_v, ProblemKind, SweepConfig};

fn main() -> pirlab::Result<()> {
    let count: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let cfg = SweepConfig::default();
    println!(
        "N = {}, R = {}, {} grid points, n = 30 uniform-square cities\n",
        cfg.agents,
        cfg.replicates,
        cfg.grid.len()
    );
    let mut hits = 0;
    for seed in 0..count {
        let p = generate_problem(ProblemKind::UniformSquare, 30, seed)?;
        let s = sweep_v(&p, &cfg)?;
        let c = concavity_report(&s)?;
        println!("instance {seed}: v* = {:.2}", s.v_star);
        for (v, (m, sd)) in s.grid.iter().zip(s.means.iter().zip(&s.stds)) {
            let bar = "#".repeat(((m - s.means[s.v_star_index]) * 20.0) as usize);
            println!("  v = {v:.2}  mean D = {m:8.4} ± {sd:.4}  {bar}");
        }
        println!(
            "  curvature {:.4}, vertex {:?}, concave {}, interior max {}, sign changes {}\n",
            c.curvature, c.vertex, c.concave, c.interior_max, c.sign_changes
        );
        if c.concave_with_interior_max() {
            hits += 1;
        }
    }
    println!("concave with interior maximum on {hits}/{count} instances");
    Ok(())
}
