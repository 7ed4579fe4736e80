//! One run of the swarm heuristic: strategy matrix, route statistics and the
//! decomposition of the average distance over distinct routes.
//!
//! Run with: `cargo run -p pirlab --example swarm_run [v]`

use pirlab::experiment::{generate_problem, ProblemKind};
use pirlab::tsp::{route_distribution, run, RunConfig};

fn main() -> pirlab::Result<()> {
    let v: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.5);
    let p = generate_problem(ProblemKind::UniformSquare, 12, 7)?;
    let result = run(&p, &RunConfig::new(16, v, 2024))?;

    println!("strategy matrix (+ random, - greedy), v = {v}:");
    print!("{}", result.strategies);
    println!("\naverage distance: {:.6}", result.average_distance);

    let dist = route_distribution(&result, &p)?;
    println!(
        "{} distinct routes; sum of probability x distance = {:.6}",
        dist.shares.len(),
        dist.weighted_distance
    );
    let mut shares = dist.shares.clone();
    shares.sort_by(|a, b| b.count.cmp(&a.count).then(a.distance.total_cmp(&b.distance)));
    for s in shares.iter().take(5) {
        println!("  p = {:.4}  d = {:.4}  {:?}", s.probability, s.distance, s.route);
    }
    Ok(())
}
