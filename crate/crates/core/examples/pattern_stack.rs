//! The geometric side: integrates the ±δ step function four times over the
//! PTM-16 signs, prints the exact pattern metrics, compares the level-4
//! pattern with its renormalized level-1 replacement, and writes an SVG.
//!
//! Run with: `cargo run -p pirlab --example pattern_stack [out.svg]`

use pirlab::geometry::{
    arc_length, build_pattern_stack, parse_rational, rational_to_string, render_svg, renormalize, renormalized_level1,
    GridSpec, SvgOptions,
};
use pirlab::relations::ptm_sequence;

fn main() -> pirlab::Result<()> {
    let grid = GridSpec::new(parse_rational("1")?, parse_rational("1")?, 16)?;
    let signs = ptm_sequence(16)?;
    let stack = build_pattern_stack(&signs, &grid, 4)?;

    println!("level  width  height  area   arc length");
    for row in &stack.metrics {
        let m = &row[0];
        println!(
            "{:>5}  {:>5}  {:>6}  {:>5}  {:.9}",
            m.level,
            rational_to_string(&m.width),
            rational_to_string(&m.height),
            rational_to_string(&m.area),
            m.arc_length
        );
    }

    let params = renormalize(&grid);
    println!(
        "\nrenormalized: eps' = {}, delta' = {}",
        rational_to_string(&params.epsilon_prime),
        rational_to_string(&params.delta_prime)
    );
    let coarse = renormalized_level1(&ptm_sequence(2)?, &grid)?;
    let span = coarse.domain();
    let psi4 = &stack.functions[4];
    println!(
        "areas: level 4 = {}, renormalized = {}",
        rational_to_string(&psi4.integral(span.clone())?),
        rational_to_string(&coarse.integral(span.clone())?)
    );
    println!(
        "boundary lengths: level 4 = {:.9}, renormalized = {:.9}",
        arc_length(psi4, span.clone(), 1e-9)?,
        arc_length(&coarse, span, 1e-9)?
    );

    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, render_svg(&stack, &SvgOptions::default()))?;
        println!("wrote {path}");
    }
    Ok(())
}
