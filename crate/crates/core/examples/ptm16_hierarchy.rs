//! Builds the 16-element hierarchy of PTM signs over the integers 16..1,
//! checks it from scratch, and shows why it stops at level 4.
//!
//! Run with: `cargo run -p pirlab --example ptm16_hierarchy`

use pirlab::relations::{build_hierarchy, ptm_sequence, verify_hierarchy, IntegerAssignment};

fn main() -> pirlab::Result<()> {
    let signs = ptm_sequence(16)?;
    let ints = IntegerAssignment::descending(16);
    println!("signs:    {signs}");

    let (pos, neg): (Vec<_>, Vec<_>) = signs.as_slice().iter().zip(ints.as_slice()).partition(|(s, _)| **s > 0);
    println!("positive: {:?}", pos.iter().map(|(_, a)| **a).collect::<Vec<_>>());
    println!("negative: {:?}\n", neg.iter().map(|(_, a)| **a).collect::<Vec<_>>());

    let h = build_hierarchy(&signs, &ints)?;
    for level in 1..=h.structural_level {
        let nodes = h.nodes(level);
        let blocks: Vec<String> = nodes
            .iter()
            .map(|n| {
                format!(
                    "[{},{}){}",
                    n.block.start,
                    n.block.end,
                    if n.is_prime { "" } else { "*" }
                )
            })
            .collect();
        println!("level {level}: {}", blocks.join(" "));
    }
    println!("structural level: {}", h.structural_level);
    println!("next-order sums over the top block: {:?}", h.next_order_sums());
    println!("blocked at: {:?}", h.blockage());

    let report = verify_hierarchy(&h);
    println!(
        "\nverification: {} ({} nodes rechecked)",
        if report.passed() { "pass" } else { "FAIL" },
        report.nodes.len()
    );
    Ok(())
}
