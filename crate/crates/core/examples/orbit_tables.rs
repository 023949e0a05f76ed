//! Classifies singular-point configurations up to PGL3(F3) for every orbit
//! pattern and prints the orbit counts.
//!
//!     cargo run --release --example orbit_tables

use std::time::Instant;

use genus5::fixtures::orbit_patterns;
use genus5::orbit_classification::{classify, parse_pattern};

fn main() {
    let mut done = std::collections::BTreeSet::new();
    for entry in &orbit_patterns().patterns {
        if !done.insert((entry.case, entry.tag.clone())) {
            continue;
        }
        let start = Instant::now();
        let table = classify(entry.case, &parse_pattern(&entry.tag).unwrap()).unwrap();
        println!(
            "case {:<2} ({:<9}) {:>6} configurations, {} orbits  [{:.1?}]",
            table.case,
            table.pattern,
            table.configs_total,
            table.orbits.len(),
            start.elapsed()
        );
        for o in &table.orbits {
            println!(
                "    {:<40} size {:>5}  stabilizer {:>3}  {}{}",
                o.representative,
                o.orbit_size,
                o.stabilizer_order,
                o.subclass.as_deref().map(|s| format!("{s} ")).unwrap_or_default(),
                o.listed.join(", ")
            );
        }
    }
}
