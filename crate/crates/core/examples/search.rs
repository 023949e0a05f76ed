//! Exhaustive search of one configuration.
//!
//!     cargo run --release --example search -- 1,1,1,2-indep 3 32

use std::sync::atomic::AtomicBool;

use genus5::enumeration::{run_search, RunManifest, SearchOptions, SearchTask};
use genus5::fixtures::orbit_patterns;
use genus5::singularity::Case;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let selector = args.first().map_or("1,1,1,2-indep", String::as_str);
    let orbit: usize = args.get(1).map_or(3, |s| s.parse().expect("orbit number"));
    let threshold: i64 = args.get(2).map_or(32, |s| s.parse().expect("threshold"));
    let case = if selector.starts_with("II:") { Case::II } else { Case::I };
    let selector = selector.trim_start_matches("II:");

    let entry = orbit_patterns().find(case, selector).expect("known pattern");
    let config = entry.representative(orbit).expect("listed orbit");
    let task = SearchTask::new(config, threshold, entry.b_values.as_deref()).unwrap();
    println!("configuration {}", task.config.render());
    println!("null space dimension {}, {} candidates", task.dimension(), task.total());

    let manifest = RunManifest::for_task(&task, selector, Some(orbit), [0, task.total()], 1 << 16);
    let opts = SearchOptions { progress: true, ..Default::default() };
    let result = run_search(&task, &manifest, &opts, &AtomicBool::new(false)).unwrap();
    let c = &result.summary.counters;
    println!(
        "visited {}  multiplicity {}  point count {}  irreducibility {}  singular locus {}  survivors {}",
        c.visited, c.multiplicity, c.point_count, c.irreducibility, c.singular_locus, c.survivors
    );
    for r in &result.records {
        println!("#{:>8}  N1={}  {}  W = {}", r.index, r.n1, r.sextic, r.weil_factored.as_deref().unwrap_or("-"));
    }
    println!("{:.1}s", result.summary.elapsed_secs);
}
