//! Re-verifies the shipped curves with 32 points over GF(9).

use genus5::cli::reproduce;
use genus5::fixtures::curves;
use genus5::singularity::DEFAULT_SEED;

fn main() {
    let report = reproduce(curves(), DEFAULT_SEED);
    for r in &report.curves {
        let class = r.class.map_or("-".to_string(), |c| format!("({c})"));
        println!("{:<30} N1 = {:<3} {class:<4} {}", r.name, r.n1.unwrap_or(-1), r.weil_factored.as_deref().unwrap_or("-"));
        for p in &r.problems {
            println!("    {p}");
        }
    }
    for (i, (w, names)) in report.classes.iter().enumerate() {
        println!("({}) {w}: {}", i + 1, names.len());
    }
    println!("{}", if report.pass { "all fixtures reproduced" } else { "MISMATCH" });
    std::process::exit(if report.pass { 0 } else { 1 });
}
