//! Runs every seeded property suite at a small size and prints the report.
//!
//! `cargo run --release -p tropbuild --example property_suites [seed]`

use std::env;

use tropbuild::oracle::Grid;
use tropbuild::props::{run_all, Sizes};

fn main() -> tropbuild::Result<()> {
    let seed = env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let grid = Grid::from_env()?;
    let reports = run_all(seed, Sizes { trials: 100, heavy: 6 }, &grid);
    for r in &reports {
        println!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("{} suites, {failed} failed", reports.len());
    Ok(())
}
