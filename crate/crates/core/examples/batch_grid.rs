//! Seeded reports over a parameter grid, run in parallel. For p = 3 mod 4
//! and sigma = 2 no catalog lattice reproduces sigma, so those cells fail.
//!
//!     cargo run --release --example batch_grid

use supersingular::pipeline::{batch, BatchGrid, ReportOptions};

const GRID: &str = r#"
kind = "k3"
primes = [3, 5, 7]
sigmas = [1, 3]
vectors_per_cell = 3
"#;

fn main() -> supersingular::Result<()> {
    let grid = BatchGrid::parse(GRID)?;
    let summary = batch(&grid, 42, ReportOptions::default());
    for c in &summary.cells {
        println!("p={} sigma={}: {}/{} passed in {} ms", c.p, c.sigma, c.passed, c.vectors, c.millis);
        for f in &c.failures {
            println!("  {f}");
        }
    }
    println!("all passed: {}", summary.all_passed);
    Ok(())
}
