//! Full pipeline for one Mukai vector: moduli dimension, b2, slopes, motive.
//!
//!     cargo run --example report

use supersingular::json::{IntOrString, MukaiJson};
use supersingular::pipeline::{report, ReportOptions, SurfaceKind};

fn main() -> supersingular::Result<()> {
    let ideal_sheaf = MukaiJson { r: 1, c1: vec![], s: IntOrString::Int(-1) };
    let bundle = report(SurfaceKind::K3, 5, 1, &ideal_sheaf, ReportOptions::default())?;
    println!("{}", serde_json::to_string_pretty(&bundle).expect("report serializes"));

    let abelian = MukaiJson { r: 1, c1: vec![], s: IntOrString::Int(-3) };
    let bundle = report(SurfaceKind::Abelian, 3, 1, &abelian, ReportOptions::default())?;
    println!("abelian: dim {}, all checks {}", bundle.dim, bundle.passed());
    Ok(())
}
