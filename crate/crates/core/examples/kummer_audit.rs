//! Generalized Kummer varieties: Betti numbers and the summand inventory check.
//!
//!     cargo run --example kummer_audit

use supersingular::motive::{kummer_audit, kummer_betti, kummer_inventory};

fn main() -> supersingular::Result<()> {
    for n in 1..=4 {
        println!("K_{n}: {:?}", kummer_betti(n)?);
    }
    for s in kummer_inventory(1)? {
        println!("  lambda {} : {} copies of h(A)^{} twisted by {}", s.lambda, s.copies, s.power, s.twist);
    }
    let audit = kummer_audit(1)?;
    println!("inventory {} vs Betti total {}", audit.inventory_dimension, audit.oracle_dimension);
    for f in &audit.findings {
        println!("  {f}");
    }
    Ok(())
}
