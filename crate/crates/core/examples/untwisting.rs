//! Untwisting pairs (tau, w) with <tau, w> prime to p, and a principal polarization.
//!
//!     cargo run --example untwisting

use supersingular::catalog::build_k3_ns_preferred;
use supersingular::json::UntwistJson;
use supersingular::search::{find_principal_polarization, find_untwisting_pair, SearchLimits, UntwistCase};
use supersingular::LatVec;

fn main() -> supersingular::Result<()> {
    let p = 7;
    let ns = build_k3_ns_preferred(p, 3)?;
    let f2 = LatVec::basis(ns.lattice.rank(), 1);

    // p does not divide f2.NS: case I
    let a = find_untwisting_pair(&ns, &f2, UntwistCase::Auto, SearchLimits::UNTWIST)?;
    a.verify(&ns.lattice, p)?;
    println!("L = f2: {}", serde_json::to_string(&UntwistJson::new(&a)).expect("serializes"));

    // L = p f2 is divisible by p in NS: case II
    let b = find_untwisting_pair(&ns, &f2.scaled(p), UntwistCase::Auto, SearchLimits::UNTWIST)?;
    b.verify(&ns.lattice, p)?;
    println!("L = {p} f2: case {:?}, <tau, w> = {}", b.case, b.pairing_value);

    let h = find_principal_polarization(&ns.lattice, SearchLimits::POLARIZATION)?;
    println!("polarization h = {h}, h^2 = {}", ns.lattice.norm(&h)?);
    Ok(())
}
