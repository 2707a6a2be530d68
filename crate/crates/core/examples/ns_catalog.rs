//! Neron-Severi lattices of supersingular K3 and abelian surfaces.
//!
//!     cargo run --example ns_catalog

use supersingular::catalog::{build_abelian_ns, build_k3_ns, build_k3_ns_preferred, variant_audit, VIndexVariant};

fn main() -> supersingular::Result<()> {
    for (p, sigma) in [(3, 1), (5, 2), (7, 10), (13, 4)] {
        let l = build_k3_ns_preferred(p, sigma)?;
        let v = &l.validation;
        let blocks: Vec<&str> = l.blocks.iter().map(|b| b.name.as_str()).collect();
        println!(
            "K3 p={p:<2} sigma={sigma:<2} {:?} {} even={} sig={:?} |det|={} sigma_computed={:?}",
            l.variant,
            blocks.join(" + "),
            v.even,
            v.signature,
            v.abs_det_string(p),
            v.sigma_computed
        );
    }

    for (p, artin) in [(2, 1), (2, 2), (11, 1), (11, 2)] {
        let a = build_abelian_ns(p, artin)?;
        println!("abelian p={p:<2} artin={artin} |det|={} sig={:?}", a.validation.abs_det_string(p), a.validation.signature);
    }

    // the two index conventions disagree on the determinant in the H^(p) branch
    for row in variant_audit(&[5], &[1, 2, 3]) {
        println!(
            "p={} sigma={}: literal |det| {:?}, disc-corrected |det| {:?}",
            row.p, row.sigma, row.literal.abs_det, row.disc_corrected.abs_det
        );
    }

    // p = 3 mod 4 with sigma = 2 has no even variant of the right determinant
    let lit = build_k3_ns(7, 2, VIndexVariant::Literal)?;
    println!("p=7 sigma=2 literal: sigma_computed={:?}", lit.validation.sigma_computed);
    match build_k3_ns(7, 2, VIndexVariant::DiscCorrected) {
        Ok(l) => println!("p=7 sigma=2 disc-corrected: even={}", l.validation.even),
        Err(e) => println!("p=7 sigma=2 disc-corrected: {e}"),
    }
    Ok(())
}
