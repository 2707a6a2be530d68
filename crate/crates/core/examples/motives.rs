//! Chow motives of supersingular abelian varieties and Hilbert schemes of K3 surfaces.
//!
//!     cargo run --example motives

use supersingular::motive::{
    chow_rank_report, gottsche_poincare, hilb_motive, k3_motive, ssav_motive_direct, ssav_motive_schur, sym_h1e,
    K3_BETTI,
};

fn main() -> supersingular::Result<()> {
    for g in 1..=4 {
        let direct = ssav_motive_direct(g);
        println!("h(A), g={g}: {direct}  (Schur route agrees: {})", ssav_motive_schur(g)? == direct);
    }
    for k in 0..=5 {
        println!("Sym^{k} h1(E) = {}", sym_h1e(k));
    }

    let s = k3_motive();
    for n in 1..=4 {
        let m = hilb_motive(&s, n)?;
        let b = m.betti_vector();
        println!("S^[{n}]: Betti {b:?}, product formula agrees: {}", b == gottsche_poincare(&K3_BETTI, n)?);
    }
    let report = chow_rank_report(&hilb_motive(&s, 2)?.betti_vector())?;
    for row in &report.rows {
        println!("  CH^{} / alg: rank {}, Ab^{} dim {}", row.codim, row.ch0_rank, row.codim, row.ab_dim);
    }
    Ok(())
}
