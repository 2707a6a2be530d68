//! Isotropic classes x with gcd(r, c1.x) = 1, after transforming v when needed.
//!
//!     cargo run --example elliptic_search

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use supersingular::catalog::{build_abelian_ns, build_k3_ns_preferred};
use supersingular::pipeline::sample_mukai_vector;
use supersingular::search::{find_elliptic_class, find_elliptic_class_abelian, SearchLimits};

fn main() -> supersingular::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (p, sigma) in [(3, 1), (11, 2)] {
        let ns = build_k3_ns_preferred(p, sigma)?;
        for _ in 0..3 {
            let v = sample_mukai_vector(&mut rng, &ns.lattice, p, (1, 50), 3)?;
            let w = find_elliptic_class(&ns.lattice, &v, p, SearchLimits::ELLIPTIC)?;
            w.verify(&ns.lattice, &v)?;
            println!("K3 p={p} sigma={sigma}: r={} -> x={} (height {}, {} transforms)", v.r, w.x, w.bound, w.chain.len());
        }
    }

    let ab = build_abelian_ns(7, 2)?;
    let v = sample_mukai_vector(&mut rng, &ab.lattice, 7, (1, 20), 2)?;
    let w = find_elliptic_class_abelian(&ab, &v, SearchLimits::ELLIPTIC)?;
    println!("abelian p=7: v={v} -> x={}", w.x);
    println!("{}", serde_json::to_string(&w).expect("witness serializes"));
    Ok(())
}
