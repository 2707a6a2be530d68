//! Mukai pairing, line-bundle twists, spherical reflections and the
//! generality twist on a supersingular K3 lattice.
//!
//!     cargo run --example mukai_transforms

use supersingular::catalog::build_k3_ns_preferred;
use supersingular::mukai::{ModuliKind, MukaiLattice, MukaiVector};
use supersingular::LatVec;

fn main() -> supersingular::Result<()> {
    let p = 5;
    let ns = build_k3_ns_preferred(p, 1)?.lattice;
    let m = MukaiLattice::new(&ns);
    let rank = ns.rank();
    let f1 = LatVec::basis(rank, 0);
    let f2 = LatVec::basis(rank, 1);

    let v = MukaiVector::new(2, f1.plus_scaled(3, &f2), -3);
    println!("v = {v}, <v,v> = {}, coprime to {p}: {}", m.square(&v)?, m.is_coprime_to_p(&v, p)?);
    println!("dim M(v) = {}", m.moduli_dimension(&v, ModuliKind::K3)?);

    let tv = m.exp_twist(&v, &f2)?;
    println!("v . exp(f2) = {tv}, square {}", m.square(&tv)?);

    let e = MukaiVector::structure_sheaf(rank);
    let rv = m.spherical_reflect(&v, &e)?;
    println!("reflection in {e}: {rv}, back: {}", m.spherical_reflect(&rv, &e)?);

    // gcd(r, c1.H, s) > 1 before the twist
    let h = f1.plus_scaled(-1, &f2);
    let w = MukaiVector::new(2, f1.plus(&f2), 4);
    let l = m.find_generality_twist(&w, &h, p)?;
    println!("w = {w} general: {}; twist by {l} gives {}", m.is_general_numeric(&w, &h)?, m.exp_twist(&w, &l)?);
    Ok(())
}
