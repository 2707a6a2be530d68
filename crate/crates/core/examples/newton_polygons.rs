//! Newton polygons, slope multisets and the supersingularity predicate.
//!
//!     cargo run --example newton_polygons

use num_rational::Rational64;
use supersingular::crystal::{
    hilb_or_kummer_h2, is_ordinary, is_supersingular, newton_from_valuations, slopes, tate_twist, wedge_slopes,
    HodgeNumbers, SlopeMultiset,
};

fn main() -> supersingular::Result<()> {
    // valuations of the coefficients of a characteristic polynomial; None is a zero coefficient
    let np = newton_from_valuations(&[Some(0), Some(1), None, Some(1), Some(2)])?;
    let s = slopes(&np);
    println!("slopes {s}, supersingular in degree 1: {}", is_supersingular(&s, 1));
    println!("ordinary for h^(1,0) = h^(0,1) = 2: {}", is_ordinary(&np, &HodgeNumbers(vec![(0, 2), (1, 2)]))?);

    let h1: SlopeMultiset = "1/2x4".parse()?;
    for k in 0..=4 {
        println!("wedge^{k} {h1} = {}", wedge_slopes(&h1, k)?);
    }
    println!("H^1(1) slopes: {}", tate_twist(&h1, 1)?);

    let k3_h2 = SlopeMultiset::single(Rational64::from_integer(1), 22);
    let height3 = SlopeMultiset::new([(Rational64::new(2, 3), 3), (Rational64::from_integer(1), 16), (Rational64::new(4, 3), 3)])?;
    for s in [k3_h2, height3] {
        let h2 = hilb_or_kummer_h2(&s);
        println!("{s}: supersingular {} -> H^2 of S^[n]: {h2} supersingular {}", is_supersingular(&s, 2), is_supersingular(&h2, 2));
    }
    Ok(())
}
