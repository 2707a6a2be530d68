use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{hermite_normal_form, IntLattice};
use crate::error::{Error, Result};

/// Rational generators in a fixed orthogonal frame with diagonal Gram `ambient`.
#[derive(Clone, Debug)]
pub struct RationalGeneratorSet {
    pub generators: Vec<Vec<BigRational>>,
    pub ambient: Vec<i64>,
}

impl RationalGeneratorSet {
    pub fn new(generators: Vec<Vec<BigRational>>, ambient: Vec<i64>) -> Self {
        RationalGeneratorSet {
            generators,
            ambient,
        }
    }

    /// Generators given as (numerator vector, common denominator).
    pub fn from_scaled(generators: &[(Vec<i64>, i64)], ambient: Vec<i64>) -> Self {
        let generators = generators
            .iter()
            .map(|(v, d)| {
                v.iter()
                    .map(|&x| BigRational::new(BigInt::from(x), BigInt::from(*d)))
                    .collect()
            })
            .collect();
        RationalGeneratorSet {
            generators,
            ambient,
        }
    }
}

/// Gram matrix of the Z-module spanned by the generators, in its HNF basis.
pub fn overlattice_from_generators(g: &RationalGeneratorSet) -> Result<IntLattice> {
    let n = g.ambient.len();
    if let Some(bad) = g.generators.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    let denom = g
        .generators
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<Vec<BigInt>> = g
        .generators
        .iter()
        .map(|v| v.iter().map(|x| (x * &denom).to_integer()).collect())
        .collect();
    let basis = hermite_normal_form(&scaled);
    if basis.len() < n {
        return Err(Error::RankDeficient {
            rank: basis.len(),
            expected: n,
        });
    }
    let denom_sq = &denom * &denom;
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let num: BigInt = (0..n)
                .map(|k| &basis[i][k] * &basis[j][k] * BigInt::from(g.ambient[k]))
                .sum();
            let (q, r) = num.div_rem(&denom_sq);
            if !r.is_zero() {
                return Err(Error::NonIntegral(i, j));
            }
            let v = q.to_i64().ok_or(Error::Overflow("overlattice gram"))?;
            gram[i][j] = v;
            gram[j][i] = v;
        }
    }
    IntLattice::new(gram)
}
