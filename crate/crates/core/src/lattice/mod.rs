//! Integral lattices given by a symmetric Gram matrix.
//!
//! Gram entries and coordinates are `i64`; anything that can grow past that
//! (determinants, diagonalization pivots) is computed with big integers or
//! big rationals.

mod hnf;
mod isotropic;
mod overlattice;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::gcd_all;
use crate::error::{Error, Result};

pub use hnf::hermite_normal_form;
pub use isotropic::{
    enumerate_isotropic, find_hyperbolic_split, search_representation, sparse_vectors,
    HyperbolicSplit, RepresentationSearch, SearchOutcome,
};
pub use overlattice::{overlattice_from_generators, RationalGeneratorSet};

/// Coordinates of a lattice vector in the lattice's own basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatVec(pub Vec<i64>);

impl LatVec {
    pub fn zero(rank: usize) -> Self {
        LatVec(vec![0; rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> i64 {
        gcd_all(self.0.iter().copied())
    }

    /// Max-norm of the coordinates.
    pub fn height(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn scaled(&self, k: i64) -> LatVec {
        LatVec(self.0.iter().map(|c| c * k).collect())
    }

    pub fn plus(&self, other: &LatVec) -> LatVec {
        debug_assert_eq!(self.len(), other.len());
        LatVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// self + k * other
    pub fn plus_scaled(&self, k: i64, other: &LatVec) -> LatVec {
        debug_assert_eq!(self.len(), other.len());
        LatVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + k * b)
                .collect(),
        )
    }

    pub fn neg(&self) -> LatVec {
        self.scaled(-1)
    }

    /// Representative of {x, -x} whose first nonzero coordinate is positive.
    pub fn canonical_sign(self) -> LatVec {
        match self.0.iter().find(|&&c| c != 0) {
            Some(&c) if c < 0 => self.neg(),
            _ => self,
        }
    }
}

impl From<Vec<i64>> for LatVec {
    fn from(v: Vec<i64>) -> Self {
        LatVec(v)
    }
}

impl fmt::Display for LatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A free Z-module of finite rank with a symmetric integral bilinear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    gram: Vec<Vec<i64>>,
}

impl IntLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|row| row.len() != n) {
            return Err(Error::NotSquare);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(IntLattice { gram })
    }

    /// The rank-0 lattice.
    pub fn empty() -> Self {
        IntLattice { gram: Vec::new() }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut gram = vec![vec![0; n]; n];
        for (i, &d) in entries.iter().enumerate() {
            gram[i][i] = d;
        }
        IntLattice { gram }
    }

    /// The hyperbolic plane U: f1^2 = f2^2 = 0, f1.f2 = 1.
    pub fn hyperbolic() -> Self {
        IntLattice {
            gram: vec![vec![0, 1], vec![1, 0]],
        }
    }

    /// U(n).
    pub fn hyperbolic_scaled(n: i64) -> Self {
        IntLattice {
            gram: vec![vec![0, n], vec![n, 0]],
        }
    }

    /// Positive definite root lattice from a simply-laced Dynkin diagram.
    fn from_dynkin(rank: usize, edges: &[(usize, usize)]) -> Self {
        let mut gram = vec![vec![0; rank]; rank];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(a, b) in edges {
            gram[a][b] = -1;
            gram[b][a] = -1;
        }
        IntLattice { gram }
    }

    /// D4, central node first.
    pub fn d4() -> Self {
        Self::from_dynkin(4, &[(0, 1), (0, 2), (0, 3)])
    }

    /// E8 in Bourbaki numbering.
    pub fn e8() -> Self {
        Self::from_dynkin(8, &[(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)])
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.gram[i][j]
    }

    fn check_dim(&self, x: &LatVec) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// x^T G y.
    pub fn pairing(&self, x: &LatVec, y: &LatVec) -> Result<i64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let mut acc: i128 = 0;
        for (i, row) in self.gram.iter().enumerate() {
            if x.0[i] == 0 {
                continue;
            }
            let mut inner: i128 = 0;
            for (j, &g) in row.iter().enumerate() {
                inner += g as i128 * y.0[j] as i128;
            }
            acc += x.0[i] as i128 * inner;
        }
        i64::try_from(acc).map_err(|_| Error::Overflow("pairing"))
    }

    pub fn norm(&self, x: &LatVec) -> Result<i64> {
        self.pairing(x, x)
    }

    /// The row x^T G, i.e. the pairings of x with every basis vector.
    pub fn pairing_row(&self, x: &LatVec) -> Result<Vec<i64>> {
        self.check_dim(x)?;
        (0..self.rank())
            .map(|j| {
                let s: i128 = (0..self.rank())
                    .map(|i| x.0[i] as i128 * self.gram[i][j] as i128)
                    .sum();
                i64::try_from(s).map_err(|_| Error::Overflow("pairing"))
            })
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.rank();
        if n == 0 {
            return BigInt::from(1);
        }
        let mut a: Vec<Vec<BigInt>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let mut sign = 1i32;
        let mut prev = BigInt::from(1);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// (n_plus, n_minus) by exact symmetric diagonalization over Q.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let n = self.rank();
        let mut a: Vec<Vec<BigRational>> = self
            .gram
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| BigRational::from_integer(v.into()))
                    .collect()
            })
            .collect();
        let (mut pos, mut neg) = (0, 0);
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                    swap_sym(&mut a, i, k);
                } else {
                    // All remaining diagonal entries vanish; x_i += x_j makes a_ii = 2 a_ij.
                    let pair = (k..n)
                        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                        .find(|&(i, j)| !a[i][j].is_zero());
                    let Some((i, j)) = pair else {
                        return Err(Error::Degenerate);
                    };
                    add_sym(&mut a, i, j);
                    swap_sym(&mut a, i, k);
                }
            }
            let pivot = a[k][k].clone();
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &pivot;
                for j in k..n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
                for j in k..n {
                    let t = &f * &a[j][k];
                    a[j][i] -= t;
                }
            }
        }
        Ok((pos, neg))
    }

    pub fn rescale(&self, n: i64) -> Result<IntLattice> {
        if n == 0 {
            return Err(Error::ZeroScale);
        }
        Ok(IntLattice {
            gram: self
                .gram
                .iter()
                .map(|row| row.iter().map(|&v| v * n).collect())
                .collect(),
        })
    }

    pub fn direct_sum(&self, other: &IntLattice) -> IntLattice {
        let (a, b) = (self.rank(), other.rank());
        let mut gram = vec![vec![0; a + b]; a + b];
        for i in 0..a {
            gram[i][..a].copy_from_slice(&self.gram[i]);
        }
        for i in 0..b {
            gram[a + i][a..].copy_from_slice(&other.gram[i]);
        }
        IntLattice { gram }
    }

    pub fn direct_sum_all<'a, I: IntoIterator<Item = &'a IntLattice>>(parts: I) -> IntLattice {
        parts
            .into_iter()
            .fold(IntLattice::empty(), |acc, l| acc.direct_sum(l))
    }

    /// Every vector has even square. For an integral form this is equivalent to an even diagonal.
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    /// Whether m divides x.y for every y in the lattice.
    pub fn divides_pairing(&self, x: &LatVec, m: i64) -> Result<bool> {
        if m <= 0 {
            return Err(Error::InvalidParameter(format!(
                "divisor must be positive, got {m}"
            )));
        }
        Ok(self.pairing_row(x)?.iter().all(|v| v % m == 0))
    }
}

fn swap_sym(a: &mut [Vec<BigRational>], i: usize, k: usize) {
    if i == k {
        return;
    }
    a.swap(i, k);
    for row in a.iter_mut() {
        row.swap(i, k);
    }
}

// Basis change e_i <- e_i + e_j applied as a congruence.
fn add_sym(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    let n = a.len();
    for c in 0..n {
        let t = a[j][c].clone();
        a[i][c] += t;
    }
    for r in 0..n {
        let t = a[r][j].clone();
        a[r][i] += t;
    }
}

/// True iff gcd of the coordinates is 1.
pub fn is_primitive(x: &LatVec) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(x.content() == 1)
}
