//! Bounded searches for vectors of prescribed square.
//!
//! When the lattice splits off a hyperbolic plane `<f1, f2>` (both isotropic,
//! orthogonal to every other basis vector) a vector is written
//! `x = a f1 + b f2 + u` with `u` in the complement, and `x^2 = t` becomes
//! `2 a b (f1.f2) = t - u^2`. Only `u` has to be enumerated; `(a, b)` come from
//! the divisors of the right-hand side. Without such a plane every coordinate
//! is enumerated.

use super::{IntLattice, LatVec};
use crate::error::{Error, Result};

/// Basis indices of an orthogonally split hyperbolic plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HyperbolicSplit {
    pub first: usize,
    pub second: usize,
    /// f1.f2, i.e. 1 or -1 for U, +-n for U(n).
    pub pairing: i64,
}

/// First pair (i, j) of basis vectors spanning an orthogonal summand `U(n)`.
pub fn find_hyperbolic_split(l: &IntLattice) -> Option<HyperbolicSplit> {
    let n = l.rank();
    let isolated = |i: usize, j: usize| {
        (0..n).all(|k| k == i || k == j || (l.entry(i, k) == 0 && l.entry(j, k) == 0))
    };
    for i in 0..n {
        if l.entry(i, i) != 0 {
            continue;
        }
        for j in i + 1..n {
            if l.entry(j, j) == 0 && l.entry(i, j) != 0 && isolated(i, j) {
                return Some(HyperbolicSplit {
                    first: i,
                    second: j,
                    pairing: l.entry(i, j),
                });
            }
        }
    }
    None
}

// 0, 1, -1, 2, -2, ..., bound, -bound
fn signed_values(bound: i64) -> impl Iterator<Item = i64> + Clone {
    std::iter::once(0).chain((1..=bound).flat_map(|k| [k, -k]))
}

/// All integer vectors of max-norm <= bound, ordered by support size, then
/// support positions, then values (1, -1, 2, -2, ...). Starts with zero.
#[derive(Clone, Debug)]
struct SparseVectors {
    dim: usize,
    bound: i64,
    support: Vec<usize>,
    // index into 1, -1, 2, -2, ... per support slot
    values: Vec<usize>,
    done: bool,
    fresh: bool,
}

impl SparseVectors {
    fn new(dim: usize, bound: i64) -> Self {
        SparseVectors {
            dim,
            bound,
            support: Vec::new(),
            values: Vec::new(),
            done: false,
            fresh: true,
        }
    }

    fn value(&self, idx: usize) -> i64 {
        let k = (idx / 2 + 1) as i64;
        if idx % 2 == 0 {
            k
        } else {
            -k
        }
    }

    fn advance(&mut self) {
        let nvals = (2 * self.bound) as usize;
        // odometer over values, last slot fastest
        for slot in (0..self.values.len()).rev() {
            self.values[slot] += 1;
            if self.values[slot] < nvals {
                return;
            }
            self.values[slot] = 0;
        }
        // next support set of the same size
        let k = self.support.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.support[i] < self.dim - k + i {
                self.support[i] += 1;
                for j in i + 1..k {
                    self.support[j] = self.support[j - 1] + 1;
                }
                return;
            }
        }
        // larger support
        let k = k + 1;
        if k > self.dim || self.bound == 0 {
            self.done = true;
            return;
        }
        self.support = (0..k).collect();
        self.values = vec![0; k];
    }
}

impl Iterator for SparseVectors {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.fresh {
            self.fresh = false;
        } else {
            self.advance();
        }
        if self.done {
            return None;
        }
        let mut v = vec![0; self.dim];
        for (slot, &pos) in self.support.iter().enumerate() {
            v[pos] = self.value(self.values[slot]);
        }
        Some(v)
    }
}

/// Integer vectors of max-norm <= bound in sparse-first order, zero first.
pub fn sparse_vectors(dim: usize, bound: i64) -> impl Iterator<Item = LatVec> {
    SparseVectors::new(dim, bound).map(LatVec)
}

/// Lazy stream of primitive vectors with `x^2 = target` and max-norm <= bound,
/// each reported with its first nonzero coordinate positive. A vector may be
/// produced twice (from `u` and `-u`); callers that need a set deduplicate.
pub struct RepresentationSearch<'a> {
    lattice: &'a IntLattice,
    target: i64,
    bound: i64,
    split: Option<HyperbolicSplit>,
    complement: Vec<usize>,
    outer: SparseVectors,
    pending: Vec<LatVec>,
    /// Number of outer candidates examined so far.
    pub examined: u64,
}

impl<'a> RepresentationSearch<'a> {
    pub fn new(lattice: &'a IntLattice, target: i64, bound: i64) -> Self {
        let split = find_hyperbolic_split(lattice);
        let complement: Vec<usize> = match split {
            Some(s) => (0..lattice.rank())
                .filter(|&k| k != s.first && k != s.second)
                .collect(),
            None => (0..lattice.rank()).collect(),
        };
        let outer = SparseVectors::new(complement.len(), bound);
        RepresentationSearch {
            lattice,
            target,
            bound,
            split,
            complement,
            outer,
            pending: Vec::new(),
            examined: 0,
        }
    }

    pub fn split(&self) -> Option<HyperbolicSplit> {
        self.split
    }

    fn embed(&self, u: &[i64]) -> LatVec {
        let mut x = vec![0; self.lattice.rank()];
        for (k, &pos) in self.complement.iter().enumerate() {
            x[pos] = u[k];
        }
        LatVec(x)
    }

    fn fill_pending(&mut self, u: Vec<i64>) {
        let base = self.embed(&u);
        let Ok(norm) = self.lattice.norm(&base) else {
            return;
        };
        let Some(split) = self.split else {
            if norm == self.target && !base.is_zero() && base.content() == 1 {
                self.pending.push(base.canonical_sign());
            }
            return;
        };
        let rhs = self.target - norm;
        let two_g = 2 * split.pairing;
        if rhs % two_g != 0 {
            return;
        }
        let prod = rhs / two_g;
        let mut found = Vec::new();
        for a in signed_values(self.bound) {
            let bs: Vec<i64> = if a == 0 {
                if prod == 0 {
                    signed_values(self.bound).collect()
                } else {
                    Vec::new()
                }
            } else if prod % a == 0 && (prod / a).abs() <= self.bound {
                vec![prod / a]
            } else {
                Vec::new()
            };
            for b in bs {
                let mut x = base.clone();
                x.0[split.first] = a;
                x.0[split.second] = b;
                if !x.is_zero() && x.content() == 1 {
                    found.push(x.canonical_sign());
                }
            }
        }
        // pending is consumed from the back
        found.reverse();
        self.pending = found;
    }
}

impl Iterator for RepresentationSearch<'_> {
    type Item = LatVec;

    fn next(&mut self) -> Option<LatVec> {
        loop {
            if let Some(x) = self.pending.pop() {
                return Some(x);
            }
            let u = self.outer.next()?;
            self.examined += 1;
            self.fill_pending(u);
        }
    }
}

/// Result of a capped search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub vector: LatVec,
    /// Height bound at which the vector was found.
    pub bound: i64,
    pub examined: u64,
}

fn doubling_bounds(cap: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut b = 1;
    while b < cap {
        out.push(b);
        b *= 2;
    }
    out.push(cap.max(1));
    out
}

/// First vector with `x^2 = target` satisfying `pred`, trying height bounds
/// 1, 2, 4, ... up to `cap`. `budget` limits the total number of complement
/// candidates examined; running out of either is reported as `SearchCap`.
pub fn search_representation<F>(
    l: &IntLattice,
    target: i64,
    cap: i64,
    budget: u64,
    mut pred: F,
) -> Result<SearchOutcome>
where
    F: FnMut(&LatVec) -> bool,
{
    let mut examined = 0u64;
    for bound in doubling_bounds(cap) {
        let mut search = RepresentationSearch::new(l, target, bound);
        while let Some(x) = search.next() {
            if pred(&x) {
                return Ok(SearchOutcome {
                    vector: x,
                    bound,
                    examined: examined + search.examined,
                });
            }
            if examined + search.examined >= budget {
                return Err(Error::SearchCap(format!(
                    "target square {target}, bound {bound} of cap {cap}, budget of {budget} candidates spent"
                )));
            }
        }
        examined += search.examined;
    }
    Err(Error::SearchCap(format!(
        "target square {target}: no vector up to height {cap} ({examined} candidates examined)"
    )))
}

/// All primitive isotropic vectors of max-norm <= height_bound satisfying
/// `pred`, one per +-pair (first nonzero coordinate positive), sorted by
/// (height, coordinates).
pub fn enumerate_isotropic<F>(l: &IntLattice, height_bound: i64, mut pred: F) -> Vec<LatVec>
where
    F: FnMut(&LatVec) -> bool,
{
    let mut out: Vec<LatVec> = RepresentationSearch::new(l, 0, height_bound)
        .filter(|x| pred(x))
        .collect();
    out.sort_by(|a, b| (a.height(), &a.0).cmp(&(b.height(), &b.0)));
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_vectors_cover_the_box() {
        let all: Vec<Vec<i64>> = SparseVectors::new(3, 2).collect();
        assert_eq!(all.len(), 125);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 125);
        assert_eq!(all[0], vec![0, 0, 0]);
        assert_eq!(all[1], vec![1, 0, 0]);
        assert_eq!(all[2], vec![-1, 0, 0]);
    }

    #[test]
    fn split_detection() {
        let l = IntLattice::d4().direct_sum(&IntLattice::hyperbolic_scaled(3));
        assert_eq!(
            find_hyperbolic_split(&l),
            Some(HyperbolicSplit {
                first: 4,
                second: 5,
                pairing: 3
            })
        );
        assert_eq!(find_hyperbolic_split(&IntLattice::d4()), None);
    }

    #[test]
    fn hyperbolic_plane_bound_one() {
        let v = enumerate_isotropic(&IntLattice::hyperbolic(), 1, |_| true);
        assert_eq!(v, vec![LatVec(vec![0, 1]), LatVec(vec![1, 0])]);
    }

    #[test]
    fn definite_has_none() {
        assert!(enumerate_isotropic(&IntLattice::d4(), 3, |_| true).is_empty());
    }

    #[test]
    fn u_plus_minus_two() {
        let l = IntLattice::hyperbolic().direct_sum(&IntLattice::diagonal(&[-2]));
        let v = enumerate_isotropic(&l, 1, |_| true);
        assert!(v.contains(&LatVec(vec![1, 1, 1])));
        for x in &v {
            assert_eq!(l.norm(x).unwrap(), 0);
        }
    }

    #[test]
    fn capped_search_reports_exhaustion() {
        let err = search_representation(&IntLattice::d4(), 0, 4, 1_000_000, |_| true).unwrap_err();
        assert!(matches!(err, Error::SearchCap(_)));
    }
}
