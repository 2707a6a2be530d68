//! Integer partitions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::gcd_all;

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the parts.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `a[m]` = number of parts equal to m, for m = 1..=largest part.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in self.0.iter().rev() {
            match out.last_mut() {
                Some((m, a)) if *m == p => *a += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn gcd(&self) -> u32 {
        gcd_all(self.0.iter().map(|&p| p as i64)) as u32
    }

    pub fn transpose(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition((1..=first).map(|k| self.0.iter().filter(|&&p| p >= k).count() as u32).collect())
    }

    /// dim of the Schur functor of this shape on a g-dimensional space,
    /// by the hook-content formula.
    pub fn schur_dimension(&self, g: u32) -> u64 {
        let t = self.transpose();
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row as usize {
                let content = g as i64 + j as i64 - i as i64;
                if content <= 0 {
                    return 0;
                }
                let hook = (row as usize - j) + (t.0[j] as usize - i) - 1;
                num *= content as u128;
                den *= hook as u128;
                let d = num_integer::Integer::gcd(&num, &den);
                num /= d;
                den /= d;
            }
        }
        debug_assert_eq!(den, 1);
        (num / den) as u64
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of n, largest parts first: (n), (n-1,1), ..., (1^n).
pub fn partitions(n: u32) -> Vec<Partition> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let p: Vec<usize> = (0..10).map(|n| partitions(n).len()).collect();
        assert_eq!(p, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
        assert_eq!(partitions(3), vec![Partition(vec![3]), Partition(vec![2, 1]), Partition(vec![1, 1, 1])]);
    }

    #[test]
    fn derived_fields() {
        let l = Partition::new(vec![1, 3, 1, 2]);
        assert_eq!(l.parts(), &[3, 2, 1, 1]);
        assert_eq!(l.multiplicities(), vec![(1, 2), (2, 1), (3, 1)]);
        assert_eq!(l.transpose(), Partition(vec![4, 2, 1]));
        assert_eq!(l.transpose().transpose(), l);
        assert_eq!(Partition::new(vec![4, 2]).gcd(), 2);
    }

    #[test]
    fn schur_dims() {
        // Sym^k C^g and wedge^k C^g
        assert_eq!(Partition::new(vec![2]).schur_dimension(2), 3);
        assert_eq!(Partition::new(vec![1, 1]).schur_dimension(2), 1);
        assert_eq!(Partition::new(vec![1, 1, 1]).schur_dimension(2), 0);
        assert_eq!(Partition::new(vec![2, 1]).schur_dimension(2), 2);
        assert_eq!(Partition::new(vec![2, 1]).schur_dimension(3), 8);
        assert_eq!(Partition::new(vec![]).schur_dimension(5), 1);
    }
}
