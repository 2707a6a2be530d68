use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Row-style Hermite normal form.
///
/// Returns the nonzero rows of the HNF of `rows` (row operations only): echelon
/// form with positive pivots, entries above each pivot reduced to `[0, pivot)`.
/// The result spans the same Z-module as the input rows and does not depend on
/// their order.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if pivot_row >= m.len() {
            break;
        }
        // Euclid down the column until one nonzero entry is left.
        loop {
            let nonzero: Vec<usize> = (pivot_row..m.len())
                .filter(|&r| !m[r][col].is_zero())
                .collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero
                .iter()
                .min_by(|&&a, &&b| m[a][col].abs().cmp(&m[b][col].abs()))
                .unwrap();
            m.swap(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let q = m[r][col].div_floor(&m[pivot_row][col]);
                let (head, tail) = m.split_at_mut(r);
                let src = &head[pivot_row];
                for (dst, s) in tail[0].iter_mut().zip(src) {
                    *dst -= &q * s;
                }
                if !m[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[pivot_row][col].is_zero() {
            continue;
        }
        if m[pivot_row][col].is_negative() {
            for v in m[pivot_row].iter_mut() {
                *v = -v.clone();
            }
        }
        // Reduce the rows above into [0, pivot).
        for r in 0..pivot_row {
            let q = m[r][col].div_floor(&m[pivot_row][col]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = m.split_at_mut(pivot_row);
            for (dst, s) in head[r].iter_mut().zip(&tail[0]) {
                *dst -= &q * s;
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    m.truncate(pivot_row);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn order_independent() {
        let a = big(&[&[2, 4, 6], &[1, 1, 1], &[0, 3, 9]]);
        let b = big(&[&[0, 3, 9], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(hermite_normal_form(&a), hermite_normal_form(&b));
    }

    #[test]
    fn drops_dependent_rows() {
        let a = big(&[&[1, 2], &[2, 4], &[3, 6]]);
        assert_eq!(hermite_normal_form(&a), big(&[&[1, 2]]));
    }

    #[test]
    fn even_sum_sublattice() {
        // {e1 - e2, 2 e2} spans the even-sum sublattice of Z^2
        let a = big(&[&[1, -1], &[0, 2]]);
        assert_eq!(hermite_normal_form(&a), big(&[&[1, 1], &[0, 2]]));
    }
}
