//! Small integer helpers shared by the lattice and search code.

use num_integer::Integer;

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn gcd_all<I: IntoIterator<Item = i64>>(it: I) -> i64 {
    it.into_iter().fold(0, gcd)
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of |n| in increasing order.
pub fn prime_factors(n: i64) -> Vec<i64> {
    let mut n = n.unsigned_abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d as i64);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n as i64);
    }
    out
}

pub fn primes_up_to(n: i64) -> Vec<i64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

pub fn first_primes(count: usize) -> Vec<i64> {
    (2..).filter(|&k| is_prime(k)).take(count).collect()
}

pub fn mod_pow(base: i64, mut exp: u64, m: i64) -> i64 {
    let m = m as i128;
    let mut b = (base as i128).rem_euclid(m);
    let mut acc: i128 = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as i64
}

/// Legendre symbol (a | p) for an odd prime p, via Euler's criterion.
pub fn legendre(a: i64, p: i64) -> i32 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    if mod_pow(a, ((p - 1) / 2) as u64, p) == 1 {
        1
    } else {
        -1
    }
}

/// Exponent of p in |n|, or `None` if |n| has another prime factor. n must be nonzero.
pub fn p_power_exponent(n: &num_bigint::BigInt, p: i64) -> Option<u32> {
    use num_traits::{One, Zero};
    let mut n = n.magnitude().clone();
    if n.is_zero() {
        return None;
    }
    let p = num_bigint::BigUint::from(p as u64);
    let mut k = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    n.is_one().then_some(k)
}

/// Integers a_i with sum a_i * moduli_i = gcd(moduli).
pub fn bezout_weights(moduli: &[i64]) -> (i64, Vec<i64>) {
    let mut g = 0i64;
    let mut weights: Vec<i64> = Vec::with_capacity(moduli.len());
    for &m in moduli {
        // g_new = x*g + y*m, so scale the earlier weights by x.
        let e = g.extended_gcd(&m);
        let (x, y) = if e.gcd < 0 { (-e.x, -e.y) } else { (e.x, e.y) };
        for w in weights.iter_mut() {
            *w *= x;
        }
        weights.push(y);
        g = e.gcd.abs();
    }
    (g, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_small() {
        // squares mod 5 are {1, 4}
        assert_eq!(legendre(-3, 5), -1);
        assert_eq!(legendre(4, 5), 1);
        assert_eq!(legendre(-3, 13), 1);
        assert_eq!(legendre(-11, 13), -1);
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(prime_factors(-49), vec![7]);
        assert!(prime_factors(1).is_empty());
    }

    #[test]
    fn bezout() {
        let moduli = [3 * 5, 2 * 5, 2 * 3];
        let (g, w) = bezout_weights(&moduli);
        assert_eq!(g, 1);
        let s: i64 = moduli.iter().zip(&w).map(|(m, a)| m * a).sum();
        assert_eq!(s, 1);
    }

    #[test]
    fn p_power() {
        use num_bigint::BigInt;
        assert_eq!(p_power_exponent(&BigInt::from(-625), 5), Some(4));
        assert_eq!(p_power_exponent(&BigInt::from(1), 5), Some(0));
        assert_eq!(p_power_exponent(&BigInt::from(50), 5), None);
    }
}
