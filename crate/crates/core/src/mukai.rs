//! Mukai lattice `Z + NS + Z` with pairing `L.L' - r s' - r' s`, the
//! cohomological action of tensoring by line bundles and of spherical twists,
//! and the numerical invariants of moduli spaces of sheaves.

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::arith::{bezout_weights, gcd, gcd_all, is_prime, prime_factors};
use crate::error::{Error, Result};
use crate::lattice::{IntLattice, LatVec};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MukaiVector {
    pub r: i64,
    pub c1: LatVec,
    pub s: i64,
}

impl MukaiVector {
    pub fn new(r: i64, c1: impl Into<LatVec>, s: i64) -> Self {
        MukaiVector {
            r,
            c1: c1.into(),
            s,
        }
    }

    /// (rk, c1, chi - rk).
    pub fn of_sheaf(rank: i64, c1: LatVec, chi: i64) -> Self {
        MukaiVector {
            r: rank,
            c1,
            s: chi - rank,
        }
    }

    /// (1, 0, 1), the Mukai vector of the structure sheaf.
    pub fn structure_sheaf(ns_rank: usize) -> Self {
        MukaiVector {
            r: 1,
            c1: LatVec::zero(ns_rank),
            s: 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0 && self.s == 0 && self.c1.is_zero()
    }

    pub fn content(&self) -> i64 {
        gcd(gcd(self.r, self.s), self.c1.content())
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn neg(&self) -> Self {
        MukaiVector {
            r: -self.r,
            c1: self.c1.neg(),
            s: -self.s,
        }
    }

    pub fn plus_scaled(&self, k: i64, other: &MukaiVector) -> Self {
        MukaiVector {
            r: self.r + k * other.r,
            c1: self.c1.plus_scaled(k, &other.c1),
            s: self.s + k * other.s,
        }
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.c1, self.s)
    }
}

/// Mukai vector whose last entry may have denominator p (or 2p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedMukaiVector {
    pub r: i64,
    pub c1: LatVec,
    pub s: Rational64,
}

impl TwistedMukaiVector {
    pub fn integral(v: &MukaiVector) -> Self {
        TwistedMukaiVector {
            r: v.r,
            c1: v.c1.clone(),
            s: Rational64::from_integer(v.s),
        }
    }
}

impl fmt::Display for TwistedMukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.c1, self.s)
    }
}

/// Which hyper-Kähler family a moduli space belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuliKind {
    /// Moduli of sheaves on a K3 surface, K3^[n] type.
    K3,
    /// Albanese fibre of moduli on an abelian surface, generalized Kummer type.
    AbelianKummer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliReport {
    pub dim: i64,
    pub vperp_rank: usize,
    pub b2_target: usize,
    pub shioda_certified: bool,
}

/// The algebraic Mukai lattice over a fixed Néron–Severi lattice.
#[derive(Clone, Copy, Debug)]
pub struct MukaiLattice<'a> {
    ns: &'a IntLattice,
}

impl<'a> MukaiLattice<'a> {
    pub fn new(ns: &'a IntLattice) -> Self {
        MukaiLattice { ns }
    }

    pub fn ns(&self) -> &'a IntLattice {
        self.ns
    }

    fn check(&self, v: &MukaiVector) -> Result<()> {
        if v.c1.len() != self.ns.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.ns.rank(),
                got: v.c1.len(),
            });
        }
        Ok(())
    }

    pub fn pairing(&self, v: &MukaiVector, w: &MukaiVector) -> Result<i64> {
        self.check(v)?;
        self.check(w)?;
        let cc = self.ns.pairing(&v.c1, &w.c1)?;
        Ok(cc - v.r * w.s - w.r * v.s)
    }

    pub fn square(&self, v: &MukaiVector) -> Result<i64> {
        self.pairing(v, v)
    }

    pub fn twisted_pairing(
        &self,
        v: &TwistedMukaiVector,
        w: &TwistedMukaiVector,
    ) -> Result<Rational64> {
        let cc = self.ns.pairing(&v.c1, &w.c1)?;
        Ok(Rational64::from_integer(cc) - w.s * v.r - v.s * w.r)
    }

    /// p does not divide r, or does not divide s, or does not divide c1.NS.
    pub fn is_coprime_to_p(&self, v: &MukaiVector, p: i64) -> Result<bool> {
        self.check(v)?;
        if !v.is_primitive() {
            return Err(Error::NotPrimitive(v.to_string()));
        }
        self.coprime_condition(v, p)
    }

    /// The disjunction itself, without the primitivity requirement.
    pub fn coprime_condition(&self, v: &MukaiVector, p: i64) -> Result<bool> {
        self.check(v)?;
        Ok(v.r % p != 0 || v.s % p != 0 || !self.ns.divides_pairing(&v.c1, p)?)
    }

    /// gcd(r, c1.H, s) = 1.
    pub fn is_general_numeric(&self, v: &MukaiVector, h: &LatVec) -> Result<bool> {
        self.check(v)?;
        let ch = self.ns.pairing(&v.c1, h)?;
        Ok(gcd_all([v.r, ch, v.s]) == 1)
    }

    /// Tensoring with the line bundle L: (r, c1 + rL, s + r L^2/2 + c1.L).
    pub fn exp_twist(&self, v: &MukaiVector, l: &LatVec) -> Result<MukaiVector> {
        self.check(v)?;
        let ll = self.ns.norm(l)?;
        let cl = self.ns.pairing(&v.c1, l)?;
        if (v.r * ll) % 2 != 0 {
            return Err(Error::Precondition(format!(
                "r L^2 / 2 is not integral for L = {l}"
            )));
        }
        Ok(MukaiVector {
            r: v.r,
            c1: v.c1.plus_scaled(v.r, l),
            s: v.s + v.r * ll / 2 + cl,
        })
    }

    /// Reflection x -> x + <x, e> e in a (-2)-class e.
    pub fn spherical_reflect(&self, v: &MukaiVector, e: &MukaiVector) -> Result<MukaiVector> {
        let ee = self.square(e)?;
        if ee != -2 {
            return Err(Error::NotSpherical(ee));
        }
        let k = self.pairing(v, e)?;
        Ok(v.plus_scaled(k, e))
    }

    /// A line bundle L with exp_L(v) numerically general for H.
    ///
    /// Each prime q dividing gcd(r, c1.H) needs some L_q with
    /// q not dividing s + c1.L_q; the L_q are combined with Bézout weights
    /// so that L reduces to a unit multiple of L_q modulo every q.
    pub fn find_generality_twist(&self, v: &MukaiVector, h: &LatVec, p: i64) -> Result<LatVec> {
        self.check(v)?;
        if !self.is_coprime_to_p(v, p)? {
            return Err(Error::NotCoprimeToP(v.to_string(), p));
        }
        let rank = self.ns.rank();
        if self.is_general_numeric(v, h)? {
            return Ok(LatVec::zero(rank));
        }
        let g = gcd(v.r, self.ns.pairing(&v.c1, h)?);
        if g == 0 {
            // twists fix r = 0 and c1, so gcd(r, c1.H) stays 0
            return Err(Error::Precondition(format!("v = {v} has r = 0 and c1.H = 0; no twist makes it general")));
        }
        let primes = prime_factors(g);
        let c1_row = self.ns.pairing_row(&v.c1)?;
        let mut witnesses = Vec::with_capacity(primes.len());
        for &q in &primes {
            // s and s + row_i differ by row_i, so zero or a basis vector works
            // unless q divides s and the whole row
            let w = std::iter::once(LatVec::zero(rank))
                .chain((0..rank).map(|i| LatVec::basis(rank, i)))
                .find(|l| {
                    let cl: i64 = c1_row.iter().zip(&l.0).map(|(a, b)| a * b).sum();
                    (v.s + cl).rem_euclid(q) != 0
                })
                .ok_or_else(|| {
                    Error::Internal(format!(
                        "no twist class for prime {q} with v = {v}; c1.NS is divisible by {q} and so is s"
                    ))
                })?;
            witnesses.push(w);
        }
        let cofactors: Vec<i64> = (0..primes.len())
            .map(|i| {
                primes
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, q)| q)
                    .product()
            })
            .collect();
        let (one, weights) = bezout_weights(&cofactors);
        debug_assert_eq!(one, 1);
        let mut l = LatVec::zero(rank);
        for ((w, a), m) in witnesses.iter().zip(&weights).zip(&cofactors) {
            l = l.plus_scaled(a * m, w);
        }
        let twisted = self.exp_twist(v, &l)?;
        if !self.is_general_numeric(&twisted, h)? {
            return Err(Error::Internal(format!(
                "generality twist {l} failed the recheck for v = {v}"
            )));
        }
        Ok(l)
    }

    /// <v,v> + 2 (K3 type) or <v,v> - 2 (Kummer type).
    pub fn moduli_dimension(&self, v: &MukaiVector, kind: ModuliKind) -> Result<i64> {
        let vv = self.square(v)?;
        if v.r <= 0 {
            return Err(Error::ModuliPrecondition(format!(
                "rank must be positive, got {}",
                v.r
            )));
        }
        match kind {
            ModuliKind::K3 if vv < 0 => Err(Error::ModuliPrecondition(format!(
                "<v,v> = {vv} < 0, no positive-dimensional K3-type moduli space"
            ))),
            ModuliKind::AbelianKummer if vv < 2 => Err(Error::ModuliPrecondition(format!(
                "<v,v> = {vv} < 2, no Kummer-type moduli space"
            ))),
            ModuliKind::K3 => Ok(vv + 2),
            ModuliKind::AbelianKummer => Ok(vv - 2),
        }
    }

    /// Rank of v^perp in the Mukai lattice.
    pub fn vperp_rank(&self, v: &MukaiVector) -> Result<usize> {
        self.check(v)?;
        let total = self.ns.rank() + 2;
        // <v, .> is the functional (-s, c1.NS, -r); v^perp has corank 1 unless it vanishes
        let functional_zero =
            v.r == 0 && v.s == 0 && self.ns.pairing_row(&v.c1)?.iter().all(|&x| x == 0);
        Ok(if functional_zero { total } else { total - 1 })
    }

    /// Picard rank of the moduli space against b_2, for dim >= 4.
    pub fn shioda_report(&self, v: &MukaiVector, p: i64, kind: ModuliKind) -> Result<ModuliReport> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let dim = self.moduli_dimension(v, kind)?;
        if dim < 4 {
            return Err(Error::ModuliPrecondition(format!(
                "dimension {dim} < 4, second Betti number differs from the hyper-Kähler formula"
            )));
        }
        if !self.is_coprime_to_p(v, p)? {
            return Err(Error::NotCoprimeToP(v.to_string(), p));
        }
        let vperp_rank = self.vperp_rank(v)?;
        let b2_target = match kind {
            ModuliKind::K3 => 23,
            ModuliKind::AbelianKummer => 7,
        };
        Ok(ModuliReport {
            dim,
            vperp_rank,
            b2_target,
            shioda_certified: vperp_rank == b2_target,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_abelian_ns;

    fn u() -> IntLattice {
        IntLattice::hyperbolic()
    }

    #[test]
    fn pairing_examples() {
        let l = u();
        let m = MukaiLattice::new(&l);
        let o = MukaiVector::new(1, vec![0, 0], 1);
        assert_eq!(m.pairing(&o, &o).unwrap(), -2);
        let c = MukaiVector::new(0, vec![1, 3], 0);
        assert_eq!(m.square(&c).unwrap(), l.norm(&c.c1).unwrap());
        let v = MukaiVector::new(2, vec![1, 0], 3);
        let w = MukaiVector::new(1, vec![0, 1], 0);
        assert_eq!(m.pairing(&v, &w).unwrap(), -2);
    }

    #[test]
    fn sheaf_vectors() {
        let z = LatVec::zero(2);
        assert_eq!(
            MukaiVector::of_sheaf(1, z.clone(), 2),
            MukaiVector::new(1, z.clone(), 1)
        );
        assert_eq!(
            MukaiVector::of_sheaf(1, z.clone(), 2 - 5),
            MukaiVector::new(1, z.clone(), -4)
        );
        let c = LatVec(vec![1, 1]);
        assert_eq!(
            MukaiVector::of_sheaf(0, c.clone(), 0),
            MukaiVector::new(0, c, 0)
        );
    }

    #[test]
    fn coprimality() {
        let l = u();
        let m = MukaiLattice::new(&l);
        assert!(!m
            .is_coprime_to_p(&MukaiVector::new(5, vec![5, 0], 5), 5)
            .is_ok_and(|b| b));
        assert!(m
            .is_coprime_to_p(&MukaiVector::new(1, vec![3, 0], 7), 5)
            .unwrap());

        let a = build_abelian_ns(5, 1).unwrap();
        let m = MukaiLattice::new(&a.lattice);
        // e1 of the H^(5) block pairs to -2 with itself
        let v = MukaiVector::new(5, LatVec::basis(6, 2), 5);
        assert!(m.is_coprime_to_p(&v, 5).unwrap());
    }

    #[test]
    fn non_coprime_primitive_vector() {
        // over U(5): (5, f1, 5) is primitive and all three conditions fail
        let l = IntLattice::hyperbolic_scaled(5);
        let m = MukaiLattice::new(&l);
        assert!(!m
            .is_coprime_to_p(&MukaiVector::new(5, vec![1, 0], 5), 5)
            .unwrap());
        assert!(matches!(
            m.is_coprime_to_p(&MukaiVector::new(5, vec![5, 0], 5), 5),
            Err(Error::NotPrimitive(_))
        ));
    }

    #[test]
    fn generality_examples() {
        let l = u();
        let m = MukaiLattice::new(&l);
        let h = LatVec(vec![1, 1]);
        assert!(m
            .is_general_numeric(&MukaiVector::new(2, vec![1, 1], 3), &h)
            .unwrap());
        assert!(!m
            .is_general_numeric(&MukaiVector::new(2, vec![1, 1], 4), &h)
            .unwrap());
        assert!(m
            .is_general_numeric(&MukaiVector::new(1, vec![7, 2], 8), &h)
            .unwrap());
    }

    #[test]
    fn exp_twist_examples() {
        let l = u();
        let m = MukaiLattice::new(&l);
        let v = MukaiVector::new(2, vec![1, 0], 3);
        assert_eq!(
            m.exp_twist(&v, &LatVec(vec![0, 1])).unwrap(),
            MukaiVector::new(2, vec![1, 2], 4)
        );
        assert_eq!(m.exp_twist(&v, &LatVec::zero(2)).unwrap(), v);
    }

    #[test]
    fn reflection_examples() {
        let l = IntLattice::hyperbolic().direct_sum(&IntLattice::diagonal(&[-2]));
        let m = MukaiLattice::new(&l);
        let c = LatVec(vec![0, 0, 1]);
        let e = MukaiVector::new(0, c.clone(), 0);
        let v = MukaiVector::new(3, vec![1, 2, 5], 4);
        let cc = l.pairing(&v.c1, &c).unwrap();
        assert_eq!(
            m.spherical_reflect(&v, &e).unwrap(),
            MukaiVector::new(3, v.c1.plus_scaled(cc, &c), 4)
        );
        let o = MukaiVector::structure_sheaf(3);
        let w = MukaiVector::new(2, vec![1, 0, 0], 3);
        assert_eq!(
            m.spherical_reflect(&w, &o).unwrap(),
            MukaiVector::new(-3, vec![1, 0, 0], -2)
        );
        assert_eq!(m.spherical_reflect(&o, &o).unwrap(), o.neg());
        assert!(matches!(
            m.spherical_reflect(&w, &MukaiVector::new(1, vec![0, 0, 0], 0)),
            Err(Error::NotSpherical(0))
        ));
    }

    #[test]
    fn generality_twist_already_general() {
        let l = u();
        let m = MukaiLattice::new(&l);
        let v = MukaiVector::new(3, vec![1, 0], 2);
        let h = LatVec(vec![1, 1]);
        assert_eq!(m.find_generality_twist(&v, &h, 5).unwrap(), LatVec::zero(2));
    }

    #[test]
    fn generality_twist_two_primes() {
        // r = 6, c1.H = 6 * k and s divisible by 6: both 2 and 3 need a witness
        let l = u();
        let m = MukaiLattice::new(&l);
        let v = MukaiVector::new(6, vec![1, 5], 12);
        let h = LatVec(vec![1, 1]);
        assert_eq!(l.pairing(&v.c1, &h).unwrap(), 6);
        assert!(!m.is_general_numeric(&v, &h).unwrap());
        let tw = m.find_generality_twist(&v, &h, 5).unwrap();
        assert!(m
            .is_general_numeric(&m.exp_twist(&v, &tw).unwrap(), &h)
            .unwrap());
    }

    #[test]
    fn generality_twist_rejects_non_coprime() {
        let l = IntLattice::hyperbolic_scaled(5);
        let m = MukaiLattice::new(&l);
        let v = MukaiVector::new(5, vec![1, 0], 5);
        assert!(matches!(
            m.find_generality_twist(&v, &LatVec(vec![1, 1]), 5),
            Err(Error::NotCoprimeToP(..))
        ));
    }

    #[test]
    fn moduli_dimensions() {
        let l = u();
        let m = MukaiLattice::new(&l);
        for n in 1..6 {
            let v = MukaiVector::new(1, vec![0, 0], 1 - n);
            assert_eq!(m.moduli_dimension(&v, ModuliKind::K3).unwrap(), 2 * n);
        }
        assert!(m
            .moduli_dimension(&MukaiVector::new(1, vec![0, 0], 1), ModuliKind::K3)
            .is_err());
        let v = MukaiVector::new(1, vec![0, 0], -2);
        assert_eq!(
            m.moduli_dimension(&v, ModuliKind::AbelianKummer).unwrap(),
            2
        );
    }

    #[test]
    fn shioda_reports() {
        let k3 = crate::catalog::build_k3_ns(7, 1, crate::catalog::VIndexVariant::Literal).unwrap();
        let m = MukaiLattice::new(&k3.lattice);
        let v = MukaiVector::new(1, LatVec::zero(22), -1);
        let rep = m.shioda_report(&v, 7, ModuliKind::K3).unwrap();
        assert_eq!(
            rep,
            ModuliReport {
                dim: 4,
                vperp_rank: 23,
                b2_target: 23,
                shioda_certified: true
            }
        );

        let ab = build_abelian_ns(3, 1).unwrap();
        let m = MukaiLattice::new(&ab.lattice);
        let v = MukaiVector::new(1, LatVec::zero(6), -3);
        let rep = m.shioda_report(&v, 3, ModuliKind::AbelianKummer).unwrap();
        assert_eq!(
            (rep.vperp_rank, rep.b2_target, rep.shioda_certified),
            (7, 7, true)
        );

        // a rank-20 lattice falls short of b_2 = 23
        let small = IntLattice::hyperbolic().direct_sum(&IntLattice::diagonal(&[-2; 18]));
        let m = MukaiLattice::new(&small);
        let v = MukaiVector::new(1, LatVec::zero(20), -1);
        let rep = m.shioda_report(&v, 7, ModuliKind::K3).unwrap();
        assert_eq!((rep.vperp_rank, rep.shioda_certified), (21, false));
    }
}
