//! Witness searches: elliptic fibration classes, untwisting pairs and
//! principal polarizations. Every witness carries a validator that recomputes
//! its defining properties from scratch.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::catalog::{SSAbelianLattice, SSK3Lattice};
use crate::error::{Error, Result};
use crate::lattice::{find_hyperbolic_split, search_representation, sparse_vectors, IntLattice, LatVec};
use crate::mukai::{MukaiLattice, MukaiVector, TwistedMukaiVector};

/// Height cap and candidate budget for a bounded search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub height_cap: i64,
    pub budget: u64,
}

impl SearchLimits {
    pub const ELLIPTIC: SearchLimits = SearchLimits { height_cap: 16, budget: 2_000_000 };
    pub const UNTWIST: SearchLimits = SearchLimits { height_cap: 16, budget: 2_000_000 };
    pub const POLARIZATION: SearchLimits = SearchLimits { height_cap: 8, budget: 2_000_000 };

    pub fn with_cap(self, height_cap: i64) -> Self {
        SearchLimits { height_cap, ..self }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transform {
    ExpTwist { l: LatVec },
    SphericalReflect { e: MukaiVector },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TransformChain(pub Vec<Transform>);

impl TransformChain {
    pub fn apply(&self, m: &MukaiLattice<'_>, v: &MukaiVector) -> Result<MukaiVector> {
        let mut out = v.clone();
        for t in &self.0 {
            out = match t {
                Transform::ExpTwist { l } => m.exp_twist(&out, l)?,
                Transform::SphericalReflect { e } => m.spherical_reflect(&out, e)?,
            };
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticWitness {
    pub chain: TransformChain,
    pub v_out: MukaiVector,
    pub x: LatVec,
    /// Height bound at which x was found.
    pub bound: i64,
}

impl EllipticWitness {
    pub fn verify(&self, ns: &IntLattice, v_in: &MukaiVector) -> Result<()> {
        let m = MukaiLattice::new(ns);
        let replay = self.chain.apply(&m, v_in)?;
        if replay != self.v_out {
            return Err(Error::Internal(format!("chain replays to {replay}, witness records {}", self.v_out)));
        }
        if !crate::lattice::is_primitive(&self.x)? {
            return Err(Error::Internal(format!("fibre class {} is not primitive", self.x)));
        }
        let xx = ns.norm(&self.x)?;
        if xx != 0 {
            return Err(Error::Internal(format!("fibre class {} has square {xx}", self.x)));
        }
        let cx = ns.pairing(&self.v_out.c1, &self.x)?;
        if gcd(self.v_out.r, cx) != 1 {
            return Err(Error::Internal(format!("gcd(r, c1.x) = gcd({}, {cx}) != 1", self.v_out.r)));
        }
        Ok(())
    }
}

fn row_content(ns: &IntLattice, c: &LatVec) -> Result<i64> {
    Ok(LatVec(ns.pairing_row(c)?).content())
}

// Some x with gcd(r, c1.x) = 1 can only exist when r shares no factor with c1.NS.
fn ready(ns: &IntLattice, v: &MukaiVector) -> Result<bool> {
    Ok(v.r != 0 && gcd(v.r, row_content(ns, &v.c1)?) == 1)
}

/// (1, 0, 1): reflecting in it swaps the roles of r and s.
fn structure_sheaf_reflection(rank: usize) -> Transform {
    Transform::SphericalReflect { e: MukaiVector::structure_sheaf(rank) }
}

const STEP_ONE_TWISTS: usize = 100_000;

// [], [R], then [exp_L, R] for L in sparse order.
fn step_one_chain(ns: &IntLattice, v: &MukaiVector) -> Result<(TransformChain, MukaiVector)> {
    let m = MukaiLattice::new(ns);
    let rank = ns.rank();
    let base = [TransformChain(vec![]), TransformChain(vec![structure_sheaf_reflection(rank)])];
    let twisted = sparse_vectors(rank, 2)
        .skip(1)
        .take(STEP_ONE_TWISTS)
        .map(|l| TransformChain(vec![Transform::ExpTwist { l }, structure_sheaf_reflection(rank)]));
    let candidates = base.into_iter().chain(twisted);
    for chain in candidates {
        let w = chain.apply(&m, v)?;
        if ready(ns, &w)? {
            return Ok((chain, w));
        }
    }
    Err(Error::Internal(format!("none of the first {STEP_ONE_TWISTS} twist-and-reflect chains makes r coprime to c1.NS for v = {v}")))
}

/// An isotropic x with gcd(r', c1'.x) = 1 after a short transform chain.
pub fn find_elliptic_class(ns: &IntLattice, v: &MukaiVector, p: i64, limits: SearchLimits) -> Result<EllipticWitness> {
    let m = MukaiLattice::new(ns);
    if !v.is_primitive() {
        return Err(Error::NotPrimitive(v.to_string()));
    }
    if !m.is_coprime_to_p(v, p)? {
        return Err(Error::NotCoprimeToP(v.to_string(), p));
    }
    let (chain, v_out) = step_one_chain(ns, v)?;
    let row = ns.pairing_row(&v_out.c1)?;
    let r = v_out.r;
    let found = search_representation(ns, 0, limits.height_cap, limits.budget, |x| {
        let cx: i64 = row.iter().zip(&x.0).map(|(a, b)| a * b).sum();
        gcd(r, cx) == 1
    })
    .map_err(|e| match e {
        Error::SearchCap(msg) => Error::SearchCap(format!("elliptic class for v = {v} (after chain to {v_out}): {msg}")),
        other => other,
    })?;
    let w = EllipticWitness { chain, v_out, x: found.vector, bound: found.bound };
    w.verify(ns, v)?;
    Ok(w)
}

/// The abelian-surface variant; the chain never uses (-2)-curve reflections.
pub fn find_elliptic_class_abelian(
    ns: &SSAbelianLattice,
    v: &MukaiVector,
    limits: SearchLimits,
) -> Result<EllipticWitness> {
    if ns.lattice.rank() != 6 {
        return Err(Error::DimensionMismatch { expected: 6, got: ns.lattice.rank() });
    }
    find_elliptic_class(&ns.lattice, v, ns.p, limits)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UntwistCase {
    #[serde(rename = "auto")]
    Auto,
    I,
    II,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UntwistWitness {
    pub case: UntwistCase,
    pub tau: TwistedMukaiVector,
    pub w: TwistedMukaiVector,
    pub pairing_value: Rational64,
}

impl UntwistWitness {
    pub fn verify(&self, ns: &IntLattice, p: i64) -> Result<()> {
        let m = MukaiLattice::new(ns);
        let tt = m.twisted_pairing(&self.tau, &self.tau)?;
        if tt != Rational64::from_integer(0) {
            return Err(Error::Internal(format!("tau = {} has square {tt}", self.tau)));
        }
        let tw = m.twisted_pairing(&self.tau, &self.w)?;
        if tw != self.pairing_value {
            return Err(Error::Internal(format!("<tau, w> = {tw}, witness records {}", self.pairing_value)));
        }
        if !tw.is_integer() || tw.to_integer() % p == 0 {
            return Err(Error::Internal(format!("<tau, w> = {tw} is not an integer prime to {p}")));
        }
        Ok(())
    }
}

/// A pair (tau, w) with tau isotropic and p not dividing <tau, w>.
pub fn find_untwisting_pair(
    ns: &SSK3Lattice,
    l: &LatVec,
    case: UntwistCase,
    limits: SearchLimits,
) -> Result<UntwistWitness> {
    let p = ns.p;
    if ns.sigma >= 10 {
        return Err(Error::Precondition("untwisting needs sigma < 10".into()));
    }
    let lat = &ns.lattice;
    let l_divisible = lat.divides_pairing(l, p)?;
    let case = match case {
        UntwistCase::Auto if l_divisible => UntwistCase::II,
        UntwistCase::Auto => UntwistCase::I,
        c => c,
    };
    let ll = lat.norm(l)?;
    let witness = match case {
        UntwistCase::I => {
            if l_divisible {
                return Err(Error::Precondition(format!("case I needs p = {p} not dividing L.NS for L = {l}")));
            }
            let row = lat.pairing_row(l)?;
            let e = search_representation(lat, 0, limits.height_cap, limits.budget, |x| {
                let lx: i64 = row.iter().zip(&x.0).map(|(a, b)| a * b).sum();
                lx % p != 0
            })?
            .vector;
            let tau = TwistedMukaiVector { r: 0, c1: e.clone(), s: Rational64::from_integer(0) };
            let w = TwistedMukaiVector { r: p, c1: l.clone(), s: Rational64::new(ll, 2 * p) };
            UntwistWitness { case, tau, w, pairing_value: Rational64::from_integer(lat.pairing(l, &e)?) }
        }
        UntwistCase::II => {
            let split = find_hyperbolic_split(lat)
                .filter(|s| s.pairing.abs() == 1)
                .ok_or_else(|| Error::Precondition("case II needs a unimodular hyperbolic summand".into()))?;
            let g = split.pairing;
            let rank = lat.rank();
            let f1 = LatVec::basis(rank, split.first);
            let f2 = LatVec::basis(rank, split.second);
            let c1 = f1.plus_scaled(p, &f2);
            let dl = lat.pairing(&f2, l)?;
            let value = lat.pairing(&c1, &f2)? - dl;
            if value % p == 0 {
                return Err(Error::Precondition(format!(
                    "case II with D = f2: c1.D - D.L = {value} is divisible by {p}"
                )));
            }
            let tau = TwistedMukaiVector { r: p, c1, s: Rational64::from_integer(g) };
            let w = TwistedMukaiVector { r: 0, c1: f2, s: Rational64::new(dl, p) };
            UntwistWitness { case, tau, w, pairing_value: Rational64::from_integer(value) }
        }
        UntwistCase::Auto => unreachable!(),
    };
    witness.verify(lat, p)?;
    Ok(witness)
}

/// A class of square 2.
pub fn find_principal_polarization(ns: &IntLattice, limits: SearchLimits) -> Result<LatVec> {
    let found = search_representation(ns, 2, limits.height_cap, limits.budget, |_| true)?;
    let h = found.vector;
    if ns.norm(&h)? != 2 {
        return Err(Error::Internal(format!("polarization {h} does not have square 2")));
    }
    Ok(h)
}
