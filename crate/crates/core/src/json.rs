//! Wire formats shared by the command-line tool and its tests.
//!
//! Lattices are `{"rank": n, "gram": [["0","1"], ...]}` with decimal-string
//! entries; Mukai vectors are `{"r": 1, "c1": [...], "s": 0}` where `s` may
//! also be a string `"a/p"` for twisted vectors. A `c1` shorter than the
//! lattice rank lists the leading coordinates; the rest are zero.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::catalog::{Validation, SSAbelianLattice, SSK3Lattice, Block};
use crate::error::{Error, Result};
use crate::lattice::{IntLattice, LatVec};
use crate::mukai::{MukaiVector, TwistedMukaiVector};
use crate::search::UntwistWitness;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntOrString {
    Int(i64),
    Str(String),
}

impl IntOrString {
    fn to_i64(&self) -> Result<i64> {
        match self {
            IntOrString::Int(v) => Ok(*v),
            IntOrString::Str(s) => s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub rank: usize,
    pub gram: Vec<Vec<IntOrString>>,
}

impl LatticeJson {
    pub fn from_lattice(l: &IntLattice) -> Self {
        LatticeJson {
            rank: l.rank(),
            gram: l.gram().iter().map(|row| row.iter().map(|x| IntOrString::Str(x.to_string())).collect()).collect(),
        }
    }

    pub fn to_lattice(&self) -> Result<IntLattice> {
        if self.gram.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: self.gram.len() });
        }
        let gram = self
            .gram
            .iter()
            .map(|row| row.iter().map(IntOrString::to_i64).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        IntLattice::new(gram)
    }
}

/// Leading coordinates, zero-padded to `rank`.
pub fn padded(coords: &[i64], rank: usize) -> Result<LatVec> {
    if coords.len() > rank {
        return Err(Error::DimensionMismatch { expected: rank, got: coords.len() });
    }
    let mut v = coords.to_vec();
    v.resize(rank, 0);
    Ok(LatVec(v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MukaiJson {
    pub r: i64,
    #[serde(default)]
    pub c1: Vec<i64>,
    pub s: IntOrString,
}

fn rational_string(q: &Rational64) -> IntOrString {
    if q.is_integer() {
        IntOrString::Int(q.to_integer())
    } else {
        IntOrString::Str(format!("{}/{}", q.numer(), q.denom()))
    }
}

impl MukaiJson {
    pub fn from_vector(v: &MukaiVector) -> Self {
        MukaiJson { r: v.r, c1: v.c1.0.clone(), s: IntOrString::Int(v.s) }
    }

    pub fn from_twisted(v: &TwistedMukaiVector) -> Self {
        MukaiJson { r: v.r, c1: v.c1.0.clone(), s: rational_string(&v.s) }
    }

    fn c1_for(&self, rank: usize) -> Result<LatVec> {
        padded(&self.c1, rank)
    }

    pub fn parse_s(&self) -> Result<Rational64> {
        match &self.s {
            IntOrString::Int(v) => Ok(Rational64::from_integer(*v)),
            IntOrString::Str(s) => {
                let bad = || Error::Parse(format!("s must be an integer or \"a/b\", got {s:?}"));
                match s.split_once('/') {
                    Some((a, b)) => {
                        let a: i64 = a.trim().parse().map_err(|_| bad())?;
                        let b: i64 = b.trim().parse().map_err(|_| bad())?;
                        if b == 0 {
                            return Err(bad());
                        }
                        Ok(Rational64::new(a, b))
                    }
                    None => Ok(Rational64::from_integer(s.trim().parse().map_err(|_| bad())?)),
                }
            }
        }
    }

    pub fn to_vector(&self, rank: usize) -> Result<MukaiVector> {
        let s = self.parse_s()?;
        if !s.is_integer() {
            return Err(Error::Precondition(format!("s = {s} is not an integer; an untwisted vector is required")));
        }
        Ok(MukaiVector { r: self.r, c1: self.c1_for(rank)?, s: s.to_integer() })
    }

    /// Twisted vector whose last entry has denominator dividing 2p.
    pub fn to_twisted(&self, rank: usize, p: i64) -> Result<TwistedMukaiVector> {
        let s = self.parse_s()?;
        if (2 * p) % s.denom() != 0 {
            return Err(Error::Precondition(format!("denominator of s = {s} does not divide 2p = {}", 2 * p)));
        }
        Ok(TwistedMukaiVector { r: self.r, c1: self.c1_for(rank)?, s })
    }
}

/// `{"even", "rank", "signature", "abs_det", "sigma_computed", "matches_requested"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationJson {
    pub even: bool,
    pub rank: usize,
    pub signature: (usize, usize),
    pub abs_det: String,
    pub sigma_computed: Option<u32>,
    pub matches_requested: bool,
}

impl ValidationJson {
    pub fn new(v: &Validation, p: i64) -> Self {
        ValidationJson {
            even: v.even,
            rank: v.rank,
            signature: v.signature,
            abs_det: v.abs_det_string(p),
            sigma_computed: v.sigma_computed,
            matches_requested: v.matches_requested,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NsJson {
    pub kind: String,
    pub p: i64,
    pub invariant: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub blocks: Vec<Block>,
    pub lattice: LatticeJson,
    pub validation: ValidationJson,
}

impl NsJson {
    pub fn k3(l: &SSK3Lattice) -> Self {
        NsJson {
            kind: "k3".into(),
            p: l.p,
            invariant: l.sigma,
            variant: Some(serde_json::to_value(l.variant).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()),
            blocks: l.blocks.clone(),
            lattice: LatticeJson::from_lattice(&l.lattice),
            validation: ValidationJson::new(&l.validation, l.p),
        }
    }

    pub fn abelian(l: &SSAbelianLattice) -> Self {
        NsJson {
            kind: "abelian".into(),
            p: l.p,
            invariant: l.artin,
            variant: None,
            blocks: l.blocks.clone(),
            lattice: LatticeJson::from_lattice(&l.lattice),
            validation: ValidationJson::new(&l.validation, l.p),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UntwistJson {
    pub case: crate::search::UntwistCase,
    pub tau: MukaiJson,
    pub w: MukaiJson,
    pub pairing_value: IntOrString,
}

impl UntwistJson {
    pub fn new(w: &UntwistWitness) -> Self {
        UntwistJson {
            case: w.case,
            tau: MukaiJson::from_twisted(&w.tau),
            w: MukaiJson::from_twisted(&w.w),
            pairing_value: rational_string(&w.pairing_value),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_round_trip() {
        let l = IntLattice::hyperbolic().direct_sum(&IntLattice::diagonal(&[-2]));
        let j = LatticeJson::from_lattice(&l);
        let s = serde_json::to_string(&j).unwrap();
        assert!(s.starts_with(r#"{"rank":3,"gram":[["0","1","0"]"#));
        let back: LatticeJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_lattice().unwrap(), l);
        let plain: LatticeJson = serde_json::from_str(r#"{"rank":2,"gram":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(plain.to_lattice().unwrap(), IntLattice::hyperbolic());
    }

    #[test]
    fn mukai_formats() {
        let j: MukaiJson = serde_json::from_str(r#"{"r":1,"c1":[],"s":-1}"#).unwrap();
        assert_eq!(j.to_vector(3).unwrap(), MukaiVector::new(1, vec![0, 0, 0], -1));
        let t: MukaiJson = serde_json::from_str(r#"{"r":5,"c1":[1,0],"s":"3/5"}"#).unwrap();
        assert_eq!(t.to_twisted(2, 5).unwrap().s, Rational64::new(3, 5));
        assert!(t.to_vector(2).is_err());
        assert!(t.to_twisted(2, 7).is_err());
        let tw = TwistedMukaiVector { r: 5, c1: LatVec(vec![1, 0]), s: Rational64::new(3, 10) };
        assert_eq!(serde_json::to_string(&MukaiJson::from_twisted(&tw)).unwrap(), r#"{"r":5,"c1":[1,0],"s":"3/10"}"#);
    }
}
