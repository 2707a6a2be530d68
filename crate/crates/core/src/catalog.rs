//! Néron–Severi lattices of supersingular K3 surfaces (p > 2) and of
//! supersingular abelian surfaces.
//!
//! Every constructed lattice carries a validation record recomputed from its
//! Gram matrix; the Artin invariant is read off the determinant rather than
//! taken from the request.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, legendre, p_power_exponent};
use crate::error::{Error, Result};
use crate::lattice::{overlattice_from_generators, IntLattice, RationalGeneratorSet};

const PARAM_SEARCH_CAP: i64 = 1_000_000;

/// Parameters (q, gamma) of the rank-4 block H^(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HpParams {
    pub p: i64,
    pub q: i64,
    pub gamma: i64,
}

/// Index convention for the V-block in the `U + H^(p) + V_{16,*}` branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VIndexVariant {
    /// `V_{16, 2 sigma}` as printed in the classification table.
    Literal,
    /// `V_{16, 2 sigma - 2}`, which restores |det| = p^(2 sigma).
    DiscCorrected,
}

/// An orthogonal summand of a catalog lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub name: String,
    pub offset: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub even: bool,
    pub rank: usize,
    pub signature: (usize, usize),
    #[serde(skip)]
    pub abs_det: BigInt,
    /// k with |det| = p^k, if |det| is a power of p.
    pub det_exponent: Option<u32>,
    pub sigma_computed: Option<u32>,
    pub matches_requested: bool,
}

impl Validation {
    /// Invariants of `l` against a requested Artin invariant.
    pub fn of(l: &IntLattice, p: i64, requested: u32) -> Result<Self> {
        let abs_det = l.determinant().abs();
        let det_exponent = p_power_exponent(&abs_det, p);
        let sigma_computed = det_exponent.filter(|k| k % 2 == 0).map(|k| k / 2);
        Ok(Validation {
            even: l.is_even(),
            rank: l.rank(),
            signature: l.signature()?,
            abs_det,
            det_exponent,
            sigma_computed,
            matches_requested: sigma_computed == Some(requested),
        })
    }

    /// "p^k" when |det| is a power of p, the decimal value otherwise.
    pub fn abs_det_string(&self, p: i64) -> String {
        match self.det_exponent {
            Some(k) => format!("{p}^{k}"),
            None => self.abs_det.to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SSK3Lattice {
    pub p: i64,
    pub sigma: u32,
    pub variant: VIndexVariant,
    /// NS(S) = -Lambda_sigma.
    pub lattice: IntLattice,
    pub blocks: Vec<Block>,
    pub validation: Validation,
}

impl SSK3Lattice {
    /// rank 22, even, signature (1, 21), |det| an even power of p.
    pub fn satisfies_invariants(&self) -> bool {
        let v = &self.validation;
        v.rank == 22 && v.even && v.signature == (1, 21) && v.sigma_computed.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct SSAbelianLattice {
    pub p: i64,
    pub artin: u32,
    /// NS(A) = -Lambda_artin.
    pub lattice: IntLattice,
    pub blocks: Vec<Block>,
    pub validation: Validation,
}

impl SSAbelianLattice {
    pub fn satisfies_invariants(&self) -> bool {
        let v = &self.validation;
        v.rank == 6 && v.even && v.signature == (1, 5) && v.det_exponent == Some(2 * self.artin)
    }
}

fn check_odd_prime(p: i64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::InvalidParameter("p must be odd".into()));
    }
    Ok(())
}

/// Smallest prime q = 3 mod 8 with (-q | p) = -1 admitting gamma in [0, q) with
/// q | gamma^2 + p; gamma is the smallest such.
pub fn find_hp_params(p: i64) -> Result<HpParams> {
    check_odd_prime(p)?;
    let mut q = 3;
    while q <= PARAM_SEARCH_CAP {
        if is_prime(q) && legendre(-q, p) == -1 {
            if let Some(gamma) = (0..q).find(|g| (g * g + p) % q == 0) {
                return Ok(HpParams { p, q, gamma });
            }
        }
        q += 8;
    }
    Err(Error::SearchCap(format!(
        "no H^(p) parameters for p = {p} with q <= {PARAM_SEARCH_CAP}"
    )))
}

/// The positive definite rank-4 lattice H^(p).
pub fn build_hp(p: i64) -> Result<IntLattice> {
    let HpParams { q, gamma, .. } = find_hp_params(p)?;
    IntLattice::new(vec![
        vec![2, 1, 0, 0],
        vec![1, (q + 1) / 2, 0, gamma],
        vec![0, 0, p * (q + 1) / 2, p],
        vec![0, gamma, p, 2 * (p + gamma * gamma) / q],
    ])
}

/// V_{m,n}^(p): the even-coordinate-sum sublattice of `diag(p^n, 1^(m-n))`
/// glued with half the all-ones vector.
pub fn build_vmn(p: i64, m: usize, n: usize) -> Result<IntLattice> {
    check_odd_prime(p)?;
    if m == 0 || m % 2 != 0 || n % 2 != 0 || n > m {
        return Err(Error::InvalidParameter(format!(
            "V_{{m,n}} needs m positive even and n even with n <= m, got m = {m}, n = {n}"
        )));
    }
    let ambient: Vec<i64> = (0..m).map(|i| if i < n { p } else { 1 }).collect();
    let mut gens: Vec<(Vec<i64>, i64)> = (0..m - 1)
        .map(|i| {
            let mut v = vec![0; m];
            v[i] = 1;
            v[i + 1] = -1;
            (v, 1)
        })
        .collect();
    let mut last = vec![0; m];
    last[m - 1] = 2;
    gens.push((last, 1));
    gens.push((vec![1; m], 2));
    let l = overlattice_from_generators(&RationalGeneratorSet::from_scaled(&gens, ambient))?;
    if !l.is_even() {
        return Err(Error::NotEven(format!(
            "V_{{{m},{n}}}^({p}): glue square ({n}*{p} + {m} - {n})/4 is odd"
        )));
    }
    Ok(l)
}

struct Assembly {
    parts: Vec<(String, IntLattice)>,
}

impl Assembly {
    fn new() -> Self {
        Assembly { parts: Vec::new() }
    }

    fn push(mut self, name: impl Into<String>, l: IntLattice) -> Self {
        self.parts.push((name.into(), l));
        self
    }

    /// The negated direct sum together with its block table.
    fn negated(self) -> Result<(IntLattice, Vec<Block>)> {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (name, l) in &self.parts {
            blocks.push(Block {
                name: name.clone(),
                offset,
                rank: l.rank(),
            });
            offset += l.rank();
        }
        let sum = IntLattice::direct_sum_all(self.parts.iter().map(|(_, l)| l));
        Ok((sum.rescale(-1)?, blocks))
    }
}

/// NS of a supersingular K3 surface with Artin invariant sigma, p > 2.
pub fn build_k3_ns(p: i64, sigma: u32, variant: VIndexVariant) -> Result<SSK3Lattice> {
    if p == 2 {
        return Err(Error::P2Unsupported);
    }
    check_odd_prime(p)?;
    if !(1..=10).contains(&sigma) {
        return Err(Error::InvalidParameter(format!(
            "sigma must lie in 1..=10, got {sigma}"
        )));
    }
    let s = sigma as usize;
    let branch = |e: Error| match e {
        Error::NotEven(msg) => Error::NotEven(format!(
            "{msg} (p = {p}, p mod 4 = {}, sigma = {sigma}, variant {variant:?})",
            p % 4
        )),
        other => other,
    };
    let asm = if sigma == 10 {
        Assembly::new()
            .push(format!("U({p})"), IntLattice::hyperbolic_scaled(p))
            .push(format!("H^({p})"), build_hp(p)?)
            .push(
                format!("V_{{16,16}}^({p})"),
                build_vmn(p, 16, 16).map_err(branch)?,
            )
    } else if p % 4 == 3 && sigma % 2 == 1 {
        Assembly::new().push("U", IntLattice::hyperbolic()).push(
            format!("V_{{20,{}}}^({p})", 2 * s),
            build_vmn(p, 20, 2 * s).map_err(branch)?,
        )
    } else {
        let n = match variant {
            VIndexVariant::Literal => 2 * s,
            VIndexVariant::DiscCorrected => 2 * s - 2,
        };
        Assembly::new()
            .push("U", IntLattice::hyperbolic())
            .push(format!("H^({p})"), build_hp(p)?)
            .push(
                format!("V_{{16,{n}}}^({p})"),
                build_vmn(p, 16, n).map_err(branch)?,
            )
    };
    let (lattice, blocks) = asm.negated()?;
    let validation = Validation::of(&lattice, p, sigma)?;
    Ok(SSK3Lattice {
        p,
        sigma,
        variant,
        lattice,
        blocks,
        validation,
    })
}

/// NS of a supersingular abelian surface with Artin invariant 1 or 2.
pub fn build_abelian_ns(p: i64, artin: u32) -> Result<SSAbelianLattice> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let asm = match (artin, p) {
        (1, 2) => Assembly::new()
            .push("U", IntLattice::hyperbolic())
            .push("D4", IntLattice::d4()),
        (1, _) if p % 4 == 3 => Assembly::new()
            .push("U", IntLattice::hyperbolic())
            .push(format!("V_{{4,2}}^({p})"), build_vmn(p, 4, 2)?),
        (1, _) => Assembly::new()
            .push("U", IntLattice::hyperbolic())
            .push(format!("H^({p})"), build_hp(p)?),
        (2, 2) => Assembly::new()
            .push("U(2)", IntLattice::hyperbolic_scaled(2))
            .push("D4", IntLattice::d4()),
        (2, _) => Assembly::new()
            .push(format!("U({p})"), IntLattice::hyperbolic_scaled(p))
            .push(format!("H^({p})"), build_hp(p)?),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "abelian Artin invariant must be 1 or 2, got {artin}"
            )))
        }
    };
    let (lattice, blocks) = asm.negated()?;
    let validation = Validation::of(&lattice, p, artin)?;
    Ok(SSAbelianLattice {
        p,
        artin,
        lattice,
        blocks,
        validation,
    })
}

/// v_p(|det L|) / 2; 0 for unimodular lattices (range checks are the caller's).
pub fn artin_invariant(l: &IntLattice, p: i64) -> Result<u32> {
    let d = l.determinant();
    match p_power_exponent(&d, p) {
        Some(k) if k % 2 == 0 => Ok(k / 2),
        _ => Err(Error::NotPPrimaryDiscriminant {
            det: d.abs().to_string(),
            p,
        }),
    }
}

/// One row of the literal vs. disc-corrected comparison in the H^(p) branch.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VariantAuditRow {
    pub p: i64,
    pub sigma: u32,
    pub literal: VariantOutcome,
    pub disc_corrected: VariantOutcome,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VariantOutcome {
    pub built: bool,
    pub error: Option<String>,
    pub even: Option<bool>,
    pub abs_det: Option<String>,
    pub sigma_computed: Option<u32>,
    pub matches_requested: bool,
}

impl VariantOutcome {
    fn of(p: i64, r: Result<SSK3Lattice>) -> Self {
        match r {
            Ok(l) => VariantOutcome {
                built: true,
                error: None,
                even: Some(l.validation.even),
                abs_det: Some(l.validation.abs_det_string(p)),
                sigma_computed: l.validation.sigma_computed,
                matches_requested: l.validation.matches_requested,
            },
            Err(e) => VariantOutcome {
                built: false,
                error: Some(e.to_string()),
                even: None,
                abs_det: None,
                sigma_computed: None,
                matches_requested: false,
            },
        }
    }
}

/// Whether (p, sigma) lands in the `U + H^(p) + V_{16,*}` branch.
pub fn in_hp_branch(p: i64, sigma: u32) -> bool {
    sigma < 10 && !(p % 4 == 3 && sigma % 2 == 1)
}

/// Both V-index variants for every (p, sigma) in the H^(p) branch.
pub fn variant_audit(primes: &[i64], sigmas: &[u32]) -> Vec<VariantAuditRow> {
    let mut rows = Vec::new();
    for &p in primes {
        for &sigma in sigmas {
            if !in_hp_branch(p, sigma) {
                continue;
            }
            rows.push(VariantAuditRow {
                p,
                sigma,
                literal: VariantOutcome::of(p, build_k3_ns(p, sigma, VIndexVariant::Literal)),
                disc_corrected: VariantOutcome::of(
                    p,
                    build_k3_ns(p, sigma, VIndexVariant::DiscCorrected),
                ),
            });
        }
    }
    rows
}

/// The variant whose determinant matches the requested sigma, literal first.
pub fn build_k3_ns_matching(p: i64, sigma: u32) -> Result<SSK3Lattice> {
    let literal = build_k3_ns(p, sigma, VIndexVariant::Literal);
    if let Ok(l) = &literal {
        if l.validation.matches_requested && l.validation.even {
            return literal;
        }
    }
    match build_k3_ns(p, sigma, VIndexVariant::DiscCorrected) {
        Ok(l) if l.validation.matches_requested && l.validation.even => Ok(l),
        Ok(l) => Err(Error::Precondition(format!(
            "no variant reproduces sigma = {sigma} for p = {p} (disc-corrected gives |det| = {})",
            l.validation.abs_det_string(p)
        ))),
        Err(e) => Err(e),
    }
}

/// The matching variant when one exists, otherwise the literal lattice.
///
/// For p = 3 mod 4 and even sigma neither index gives an even lattice with
/// |det| = p^(2 sigma); callers that only need some supersingular-type NS
/// lattice use the literal one and read `validation.matches_requested`.
pub fn build_k3_ns_preferred(p: i64, sigma: u32) -> Result<SSK3Lattice> {
    match build_k3_ns_matching(p, sigma) {
        Ok(l) => Ok(l),
        Err(Error::Precondition(_)) | Err(Error::NotEven(_)) => {
            build_k3_ns(p, sigma, VIndexVariant::Literal)
        }
        Err(e) => Err(e),
    }
}
