//! Supersingular abelian motives in canonical form
//! `sum 1(-i)^{t_i} + sum h1(E)(-i)^{e_i}`, with the Sym / wedge / Schur
//! calculus on h1(E), Hilbert-scheme and generalized-Kummer decompositions,
//! and generating-function oracles for their Betti numbers.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partition::{partitions, Partition};

fn add_u64(a: u64, b: u64) -> Result<u64> {
    a.checked_add(b).ok_or(Error::Overflow("motive multiplicity"))
}

fn mul_u64(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b).ok_or(Error::Overflow("motive multiplicity"))
}

/// Largest integer emitted as a JSON number.
pub const JSON_SAFE_MAX: u64 = 1 << 53;

fn serialize_counts<S: Serializer>(m: &BTreeMap<u32, u64>, ser: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = ser.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        if *v > JSON_SAFE_MAX {
            map.serialize_entry(&k.to_string(), &v.to_string())?;
        } else {
            map.serialize_entry(&k.to_string(), v)?;
        }
    }
    map.end()
}

/// Multiplicities of Tate motives and of twisted copies of h1(E).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SSMotive {
    #[serde(serialize_with = "serialize_counts")]
    pub tate: BTreeMap<u32, u64>,
    #[serde(serialize_with = "serialize_counts")]
    pub h1e: BTreeMap<u32, u64>,
}

impl SSMotive {
    pub fn zero() -> Self {
        SSMotive::default()
    }

    /// 1(-i)^{mult}.
    pub fn tate(i: u32, mult: u64) -> Self {
        let mut m = SSMotive::zero();
        if mult > 0 {
            m.tate.insert(i, mult);
        }
        m
    }

    /// h1(E)(-i)^{mult}.
    pub fn h1(i: u32, mult: u64) -> Self {
        let mut m = SSMotive::zero();
        if mult > 0 {
            m.h1e.insert(i, mult);
        }
        m
    }

    pub fn unit() -> Self {
        SSMotive::tate(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.tate.is_empty() && self.h1e.is_empty()
    }

    pub fn is_tate_type(&self) -> bool {
        self.h1e.is_empty()
    }

    /// Dimension of any realization.
    pub fn rank(&self) -> u64 {
        self.tate.values().sum::<u64>() + 2 * self.h1e.values().sum::<u64>()
    }

    pub fn add(&self, other: &SSMotive) -> Result<SSMotive> {
        let mut out = self.clone();
        for (k, v) in &other.tate {
            let e = out.tate.entry(*k).or_default();
            *e = add_u64(*e, *v)?;
        }
        for (k, v) in &other.h1e {
            let e = out.h1e.entry(*k).or_default();
            *e = add_u64(*e, *v)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: u64) -> Result<SSMotive> {
        if k == 0 {
            return Ok(SSMotive::zero());
        }
        let f = |m: &BTreeMap<u32, u64>| -> Result<BTreeMap<u32, u64>> {
            m.iter().map(|(i, v)| Ok((*i, mul_u64(*v, k)?))).collect()
        };
        Ok(SSMotive { tate: f(&self.tate)?, h1e: f(&self.h1e)? })
    }

    /// M(-n).
    pub fn twist(&self, n: u32) -> SSMotive {
        SSMotive {
            tate: self.tate.iter().map(|(i, v)| (i + n, *v)).collect(),
            h1e: self.h1e.iter().map(|(i, v)| (i + n, *v)).collect(),
        }
    }

    /// Uses h1 (x) h1 = 1(-1)^4.
    pub fn tensor(&self, other: &SSMotive) -> Result<SSMotive> {
        let mut out = SSMotive::zero();
        let bump = |m: &mut BTreeMap<u32, u64>, i: u32, v: u64| -> Result<()> {
            let e = m.entry(i).or_default();
            *e = add_u64(*e, v)?;
            Ok(())
        };
        for (a, x) in &self.tate {
            for (b, y) in &other.tate {
                bump(&mut out.tate, a + b, mul_u64(*x, *y)?)?;
            }
            for (b, y) in &other.h1e {
                bump(&mut out.h1e, a + b, mul_u64(*x, *y)?)?;
            }
        }
        for (a, x) in &self.h1e {
            for (b, y) in &other.tate {
                bump(&mut out.h1e, a + b, mul_u64(*x, *y)?)?;
            }
            for (b, y) in &other.h1e {
                bump(&mut out.tate, a + b + 1, mul_u64(4, mul_u64(*x, *y)?)?)?;
            }
        }
        Ok(out)
    }

    /// b_{2i} = tate[i], b_{2i+1} = 2 h1e[i]; empty for the zero motive.
    pub fn betti_vector(&self) -> Vec<u64> {
        let top = self
            .tate
            .keys()
            .map(|i| 2 * i)
            .chain(self.h1e.keys().map(|i| 2 * i + 1))
            .max();
        let Some(top) = top else { return Vec::new() };
        let mut b = vec![0; top as usize + 1];
        for (i, v) in &self.tate {
            b[2 * *i as usize] = *v;
        }
        for (i, v) in &self.h1e {
            b[2 * *i as usize + 1] = 2 * v;
        }
        b
    }
}

impl fmt::Display for SSMotive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, v) in &self.tate {
            let base = if *i == 0 { "1".to_string() } else { format!("1(-{i})") };
            terms.push(if *v == 1 { base } else { format!("{base}^{v}") });
        }
        for (i, v) in &self.h1e {
            let base = if *i == 0 { "h1".to_string() } else { format!("h1(-{i})") };
            terms.push(if *v == 1 { base } else { format!("{base}^{v}") });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Sym^k h1(E): 1(-j)^{2j+1} for k = 2j, h1(E)(-j)^{j+1} for k = 2j+1.
pub fn sym_h1e(k: u32) -> SSMotive {
    let j = k / 2;
    if k % 2 == 0 {
        SSMotive::tate(j, 2 * j as u64 + 1)
    } else {
        SSMotive::h1(j, j as u64 + 1)
    }
}

/// The multiplicities j(2j+1) and (j+1)(2j+1) as sometimes quoted for
/// Sym^k h1(E); kept only to compare against the rank law.
pub fn sym_h1e_quoted(k: u32) -> SSMotive {
    let j = (k / 2) as u64;
    if k % 2 == 0 {
        SSMotive::tate(k / 2, j * (2 * j + 1))
    } else {
        SSMotive::h1(k / 2, (j + 1) * (2 * j + 1))
    }
}

pub fn wedge_h1e(k: u32) -> SSMotive {
    match k {
        0 => SSMotive::unit(),
        1 => SSMotive::h1(0, 1),
        2 => SSMotive::tate(1, 1),
        _ => SSMotive::zero(),
    }
}

/// S_lambda h1(E): zero for three or more rows, else 1(-a) (x) Sym^b for lambda = (a+b, a).
pub fn schur_h1e(lambda: &Partition) -> SSMotive {
    match lambda.parts() {
        [] => SSMotive::unit(),
        [k] => sym_h1e(*k),
        [top, a] => sym_h1e(top - a).twist(*a),
        _ => SSMotive::zero(),
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as u64
}

/// h(A) for a supersingular abelian variety of dimension g, from Betti numbers C(2g, i).
pub fn ssav_motive_direct(g: u32) -> SSMotive {
    let n = 2 * g as u64;
    let mut m = SSMotive::zero();
    for i in 0..=n {
        let b = binomial(n, i);
        if i % 2 == 0 {
            m.tate.insert((i / 2) as u32, b);
        } else {
            m.h1e.insert((i / 2) as u32, b / 2);
        }
    }
    m
}

/// h^i(A) as a sum over lambda |- i of S_lambda h1(E) tensor S_{lambda'} of a g-dimensional space.
pub fn ssav_motive_schur_degree(g: u32, i: u32) -> Result<SSMotive> {
    let mut m = SSMotive::zero();
    for lambda in partitions(i) {
        let d = lambda.transpose().schur_dimension(g);
        if d > 0 {
            m = m.add(&schur_h1e(&lambda).scale(d)?)?;
        }
    }
    Ok(m)
}

pub fn ssav_motive_schur(g: u32) -> Result<SSMotive> {
    let mut m = SSMotive::zero();
    for i in 0..=2 * g {
        m = m.add(&ssav_motive_schur_degree(g, i)?)?;
    }
    Ok(m)
}

fn check_odd_even(b: &[u64]) -> Result<()> {
    for (i, v) in b.iter().enumerate() {
        if i % 2 == 1 && v % 2 == 1 {
            return Err(Error::InvalidParameter(format!("odd Betti number b_{i} = {v} is not even")));
        }
    }
    Ok(())
}

pub fn canonical_from_betti(b: &[u64]) -> Result<SSMotive> {
    check_odd_even(b)?;
    let mut m = SSMotive::zero();
    for (i, v) in b.iter().enumerate() {
        if *v == 0 {
            continue;
        }
        if i % 2 == 0 {
            m.tate.insert((i / 2) as u32, *v);
        } else {
            m.h1e.insert((i / 2) as u32, v / 2);
        }
    }
    Ok(m)
}

/// Sym^k of a Tate motive: twist-t multiplicity counts size-k multisets of
/// Tate summands with twist sum t. Coefficient of y^k in prod_j (1 - x^j y)^{-c_j}.
pub fn sym_tate(m: &SSMotive, k: u32) -> Result<SSMotive> {
    if !m.is_tate_type() {
        return Err(Error::InvalidParameter("Sym of a motive with an h1(E) part is not modelled".into()));
    }
    let k = k as usize;
    // poly[y][x]
    let mut poly: Vec<BTreeMap<u32, u64>> = vec![BTreeMap::new(); k + 1];
    poly[0].insert(0, 1);
    for (&j, &c) in &m.tate {
        for _ in 0..c {
            // multiply by 1/(1 - x^j y), increasing y
            for y in 1..=k {
                let prev: Vec<(u32, u64)> = poly[y - 1].iter().map(|(a, b)| (*a, *b)).collect();
                for (x, v) in prev {
                    let e = poly[y].entry(x + j).or_default();
                    *e = add_u64(*e, v)?;
                }
            }
        }
    }
    Ok(SSMotive { tate: std::mem::take(&mut poly[k]), h1e: BTreeMap::new() })
}

/// h(S^[n]) for a surface S whose motive is of Tate type:
/// sum over lambda |- n of tensor_m Sym^{a_m}(h(S))(-(m-1) a_m).
pub fn hilb_motive(surface: &SSMotive, n: u32) -> Result<SSMotive> {
    if !surface.is_tate_type() {
        return Err(Error::InvalidParameter("surface motive must be of Tate type".into()));
    }
    let mut total = SSMotive::zero();
    for lambda in partitions(n) {
        let mut term = SSMotive::unit();
        for (m, a) in lambda.multiplicities() {
            term = term.tensor(&sym_tate(surface, a)?.twist((m - 1) * a))?;
        }
        total = total.add(&term)?;
    }
    Ok(total)
}

/// Betti numbers of S^[n] from the product formula
/// prod_m prod_i (1 - t^{2m-2+i} q^m)^{-b_i}, for b with vanishing odd part.
pub fn gottsche_poincare(b_surface: &[u64], n: u32) -> Result<Vec<u64>> {
    if b_surface.len() != 5 || b_surface[1] != 0 || b_surface[3] != 0 {
        return Err(Error::InvalidParameter("surface Betti vector must be (b0, 0, b2, 0, b4)".into()));
    }
    let n = n as usize;
    let width = 4 * n + 1;
    // coeff[q][t]
    let mut coeff = vec![vec![0u64; width]; n + 1];
    coeff[0][0] = 1;
    for m in 1..=n {
        for i in [0usize, 2, 4] {
            let e = 2 * m - 2 + i;
            for _ in 0..b_surface[i] {
                // divide by (1 - t^e q^m)
                for q in m..=n {
                    for t in e..width {
                        let v = coeff[q - m][t - e];
                        coeff[q][t] = add_u64(coeff[q][t], v)?;
                    }
                }
            }
        }
    }
    Ok(std::mem::take(&mut coeff[n]))
}

/// Betti vector of a supersingular K3 surface.
pub const K3_BETTI: [u64; 5] = [1, 0, 22, 0, 1];

pub fn k3_motive() -> SSMotive {
    canonical_from_betti(&K3_BETTI).expect("valid Betti vector")
}

/// One summand A_0^lambda (a union of `copies` abelian varieties A^power) in the
/// decomposition of a generalized Kummer of dimension 2n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerSummand {
    pub lambda: Partition,
    pub copies: u64,
    pub power: u32,
    /// |lambda| - n.
    pub twist: i64,
}

/// lambda |- n+1: copies gcd(lambda)^4, power |lambda| - 1, twist |lambda| - n.
pub fn kummer_inventory(n: u32) -> Result<Vec<KummerSummand>> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(partitions(n + 1)
        .into_iter()
        .map(|lambda| {
            let l = lambda.len() as u32;
            let g = lambda.gcd() as u64;
            KummerSummand { copies: g.pow(4), power: l - 1, twist: l as i64 - n as i64, lambda }
        })
        .collect())
}

/// Comparison of the summand inventory with the Betti oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerAudit {
    pub n: u32,
    /// sum of copies * 16^power.
    pub inventory_dimension: u64,
    /// sum of kummer_betti(n).
    pub oracle_dimension: u64,
    pub dimensions_agree: bool,
    /// Summands whose cohomology, shifted by the recorded twist, leaves [0, 4n].
    pub out_of_range: Vec<Partition>,
    pub findings: Vec<String>,
}

pub fn kummer_audit(n: u32) -> Result<KummerAudit> {
    let inv = kummer_inventory(n)?;
    let mut inventory_dimension = 0u64;
    let mut out_of_range = Vec::new();
    for s in &inv {
        inventory_dimension = add_u64(inventory_dimension, mul_u64(s.copies, 16u64.pow(s.power))?)?;
        // h(A^power)(twist) sits in degrees -2 twist .. -2 twist + 4 power
        let lo = -2 * s.twist;
        let hi = lo + 4 * s.power as i64;
        if lo < 0 || hi > 4 * n as i64 {
            out_of_range.push(s.lambda.clone());
        }
    }
    let oracle_dimension: u64 = kummer_betti(n)?.iter().sum();
    let dimensions_agree = inventory_dimension == oracle_dimension;
    let mut findings = Vec::new();
    if !dimensions_agree {
        findings.push(format!(
            "summands without symmetric-group invariants have total dimension {inventory_dimension}, \
             but dim H*(K_{n}) = {oracle_dimension}"
        ));
    }
    if !out_of_range.is_empty() {
        let names: Vec<String> = out_of_range.iter().map(|l| l.to_string()).collect();
        findings.push(format!(
            "with twist |lambda| - n the summands {} fall outside degrees [0, {}]; twist |lambda| - n - 1 keeps them inside",
            names.join(", "),
            4 * n
        ));
    }
    Ok(KummerAudit { n, inventory_dimension, oracle_dimension, dimensions_agree, out_of_range, findings })
}

type Poly = Vec<i128>;

fn poly_mul(a: &[i128], b: &[i128]) -> Result<Poly> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = x
                .checked_mul(*y)
                .and_then(|v| out[i + j].checked_add(v))
                .ok_or(Error::Overflow("Kummer Betti polynomial"))?;
        }
    }
    Ok(out)
}

// Poincaré polynomials of the graded-symmetric powers Sym^0..=Sym^k of a space
// with Betti numbers b: prod_{i odd} (1 + z^i q)^{b_i} prod_{i even} (1 - z^i q)^{-b_i}.
fn super_sym_powers(b: &[u64], k: usize) -> Result<Vec<Poly>> {
    let deg = (b.len() - 1) * k + 1;
    let mut coeff: Vec<Poly> = vec![vec![0; deg]; k + 1];
    coeff[0][0] = 1;
    for (i, &bi) in b.iter().enumerate() {
        for _ in 0..bi {
            if i % 2 == 1 {
                // times (1 + z^i q), decreasing q so each factor is used once
                for q in (1..=k).rev() {
                    for t in (i..deg).rev() {
                        coeff[q][t] += coeff[q - 1][t - i];
                    }
                }
            } else {
                for q in 1..=k {
                    for t in i..deg {
                        coeff[q][t] += coeff[q - 1][t - i];
                    }
                }
            }
        }
    }
    Ok(coeff)
}

// Exact division by (1 + z)^4.
fn divide_by_one_plus_z_fourth(mut p: Poly) -> Result<Poly> {
    for _ in 0..4 {
        // synthetic division by (z + 1), highest degree first
        let n = p.len();
        if n < 2 {
            return Err(Error::Internal("Kummer Betti polynomial too short to divide by (1+z)^4".into()));
        }
        let mut q = vec![0i128; n - 1];
        let mut carry = 0i128;
        for d in (1..n).rev() {
            carry = p[d] - carry;
            q[d - 1] = carry;
        }
        if p[0] != q[0] {
            return Err(Error::Internal("Kummer Betti polynomial is not divisible by (1+z)^4".into()));
        }
        p = q;
    }
    Ok(p)
}

/// Betti numbers of the generalized Kummer K_n(A) of an abelian surface:
/// sum over alpha |- n+1 of gcd(alpha)^4 z^{2(n+1-|alpha|)} prod_m P(Sym^{a_m} A) / (1+z)^4.
pub fn kummer_betti(n: u32) -> Result<Vec<u64>> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let np = (n + 1) as usize;
    let sym = super_sym_powers(&[1, 4, 6, 4, 1], np)?;
    let mut total: Poly = vec![0; 4 * np + 1];
    for alpha in partitions(n + 1) {
        let g = alpha.gcd() as i128;
        let mut term: Poly = vec![g.pow(4)];
        for (_, a) in alpha.multiplicities() {
            term = poly_mul(&term, &sym[a as usize])?;
        }
        let shift = 2 * (np - alpha.len());
        for (d, c) in term.iter().enumerate() {
            if *c != 0 {
                let slot = total
                    .get_mut(d + shift)
                    .ok_or_else(|| Error::Internal("Kummer Betti degree overflow".into()))?;
                *slot += c;
            }
        }
    }
    let q = divide_by_one_plus_z_fourth(total)?;
    let mut out: Vec<u64> = Vec::with_capacity(q.len());
    for c in q {
        out.push(u64::try_from(c).map_err(|_| Error::Internal(format!("negative Betti number {c}")))?);
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    if out.len() != 4 * n as usize + 1 {
        return Err(Error::Internal(format!("K_{n} Betti vector has length {}", out.len())));
    }
    Ok(out)
}

/// Chow-group ranks implied by the Betti numbers of a variety with
/// supersingular abelian motive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowRow {
    pub codim: u32,
    /// rank of CH^i modulo algebraic equivalence, b_{2i}.
    pub ch0_rank: u64,
    /// dimension of the supersingular abelian variety Ab^i, b_{2i-1} / 2.
    pub ab_dim: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowReport {
    pub rows: Vec<ChowRow>,
    /// All odd Betti numbers vanish: the motive is of Tate type.
    pub tate_type: bool,
}

pub fn chow_rank_report(b: &[u64]) -> Result<ChowReport> {
    check_odd_even(b)?;
    if b.is_empty() || b.len() % 2 == 0 {
        return Err(Error::InvalidParameter(format!("Betti vector must have odd length, got {}", b.len())));
    }
    let d = (b.len() - 1) / 2;
    let rows = (0..=d)
        .map(|i| ChowRow {
            codim: i as u32,
            ch0_rank: b[2 * i],
            ab_dim: if i == 0 { 0 } else { b[2 * i - 1] / 2 },
        })
        .collect();
    let tate_type = b.iter().skip(1).step_by(2).all(|&x| x == 0);
    Ok(ChowReport { rows, tate_type })
}
