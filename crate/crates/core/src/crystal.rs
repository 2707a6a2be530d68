//! Slope data of F-isocrystals: Newton polygons from valuations, Hodge
//! polygons, and the slope operations used for cohomology of products,
//! exterior powers and Tate twists.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(a, b))
        }
        None => Ok(Rational64::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Slopes with multiplicities, ascending and distinct.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SlopeMultiset(Vec<(Rational64, u64)>);

impl SlopeMultiset {
    /// Normalizes: sorts, merges equal slopes, drops zero multiplicities.
    pub fn new<I: IntoIterator<Item = (Rational64, u64)>>(entries: I) -> Result<Self> {
        let mut m: BTreeMap<Rational64, u64> = BTreeMap::new();
        for (s, k) in entries {
            if s.is_negative() {
                return Err(Error::InvalidParameter(format!("negative slope {s}")));
            }
            if k > 0 {
                *m.entry(s).or_default() += k;
            }
        }
        Ok(SlopeMultiset(m.into_iter().collect()))
    }

    pub fn single(slope: Rational64, mult: u64) -> Self {
        SlopeMultiset::new([(slope, mult)]).expect("nonnegative slope")
    }

    pub fn entries(&self) -> &[(Rational64, u64)] {
        &self.0
    }

    pub fn rank(&self) -> u64 {
        self.0.iter().map(|(_, k)| k).sum()
    }

    /// Sum of slope times multiplicity, i.e. the endpoint height of the polygon.
    pub fn weight(&self) -> Rational64 {
        self.0.iter().map(|(s, k)| s * Rational64::from_integer(*k as i64)).sum()
    }
}

impl fmt::Display for SlopeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(s, k)| format!("{s}x{k}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `"1/2x4,1x2"`.
impl FromStr for SlopeMultiset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (slope, mult) = part
                .split_once(['x', '*'])
                .ok_or_else(|| Error::Parse(format!("expected slope x multiplicity, got {part:?}")))?;
            let mult: u64 = mult.trim().parse().map_err(|_| Error::Parse(format!("bad multiplicity in {part:?}")))?;
            entries.push((parse_rational(slope)?, mult));
        }
        SlopeMultiset::new(entries)
    }
}

impl Serialize for SlopeMultiset {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(String, u64)> = self.0.iter().map(|(s, k)| (s.to_string(), *k)).collect();
        v.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SlopeMultiset {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<(String, u64)> = Vec::deserialize(de)?;
        let mut entries = Vec::with_capacity(v.len());
        for (s, k) in v {
            entries.push((parse_rational(&s).map_err(serde::de::Error::custom)?, k));
        }
        SlopeMultiset::new(entries).map_err(serde::de::Error::custom)
    }
}

/// Vertices of a lower convex polygon starting at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(i64, Rational64)>,
}

impl NewtonPolygon {
    pub fn rank(&self) -> i64 {
        self.vertices.last().map_or(0, |v| v.0)
    }
}

impl Serialize for NewtonPolygon {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(i64, String)> = self.vertices.iter().map(|(x, y)| (*x, y.to_string())).collect();
        v.serialize(ser)
    }
}

/// Hodge numbers h_j at integer levels j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeNumbers(pub Vec<(i64, u64)>);

impl HodgeNumbers {
    pub fn polygon(&self) -> Result<NewtonPolygon> {
        let s = SlopeMultiset::new(self.0.iter().map(|&(j, h)| (Rational64::from_integer(j), h)))?;
        Ok(polygon(&s))
    }

    pub fn rank(&self) -> u64 {
        self.0.iter().map(|(_, h)| h).sum()
    }
}

// cross product sign of (b - a) x (c - a)
fn turn(a: (i64, Rational64), b: (i64, Rational64), c: (i64, Rational64)) -> Rational64 {
    Rational64::from_integer(b.0 - a.0) * (c.1 - a.1) - Rational64::from_integer(c.0 - a.0) * (b.1 - a.1)
}

/// Lower convex hull of the points (i, vals[i]); `None` stands for infinite valuation.
pub fn newton_from_valuations(vals: &[Option<i64>]) -> Result<NewtonPolygon> {
    if vals.is_empty() {
        return Err(Error::InvalidParameter("empty valuation list".into()));
    }
    if vals[0] != Some(0) {
        return Err(Error::InvalidParameter(format!("vals[0] must be 0, got {:?}", vals[0])));
    }
    if vals.last().unwrap().is_none() {
        return Err(Error::InvalidParameter("last valuation must be finite".into()));
    }
    let mut hull: Vec<(i64, Rational64)> = Vec::new();
    for (i, v) in vals.iter().enumerate() {
        let Some(v) = v else { continue };
        let pt = (i as i64, Rational64::from_integer(*v));
        // pop while the last two points and pt do not turn strictly left
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= Rational64::zero() {
            hull.pop();
        }
        hull.push(pt);
    }
    Ok(NewtonPolygon { vertices: hull })
}

pub fn slopes(np: &NewtonPolygon) -> SlopeMultiset {
    let entries = np.vertices.windows(2).map(|w| {
        let dx = w[1].0 - w[0].0;
        ((w[1].1 - w[0].1) / Rational64::from_integer(dx), dx as u64)
    });
    SlopeMultiset::new(entries).expect("hull slopes from valuations are >= 0")
}

pub fn polygon(s: &SlopeMultiset) -> NewtonPolygon {
    let mut vertices = vec![(0, Rational64::zero())];
    let (mut x, mut y) = (0i64, Rational64::zero());
    for &(slope, k) in s.entries() {
        x += k as i64;
        y += slope * Rational64::from_integer(k as i64);
        vertices.push((x, y));
    }
    NewtonPolygon { vertices }
}

/// A single slope equal to i/2.
pub fn is_supersingular(s: &SlopeMultiset, degree: i64) -> bool {
    matches!(s.entries(), [(slope, _)] if *slope == Rational64::new(degree, 2))
}

/// Newton polygon equals Hodge polygon.
pub fn is_ordinary(np: &NewtonPolygon, h: &HodgeNumbers) -> Result<bool> {
    let hp = h.polygon()?;
    if np.rank() != hp.rank() {
        return Err(Error::DimensionMismatch { expected: np.rank() as usize, got: hp.rank() as usize });
    }
    Ok(slopes(np) == slopes(&hp))
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Slopes of the k-th exterior power: sums over k-element sub-multisets.
pub fn wedge_slopes(s: &SlopeMultiset, k: u64) -> Result<SlopeMultiset> {
    let rank = s.rank();
    if k > rank {
        return Err(Error::InvalidParameter(format!("wedge power {k} exceeds rank {rank}")));
    }
    let k = k as usize;
    // dp[j]: slope sum -> number of j-element choices
    let mut dp: Vec<BTreeMap<Rational64, u128>> = vec![BTreeMap::new(); k + 1];
    dp[0].insert(Rational64::zero(), 1);
    for &(slope, m) in s.entries() {
        let mut next: Vec<BTreeMap<Rational64, u128>> = vec![BTreeMap::new(); k + 1];
        for (j, row) in dp.iter().enumerate() {
            for (sum, count) in row {
                for t in 0..=(m as usize).min(k - j) {
                    let key = *sum + slope * Rational64::from_integer(t as i64);
                    *next[j + t].entry(key).or_default() += count * binomial(m, t as u64);
                }
            }
        }
        dp = next;
    }
    let entries = dp[k]
        .iter()
        .map(|(s, c)| u64::try_from(*c).map(|c| (*s, c)))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Overflow("wedge multiplicity"))?;
    SlopeMultiset::new(entries)
}

/// Twist by (-n): every slope shifts by n.
pub fn tate_twist(s: &SlopeMultiset, n: i64) -> Result<SlopeMultiset> {
    let shift = Rational64::from_integer(n);
    if let Some((lo, _)) = s.entries().first() {
        if (lo + shift).is_negative() {
            return Err(Error::InvalidParameter(format!("twist by {n} makes slope {lo} negative")));
        }
    }
    SlopeMultiset::new(s.entries().iter().map(|&(x, k)| (x + shift, k)))
}

/// H^2 of a Hilbert scheme or generalized Kummer of dimension >= 4:
/// the surface H^2 plus one class of slope 1.
pub fn hilb_or_kummer_h2(s_surface: &SlopeMultiset) -> SlopeMultiset {
    SlopeMultiset::new(s_surface.entries().iter().copied().chain([(Rational64::from_integer(1), 1)]))
        .expect("slopes stay nonnegative")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    fn fin(v: &[i64]) -> Vec<Option<i64>> {
        v.iter().map(|&x| Some(x)).collect()
    }

    #[test]
    fn newton_examples() {
        let np = newton_from_valuations(&fin(&[0, 1, 2])).unwrap();
        assert_eq!(slopes(&np), SlopeMultiset::single(r(1, 1), 2));
        let np = newton_from_valuations(&fin(&[0, 0, 1])).unwrap();
        assert_eq!(slopes(&np), SlopeMultiset::new([(r(0, 1), 1), (r(1, 1), 1)]).unwrap());
        let line: Vec<i64> = (0..=22).collect();
        let np = newton_from_valuations(&fin(&line)).unwrap();
        assert_eq!(slopes(&np), SlopeMultiset::single(r(1, 1), 22));
        assert_eq!(np.vertices.len(), 2);
        assert!(newton_from_valuations(&[]).is_err());
        let np = newton_from_valuations(&[Some(0), None, Some(1)]).unwrap();
        assert_eq!(slopes(&np), SlopeMultiset::single(r(1, 2), 2));
    }

    #[test]
    fn round_trips() {
        for vals in [fin(&[0, 1, 2]), fin(&[0, 0, 1]), fin(&(0..=22).collect::<Vec<_>>())] {
            let np = newton_from_valuations(&vals).unwrap();
            assert_eq!(polygon(&slopes(&np)), np);
        }
    }

    #[test]
    fn supersingularity() {
        assert!(is_supersingular(&SlopeMultiset::single(r(1, 1), 22), 2));
        assert!(is_supersingular(&SlopeMultiset::single(r(1, 2), 4), 1));
        let ord = SlopeMultiset::new([(r(0, 1), 1), (r(1, 1), 20), (r(2, 1), 1)]).unwrap();
        assert!(!is_supersingular(&ord, 2));
    }

    #[test]
    fn ordinarity() {
        let k3_hodge = HodgeNumbers(vec![(0, 1), (1, 20), (2, 1)]);
        let ord = SlopeMultiset::new([(r(0, 1), 1), (r(1, 1), 20), (r(2, 1), 1)]).unwrap();
        assert!(is_ordinary(&polygon(&ord), &k3_hodge).unwrap());
        assert!(!is_ordinary(&polygon(&SlopeMultiset::single(r(1, 1), 22)), &k3_hodge).unwrap());
        let one = HodgeNumbers(vec![(0, 1)]);
        assert!(is_ordinary(&one.polygon().unwrap(), &one).unwrap());
        assert!(is_ordinary(&polygon(&SlopeMultiset::single(r(1, 1), 2)), &k3_hodge).is_err());
    }

    #[test]
    fn wedges() {
        let h1 = SlopeMultiset::single(r(1, 2), 4);
        assert_eq!(wedge_slopes(&h1, 2).unwrap(), SlopeMultiset::single(r(1, 1), 6));
        assert_eq!(wedge_slopes(&h1, 1).unwrap(), h1);
        let ell = SlopeMultiset::new([(r(0, 1), 1), (r(1, 1), 1)]).unwrap();
        assert_eq!(wedge_slopes(&ell, 2).unwrap(), SlopeMultiset::single(r(1, 1), 1));
        assert_eq!(wedge_slopes(&h1, 0).unwrap(), SlopeMultiset::single(r(0, 1), 1));
        assert!(wedge_slopes(&h1, 5).is_err());
        for n in 0..=4 {
            assert!(is_supersingular(&wedge_slopes(&h1, n).unwrap(), n as i64));
        }
    }

    #[test]
    fn twists() {
        let k3 = SlopeMultiset::single(r(1, 1), 22);
        assert_eq!(tate_twist(&k3, 1).unwrap(), SlopeMultiset::single(r(2, 1), 22));
        assert_eq!(tate_twist(&k3, 0).unwrap(), k3);
        assert_eq!(tate_twist(&SlopeMultiset::single(r(1, 2), 4), 1).unwrap(), SlopeMultiset::single(r(3, 2), 4));
        assert!(tate_twist(&k3, -2).is_err());
    }

    #[test]
    fn h2_of_hyperkahlers() {
        assert_eq!(hilb_or_kummer_h2(&SlopeMultiset::single(r(1, 1), 22)), SlopeMultiset::single(r(1, 1), 23));
        assert_eq!(hilb_or_kummer_h2(&SlopeMultiset::single(r(1, 1), 6)), SlopeMultiset::single(r(1, 1), 7));
        let ord = SlopeMultiset::new([(r(0, 1), 1), (r(1, 1), 20), (r(2, 1), 1)]).unwrap();
        let out = hilb_or_kummer_h2(&ord);
        assert_eq!(out, SlopeMultiset::new([(r(0, 1), 1), (r(1, 1), 21), (r(2, 1), 1)]).unwrap());
        assert!(!is_supersingular(&out, 2));
    }

    #[test]
    fn parse_and_json() {
        let s: SlopeMultiset = "1/2x4".parse().unwrap();
        assert_eq!(s, SlopeMultiset::single(r(1, 2), 4));
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"[["1/2",4]]"#);
        let back: SlopeMultiset = serde_json::from_str(r#"[["1/2",4]]"#).unwrap();
        assert_eq!(back, s);
        assert!("1/0x3".parse::<SlopeMultiset>().is_err());
    }
}
