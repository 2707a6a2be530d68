//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails. Every tolerance is a named constant below.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use supersingular::arith::{first_primes, is_prime, p_power_exponent, primes_up_to};
use supersingular::catalog::{
    build_abelian_ns, build_hp, build_k3_ns, build_k3_ns_preferred, variant_audit, VIndexVariant,
};
use supersingular::crystal::{
    hilb_or_kummer_h2, is_supersingular, newton_from_valuations, slopes, wedge_slopes, SlopeMultiset,
};
use supersingular::lattice::search_representation;
use supersingular::motive::{
    gottsche_poincare, hilb_motive, k3_motive, kummer_audit, kummer_betti, ssav_motive_direct, ssav_motive_schur,
    sym_h1e, sym_h1e_quoted, K3_BETTI,
};
use supersingular::mukai::{MukaiLattice, MukaiVector};
use supersingular::pipeline::sample_mukai_vector;
use supersingular::search::{find_elliptic_class, find_untwisting_pair, SearchLimits, UntwistCase};
use supersingular::{IntLattice, LatVec};

const C1_RUNTIME: Duration = Duration::from_secs(10);
const C4_RUNTIME: Duration = Duration::from_secs(60);
const C7_RUNTIME: Duration = Duration::from_secs(30);
const C9_RUNTIME: Duration = Duration::from_secs(5);
const C3_CASES_PER_LATTICE: usize = 10_000;
const C4_VECTORS_PER_CELL: usize = 100;
const C4_HEIGHT_CAP: i64 = 16;
const C6_RANDOM_HULLS: usize = 1_000;
const C6_MAX_RANK: usize = 24;
const SEED: u64 = 20_240_601;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// Laplace expansion along the first row; independent of the Bareiss code.
fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    if n == 1 {
        return BigInt::from(m[0][0]);
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| *x).collect()).collect();
        let term = BigInt::from(m[0][j]) * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn odd_primes_to_50() -> Vec<i64> {
    primes_up_to(50).into_iter().filter(|&p| p > 2).collect()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    for p in odd_primes_to_50() {
        let hp = build_hp(p).map_err(e2s)?;
        let det = hp.determinant();
        ensure(det == cofactor_det(hp.gram()), || format!("H^({p}): Bareiss {det} vs cofactor oracle"))?;
        ensure(hp.is_even() && det.abs() == BigInt::from(p * p), || format!("H^({p}): det {det}"))?;
        let mut sigmas: Vec<u32> = if p % 4 == 3 { vec![1, 3, 5, 7, 9] } else { vec![] };
        sigmas.push(10);
        for sigma in sigmas {
            let k3 = build_k3_ns(p, sigma, VIndexVariant::Literal).map_err(e2s)?;
            let v = &k3.validation;
            ensure(
                v.rank == 22 && v.even && v.signature == (1, 21) && v.det_exponent == Some(2 * sigma),
                || format!("K3 p={p} sigma={sigma}: {v:?}"),
            )?;
            checked += 1;
        }
    }
    for p in first_primes(25) {
        for artin in [1, 2] {
            let a = build_abelian_ns(p, artin).map_err(e2s)?;
            let v = &a.validation;
            ensure(
                v.rank == 6 && v.even && v.signature == (1, 5) && v.det_exponent == Some(2 * artin),
                || format!("abelian p={p} artin={artin}: {v:?}"),
            )?;
            checked += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < C1_RUNTIME, || format!("runtime {t:?} >= {C1_RUNTIME:?}"))?;
    Ok(format!("{checked} catalog lattices, {t:.2?}"))
}

fn criterion_2() -> Check {
    let primes: Vec<i64> = odd_primes_to_50().into_iter().filter(|p| p % 4 == 1).collect();
    let rows = variant_audit(&primes, &(1..=9).collect::<Vec<_>>());
    println!("    {:>3} {:>5} | {:>8} {:>6} {:>5} | {:>8} {:>6} {:>5}", "p", "sigma", "literal", "even", "sigma", "corrected", "even", "sigma");
    let mut corrected_ok = 0;
    for r in &rows {
        let show = |o: &supersingular::catalog::VariantOutcome| {
            (
                o.abs_det.clone().unwrap_or_else(|| "-".into()),
                o.even.map_or("-".to_string(), |b| b.to_string()),
                o.sigma_computed.map_or("-".to_string(), |s| s.to_string()),
            )
        };
        let (ld, le, ls) = show(&r.literal);
        let (cd, ce, cs) = show(&r.disc_corrected);
        println!("    {:>3} {:>5} | {:>8} {:>6} {:>5} | {:>8} {:>6} {:>5}", r.p, r.sigma, ld, le, ls, cd, ce, cs);
        if r.disc_corrected.built {
            let want = format!("{}^{}", r.p, 2 * r.sigma);
            ensure(r.disc_corrected.abs_det.as_deref() == Some(want.as_str()), || {
                format!("p={} sigma={}: disc-corrected |det| = {:?}, expected {want}", r.p, r.sigma, r.disc_corrected.abs_det)
            })?;
            corrected_ok += 1;
        }
    }
    let literal_off: usize = rows.iter().filter(|r| !r.literal.matches_requested).count();
    Ok(format!(
        "{} rows; disc-corrected reproduces |det| = p^(2 sigma) in {corrected_ok}; literal misses in {literal_off}",
        rows.len()
    ))
}

fn random_vec<R: Rng>(rng: &mut R, rank: usize, h: i64) -> LatVec {
    LatVec((0..rank).map(|_| rng.gen_range(-h..=h)).collect())
}

fn random_mukai<R: Rng>(rng: &mut R, rank: usize) -> MukaiVector {
    MukaiVector { r: rng.gen_range(-20..=20), c1: random_vec(rng, rank, 4), s: rng.gen_range(-20..=20) }
}

fn criterion_3() -> Check {
    let mut lattices: Vec<(String, IntLattice, i64)> = Vec::new();
    for (p, s) in [(3, 1), (5, 1), (7, 3), (13, 2)] {
        lattices.push((format!("K3 p={p} sigma={s}"), build_k3_ns_preferred(p, s).map_err(e2s)?.lattice, p));
    }
    for (p, a) in [(5, 1), (3, 2), (2, 1)] {
        lattices.push((format!("abelian p={p} artin={a}"), build_abelian_ns(p, a).map_err(e2s)?.lattice, p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut total = 0;
    for (name, ns, p) in &lattices {
        let m = MukaiLattice::new(ns);
        let rank = ns.rank();
        // (-2)-classes: (1, 0, 1) and, when the lattice has one, (0, C, 0) with C^2 = -2
        let mut spherical = vec![MukaiVector::structure_sheaf(rank)];
        if let Ok(c) = search_representation(ns, -2, 4, 100_000, |_| true) {
            spherical.push(MukaiVector { r: 0, c1: c.vector, s: 0 });
        }
        for _ in 0..C3_CASES_PER_LATTICE {
            let v = random_mukai(&mut rng, rank);
            let w = random_mukai(&mut rng, rank);
            let l = random_vec(&mut rng, rank, 3);
            let base = &spherical[rng.gen_range(0..spherical.len())];
            let e = m.exp_twist(base, &random_vec(&mut rng, rank, 2)).map_err(e2s)?;
            ensure(m.square(&e).map_err(e2s)? == -2, || format!("{name}: e = {e} is not spherical"))?;

            let vw = m.pairing(&v, &w).map_err(e2s)?;
            let (tv, tw) = (m.exp_twist(&v, &l).map_err(e2s)?, m.exp_twist(&w, &l).map_err(e2s)?);
            ensure(m.pairing(&tv, &tw).map_err(e2s)? == vw, || format!("{name}: exp_twist changed <{v},{w}>"))?;
            ensure(m.exp_twist(&tv, &l.neg()).map_err(e2s)? == v, || format!("{name}: exp_twist not inverted for {v}"))?;
            let (rv, rw) = (m.spherical_reflect(&v, &e).map_err(e2s)?, m.spherical_reflect(&w, &e).map_err(e2s)?);
            ensure(m.pairing(&rv, &rw).map_err(e2s)? == vw, || format!("{name}: reflection changed <{v},{w}>"))?;
            ensure(m.spherical_reflect(&rv, &e).map_err(e2s)? == v, || format!("{name}: reflection not an involution"))?;
            ensure(tv.is_primitive() == v.is_primitive() && rv.is_primitive() == v.is_primitive(), || {
                format!("{name}: primitivity changed for {v}")
            })?;
            if v.is_primitive() {
                let c = m.is_coprime_to_p(&v, *p).map_err(e2s)?;
                ensure(
                    m.is_coprime_to_p(&tv, *p).map_err(e2s)? == c && m.is_coprime_to_p(&rv, *p).map_err(e2s)? == c,
                    || format!("{name}: coprimality changed for {v}"),
                )?;
            }
            total += 1;
        }
    }
    Ok(format!("{total} cases over {} lattices, zero failures", lattices.len()))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let limits = SearchLimits::ELLIPTIC.with_cap(C4_HEIGHT_CAP);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut found = 0;
    let mut max_bound = 0;
    let mut chains = 0;
    for p in [3, 5, 7, 11, 13] {
        for sigma in [1, 2] {
            let ns = build_k3_ns_preferred(p, sigma).map_err(e2s)?;
            for _ in 0..C4_VECTORS_PER_CELL {
                let v = sample_mukai_vector(&mut rng, &ns.lattice, p, (1, 50), 3).map_err(e2s)?;
                let w = find_elliptic_class(&ns.lattice, &v, p, limits)
                    .map_err(|e| format!("p={p} sigma={sigma} v={v}: {e}"))?;
                w.verify(&ns.lattice, &v).map_err(|e| format!("p={p} sigma={sigma}: validator: {e}"))?;
                max_bound = max_bound.max(w.bound);
                chains += usize::from(!w.chain.is_empty());
                found += 1;
            }
        }
    }
    let t = start.elapsed();
    ensure(t < C4_RUNTIME, || format!("runtime {t:?} >= {C4_RUNTIME:?}"))?;
    Ok(format!("{found} verified witnesses, {chains} needed a transform chain, max height {max_bound}, {t:.2?}"))
}

fn criterion_5() -> Check {
    let mut n = 0;
    for p in [3, 5, 7] {
        for sigma in 1..=9 {
            let ns = build_k3_ns_preferred(p, sigma).map_err(e2s)?;
            let rank = ns.lattice.rank();
            let f1 = LatVec::basis(rank, 0);
            let f2 = LatVec::basis(rank, 1);
            let one = find_untwisting_pair(&ns, &f2, UntwistCase::I, SearchLimits::UNTWIST)
                .map_err(|e| format!("p={p} sigma={sigma} case I: {e}"))?;
            one.verify(&ns.lattice, p).map_err(e2s)?;
            let two = find_untwisting_pair(&ns, &f2.scaled(p), UntwistCase::II, SearchLimits::UNTWIST)
                .map_err(|e| format!("p={p} sigma={sigma} case II: {e}"))?;
            two.verify(&ns.lattice, p).map_err(e2s)?;
            // the explicit choice c1 = f1 + p f2, D = f2
            ensure(two.tau.c1 == f1.plus_scaled(p, &f2) && two.w.c1 == f2, || {
                format!("p={p} sigma={sigma}: case II used c1 = {}, D = {}", two.tau.c1, two.w.c1)
            })?;
            let auto = find_untwisting_pair(&ns, &f2.scaled(p), UntwistCase::Auto, SearchLimits::UNTWIST).map_err(e2s)?;
            ensure(auto.case == UntwistCase::II, || "auto did not pick case II for p | L.NS".into())?;
            n += 2;
        }
    }
    Ok(format!("{n} verified untwisting witnesses"))
}

fn r(a: i64, b: i64) -> Rational64 {
    Rational64::new(a, b)
}

// Lower envelope value at integer x: min over segments between finite points.
fn brute_hull(vals: &[Option<i64>]) -> Vec<Rational64> {
    let pts: Vec<(i64, i64)> = vals.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i as i64, v))).collect();
    let n = vals.len() as i64;
    (0..n)
        .map(|x| {
            let mut best: Option<Rational64> = None;
            for &(a, va) in &pts {
                for &(b, vb) in &pts {
                    if a <= x && x <= b && (a < b || a == x) {
                        let y = if a == b { r(va, 1) } else { r(va, 1) + r((vb - va) * (x - a), b - a) };
                        best = Some(best.map_or(y, |c: Rational64| c.min(y)));
                    }
                }
            }
            best.expect("x lies between the first and last finite point")
        })
        .collect()
}

fn polygon_values(np: &supersingular::crystal::NewtonPolygon) -> Vec<Rational64> {
    let mut out = Vec::new();
    for w in np.vertices.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        for x in x0..x1 {
            out.push(y0 + (y1 - y0) * r(x - x0, x1 - x0));
        }
    }
    out.push(np.vertices.last().unwrap().1);
    out
}

fn criterion_6() -> Check {
    let h1 = SlopeMultiset::single(r(1, 2), 4);
    for n in 0..=4 {
        let w = wedge_slopes(&h1, n).map_err(e2s)?;
        ensure(is_supersingular(&w, n as i64), || format!("wedge^{n} of H^1 = {w} is not supersingular"))?;
    }
    let mut inputs: Vec<SlopeMultiset> = vec![
        SlopeMultiset::single(r(1, 1), 22),
        SlopeMultiset::single(r(1, 1), 6),
        SlopeMultiset::new([(r(0, 1), 1), (r(1, 1), 20), (r(2, 1), 1)]).unwrap(),
        SlopeMultiset::new([(r(0, 1), 1), (r(1, 1), 4), (r(2, 1), 1)]).unwrap(),
    ];
    // height-h formal group shapes for K3: 1 - 1/h (x h), 1 (x 22 - 2h), 1 + 1/h (x h)
    for h in 1..=10 {
        inputs.push(SlopeMultiset::new([(r(h - 1, h), h as u64), (r(1, 1), 22 - 2 * h as u64), (r(h + 1, h), h as u64)]).unwrap());
    }
    inputs.push(wedge_slopes(&SlopeMultiset::new([(r(0, 1), 2), (r(1, 1), 2)]).unwrap(), 2).map_err(e2s)?);
    inputs.push(wedge_slopes(&h1, 2).map_err(e2s)?);
    for s in &inputs {
        ensure(is_supersingular(&hilb_or_kummer_h2(s), 2) == is_supersingular(s, 2), || format!("predicate changed for {s}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    for case in 0..C6_RANDOM_HULLS {
        let rank = rng.gen_range(1..=C6_MAX_RANK);
        let mut vals: Vec<Option<i64>> = vec![Some(0)];
        for i in 1..=rank {
            let v = if i < rank && rng.gen_bool(0.1) { None } else { Some(rng.gen_range(0..=3 * rank as i64)) };
            vals.push(v);
        }
        let np = newton_from_valuations(&vals).map_err(e2s)?;
        ensure(polygon_values(&np) == brute_hull(&vals), || format!("hull mismatch on case {case}: {vals:?}"))?;
        let s = slopes(&np);
        let strictly_increasing = s.entries().windows(2).all(|w| w[0].0 < w[1].0);
        ensure(strictly_increasing && s.rank() == rank as u64, || format!("bad slopes on case {case}: {s}"))?;
    }
    Ok(format!("wedges n=0..4, {} H^2 inputs, {C6_RANDOM_HULLS} random hulls", inputs.len()))
}

fn criterion_7() -> Check {
    let start = Instant::now();
    for g in 0..=5 {
        ensure(ssav_motive_schur(g).map_err(e2s)? == ssav_motive_direct(g), || format!("Schur route differs at g = {g}"))?;
    }
    let k3 = k3_motive();
    for n in 1..=8 {
        let b = hilb_motive(&k3, n).map_err(e2s)?.betti_vector();
        let oracle = gottsche_poincare(&K3_BETTI, n).map_err(e2s)?;
        ensure(b == oracle, || format!("S^[{n}]: {b:?} vs product formula {oracle:?}"))?;
        if n >= 2 {
            ensure(b[2] == 23, || format!("b2(S^[{n}]) = {}", b[2]))?;
        }
        if n == 2 {
            ensure(b[4] == 276, || format!("b4(S^[2]) = {}", b[4]))?;
        }
    }
    let mut quoted_off = Vec::new();
    for k in 0..=12 {
        ensure(sym_h1e(k).rank() == k as u64 + 1, || format!("rank Sym^{k} h1 = {}", sym_h1e(k).rank()))?;
        if sym_h1e_quoted(k).rank() != k as u64 + 1 {
            quoted_off.push(k);
        }
    }
    let t = start.elapsed();
    ensure(t < C7_RUNTIME, || format!("runtime {t:?} >= {C7_RUNTIME:?}"))?;
    Ok(format!(
        "Schur = direct for g<=5, Hilbert = product formula for n<=8, rank law k<=12 (quoted multiplicities violate it at k = {quoted_off:?}), {t:.2?}"
    ))
}

fn criterion_8() -> Check {
    let b1 = kummer_betti(1).map_err(e2s)?;
    ensure(b1 == vec![1, 0, 22, 0, 1], || format!("K_1 Betti {b1:?}"))?;
    for n in 1..=6 {
        let b = kummer_betti(n).map_err(e2s)?;
        let mut rev = b.clone();
        rev.reverse();
        ensure(b == rev && b[0] == 1, || format!("K_{n} Betti {b:?} not Poincaré dual"))?;
    }
    let audit = kummer_audit(1).map_err(e2s)?;
    ensure(
        audit.inventory_dimension == 32 && audit.oracle_dimension == 24 && !audit.dimensions_agree && !audit.findings.is_empty(),
        || format!("audit did not flag the discrepancy: {audit:?}"),
    )?;
    Ok(format!("K_1 = (1,0,22,0,1), duality n<=6, flagged: {}", audit.findings[0]))
}

fn criterion_9() -> Check {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_supersingular"))
        .args(["--json", "report", "--p", "5", "--sigma", "1", "--kind", "k3", "--v", r#"{"r":1,"c1":[],"s":-1}"#])
        .output()
        .map_err(e2s)?;
    let t = start.elapsed();
    ensure(out.status.code() == Some(0), || format!("exit code {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(e2s)?;
    ensure(v["dim"] == 4, || format!("dim {}", v["dim"]))?;
    ensure(v["b2"]["status"] == "certified" && v["b2"]["report"]["b2_target"] == 23, || format!("b2 {}", v["b2"]))?;
    ensure(v["motive"]["tate_type"] == true, || "motive not Tate type".into())?;
    let rows = v["motive"]["chow"]["rows"].as_array().ok_or("no Chow table")?;
    ensure(!rows.is_empty() && rows.iter().all(|r| r["ab_dim"] == 0), || format!("Chow table {rows:?}"))?;
    ensure(t < C9_RUNTIME, || format!("runtime {t:?} >= {C9_RUNTIME:?}"))?;
    Ok(format!("dim 4, b2 = 23 certified, Tate type, {} Chow rows with Ab^i = 0, exit 0, {t:.2?}", rows.len()))
}

fn main() {
    // the harness ignores cargo's test-filter arguments
    let criteria: [(u32, &str, fn() -> Check); 9] = [
        (1, "lattice classification", criterion_1),
        (2, "H^(p) branch audit", criterion_2),
        (3, "transform isometry suite", criterion_3),
        (4, "elliptic class realization", criterion_4),
        (5, "untwisting search", criterion_5),
        (6, "slope suite", criterion_6),
        (7, "motive oracle equivalences", criterion_7),
        (8, "Kummer checks", criterion_8),
        (9, "end-to-end report", criterion_9),
    ];
    let mut summary: BTreeMap<u32, bool> = BTreeMap::new();
    for (n, name, f) in criteria {
        let res = f();
        match &res {
            Ok(detail) => println!("criterion {n} ({name}): PASS - {detail}"),
            Err(why) => println!("criterion {n} ({name}): FAIL - {why}"),
        }
        summary.insert(n, res.is_ok());
    }
    let failed: Vec<u32> = summary.iter().filter(|(_, ok)| !**ok).map(|(n, _)| *n).collect();
    assert!(is_prime(5) && p_power_exponent(&BigInt::from(125), 5) == Some(3));
    if failed.is_empty() {
        println!("acceptance: all 9 criteria PASS");
    } else {
        println!("acceptance: FAIL {failed:?}");
        std::process::exit(1);
    }
}
