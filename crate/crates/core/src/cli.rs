//! Command-line front end. Every command prints one JSON document; the
//! process exit code is 0 on success, 2 for precondition failures and 3 for
//! internal-invariant failures (including failed verifications).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{build_abelian_ns, build_k3_ns, build_k3_ns_matching, variant_audit, Validation, VIndexVariant};
use crate::crystal::{
    hilb_or_kummer_h2, is_ordinary, is_supersingular, newton_from_valuations, polygon, slopes, tate_twist,
    wedge_slopes, HodgeNumbers, SlopeMultiset,
};
use crate::error::{Error, Result};
use crate::json::{LatticeJson, MukaiJson, NsJson, UntwistJson, ValidationJson};
use crate::lattice::{IntLattice, LatVec};
use crate::motive::{
    canonical_from_betti, chow_rank_report, gottsche_poincare, hilb_motive, kummer_audit, kummer_betti,
    kummer_inventory, ssav_motive_direct, ssav_motive_schur, sym_h1e, SSMotive, K3_BETTI,
};
use crate::mukai::{ModuliKind, MukaiLattice, MukaiVector};
use crate::pipeline::{batch, report, BatchGrid, ReportOptions, SurfaceKind};
use crate::search::{
    find_elliptic_class, find_principal_polarization, find_untwisting_pair, SearchLimits, UntwistCase,
};

#[derive(Parser, Debug)]
#[command(name = "supersingular", version, about = "Lattice, Mukai-vector, slope and motive computations for supersingular surfaces")]
pub struct Cli {
    /// Compact single-line JSON instead of pretty-printed output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Override the height cap of every bounded search.
    #[arg(long = "height-cap", global = true)]
    pub height_cap: Option<i64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Néron–Severi lattices of supersingular surfaces.
    #[command(subcommand)]
    Ns(NsCommand),
    /// Mukai-lattice arithmetic.
    #[command(subcommand)]
    Mukai(MukaiCommand),
    /// Elliptic, untwisting and polarization witnesses.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Newton polygons and slope operations.
    #[command(subcommand)]
    Crystal(CrystalCommand),
    /// Supersingular abelian motives.
    #[command(subcommand)]
    Motive(MotiveCommand),
    /// Combined report for (p, sigma, v).
    Report(ReportArgs),
    /// Seeded reports over a TOML or JSON parameter grid.
    Batch(BatchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VariantArg {
    Literal,
    DiscCorrected,
    /// Literal when it reproduces sigma, else disc-corrected.
    Matching,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    K3,
    Abelian,
}

impl From<KindArg> for SurfaceKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::K3 => SurfaceKind::K3,
            KindArg::Abelian => SurfaceKind::Abelian,
        }
    }
}

/// Selects the NS lattice: a K3 catalog entry (--sigma), an abelian one
/// (--artin), or a JSON lattice file (--lattice).
#[derive(Args, Debug, Clone)]
pub struct SurfaceArgs {
    #[arg(long)]
    pub p: i64,
    #[arg(long, conflicts_with_all = ["artin", "lattice"])]
    pub sigma: Option<u32>,
    #[arg(long, conflicts_with = "lattice")]
    pub artin: Option<u32>,
    #[arg(long)]
    pub lattice: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "matching")]
    pub variant: VariantArg,
}

fn k3_for(p: i64, sigma: u32, variant: VariantArg) -> Result<crate::catalog::SSK3Lattice> {
    match variant {
        VariantArg::Literal => build_k3_ns(p, sigma, VIndexVariant::Literal),
        VariantArg::DiscCorrected => build_k3_ns(p, sigma, VIndexVariant::DiscCorrected),
        VariantArg::Matching => build_k3_ns_matching(p, sigma),
    }
}

fn read_lattice(path: &PathBuf) -> Result<IntLattice> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let j: LatticeJson = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    j.to_lattice()
}

impl SurfaceArgs {
    fn lattice(&self) -> Result<IntLattice> {
        match (&self.lattice, self.sigma, self.artin) {
            (Some(path), _, _) => read_lattice(path),
            (None, Some(s), _) => Ok(k3_for(self.p, s, self.variant)?.lattice),
            (None, None, Some(a)) => Ok(build_abelian_ns(self.p, a)?.lattice),
            (None, None, None) => Err(Error::Parse("one of --sigma, --artin or --lattice is required".into())),
        }
    }

    fn moduli_kind(&self, lattice: &IntLattice) -> ModuliKind {
        if self.artin.is_some() || lattice.rank() == 6 {
            ModuliKind::AbelianKummer
        } else {
            ModuliKind::K3
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum NsCommand {
    /// NS of a supersingular K3 surface.
    K3 {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        sigma: u32,
        #[arg(long, value_enum, default_value = "literal")]
        variant: VariantArg,
    },
    /// NS of a supersingular abelian surface.
    Abelian {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        artin: u32,
    },
    /// Literal vs. disc-corrected V-index table.
    Audit {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<i64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2, 3, 4, 5, 6, 7, 8, 9])]
        sigmas: Vec<u32>,
    },
    /// Validation block for a lattice read from a JSON file.
    Validate {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        p: i64,
        /// Artin invariant to compare against.
        #[arg(long, default_value_t = 1)]
        sigma: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum MukaiCommand {
    /// <v, w>; twisted entries "a/p" are allowed.
    Pair {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
    },
    /// (rank, c1, chi - rank).
    Vector {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        rank: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        c1: Vec<i64>,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
    },
    /// Tensor by the line bundle L.
    Twist {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        v: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        l: Vec<i64>,
    },
    /// Reflection in a (-2)-class e.
    Reflect {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        v: String,
        #[arg(long)]
        e: String,
    },
    /// Line bundle making gcd(r, c1.H, s) = 1.
    GeneralTwist {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        v: String,
        /// Defaults to a searched class of square 2.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        h: Option<Vec<i64>>,
    },
    /// Moduli dimension, v-perp rank and b2 target.
    Report {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        v: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CaseArg {
    Auto,
    I,
    Ii,
}

#[derive(Subcommand, Debug)]
pub enum SearchCommand {
    /// Isotropic x with gcd(r', c1'.x) = 1.
    Elliptic {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        v: String,
    },
    /// Untwisting pair (tau, w) for a K3 lattice.
    Untwist {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        sigma: u32,
        #[arg(long, value_enum, default_value = "matching")]
        variant: VariantArg,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        l: Vec<i64>,
        #[arg(long, value_enum, default_value = "auto")]
        case: CaseArg,
    },
    /// A class of square 2.
    Polarization {
        #[command(flatten)]
        surface: SurfaceArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum CrystalCommand {
    /// Newton polygon from valuations; "inf" marks a vanishing coefficient.
    Newton {
        #[arg(long, value_delimiter = ',')]
        vals: Vec<String>,
    },
    /// Supersingularity of a slope multiset in a given degree.
    Check {
        #[arg(long)]
        slopes: String,
        #[arg(long)]
        degree: i64,
    },
    /// Newton polygon vs. Hodge polygon.
    Ordinary {
        #[arg(long)]
        slopes: String,
        /// Hodge numbers as "level x multiplicity" pairs, e.g. "0x1,1x20,2x1".
        #[arg(long)]
        hodge: String,
    },
    Wedge {
        #[arg(long)]
        slopes: String,
        #[arg(long)]
        k: u64,
    },
    Twist {
        #[arg(long)]
        slopes: String,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// H^2 of the Hilbert scheme or generalized Kummer built on the surface.
    H2 {
        #[arg(long)]
        slopes: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum MotiveCommand {
    /// h(A) for a supersingular abelian variety, by both routes.
    Abelian {
        #[arg(long)]
        g: u32,
    },
    /// h(S^[n]) for a supersingular K3 surface.
    Hilbert {
        #[arg(long)]
        n: u32,
    },
    /// Generalized Kummer: summand inventory, audit and Betti numbers.
    Kummer {
        #[arg(long)]
        n: u32,
    },
    Canonical {
        #[arg(long, value_delimiter = ',')]
        betti: Vec<u64>,
    },
    ChowReport {
        #[arg(long, value_delimiter = ',')]
        betti: Vec<u64>,
    },
    /// Sym^k h1(E).
    Sym {
        #[arg(long)]
        k: u32,
    },
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long)]
    pub p: i64,
    /// Artin invariant (sigma for K3, 1 or 2 for abelian).
    #[arg(long, alias = "artin")]
    pub sigma: u32,
    #[arg(long)]
    pub v: String,
    #[arg(long, value_enum, default_value = "k3")]
    pub kind: KindArg,
}

#[derive(Args, Debug)]
pub struct BatchArgs {
    /// Grid file (TOML, or JSON).
    #[arg(long)]
    pub grid: PathBuf,
}

/// Output of a command plus whether every verification passed.
struct Outcome {
    value: Value,
    ok: bool,
}

fn done<T: Serialize>(v: T) -> Result<Outcome> {
    Ok(Outcome { value: to_value(v)?, ok: true })
}

fn to_value<T: Serialize>(v: T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Internal(format!("serialization: {e}")))
}

fn parse_mukai(s: &str) -> Result<MukaiJson> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("Mukai vector {s:?}: {e}")))
}

fn rational_value(q: Rational64) -> Value {
    if q.is_integer() {
        json!(q.to_integer())
    } else {
        json!(q.to_string())
    }
}

fn vec_for(l: &[i64], rank: usize) -> Result<LatVec> {
    crate::json::padded(l, rank)
}

fn validation_value(v: &Validation, p: i64) -> Value {
    to_value(ValidationJson::new(v, p)).unwrap_or(Value::Null)
}

fn run_ns(cmd: NsCommand) -> Result<Outcome> {
    match cmd {
        NsCommand::K3 { p, sigma, variant } => done(NsJson::k3(&k3_for(p, sigma, variant)?)),
        NsCommand::Abelian { p, artin } => done(NsJson::abelian(&build_abelian_ns(p, artin)?)),
        NsCommand::Audit { primes, sigmas } => done(variant_audit(&primes, &sigmas)),
        NsCommand::Validate { lattice, p, sigma } => {
            let l = read_lattice(&lattice)?;
            let v = Validation::of(&l, p, sigma)?;
            done(json!({ "validation": validation_value(&v, p) }))
        }
    }
}

fn run_mukai(cmd: MukaiCommand, limits: &ReportOptions) -> Result<Outcome> {
    match cmd {
        MukaiCommand::Pair { surface, v, w } => {
            let l = surface.lattice()?;
            let m = MukaiLattice::new(&l);
            let (v, w) = (parse_mukai(&v)?, parse_mukai(&w)?);
            let value = m.twisted_pairing(&v.to_twisted(l.rank(), surface.p)?, &w.to_twisted(l.rank(), surface.p)?)?;
            done(json!({ "pairing": rational_value(value) }))
        }
        MukaiCommand::Vector { surface, rank, c1, chi } => {
            let l = surface.lattice()?;
            done(MukaiJson::from_vector(&MukaiVector::of_sheaf(rank, vec_for(&c1, l.rank())?, chi)))
        }
        MukaiCommand::Twist { surface, v, l: lv } => {
            let l = surface.lattice()?;
            let m = MukaiLattice::new(&l);
            let v = parse_mukai(&v)?.to_vector(l.rank())?;
            done(MukaiJson::from_vector(&m.exp_twist(&v, &vec_for(&lv, l.rank())?)?))
        }
        MukaiCommand::Reflect { surface, v, e } => {
            let l = surface.lattice()?;
            let m = MukaiLattice::new(&l);
            let v = parse_mukai(&v)?.to_vector(l.rank())?;
            let e = parse_mukai(&e)?.to_vector(l.rank())?;
            done(MukaiJson::from_vector(&m.spherical_reflect(&v, &e)?))
        }
        MukaiCommand::GeneralTwist { surface, v, h } => {
            let l = surface.lattice()?;
            let m = MukaiLattice::new(&l);
            let v = parse_mukai(&v)?.to_vector(l.rank())?;
            let h = match h {
                Some(h) => vec_for(&h, l.rank())?,
                None => find_principal_polarization(&l, limits.limits(SearchLimits::POLARIZATION))?,
            };
            let twist = m.find_generality_twist(&v, &h, surface.p)?;
            let out = m.exp_twist(&v, &twist)?;
            let general = m.is_general_numeric(&out, &h)?;
            Ok(Outcome {
                value: json!({ "h": h, "l": twist, "v_general": MukaiJson::from_vector(&out), "verified": general }),
                ok: general,
            })
        }
        MukaiCommand::Report { surface, v } => {
            let l = surface.lattice()?;
            let m = MukaiLattice::new(&l);
            let v = parse_mukai(&v)?.to_vector(l.rank())?;
            let kind = surface.moduli_kind(&l);
            let dim = m.moduli_dimension(&v, kind)?;
            let report = if dim >= 4 { Some(m.shioda_report(&v, surface.p, kind)?) } else { None };
            done(json!({ "kind": kind, "square": m.square(&v)?, "dim": dim, "report": report }))
        }
    }
}

fn run_search(cmd: SearchCommand, opts: &ReportOptions) -> Result<Outcome> {
    match cmd {
        SearchCommand::Elliptic { surface, v } => {
            let l = surface.lattice()?;
            let v = parse_mukai(&v)?.to_vector(l.rank())?;
            let w = find_elliptic_class(&l, &v, surface.p, opts.limits(SearchLimits::ELLIPTIC))?;
            let ok = w.verify(&l, &v).is_ok();
            Ok(Outcome { value: json!({ "witness": w, "verified": ok }), ok })
        }
        SearchCommand::Untwist { p, sigma, variant, l, case } => {
            let ns = k3_for(p, sigma, variant)?;
            let lv = vec_for(&l, ns.lattice.rank())?;
            let case = match case {
                CaseArg::Auto => UntwistCase::Auto,
                CaseArg::I => UntwistCase::I,
                CaseArg::Ii => UntwistCase::II,
            };
            let w = find_untwisting_pair(&ns, &lv, case, opts.limits(SearchLimits::UNTWIST))?;
            let ok = w.verify(&ns.lattice, p).is_ok();
            Ok(Outcome { value: json!({ "witness": UntwistJson::new(&w), "verified": ok }), ok })
        }
        SearchCommand::Polarization { surface } => {
            let l = surface.lattice()?;
            let h = find_principal_polarization(&l, opts.limits(SearchLimits::POLARIZATION))?;
            let sq = l.norm(&h)?;
            Ok(Outcome { value: json!({ "h": h, "square": sq, "verified": sq == 2 }), ok: sq == 2 })
        }
    }
}

fn parse_valuation(s: &str) -> Result<Option<i64>> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t == "∞" {
        return Ok(None);
    }
    t.parse().map(Some).map_err(|_| Error::Parse(format!("bad valuation {s:?}")))
}

fn parse_hodge(s: &str) -> Result<HodgeNumbers> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (j, h) = part.split_once('x').ok_or_else(|| Error::Parse(format!("bad Hodge entry {part:?}")))?;
        let j: i64 = j.trim().parse().map_err(|_| Error::Parse(format!("bad level in {part:?}")))?;
        let h: u64 = h.trim().parse().map_err(|_| Error::Parse(format!("bad multiplicity in {part:?}")))?;
        out.push((j, h));
    }
    Ok(HodgeNumbers(out))
}

fn run_crystal(cmd: CrystalCommand) -> Result<Outcome> {
    match cmd {
        CrystalCommand::Newton { vals } => {
            let vals = vals.iter().map(|s| parse_valuation(s)).collect::<Result<Vec<_>>>()?;
            let np = newton_from_valuations(&vals)?;
            done(json!({ "polygon": np, "slopes": slopes(&np) }))
        }
        CrystalCommand::Check { slopes: s, degree } => {
            let s: SlopeMultiset = s.parse()?;
            done(json!({ "slopes": s, "polygon": polygon(&s), "supersingular": is_supersingular(&s, degree) }))
        }
        CrystalCommand::Ordinary { slopes: s, hodge } => {
            let s: SlopeMultiset = s.parse()?;
            done(json!({ "ordinary": is_ordinary(&polygon(&s), &parse_hodge(&hodge)?)? }))
        }
        CrystalCommand::Wedge { slopes: s, k } => done(wedge_slopes(&s.parse()?, k)?),
        CrystalCommand::Twist { slopes: s, n } => done(tate_twist(&s.parse()?, n)?),
        CrystalCommand::H2 { slopes: s } => {
            let s: SlopeMultiset = s.parse()?;
            let out = hilb_or_kummer_h2(&s);
            done(json!({ "slopes": out, "supersingular": is_supersingular(&out, 2) }))
        }
    }
}

fn motive_value(m: &SSMotive) -> Value {
    json!({ "motive": m, "betti": m.betti_vector(), "display": m.to_string() })
}

fn run_motive(cmd: MotiveCommand) -> Result<Outcome> {
    match cmd {
        MotiveCommand::Abelian { g } => {
            let direct = ssav_motive_direct(g);
            let schur = ssav_motive_schur(g)?;
            let ok = direct == schur;
            Ok(Outcome { value: json!({ "direct": motive_value(&direct), "schur_route_agrees": ok }), ok })
        }
        MotiveCommand::Hilbert { n } => {
            let m = hilb_motive(&canonical_from_betti(&K3_BETTI)?, n)?;
            let oracle = gottsche_poincare(&K3_BETTI, n)?;
            let ok = m.betti_vector() == oracle;
            Ok(Outcome { value: json!({ "hilbert": motive_value(&m), "product_formula_agrees": ok }), ok })
        }
        MotiveCommand::Kummer { n } => done(json!({
            "inventory": kummer_inventory(n)?,
            "audit": kummer_audit(n)?,
            "betti": kummer_betti(n)?,
        })),
        MotiveCommand::Canonical { betti } => done(motive_value(&canonical_from_betti(&betti)?)),
        MotiveCommand::ChowReport { betti } => done(chow_rank_report(&betti)?),
        MotiveCommand::Sym { k } => done(motive_value(&sym_h1e(k))),
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let opts = ReportOptions { height_cap: cli.height_cap };
    match cli.command {
        Command::Ns(c) => run_ns(c),
        Command::Mukai(c) => run_mukai(c, &opts),
        Command::Search(c) => run_search(c, &opts),
        Command::Crystal(c) => run_crystal(c),
        Command::Motive(c) => run_motive(c),
        Command::Report(a) => {
            let b = report(a.kind.into(), a.p, a.sigma, &parse_mukai(&a.v)?, opts)?;
            let ok = b.passed();
            Ok(Outcome { value: to_value(&b)?, ok })
        }
        Command::Batch(a) => {
            let text = std::fs::read_to_string(&a.grid).map_err(|e| Error::Parse(format!("{}: {e}", a.grid.display())))?;
            let grid = BatchGrid::parse(&text)?;
            let s = batch(&grid, cli.seed, opts);
            let ok = s.all_passed;
            Ok(Outcome { value: to_value(&s)?, ok })
        }
    }
}

fn render(v: &Value, compact: bool) -> String {
    if compact {
        v.to_string()
    } else {
        serde_json::to_string_pretty(v).unwrap_or_else(|_| v.to_string())
    }
}

/// Parses `args`, runs the command, prints the result and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let compact = cli.json;
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not an error of the computation
            let _ = writeln!(stdout, "{}", render(&out.value, compact));
            if out.ok {
                0
            } else {
                eprintln!("{}", render(&json!({ "error": "verification failed", "kind": "internal" }), compact));
                3
            }
        }
        Err(e) => {
            let kind = match e.kind() {
                crate::error::ErrorKind::Precondition => "precondition",
                crate::error::ErrorKind::Internal => "internal",
            };
            eprintln!("{}", render(&json!({ "error": e.to_string(), "kind": kind }), compact));
            e.exit_code()
        }
    }
}
