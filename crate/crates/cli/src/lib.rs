//! `floerhp` command-line front end. Every command is a thin wrapper over a
//! `floerhp_core` call; [`run`] returns the exit code and both output streams
//! so it can be driven from tests.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use floerhp_core::casson::parse_database;
use floerhp_core::floer::{default_protected_window, hp_closed, hp_consistency, ConsistencyReport};
use floerhp_core::polys::newton_slopes;
use floerhp_core::selftest::{self, Ranges};
use floerhp_core::slope::format_ratio;
use floerhp_core::{
    casson_invariant, compose_connected_sum, hp_sharp, hp_small_knot, hp_two_bridge, limit_rank, triangle_check,
    Error, FactoredAPoly, Family, KnotRecord, Slope, SummandSpec,
};
use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_PRECONDITION: u8 = 2;
pub const EXIT_DATA: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "floerhp", version, about = "SL(2,C) Casson invariants and sheaf-theoretic Floer cohomology of knot surgeries")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,

    /// Knot database (JSON array of records); defaults to $FLOERHP_DB
    #[arg(long, global = true)]
    db: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct KnotSlope {
    /// Knot name (built-in: trefoil-r, trefoil-l)
    #[arg(long)]
    knot: String,
    /// Surgery slope p/q
    #[arg(long, allow_hyphen_values = true, value_parser = parse_slope)]
    slope: Slope,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Target {
    #[arg(long)]
    knot: Option<String>,
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// SL(2,C) Casson invariant of a surgery
    Casson(KnotSlope),
    /// Floer cohomology HP of a surgery on a knot or a granny/square family member
    Hp {
        #[command(flatten)]
        target: Target,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_slope)]
        slope: Slope,
    },
    /// Framed Floer cohomology HP#
    Hpsharp(KnotSlope),
    /// Character scheme component census for granny/square surgeries
    Census {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_slope)]
        slope: Slope,
    },
    /// A-polynomial of a trefoil or of the granny/square knot
    Apoly {
        #[command(flatten)]
        target: Target,
        /// Only factors from irreducible characters
        #[arg(long)]
        irr: bool,
    },
    /// Rank obstruction to a surgery exact triangle for HP# at two slopes
    Triangle {
        #[arg(long)]
        knot: String,
        /// Two slopes, e.g. --slope 2/1 --slope 3/1
        #[arg(long, allow_hyphen_values = true, value_parser = parse_slope, num_args = 1, required = true)]
        slope: Vec<Slope>,
        /// Protected degree window a..b (inclusive)
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Option<BTreeSet<i64>>,
    },
    /// Limit of rk HP^n(S^3_{p/q}) / q as q grows
    Limit {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
    },
    /// Compare the closed forms with the census assembly
    Consistency {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// Single slope; omit to sweep
        #[arg(long, allow_hyphen_values = true, value_parser = parse_slope)]
        slope: Option<Slope>,
        /// Smaller sweep ranges
        #[arg(long)]
        quick: bool,
    },
    /// Run every invariant sweep
    Selftest {
        #[arg(long)]
        quick: bool,
    },
}

fn parse_slope(s: &str) -> Result<Slope, String> {
    s.parse::<Slope>().map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

fn parse_window(s: &str) -> Result<BTreeSet<i64>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("window {s:?} must look like a..b"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad window start in {s:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad window end in {s:?}"))?;
    if a > b {
        return Err(format!("empty window {s:?}"));
    }
    Ok((a..=b).collect())
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    UnknownKnot(String),
    Io { path: PathBuf, message: String },
    Selftest(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<&'a str>,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::Data { .. }) | Failure::Io { .. } => EXIT_DATA,
            Failure::Core(Error::NonIntegerResult(_) | Error::Inconsistent(_) | Error::InvalidTorsion(_))
            | Failure::Selftest(_) => EXIT_INTERNAL,
            Failure::Core(_) | Failure::UnknownKnot(_) => EXIT_PRECONDITION,
        }
    }

    fn to_json(&self) -> String {
        let body = match self {
            Failure::Core(e) => ErrorJson {
                error: e.kind(),
                field: match e {
                    Error::Data { field, .. } => Some(field.as_str()),
                    _ => None,
                },
                message: e.to_string(),
                reason: match e {
                    Error::NonAdmissible(r) => Some(r.to_string()),
                    _ => None,
                },
            },
            Failure::UnknownKnot(name) => ErrorJson {
                error: "UnknownKnot",
                field: None,
                message: format!("no knot named {name:?}"),
                reason: None,
            },
            Failure::Io { path, message } => ErrorJson {
                error: "Data",
                field: None,
                message: format!("{}: {message}", path.display()),
                reason: None,
            },
            Failure::Selftest(msg) => ErrorJson { error: "SelftestFailed", field: None, message: msg.clone(), reason: None },
        };
        serde_json::to_string(&body).expect("error serializes")
    }
}

/// Knot records visible to a command: built-ins, then the database file
/// (whose records replace built-ins of the same name).
pub fn ingest(path: Option<&Path>) -> Result<Vec<KnotRecord>, (u8, String)> {
    load_knots(path).map_err(|f| (f.code(), f.to_json()))
}

fn load_knots(path: Option<&Path>) -> Result<Vec<KnotRecord>, Failure> {
    let mut knots = KnotRecord::builtins();
    if let Some(path) = path {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Io { path: path.to_path_buf(), message: e.to_string() })?;
        for rec in parse_database(&text)? {
            knots.retain(|k| k.name != rec.name);
            knots.push(rec);
        }
    }
    Ok(knots)
}

struct Ctx {
    format: OutputFormat,
    db: Option<PathBuf>,
}

impl Ctx {
    fn knot(&self, name: &str) -> Result<KnotRecord, Failure> {
        load_knots(self.db.as_deref())?
            .into_iter()
            .find(|k| k.name == name)
            .ok_or_else(|| Failure::UnknownKnot(name.to_string()))
    }

    fn emit<T: Serialize>(&self, value: &T, table: impl FnOnce() -> String) -> String {
        match self.format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string(value).expect("output serializes");
                s.push('\n');
                s
            }
            OutputFormat::Table => {
                let mut s = table();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
        }
    }
}

#[derive(Serialize)]
struct CassonJson<'a> {
    knot: &'a str,
    lambda: u64,
    slope: String,
}

#[derive(Serialize)]
struct APolyJson {
    display: String,
    factors: Vec<floerhp_core::LaurentPoly2>,
    newton_slopes: Vec<String>,
}

#[derive(Serialize)]
struct LimitJson {
    degree: i64,
    family: String,
    limit: String,
    p: i64,
}

#[derive(Serialize)]
struct SweepJson {
    checked: u64,
    expected_discrepancies: u64,
    family: String,
    unexpected: Vec<ConsistencyReport>,
}

fn summand_for(name: &str) -> Result<SummandSpec, Failure> {
    match name {
        "trefoil-r" => Ok(SummandSpec::trefoil_right()),
        "trefoil-l" => Ok(SummandSpec::trefoil_left()),
        other => Err(Failure::Core(Error::UnsupportedSummand(other.to_string()))),
    }
}

fn apoly_for(target: &Target) -> Result<FactoredAPoly, Failure> {
    let summands = match (&target.knot, target.family) {
        (Some(k), _) => vec![summand_for(k)?],
        (None, Some(Family::Granny)) => vec![SummandSpec::trefoil_right(), SummandSpec::trefoil_right()],
        (None, Some(Family::Square)) => vec![SummandSpec::trefoil_right(), SummandSpec::trefoil_left()],
        (None, None) => unreachable!("clap enforces a target"),
    };
    if summands.len() == 1 {
        // a prime knot: reducibles plus its own irreducible factors
        let s = &summands[0];
        return Ok(FactoredAPoly::new(s.irreducible_factors.clone(), true));
    }
    Ok(compose_connected_sum(&summands)?)
}

fn dispatch(cli: Cli, env_db: Option<String>) -> Result<String, Failure> {
    let ctx = Ctx { format: cli.format, db: cli.db.or(env_db.map(PathBuf::from)) };
    match cli.command {
        Command::Casson(KnotSlope { knot, slope }) => {
            let k = ctx.knot(&knot)?;
            let lambda = casson_invariant(&k, slope)?;
            Ok(ctx.emit(&CassonJson { knot: &k.name, lambda, slope: slope.to_string() }, || lambda.to_string()))
        }
        Command::Hp { target, slope } => {
            let g = match (&target.knot, target.family) {
                (Some(name), _) => {
                    let k = ctx.knot(name)?;
                    if k.small {
                        hp_small_knot(&k, slope)?
                    } else {
                        hp_two_bridge(&k, slope)?
                    }
                }
                (None, Some(family)) => hp_closed(family, slope)?,
                (None, None) => unreachable!("clap enforces a target"),
            };
            Ok(ctx.emit(&g, || g.to_string()))
        }
        Command::Hpsharp(KnotSlope { knot, slope }) => {
            let g = hp_sharp(&ctx.knot(&knot)?, slope)?;
            Ok(ctx.emit(&g, || g.to_string()))
        }
        Command::Census { family, slope } => {
            let c = floerhp_core::floer::census_of(family, slope)?;
            Ok(ctx.emit(&c, || c.to_string()))
        }
        Command::Apoly { target, irr } => {
            let a = apoly_for(&target)?;
            let factors = if irr { a.irreducible().to_vec() } else { a.factors() };
            let display: String = factors.iter().map(|f| format!("({f})")).collect();
            let slopes: Vec<String> = if irr {
                let sub = FactoredAPoly::new(factors.clone(), false);
                newton_slopes(&sub).iter().map(format_ratio).collect()
            } else {
                newton_slopes(&a).iter().map(format_ratio).collect()
            };
            let json = APolyJson { display: display.clone(), factors, newton_slopes: slopes.clone() };
            Ok(ctx.emit(&json, || format!("{display}\nboundary slopes: {}", slopes.join(" "))))
        }
        Command::Triangle { knot, slope, window } => {
            if slope.len() != 2 {
                return Err(Failure::Core(Error::InvalidSlope(format!(
                    "triangle takes exactly two slopes, got {}",
                    slope.len()
                ))));
            }
            let k = ctx.knot(&knot)?;
            let low = hp_sharp(&k, slope[0])?;
            let high = hp_sharp(&k, slope[1])?;
            let window = window.unwrap_or_else(default_protected_window);
            let v = triangle_check(&low, &high, &window)?;
            Ok(ctx.emit(&v, || {
                if v.compatible {
                    "compatible".to_string()
                } else {
                    let ds: Vec<String> = v.obstruction_degrees.iter().map(i64::to_string).collect();
                    format!("obstructed in degrees {}", ds.join(" "))
                }
            }))
        }
        Command::Limit { family, degree, p } => {
            let lim = limit_rank(family, degree, p)?;
            let json = LimitJson { degree, family: family.to_string(), limit: format_ratio(&lim), p };
            Ok(ctx.emit(&json, || lim.to_string()))
        }
        Command::Consistency { family, slope: Some(s), .. } => {
            let r = hp_consistency(family, s)?;
            Ok(ctx.emit(&r, || {
                format!("closed:    {}\nassembled: {}\ndelta:     {:?}", r.closed, r.assembled, r.nonzero())
            }))
        }
        Command::Consistency { family, slope: None, quick } => {
            let ranges = if quick { Ranges::quick() } else { Ranges::full() };
            let mut out = SweepJson { checked: 0, expected_discrepancies: 0, family: family.to_string(), unexpected: vec![] };
            for s in Slope::sweep(ranges.census_p, ranges.census_q) {
                let r = hp_consistency(family, s)?;
                out.checked += 1;
                let known = family == Family::Square && s.p() % 12 == 0 && s.p() != 0;
                if known && r.nonzero() == [(-1, -2)].into() {
                    out.expected_discrepancies += 1;
                } else if !r.is_zero() {
                    out.unexpected.push(r);
                }
            }
            let text = ctx.emit(&out, || {
                format!(
                    "{} slopes checked, {} EXPECTED discrepancies, {} unexpected",
                    out.checked,
                    out.expected_discrepancies,
                    out.unexpected.len()
                )
            });
            if out.unexpected.is_empty() {
                Ok(text)
            } else {
                Err(Failure::Selftest(text))
            }
        }
        Command::Selftest { quick } => {
            let report = selftest::run(quick);
            let text = ctx.emit(&report, || report.to_string());
            if report.passed() {
                Ok(text)
            } else {
                Err(Failure::Selftest(text))
            }
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, None)
}

/// Like [`run`], with the value of `FLOERHP_DB` passed explicitly.
pub fn run_with_env<I, T>(args: I, env_db: Option<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    match dispatch(cli, env_db) {
        Ok(stdout) => Outcome::ok(stdout),
        Err(Failure::Selftest(text)) => Outcome {
            code: EXIT_INTERNAL,
            stdout: text,
            stderr: Failure::Selftest("one or more checks failed".into()).to_json() + "\n",
        },
        Err(f) => Outcome { code: f.code(), stdout: String::new(), stderr: f.to_json() + "\n" },
    }
}
