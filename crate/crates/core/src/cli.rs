//! The `monictd` command line.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bounds;
use crate::certify::{self, Certificate, Verdict};
use crate::enclosure::{DEFAULT_PRECISION, MAX_PRECISION};
use crate::error::{Error, Result};
use crate::exponent::{self, ExponentSolution, GParams};
use crate::lattice;
use crate::obstruction;
use crate::poly::IntPolynomial;
use crate::rational::{self, int, Rational};
use crate::realanalysis::{self, RatInterval, WeightedProduct};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "monictd", version, about = "Bounds and certificates for the monic integer transfinite diameter")]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "MONICTD_PRECISION", default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    /// Ceiling for automatic precision escalation.
    #[arg(long, global = true, default_value_t = MAX_PRECISION)]
    pub max_precision: u32,
    /// Tolerance for log-domain comparisons: a rational, a decimal, or 2^-k.
    #[arg(long, global = true, default_value = "2^-64")]
    pub tol: String,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sup norm of a polynomial, or log sup norm of a weighted product.
    Supnorm(SupnormArgs),
    /// Largest obstruction within a degree and height budget.
    Obstruction(ObstructionArgs),
    /// Bounds on b_max(n).
    Bounds(BoundsArgs),
    /// Rigorous lower and upper bounds for t_M([0, x]) on a grid.
    Profile(ProfileArgs),
    /// LLL search for factors passing the resultant sieve.
    Search(SearchArgs),
    /// Exponent optimization for a factor set.
    Optimize(OptimizeArgs),
    /// Certify attaining products.
    Certify(CertifyArgs),
    /// Farey-pair scan.
    Farey(FareyArgs),
}

#[derive(Debug, Args)]
pub struct SupnormArgs {
    /// Interval "a,b".
    #[arg(long)]
    pub interval: String,
    /// Polynomial as a JSON coefficient array, constant first.
    #[arg(long, conflicts_with = "product", required_unless_present = "product")]
    pub poly: Option<String>,
    /// Weighted product JSON file.
    #[arg(long)]
    pub product: Option<PathBuf>,
    /// Decimal digits in the text output.
    #[arg(long, default_value_t = 30)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct ObstructionArgs {
    #[arg(long)]
    pub interval: String,
    #[arg(long = "dmax")]
    pub d_max: u32,
    #[arg(long = "hmax")]
    pub h_max: u32,
    #[arg(long, default_value_t = 30)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, required_unless_present = "check_upto")]
    pub n: Option<u32>,
    /// Check the inequality chains for n = 3..=N instead.
    #[arg(long, conflicts_with = "n")]
    pub check_upto: Option<u32>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    #[arg(long)]
    pub to: String,
    #[arg(long)]
    pub steps: u32,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 12)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub interval: String,
    /// Obstruction polynomial as a JSON coefficient array.
    #[arg(long)]
    pub q: String,
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    #[arg(long, default_value_t = 5)]
    pub rounds: usize,
    /// Lovász parameter.
    #[arg(long, default_value = "3/4")]
    pub delta: String,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub interval: String,
    #[arg(long)]
    pub q: String,
    /// JSON file: a list of coefficient arrays, or the output of `search`.
    #[arg(long)]
    pub factors: PathBuf,
    #[arg(long, default_value = "1e-9")]
    pub eps: String,
    #[arg(long, default_value_t = 50)]
    pub rounds: usize,
    /// Level of g away from the roots of q.
    #[arg(long, default_value = "1e-6")]
    pub g_eps: String,
    /// Radius around the roots of q where g vanishes.
    #[arg(long, default_value = "1e-9")]
    pub g_radius: String,
    /// Also round the weights to integer exponents with this denominator
    /// limit.
    #[arg(long)]
    pub denom_limit: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Table entry, or the n of q = nx - 1 with --product.
    #[arg(long, required_unless_present_any = ["all", "check"])]
    pub n: Option<u32>,
    /// Every table entry.
    #[arg(long, conflicts_with_all = ["n", "product", "check"])]
    pub all: bool,
    /// Weighted product JSON file.
    #[arg(long, requires_all = ["interval", "n"])]
    pub product: Option<PathBuf>,
    #[arg(long, requires = "product")]
    pub interval: Option<String>,
    /// Grid step when extending b past the table value.
    #[arg(long, default_value = "1/10000")]
    pub resolution: String,
    /// Re-check a saved certificate.
    #[arg(long, conflicts_with_all = ["n", "product"])]
    pub check: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FareyArgs {
    #[arg(long = "nmax")]
    pub n_max: u32,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalConfig {
    pub precision_bits: u32,
    pub max_precision_bits: u32,
    pub tol: Rational,
    pub format: Option<Format>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// Parses a tolerance: `2^-k`, a rational or a decimal.
pub fn parse_tol(s: &str) -> Result<Rational> {
    let t = s.trim();
    let v = match t.strip_prefix("2^") {
        Some(e) => rational::pow2(e.parse::<i64>().map_err(|_| Error::Parse(format!("bad tolerance {s:?}")))?),
        None => rational::parse_rational(t)?,
    };
    if v < int(0) {
        return Err(usage("tolerance must be >= 0"));
    }
    Ok(v)
}

fn read_file(p: &PathBuf) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))
}

fn parse_poly(s: &str) -> Result<IntPolynomial> {
    s.parse()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FactorFile {
    List(Vec<IntPolynomial>),
    Search { factors: Vec<IntPolynomial> },
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::Undecided(_) => EXIT_UNDECIDED,
        Error::AtRound { source, .. } => exit_for(source),
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let cfg = match config(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| run(&cli.command, &cfg, &mut buf));
    if let Err(e) = out.write_all(&buf) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_for(&e)
        }
    }
}

fn config(cli: &Cli) -> Result<GlobalConfig> {
    if cli.precision < 64 {
        return Err(usage("precision must be at least 64 bits"));
    }
    if cli.precision > cli.max_precision {
        return Err(usage(format!("precision {} exceeds max precision {}", cli.precision, cli.max_precision)));
    }
    Ok(GlobalConfig {
        precision_bits: cli.precision,
        max_precision_bits: cli.max_precision,
        tol: parse_tol(&cli.tol)?,
        format: cli.format,
    })
}

fn emit<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    let s = serde_json::to_string(v).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(out, "{s}").map_err(|e| usage(e.to_string()))
}

fn line(out: &mut dyn Write, s: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{s}").map_err(|e| usage(e.to_string()))
}

fn no_csv(cmd: &str) -> Error {
    usage(format!("csv output is not available for {cmd}"))
}

pub fn run(cmd: &Command, cfg: &GlobalConfig, out: &mut dyn Write) -> Result<i32> {
    let fmt = cfg.format;
    match cmd {
        Command::Supnorm(a) => {
            let iv = RatInterval::parse(&a.interval)?;
            if let Some(s) = &a.poly {
                let p = parse_poly(s)?;
                let v = realanalysis::supnorm_with_precision(&p, &iv, cfg.precision_bits)?;
                let (lo, hi) = v.to_decimal_pair(a.digits);
                match fmt.unwrap_or(Format::Json) {
                    Format::Json => emit(out, &json!({"poly": p, "interval": [iv.a().to_string(), iv.b().to_string()], "supnorm": v, "decimal": [lo, hi]}))?,
                    Format::Text => line(out, format_args!("||{p}|| on {iv} in [{lo}, {hi}]"))?,
                    Format::Csv => return Err(no_csv("supnorm")),
                }
            } else {
                let path = a.product.as_ref().expect("clap enforces poly or product");
                let p = WeightedProduct::from_json(&read_file(path)?)?;
                let m = realanalysis::log_supnorm_weighted_evidence(&p, &iv, cfg.precision_bits)?;
                let d = p.total_degree();
                let per = m.value.mul_rational(&Rational::new(BigInt::from(1), BigInt::from(d)));
                let (lo, hi) = per.to_decimal_pair(a.digits);
                match fmt.unwrap_or(Format::Json) {
                    Format::Json => emit(
                        out,
                        &json!({"interval": [iv.a().to_string(), iv.b().to_string()], "D": d, "log_supnorm": m.value, "log_supnorm_per_degree_decimal": [lo, hi], "candidates": m.candidates}),
                    )?,
                    Format::Text => line(out, format_args!("log ||P||/D on {iv} in [{lo}, {hi}] (D = {d})"))?,
                    Format::Csv => return Err(no_csv("supnorm")),
                }
            }
            Ok(EXIT_OK)
        }
        Command::Obstruction(a) => {
            let iv = RatInterval::parse(&a.interval)?;
            let found = obstruction::max_obstruction_search(&iv, a.d_max, a.h_max)?;
            match fmt.unwrap_or(Format::Json) {
                Format::Json => match &found {
                    Some(o) => emit(
                        out,
                        &json!({"poly": o.q, "a_d": o.a_d().to_string(), "d": o.d(), "value_decimal": obstruction::value_decimal(&o.value, a.digits)}),
                    )?,
                    None => emit(out, &serde_json::Value::Null)?,
                },
                Format::Text => match &found {
                    Some(o) => line(out, format_args!("{} : a_d^(-1/d) = {}", o.q, obstruction::value_decimal(&o.value, a.digits)))?,
                    None => line(out, "no obstruction within the budget")?,
                },
                Format::Csv => return Err(no_csv("obstruction")),
            }
            Ok(EXIT_OK)
        }
        Command::Bounds(a) => {
            if let Some(n_max) = a.check_upto {
                let r = bounds::theorem5_inequalities(n_max)?;
                match fmt.unwrap_or(Format::Json) {
                    Format::Json => emit(out, &r)?,
                    Format::Text => line(out, format_args!("n = 3..{n_max}: {} violations", r.violations.len()))?,
                    Format::Csv => {
                        line(out, "n,sequence_bound,rational_function_bound,increasing")?;
                        for c in &r.checks {
                            line(out, format_args!("{},{},{},{}", c.n, c.sequence_bound, c.rational_function_bound, c.increasing))?;
                        }
                    }
                }
                return Ok(if r.violations.is_empty() { EXIT_OK } else { EXIT_REFUTED });
            }
            let b = bounds::bmax_bounds(a.n.expect("clap enforces n"))?;
            match fmt.unwrap_or(Format::Json) {
                Format::Json => emit(out, &json!({"lower": b.lower.to_string(), "upper": b.upper.to_string()}))?,
                Format::Text => line(out, format_args!("{} <= b_max({}) <= {}", b.lower, b.n, b.upper))?,
                Format::Csv => {
                    line(out, "n,lower,upper")?;
                    line(out, format_args!("{},{},{}", b.n, b.lower, b.upper))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Profile(a) => {
            let x_lo = rational::parse_rational(&a.from)?;
            let x_hi = rational::parse_rational(&a.to)?;
            let plateaus = table_plateaus(cfg)?;
            let rows = bounds::tm_profile(&x_lo, &x_hi, a.steps, &plateaus)?;
            let mut buf = Vec::new();
            match fmt.unwrap_or(Format::Csv) {
                Format::Csv => bounds::write_profile_csv(&rows, a.digits, &mut buf)?,
                Format::Json => {
                    let v: Vec<_> = rows
                        .iter()
                        .map(|r| json!({"x": r.x.to_string(), "lower": r.lower.to_string(), "upper": r.upper.to_string(), "lower_source": r.lower_source, "upper_source": r.upper_source}))
                        .collect();
                    emit(&mut buf, &v)?;
                }
                Format::Text => {
                    for r in &rows {
                        line(&mut buf, format_args!("x = {}: {} <= t_M <= {}", r.x, r.lower, r.upper))?;
                    }
                }
            }
            match &a.out {
                Some(p) => std::fs::write(p, buf).map_err(|e| usage(format!("{}: {e}", p.display())))?,
                None => out.write_all(&buf).map_err(|e| usage(e.to_string()))?,
            }
            Ok(EXIT_OK)
        }
        Command::Search(a) => {
            let iv = RatInterval::parse(&a.interval)?;
            let q = parse_poly(&a.q)?;
            let delta = rational::parse_rational(&a.delta)?;
            let r = lattice::factor_search(&iv, &q, a.k, a.rounds, &delta)?;
            match fmt.unwrap_or(Format::Json) {
                Format::Json => emit(out, &r)?,
                Format::Text => {
                    for (f, res) in r.factors.iter().zip(&r.resultants) {
                        line(out, format_args!("{f}  |Res| = {res}"))?;
                    }
                }
                Format::Csv => return Err(no_csv("search")),
            }
            Ok(EXIT_OK)
        }
        Command::Optimize(a) => {
            let iv = RatInterval::parse(&a.interval)?;
            let q = parse_poly(&a.q)?;
            let factors = match serde_json::from_str::<FactorFile>(&read_file(&a.factors)?) {
                Ok(FactorFile::List(f)) | Ok(FactorFile::Search { factors: f }) => f,
                Err(e) => return Err(Error::Parse(format!("factor file: {e}"))),
            };
            let g = GParams { epsilon: rational::parse_rational(&a.g_eps)?, radius: rational::parse_rational(&a.g_radius)? };
            let eps = rational::parse_rational(&a.eps)?;
            let sol = exponent::remez_iterate(&iv, &factors, &q, &eps, None, a.rounds, &g, cfg.precision_bits)?;
            let exps = match a.denom_limit {
                Some(l) => {
                    let degs: Vec<usize> = factors.iter().map(|f| f.degree().unwrap_or(0)).collect();
                    Some(exponent::rationalize_exponents(&sol.alpha, &degs, &BigInt::from(l))?)
                }
                None => None,
            };
            #[derive(Serialize)]
            struct Out<'a> {
                #[serde(flatten)]
                solution: &'a ExponentSolution,
                exponents: Option<Vec<u64>>,
            }
            match fmt.unwrap_or(Format::Json) {
                Format::Json => emit(out, &Out { solution: &sol, exponents: exps })?,
                Format::Text => {
                    for h in &sol.history {
                        line(out, format_args!("round {}: m = {} ({} points)", h.round, h.m_decimal, h.points))?;
                    }
                    let alpha: Vec<String> = sol.alpha.iter().map(|x| x.to_string()).collect();
                    line(out, format_args!("alpha = ({})", alpha.join(", ")))?;
                    if let Some(e) = exps {
                        line(out, format_args!("exponents = {e:?}"))?;
                    }
                }
                Format::Csv => return Err(no_csv("optimize")),
            }
            Ok(EXIT_OK)
        }
        Command::Certify(a) => run_certify(a, cfg, out),
        Command::Farey(a) => {
            let flagged = bounds::farey_scan(a.n_max)?;
            match fmt.unwrap_or(Format::Json) {
                Format::Json => emit(out, &flagged)?,
                Format::Text => line(out, format_args!("{} flagged pairs with denominators up to {}", flagged.len(), a.n_max))?,
                Format::Csv => {
                    line(out, "p,q,r,s")?;
                    for f in &flagged {
                        line(out, format_args!("{},{},{},{}", f.p, f.q, f.r, f.s))?;
                    }
                }
            }
            Ok(if flagged.is_empty() { EXIT_OK } else { EXIT_REFUTED })
        }
    }
}

/// Plateaus from table entries that certify at their printed `b`.
fn table_plateaus(cfg: &GlobalConfig) -> Result<Vec<bounds::Plateau>> {
    let certs: Vec<Result<Option<bounds::Plateau>>> = certify::builtin_table()
        .into_par_iter()
        .map(|e| {
            let iv = RatInterval::new(int(0), e.b.clone())?;
            let c = certify::verify_attaining_with(&e.product, &iv, e.n, &cfg.tol, cfg.precision_bits, cfg.max_precision_bits)?;
            Ok((c.verdict == Verdict::Certified).then_some(bounds::Plateau { n: e.n, b: e.b }))
        })
        .collect();
    let mut out = Vec::new();
    for c in certs {
        out.extend(c?);
    }
    Ok(out)
}

#[derive(Serialize)]
struct BmaxOut<'a> {
    #[serde(flatten)]
    certificate: &'a Certificate,
    #[serde(serialize_with = "ser_opt")]
    extended_b: &'a Option<Rational>,
}

fn ser_opt<S: serde::Serializer>(v: &&Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(|x| x.to_string()).serialize(s)
}

fn certificate_text(c: &Certificate) -> String {
    let mut s = format!("n = {} on [{}, {}]: {:?}", c.n, c.interval[0], c.interval[1], c.verdict).to_lowercase();
    if let Some(w) = &c.witness {
        s.push_str(&format!(" ({})", serde_json::to_string(w).expect("serializable")));
    }
    s
}

fn run_certify(a: &CertifyArgs, cfg: &GlobalConfig, out: &mut dyn Write) -> Result<i32> {
    let fmt = cfg.format.unwrap_or(Format::Json);
    if fmt == Format::Csv {
        return Err(no_csv("certify"));
    }
    if let Some(path) = &a.check {
        let c = Certificate::from_json(&read_file(path)?)?;
        let v = certify::check_certificate(&c)?;
        if v != c.verdict {
            return Err(Error::Parse(format!("certificate claims {:?}, recomputed {:?}", c.verdict, v)));
        }
        match fmt {
            Format::Text => line(out, certificate_text(&c))?,
            _ => emit(out, &json!({"verdict": v, "consistent": true}))?,
        }
        return Ok(v.exit_code());
    }
    let resolution = rational::parse_rational(&a.resolution)?;
    if let Some(path) = &a.product {
        let p = WeightedProduct::from_json(&read_file(path)?)?;
        let iv = RatInterval::parse(a.interval.as_deref().expect("clap enforces interval"))?;
        let n = a.n.expect("clap enforces n");
        let c = certify::verify_attaining_with(&p, &iv, n, &cfg.tol, cfg.precision_bits, cfg.max_precision_bits)?;
        match fmt {
            Format::Text => line(out, certificate_text(&c))?,
            _ => emit(out, &c)?,
        }
        return Ok(c.verdict.exit_code());
    }
    let certs = if a.all {
        certify::certify_all(&cfg.tol, &resolution, cfg.precision_bits, cfg.max_precision_bits)?
    } else {
        let n = a.n.expect("clap enforces n");
        vec![certify::certify_bmax_lower_with(n, &cfg.tol, &resolution, cfg.precision_bits, cfg.max_precision_bits)?]
    };
    let outs: Vec<BmaxOut> = certs.iter().map(|c| BmaxOut { certificate: &c.certificate, extended_b: &c.extended_b }).collect();
    match fmt {
        Format::Text => {
            for c in &certs {
                let ext = c.extended_b.as_ref().map(|b| format!(", holds up to b = {b}")).unwrap_or_default();
                line(out, format_args!("{}{ext}", certificate_text(&c.certificate)))?;
            }
        }
        _ if a.all => emit(out, &outs)?,
        _ => emit(out, &outs[0])?,
    }
    let worst = certs.iter().map(|c| c.certificate.verdict).fold(Verdict::Certified, certify::worst);
    Ok(worst.exit_code())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["monictd"];
        argv.extend_from_slice(args);
        let code = dispatch(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn tolerance_forms() {
        assert_eq!(parse_tol("2^-64").unwrap(), rational::pow2(-64));
        assert_eq!(parse_tol("1e-9").unwrap(), Rational::new(1.into(), 1_000_000_000.into()));
        assert_eq!(parse_tol("1/3").unwrap(), Rational::new(1.into(), 3.into()));
        assert!(parse_tol("-1").is_err());
        assert!(parse_tol("2^x").is_err());
    }

    #[test]
    fn bounds_json() {
        let (code, out, _) = call(&["bounds", "--n", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"{"lower":"7/18","upper":"12/25"}"#);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["bounds"]).0, 2);
        assert_eq!(call(&["bounds", "--n", "1"]).0, 2);
        assert_eq!(call(&["--precision", "20000", "bounds", "--n", "3"]).0, 2);
        assert_eq!(call(&["supnorm", "--interval", "1,0", "--poly", "[\"0\",\"1\"]"]).0, 2);
        assert_eq!(call(&["--format", "csv", "supnorm", "--interval", "0,1", "--poly", "[\"0\",\"1\"]"]).0, 2);
    }

    #[test]
    fn help_exits_zero() {
        for sub in ["supnorm", "obstruction", "bounds", "profile", "search", "optimize", "certify", "farey"] {
            let (code, out, _) = call(&[sub, "--help"]);
            assert_eq!(code, 0, "{sub}");
            assert!(out.contains("Usage"), "{sub}");
        }
        assert_eq!(call(&["--help"]).0, 0);
    }
}
