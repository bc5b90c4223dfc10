//! Command-line front end. Parsing lives here rather than in the binary so
//! that tests can run commands in-process.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::primes_up_to;
use crate::coset::bounds_report;
use crate::error::{Error, Result};
use crate::families::{
    make_cyclotomic_quotient, make_g_with, make_h, make_r_with, tup_grid, verify_family, FamilyKind,
    FamilyVerification,
};
use crate::field::make_field;
use crate::number_theory::{irreducibility_sanity, least_split_prime, proof_inequalities, splits_completely};
use crate::reference::{self, CURVE_HIGH, CURVE_LOW, FIGURE_ORDER};
use crate::report::{computed, constant, ReportEnvelope, Status};
use crate::search::{
    p_n_table, search_range, Convention, SearchLog, SearchOptions, TableRow, DEFAULT_SEARCH_LIMIT,
};
use crate::sparse::{EnumerationBudget, SparsePolynomial};

/// Roots are listed in full up to this many.
pub const ROOT_LIST_LIMIT: usize = 1000;

#[derive(Debug, Parser)]
#[command(name = "fqsparse", version, about = "Roots and cosets of sparse polynomials over finite fields")]
pub struct Cli {
    /// Include wall-clock time in reports (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Roots, coset structure and root-count bounds of one polynomial.
    Analyze(AnalyzeArgs),
    /// Points (p_n, n) and the two logarithmic reference curves.
    Figure(FigureArgs),
    /// Exhaustive trinomial search over a range of primes.
    Search(SearchArgs),
    /// The p_n table as CSV.
    Table(TableArgs),
    /// Check an explicit family instance (or a grid of them).
    VerifyFamily(VerifyArgs),
    /// Least prime at which x^n - x - 1 splits into distinct linear factors.
    LeastSplit(LeastSplitArgs),
    /// Evaluate the explicit inequalities behind the least-split bounds.
    CheckInequalities(InequalityArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionArg {
    Strict,
    Extended,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Strict => Convention::Strict,
            ConventionArg::Extended => Convention::Extended,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    R,
    G,
    H,
    Cyclo,
}

impl From<KindArg> for FamilyKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::R => FamilyKind::R,
            KindArg::G => FamilyKind::G,
            KindArg::H => FamilyKind::H,
            KindArg::Cyclo => FamilyKind::Cyclotomic,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    /// Characteristic.
    #[arg(short)]
    pub p: u64,
    /// Extension degree.
    #[arg(short, default_value_t = 1)]
    pub k: u32,
    /// Polynomial with integer coefficients, e.g. "1 + 4x - 5x^8".
    pub polynomial: String,
    /// Largest field size to enumerate.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct FigureArgs {
    /// Search log to read records from.
    #[arg(long, conflicts_with = "paper_data")]
    pub log: Option<PathBuf>,
    /// Use the embedded published table instead of a log.
    #[arg(long)]
    pub paper_data: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Convention of the log records to plot.
    #[arg(long, value_enum, default_value_t = ConventionArg::Extended)]
    pub convention: ConventionArg,
    #[arg(long, default_value_t = 16)]
    pub n_max: u64,
    /// Write here instead of stdout and print a report.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 3)]
    pub pmin: u64,
    #[arg(long)]
    pub pmax: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = ConventionArg::Strict)]
    pub convention: ConventionArg,
    /// JSON-lines checkpoint; existing entries are reused.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Largest prime the search accepts.
    #[arg(long, default_value_t = DEFAULT_SEARCH_LIMIT)]
    pub budget: u64,
    /// Suppress progress lines on stderr.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    #[arg(long, default_value_t = 10)]
    pub n_max: u64,
    #[arg(long, default_value_t = 1300)]
    pub pmax: u64,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = ConventionArg::Extended)]
    pub convention: ConventionArg,
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value_t = DEFAULT_SEARCH_LIMIT)]
    pub budget: u64,
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub t: Option<u64>,
    #[arg(long)]
    pub u: Option<u32>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Every instance within the field-size budget.
    #[arg(long)]
    pub grid: bool,
    /// Largest field size for enumeration and for `--grid`.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct LeastSplitArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 100_000)]
    pub pmax: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct InequalityArgs {
    #[arg(long, default_value_t = 30)]
    pub nmax: u32,
}

/// What a command produced: text for stdout and the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

/// Command output before it is wrapped: either a payload for the JSON
/// envelope or raw text (CSV, SVG).
enum Produced {
    Payload(Value, Status),
    Text(String),
}

pub fn run(cli: Cli) -> Outcome {
    let start = Instant::now();
    let (name, input, result) = match &cli.command {
        Command::Analyze(a) => ("analyze", to_value(a), cmd_analyze(a)),
        Command::Figure(a) => ("figure", to_value(a), cmd_figure(a)),
        Command::Search(a) => ("search", to_value(a), cmd_search(a)),
        Command::Table(a) => ("table", to_value(a), cmd_table(a)),
        Command::VerifyFamily(a) => ("verify-family", to_value(a), cmd_verify_family(a)),
        Command::LeastSplit(a) => ("least-split", to_value(a), cmd_least_split(a)),
        Command::CheckInequalities(a) => ("check-inequalities", to_value(a), cmd_inequalities(a)),
    };
    let mut envelope = match result {
        Ok(Produced::Text(stdout)) => return Outcome { stdout, exit_code: 0 },
        Ok(Produced::Payload(payload, status)) => ReportEnvelope::new(name, input, payload, status),
        Err(e) => ReportEnvelope::error(name, input, &e),
    };
    if cli.timing {
        envelope.wall_time = Some(start.elapsed().as_secs_f64());
    }
    Outcome {
        stdout: envelope.to_json(),
        exit_code: envelope.status.exit_code(),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> std::result::Result<Outcome, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Ok(run(Cli::try_parse_from(args)?))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("arguments serialize")
}

fn budget_from(limit: Option<u64>) -> EnumerationBudget {
    match limit {
        Some(q) => EnumerationBudget {
            prime_field: q,
            extension_field: q,
        },
        None => EnumerationBudget::default(),
    }
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<Produced> {
    let budget = budget_from(a.budget);
    let field = make_field(a.p, a.k)?;
    let f = SparsePolynomial::parse(field.clone(), &a.polynomial)?;
    budget.check(&field)?;
    let canonical = f.canonicalize();
    let mut payload = json!({
        "field": field.descriptor(),
        "polynomial": f.to_string(),
        "terms": f.to_json(),
        "provenance": "computed",
        "convention": {
            "strict": f.is_strict(),
            "canonical": f.is_canonical(),
            "divided_out": f.divided_out(),
        },
    });
    if canonical.t() < 2 {
        payload["note"] = json!("monomial: the only possible root is 0, no coset structure to report");
        payload["roots"] = json!({ "count": usize::from(f.includes_zero()), "includes_zero": f.includes_zero() });
        return Ok(Produced::Payload(payload, Status::CapabilityError));
    }
    let z = canonical.roots_in_units_with(&budget)?;
    let mut roots = json!({
        "count": z.count() + usize::from(f.includes_zero()),
        "nonzero": z.count(),
        "includes_zero": f.includes_zero(),
    });
    if z.count() <= ROOT_LIST_LIMIT {
        roots["list"] = json!(z.formatted());
    }
    let report = bounds_report(&f)?;
    let violations = report.violations();
    payload["roots"] = roots;
    payload["coset_report"] = serde_json::to_value(&report).expect("reports serialize");
    payload["violations"] = json!(violations);
    let status = if violations.is_empty() { Status::Ok } else { Status::Failure };
    Ok(Produced::Payload(payload, status))
}

/// `(p, n)` points of the figure, in plotting order.
pub fn figure_points(a: &FigureArgs) -> Result<Vec<(u64, u64)>> {
    if a.paper_data {
        return Ok(FIGURE_ORDER
            .iter()
            .filter(|&&n| n <= a.n_max)
            .map(|&n| (reference::p_n(n).expect("table covers 1..=16"), n))
            .collect());
    }
    let path = a
        .log
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("figure needs --log or --paper-data".into()))?;
    let log = SearchLog::open(path)?;
    let mut points: Vec<(u64, u64)> = p_n_table(&log, a.convention.into(), a.n_max)
        .into_iter()
        .filter_map(|row| row.p_n.map(|p| (p, row.n)))
        .collect();
    if points.is_empty() {
        return Err(Error::NotFound(format!("{} holds no usable records", path.display())));
    }
    points.sort_unstable();
    Ok(points)
}

pub fn figure_csv(points: &[(u64, u64)]) -> String {
    let mut out = String::from("x,n_points,curve_low,curve_high\n");
    for &(p, n) in points {
        let ln = (p as f64).ln();
        let _ = writeln!(out, "{p},{n},{:.6},{:.6}", CURVE_LOW * ln, CURVE_HIGH * ln);
    }
    out
}

pub fn figure_svg(points: &[(u64, u64)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 40.0;
    let x_max = points.iter().map(|p| p.0).max().unwrap_or(3) as f64;
    let ln_max = x_max.ln();
    let y_max = (CURVE_HIGH * ln_max).max(points.iter().map(|p| p.1).max().unwrap_or(1) as f64);
    let sx = |x: f64| M + (x.ln() / ln_max) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y / y_max) * (H - 2.0 * M);
    let polyline = |pts: Vec<(f64, f64)>, style: &str| {
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        format!("  <polyline fill=\"none\" {style} points=\"{}\"/>\n", coords.join(" "))
    };
    let curve = |c: f64| {
        let steps = 64;
        (0..=steps)
            .map(|i| {
                let x = (ln_max * i as f64 / steps as f64).exp().max(1.0);
                (x, c * x.ln())
            })
            .collect::<Vec<_>>()
    };
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{M}\" y1=\"{y}\" x2=\"{x}\" y2=\"{y}\" stroke=\"black\"/>",
        y = H - M,
        x = W - M
    );
    let _ = writeln!(out, "  <line x1=\"{M}\" y1=\"{M}\" x2=\"{M}\" y2=\"{y}\" stroke=\"black\"/>", y = H - M);
    out.push_str(&polyline(curve(CURVE_LOW), "stroke=\"black\" stroke-width=\"2\""));
    out.push_str(&polyline(curve(CURVE_HIGH), "stroke=\"black\" stroke-width=\"2\""));
    let pts = points.iter().map(|&(p, n)| (p as f64, n as f64)).collect();
    out.push_str(&polyline(pts, "stroke=\"gray\" stroke-width=\"1\""));
    out.push_str("</svg>\n");
    out
}

fn cmd_figure(a: &FigureArgs) -> Result<Produced> {
    let points = figure_points(a)?;
    let text = match a.format {
        Format::Svg => figure_svg(&points),
        _ => figure_csv(&points),
    };
    match &a.output {
        None => Ok(Produced::Text(text)),
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Error::io(path, e))?;
            Ok(Produced::Payload(
                json!({ "output": path.display().to_string(), "points": points.len(), "provenance": if a.paper_data { "paper-constant" } else { "computed" } }),
                Status::Ok,
            ))
        }
    }
}

fn open_log(path: &Option<PathBuf>) -> Result<SearchLog> {
    match path {
        Some(p) => SearchLog::open(p),
        None => Ok(SearchLog::in_memory()),
    }
}

fn cmd_search(a: &SearchArgs) -> Result<Produced> {
    let mut log = open_log(&a.log)?;
    let options = SearchOptions {
        convention: a.convention.into(),
        workers: a.workers,
        limit: a.budget,
        progress: !a.quiet,
    };
    let summary = search_range(a.pmin, a.pmax, &options, &mut log)?;
    let records: Vec<Value> = log
        .records(options.convention)
        .filter(|r| (a.pmin..=a.pmax).contains(&r.p))
        .map(|r| {
            json!({
                "p": r.p,
                "max_count": r.max_count,
                "achieved_counts": r.achieved_counts,
                "witness": r.witness,
                "orbits_searched": r.orbits_searched,
            })
        })
        .collect();
    Ok(Produced::Payload(
        json!({ "summary": summary, "records": records, "provenance": "computed" }),
        Status::Ok,
    ))
}

/// Runs the search up to `pmax` and builds the `p_n` table.
pub fn compute_table(a: &TableArgs) -> Result<Vec<TableRow>> {
    let mut log = open_log(&a.log)?;
    let options = SearchOptions {
        convention: a.convention.into(),
        workers: a.workers,
        limit: a.budget,
        progress: !a.quiet,
    };
    search_range(2, a.pmax, &options, &mut log)?;
    Ok(p_n_table(&log, options.convention, a.n_max))
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("n,p_n,witness\n");
    for row in rows {
        let p = row.p_n.map(|p| p.to_string()).unwrap_or_default();
        let w = row.witness.map(|w| w.polynomial_text()).unwrap_or_default();
        let _ = writeln!(out, "{},{p},{w}", row.n);
    }
    out
}

fn cmd_table(a: &TableArgs) -> Result<Produced> {
    let rows = compute_table(a)?;
    if a.format == Format::Csv {
        return Ok(Produced::Text(table_csv(&rows)));
    }
    let mut all_match = true;
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            let published = reference::p_n(row.n);
            let matches = match (row.p_n, published) {
                (Some(p), Some(q)) => p == q,
                // unresolved within pmax: consistent only if the published value is larger
                (None, Some(q)) => q > a.pmax,
                (_, None) => true,
            };
            all_match &= matches;
            json!({
                "n": row.n,
                "p_n": computed(row.p_n),
                "published_p_n": published.map(constant),
                "witness": row.witness,
                "matches_published": matches,
            })
        })
        .collect();
    let status = if all_match { Status::Ok } else { Status::Failure };
    Ok(Produced::Payload(
        json!({ "rows": json_rows, "dataset_version": reference::DATASET_VERSION }),
        status,
    ))
}

fn require<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{name} is required")))
}

fn family_instances(a: &VerifyArgs) -> Result<Vec<crate::families::FamilyInstance>> {
    let budget = budget_from(a.budget);
    let kind: FamilyKind = a.kind.into();
    if !a.grid {
        let instance = match kind {
            FamilyKind::R | FamilyKind::G => {
                let t = require(a.t, "t")? as u32;
                let u = require(a.u, "u")?;
                let p = require(a.p, "p")?;
                if kind == FamilyKind::R {
                    make_r_with(t, u, p, &budget)?
                } else {
                    make_g_with(t, u, p, &budget)?
                }
            }
            FamilyKind::H => make_h(require(a.n, "n")?, require(a.p, "p")?)?,
            FamilyKind::Cyclotomic => make_cyclotomic_quotient(require(a.q, "q")?, require(a.t, "t")?)?,
        };
        return Ok(vec![instance]);
    }
    let mut out = Vec::new();
    match kind {
        FamilyKind::R | FamilyKind::G => {
            let q_max = a.budget.unwrap_or(budget.extension_field);
            for (t, u, p) in tup_grid(kind, &[2, 3, 4, 5], &[1, 2], q_max) {
                out.push(if kind == FamilyKind::R {
                    make_r_with(t, u, p, &budget)?
                } else {
                    make_g_with(t, u, p, &budget)?
                });
            }
        }
        FamilyKind::H => {
            for n in 2..=6 {
                for p in primes_up_to(100).into_iter().filter(|&p| p >= n + 2) {
                    out.push(make_h(n, p)?);
                }
            }
        }
        FamilyKind::Cyclotomic => {
            let q_max = a.budget.unwrap_or(256);
            for q in 3..=q_max {
                let factors = crate::arith::factorize(q);
                if factors.len() != 1 {
                    continue;
                }
                for t in crate::arith::divisors(q - 1).into_iter().filter(|&t| t >= 2) {
                    out.push(make_cyclotomic_quotient(q, t)?);
                }
            }
        }
    }
    Ok(out)
}

fn cmd_verify_family(a: &VerifyArgs) -> Result<Produced> {
    let instances = family_instances(a)?;
    let results: Vec<FamilyVerification> = instances.iter().map(verify_family).collect::<Result<_>>()?;
    let failed = results.iter().filter(|r| !r.passed).count();
    let status = if failed == 0 { Status::Ok } else { Status::Failure };
    let payload = if results.len() == 1 {
        json!({ "verification": results[0], "provenance": "computed" })
    } else {
        json!({
            "instances": results.len(),
            "failed": failed,
            "verifications": results,
            "provenance": "computed",
        })
    };
    Ok(Produced::Payload(payload, status))
}

fn cmd_least_split(a: &LeastSplitArgs) -> Result<Produced> {
    let p = least_split_prime(a.n, a.pmax)?;
    let h = make_h(a.n, p)?;
    let z = h.polynomial.roots_in_units()?;
    // re-check every smaller admissible prime
    let smaller_fail = primes_up_to(p - 1)
        .into_iter()
        .filter(|&s| s >= a.n + 2)
        .map(|s| splits_completely(a.n, s))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|ok| !ok);
    let mut payload = json!({
        "n": a.n,
        "p": computed(p),
        "roots": z.formatted(),
        "smaller_primes_fail": smaller_fail,
    });
    if a.n <= 10 {
        payload["irreducibility_sanity"] = json!(irreducibility_sanity(a.n as u32)?);
    }
    let status = if smaller_fail { Status::Ok } else { Status::Failure };
    Ok(Produced::Payload(payload, status))
}

fn cmd_inequalities(a: &InequalityArgs) -> Result<Produced> {
    let report = proof_inequalities(a.nmax)?;
    let status = if report.failures == 0 { Status::Ok } else { Status::Failure };
    Ok(Produced::Payload(json!(report), status))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> Outcome {
        run_args(std::iter::once("fqsparse").chain(args.iter().copied())).unwrap()
    }

    fn payload(out: &Outcome) -> Value {
        serde_json::from_str::<Value>(&out.stdout).unwrap()["payload"].clone()
    }

    #[test]
    fn analyze_examples() {
        let out = run_cli(&["analyze", "-p", "47", "1 + 4x - 5x^8"]);
        assert_eq!(out.exit_code, 0, "{}", out.stdout);
        let v = payload(&out);
        assert_eq!(v["roots"]["count"], 5);
        assert_eq!(v["coset_report"]["ko_bound"]["floor"], 7);

        let v = payload(&run_cli(&["analyze", "-p", "7", "1 + x^2 + x^4"]));
        assert_eq!(v["roots"]["count"], 4);
        assert_eq!(v["coset_report"]["delta"], 2);
        assert_eq!(v["coset_report"]["cover"]["size"], 2);

        let out = run_cli(&["analyze", "-p", "5", "x^3"]);
        assert_eq!(out.exit_code, 2);
        assert!(payload(&out)["note"].as_str().unwrap().contains("monomial"));
    }

    #[test]
    fn analyze_errors() {
        let out = run_cli(&["analyze", "-p", "7", "1 + x^"]);
        assert_eq!(out.exit_code, 1);
        assert_eq!(payload(&out)["position"], 6);
        let out = run_cli(&["analyze", "-p", "10000019", "1 + x"]);
        assert_eq!(out.exit_code, 2);
    }

    #[test]
    fn reports_are_byte_stable() {
        let a = run_cli(&["analyze", "-p", "9", "-k", "2", "1 + x + x^3"]);
        let b = run_cli(&["analyze", "-p", "9", "-k", "2", "1 + x + x^3"]);
        assert_eq!(a, b);
        let timed = run_cli(&["--timing", "least-split", "--n", "2", "--pmax", "100"]);
        assert!(timed.stdout.contains("wall_time"));
    }

    #[test]
    fn figure_modes() {
        let out = run_cli(&["figure", "--paper-data"]);
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert_eq!(lines.len(), 17);
        assert_eq!(lines[0], "x,n_points,curve_low,curve_high");
        assert!(lines[13].starts_with("8581,16,"));
        let out = run_cli(&["figure"]);
        assert_eq!(out.exit_code, 1);
        let dir = tempfile::tempdir().unwrap();
        let empty = dir.path().join("empty.jsonl");
        std::fs::write(&empty, "").unwrap();
        let out = run_cli(&["figure", "--log", empty.to_str().unwrap()]);
        assert_eq!(out.exit_code, 1);
        let svg = run_cli(&["figure", "--paper-data", "--format", "svg"]);
        assert!(svg.stdout.starts_with("<svg") && svg.stdout.matches("<polyline").count() == 3);
    }

    #[test]
    fn small_table() {
        let out = run_cli(&["table", "--n-max", "4", "--pmax", "30", "--quiet"]);
        assert_eq!(out.exit_code, 0);
        let ps: Vec<&str> = out.stdout.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
        assert_eq!(ps, vec!["3", "5", "11", "23"]);
    }

    #[test]
    fn families_and_number_theory() {
        let out = run_cli(&["verify-family", "--kind", "g", "--t", "3", "--u", "1", "--p", "3"]);
        assert_eq!(out.exit_code, 0);
        assert_eq!(payload(&out)["verification"]["root_count"], 4);
        let out = run_cli(&["least-split", "--n", "2", "--pmax", "100"]);
        assert_eq!(payload(&out)["p"]["value"], 11);
        assert_eq!(payload(&out)["p"]["provenance"], "computed");
        let out = run_cli(&["check-inequalities", "--nmax", "12"]);
        assert_eq!(out.exit_code, 0);
        let out = run_cli(&["verify-family", "--kind", "r"]);
        assert_eq!(out.exit_code, 1);
    }
}
