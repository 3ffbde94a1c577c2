//! Command-line driver and report emission.

use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::MalcevAlgebra;
use crate::equivalence::{classify_flag, Relation};
use crate::error::Error;
use crate::field::Field;
use crate::flag::{check_twisted_derivation, flag_product, solve_twisted_with, SolveOptions, TwistedDerivation};
use crate::io::{self, ParseError};
use crate::linalg::Vector;
use crate::report::{self, Check, DualReport, VerificationReport, Witness};
use crate::reps::{check_cocycle, cocycle_extension, diagnose_module, semidirect};
use crate::special::{
    bicrossed_product, crossed_product, matched_pair_check, skew_crossed_product, CrossedSystem, MatchedPairData,
    SkewCrossedSystem,
};
use crate::unified::{build_unified, diagnose_u, extract_datum, verify_unified_direct, ExtendingDatum, Projection};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RelationArg {
    Equiv,
    Cohom,
}

#[derive(Parser, Debug)]
#[command(name = "malcev", version, about = "Exact checks and constructions for Malcev algebra extensions")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Witnesses kept per condition.
    #[arg(long, global = true)]
    witness_cap: Option<usize>,
    /// Seed for sampled parameters.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value = "on")]
    parallel: OnOff,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Anticommutativity, both Malcev identities and the Jacobi identity.
    Check { file: PathBuf },
    /// J(x,y,z) for combinations of basis vectors.
    Jacobiator { file: PathBuf, x: String, y: String, z: String },
    /// Module identity and the semidirect product.
    Semidirect { alg: PathBuf, action: PathBuf },
    /// Cocycle identity and the twisted semidirect product.
    Cocycle { alg: PathBuf, action: PathBuf, omega: PathBuf },
    /// Malcev check of a unified product.
    Unified {
        datum: PathBuf,
        /// Also evaluate the printed compatibility list.
        #[arg(long)]
        diagnose: bool,
    },
    /// Extending datum of a coordinate subalgebra.
    Extract {
        alg: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        sub: Vec<String>,
    },
    /// Crossed product (no `tr` lines).
    Crossed { file: PathBuf },
    /// Skew crossed product (no `tl` lines).
    Skew { file: PathBuf },
    /// Matched pair and bicrossed product (no `omega` lines).
    Matched { file: PathBuf },
    /// Twisted derivation check and flag product.
    Flag {
        alg: PathBuf,
        #[arg(long, default_value = "")]
        lambda: String,
        #[arg(long = "D")]
        d: PathBuf,
    },
    /// All twisted derivations with a given λ over GF(p).
    SolveFlag {
        alg: PathBuf,
        #[arg(long, default_value = "")]
        lambda: String,
        #[arg(long)]
        field: Option<u64>,
        /// Samples per applicable closed-form family.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Classes of flag extensions over GF(p).
    Classify {
        alg: PathBuf,
        #[arg(long = "dimV", default_value_t = 1)]
        dim_v: usize,
        #[arg(long)]
        field: Option<u64>,
        #[arg(long, value_enum)]
        relation: Option<RelationArg>,
    },
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WitnessRecord {
    pub args: Vec<String>,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckRecord {
    pub condition_id: String,
    /// `canonical` records decide the verdict; `diagnostic` ones are informational.
    pub role: &'static str,
    pub passed: bool,
    pub as_printed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub failures: usize,
    pub witnesses: Vec<WitnessRecord>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ReportDocument {
    pub command: Vec<String>,
    pub overall: bool,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub document: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

fn wire(v: &Vector) -> Vec<String> {
    v.coords().iter().map(|c| c.to_wire()).collect()
}

fn witness_record(w: &Witness) -> WitnessRecord {
    WitnessRecord { args: w.args.clone(), lhs: wire(&w.lhs), rhs: wire(&w.rhs) }
}

fn record(c: &Check, role: &'static str) -> CheckRecord {
    CheckRecord {
        condition_id: c.condition_id.clone(),
        role,
        passed: c.passed,
        as_printed: c.as_printed,
        note: c.note.clone(),
        failures: c.failures,
        witnesses: c.witnesses.iter().map(witness_record).collect(),
    }
}

impl ReportDocument {
    pub fn new(command: Vec<String>) -> ReportDocument {
        ReportDocument { command, overall: true, checks: Vec::new(), result: None, document: None, timing_ms: None }
    }

    fn canonical(&mut self, rep: &VerificationReport) {
        self.checks.extend(rep.checks.iter().map(|c| record(c, "canonical")));
    }

    fn diagnostic(&mut self, rep: &VerificationReport) {
        self.checks.extend(rep.checks.iter().map(|c| record(c, "diagnostic")));
    }

    /// Printed list and agreement record as diagnostics, the direct check as canonical.
    fn dual(&mut self, d: &DualReport, field: Field) {
        self.diagnostic(&d.printed);
        self.canonical(&d.direct);
        self.checks.push(record(&d.agreement(field), "diagnostic"));
    }

    fn finish(&mut self) {
        self.overall = self.checks.iter().filter(|c| c.role == "canonical").all(|c| c.passed);
    }

    pub fn exit_code(&self) -> i32 {
        if self.overall {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

pub fn emit_report(rep: &ReportDocument, format: Format, color: bool) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rep).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => emit_text(rep, color),
    }
}

fn emit_text(rep: &ReportDocument, color: bool) -> String {
    let paint = |ok: bool| match (ok, color) {
        (true, true) => "\x1b[32mPASS\x1b[0m",
        (false, true) => "\x1b[31mFAIL\x1b[0m",
        (true, false) => "PASS",
        (false, false) => "FAIL",
    };
    let mut lines = vec![format!("malcev {}", rep.command.join(" "))];
    for c in &rep.checks {
        let mut line = format!("  {} {}", paint(c.passed), c.condition_id);
        if c.role == "diagnostic" {
            line.push_str(" (diagnostic)");
        }
        if c.failures > 0 {
            line.push_str(&format!(" [{} failing]", c.failures));
        }
        lines.push(line);
        if let Some(n) = &c.note {
            lines.push(format!("      {}{n}", if c.as_printed { "" } else { "repair: " }));
        }
        for w in &c.witnesses {
            lines.push(format!(
                "      ({}): lhs = ({}), rhs = ({})",
                w.args.join(", "),
                w.lhs.join(", "),
                w.rhs.join(", ")
            ));
        }
    }
    if let Some(Value::Object(map)) = &rep.result {
        for (k, v) in map {
            lines.push(format!("  {k}: {v}"));
        }
    }
    lines.push(format!("overall: {}", paint(rep.overall)));
    if let Some(t) = rep.timing_ms {
        lines.push(format!("time: {t} ms"));
    }
    let mut out = String::new();
    let prefix = if rep.document.is_some() { "# " } else { "" };
    for l in lines {
        out.push_str(prefix);
        out.push_str(&l);
        out.push('\n');
    }
    if let Some(doc) = &rep.document {
        out.push_str(doc);
    }
    out
}

enum Failure {
    Usage(String),
    Resource(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Run<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_at<T>(path: &Path, r: io::ParseResult<T>) -> Run<T> {
    r.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Path, field: Option<Field>) -> Run<MalcevAlgebra> {
    parse_at(path, io::parse_algebra_over(&read(path)?, field))
}

fn load_datum(path: &Path) -> Run<ExtendingDatum> {
    parse_at(path, io::parse_datum(&read(path)?))
}

fn prime_field(p: Option<u64>) -> Run<Option<Field>> {
    p.map(|p| Field::prime(p).map_err(|e| Failure::Usage(e.to_string()))).transpose()
}

/// Library errors that mean "the input does not satisfy a checked property" become a
/// failing report; shape and field errors are usage errors.
fn lib_error(rep: &mut ReportDocument, e: Error) -> Run<()> {
    match e {
        Error::ResourceLimit(msg) => Err(Failure::Resource(msg)),
        Error::NotMalcev
        | Error::NotASubalgebra
        | Error::NotIdempotent
        | Error::FactorNotMalcev(_)
        | Error::ModuleAxiomFailed
        | Error::LambdaInvalid(_) => {
            let mut c = Check::pass("precondition").with_note(e.to_string());
            c.passed = false;
            c.failures = 1;
            rep.checks.push(record(&c, "canonical"));
            Ok(())
        }
        other => Err(Failure::Usage(other.to_string())),
    }
}

macro_rules! attempt {
    ($rep:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => {
                lib_error(&mut $rep, err)?;
                return Ok($rep);
            }
        }
    };
}

fn run_cmd(cli: &Cli, rep: ReportDocument) -> Run<ReportDocument> {
    let mut rep = rep;
    match &cli.cmd {
        Cmd::Check { file } => {
            let m = load_algebra(file, None)?;
            rep.checks.push(record(&Check::pass("anticommutative"), "canonical"));
            let eq2 = m.check_malcev_eq2();
            let eq3 = m.check_malcev_eq3();
            rep.canonical(&eq2);
            rep.canonical(&eq3);
            let jac = m.jacobi_check();
            rep.checks.push(record(&jac, "diagnostic"));
            rep.result = Some(json!({
                "field": m.field().to_string(),
                "dim": m.dim(),
                "anticommutative": true,
                "malcev": eq2.overall() && eq3.overall(),
                "lie": jac.passed,
            }));
        }
        Cmd::Jacobiator { file, x, y, z } => {
            let m = load_algebra(file, None)?;
            let arg = |s: &str| io::parse_vector(s, &m).map_err(|e| Failure::Usage(format!("argument {s:?}: {e}")));
            let j = m.jacobiator(&arg(x)?, &arg(y)?, &arg(z)?).map_err(|e| Failure::Usage(e.to_string()))?;
            rep.result = Some(json!({
                "value": io::format_combination(m.names(), &j),
                "coords": wire(&j),
            }));
        }
        Cmd::Semidirect { alg, action } => {
            let m = load_algebra(alg, None)?;
            let act = parse_at(action, io::parse_action(&read(action)?, &m))?;
            let d = attempt!(rep, diagnose_module(&m, &act));
            rep.dual(&d, m.field());
            rep.document = Some(io::write_algebra(&attempt!(rep, semidirect(&m, &act))));
        }
        Cmd::Cocycle { alg, action, omega } => {
            let m = load_algebra(alg, None)?;
            let act = parse_at(action, io::parse_action(&read(action)?, &m))?;
            let w = parse_at(omega, io::parse_cocycle(&read(omega)?, &m, &act))?;
            let e = attempt!(rep, cocycle_extension(&m, &act, &w));
            let printed = match check_cocycle(&m, &act, &w) {
                Ok(r) => r,
                Err(Error::ModuleAxiomFailed) => attempt!(rep, crate::reps::check_module(&m, &act)),
                Err(err) => attempt!(rep, Err(err)),
            };
            let direct = VerificationReport::new(vec![e.check_malcev_eq3().checks[0].clone()]);
            rep.dual(&DualReport { printed, direct }, m.field());
            rep.document = Some(io::write_algebra(&e));
        }
        Cmd::Unified { datum, diagnose } => {
            let d = load_datum(datum)?;
            if *diagnose {
                let dual = attempt!(rep, diagnose_u(&d));
                rep.dual(&dual, d.field());
            } else {
                rep.canonical(&attempt!(rep, verify_unified_direct(&d)));
            }
            rep.document = Some(io::write_algebra(&attempt!(rep, build_unified(&d))));
        }
        Cmd::Extract { alg, sub } => {
            let e = load_algebra(alg, None)?;
            let names: Vec<&str> = sub.iter().map(String::as_str).collect();
            let pr = match Projection::coordinate_by_names(&e, &names) {
                Ok(p) => p,
                Err(Error::InvalidAlgebra(msg)) | Err(Error::DimensionMismatch(msg)) => return Err(Failure::Usage(msg)),
                Err(err) => attempt!(rep, Err(err)),
            };
            let d = attempt!(rep, extract_datum(&pr));
            rep.canonical(&attempt!(rep, crate::unified::phi_iso_check(&e, &pr, &d)));
            rep.document = Some(io::write_datum(&d));
        }
        Cmd::Crossed { file } => {
            let d = load_datum(file)?;
            if !d.tr.is_zero() {
                return Err(Failure::Usage("a crossed product document has no 'tr' lines".into()));
            }
            let cs = CrossedSystem { m: d.m.clone(), v: d.v_algebra(), tl: d.tl.clone(), omega: d.omega.clone() };
            let (e, dual) = attempt!(rep, crossed_product(&cs));
            rep.dual(&dual, d.field());
            rep.document = Some(io::write_algebra(&e));
        }
        Cmd::Skew { file } => {
            let d = load_datum(file)?;
            if !d.tl.is_zero() {
                return Err(Failure::Usage("a skew crossed product document has no 'tl' lines".into()));
            }
            let ss = SkewCrossedSystem { m: d.m.clone(), v: d.v_algebra(), tr: d.tr.clone(), omega: d.omega.clone() };
            let (e, dual) = attempt!(rep, skew_crossed_product(&ss));
            rep.dual(&dual, d.field());
            rep.document = Some(io::write_algebra(&e));
        }
        Cmd::Matched { file } => {
            let d = load_datum(file)?;
            if !d.omega.is_zero() {
                return Err(Failure::Usage("a matched pair document has no 'omega' lines".into()));
            }
            let mp = MatchedPairData { m: d.m.clone(), v: d.v_algebra(), tr: d.tr.clone(), tl: d.tl.clone() };
            let dual = attempt!(rep, matched_pair_check(&mp));
            rep.dual(&dual, d.field());
            rep.document = Some(io::write_algebra(&attempt!(rep, bicrossed_product(&mp))));
        }
        Cmd::Flag { alg, lambda, d } => {
            let m = load_algebra(alg, None)?;
            let lam = io::parse_functional(lambda, &m).map_err(|e| Failure::Usage(format!("--lambda: {e}")))?;
            let dm = parse_at(d, io::parse_derivation(&read(d)?, &m))?;
            let td = TwistedDerivation { lam, d: dm };
            let dual = attempt!(rep, check_twisted_derivation(&m, &td));
            rep.dual(&dual, m.field());
            rep.document = Some(io::write_algebra(&attempt!(rep, flag_product(&m, &td))));
        }
        Cmd::SolveFlag { alg, lambda, field, samples } => {
            let m = load_algebra(alg, prime_field(*field)?)?;
            let lam = io::parse_functional(lambda, &m).map_err(|e| Failure::Usage(format!("--lambda: {e}")))?;
            let opts = SolveOptions { samples: *samples, seed: cli.seed, ..SolveOptions::default() };
            let res = match solve_twisted_with(&m, &lam, &opts) {
                Ok(r) => r,
                Err(Error::LambdaInvalid(msg)) => {
                    let fams = attempt!(rep, crate::flag::evaluate_families(&m, &lam, opts.samples, opts.seed));
                    family_checks(&mut rep, &fams);
                    attempt!(rep, Err(Error::LambdaInvalid(msg)))
                }
                Err(Error::FieldNotAllowed(_, msg)) => return Err(Failure::Usage(format!("{msg}; pass --field p"))),
                Err(err) => attempt!(rep, Err(err)),
            };
            family_checks(&mut rep, &res.family_checks);
            let cap = report::witness_cap();
            rep.result = Some(json!({
                "linear_solution_dim": res.linear_space.particular.as_ref().map(|_| res.linear_space.kernel_basis.len()),
                "solutions": res.solutions.len(),
                "listed": res.solutions.iter().take(cap).map(|t| io::write_derivation(&m, &t.d)).collect::<Vec<_>>(),
            }));
        }
        Cmd::Classify { alg, dim_v, field, relation } => {
            if *dim_v != 1 {
                return Err(Failure::Usage(format!("classification supports --dimV 1, got {dim_v}")));
            }
            let m = load_algebra(alg, prime_field(*field)?)?;
            let res = match classify_flag(&m) {
                Ok(r) => r,
                Err(Error::FieldNotAllowed(_, msg)) => return Err(Failure::Usage(format!("{msg}; pass --field p"))),
                Err(err) => attempt!(rep, Err(err)),
            };
            let rels: Vec<Relation> = match relation {
                Some(RelationArg::Equiv) => vec![Relation::Equiv],
                Some(RelationArg::Cohom) => vec![Relation::Cohom],
                None => vec![Relation::Equiv, Relation::Cohom],
            };
            let mut classes = serde_json::Map::new();
            for rel in &rels {
                let mut c = Check::pass(format!("routes_agree_{}", rel.name()));
                let (a, b) = (res.classes(*rel).len(), res.cross_count(*rel));
                if a != b {
                    c.passed = false;
                    c.failures = 1;
                    c.note = Some(format!("datum route {a} classes, bracket route {b}"));
                }
                rep.checks.push(record(&c, "canonical"));
                let list: Vec<Value> = res
                    .classes(*rel)
                    .iter()
                    .map(|k| {
                        json!({
                            "lambda": io::format_functional(&m, &k.representative.lam),
                            "D": io::write_derivation(&m, &k.representative.d),
                            "size": k.size,
                        })
                    })
                    .collect();
                classes.insert(rel.name().to_string(), json!({ "count": a, "classes": list }));
            }
            let mut refine = Check::pass("cohom_refines_equiv");
            refine.passed = res.consistent();
            rep.checks.push(record(&refine, "canonical"));
            rep.result = Some(json!({
                "field": res.field.to_string(),
                "dim_m": res.dim_m,
                "dim_v": res.dim_v,
                "total_data": res.total_data,
                "relations": classes,
                "cross_check": {
                    "total": res.cross_check.total,
                    "equiv": res.cross_check.classes_equiv,
                    "cohom": res.cross_check.classes_cohom,
                },
            }));
        }
    }
    Ok(rep)
}

fn family_checks(rep: &mut ReportDocument, fams: &[crate::flag::FamilyCheck]) {
    let mut names: Vec<&str> = fams.iter().map(|f| f.family.as_str()).collect();
    names.dedup();
    for name in names {
        let samples: Vec<_> = fams.iter().filter(|f| f.family == name).collect();
        let disagree = samples.iter().filter(|f| f.printed != f.direct).count();
        let mut c = Check::pass(format!("family_{name}"));
        c.passed = disagree == 0;
        c.failures = disagree;
        c.note = Some(format!(
            "{} samples, printed pass {}, direct pass {}",
            samples.len(),
            samples.iter().filter(|f| f.printed).count(),
            samples.iter().filter(|f| f.direct).count()
        ));
        rep.checks.push(record(&c, "canonical"));
    }
    let list: Vec<Value> = fams
        .iter()
        .map(|f| {
            let params: serde_json::Map<String, Value> =
                f.params.iter().map(|(k, v)| (k.clone(), Value::String(v.to_wire()))).collect();
            json!({
                "family": f.family,
                "params": params,
                "printed": f.printed,
                "direct": f.direct,
                "failing": f.failing,
            })
        })
        .collect();
    if !list.is_empty() {
        rep.result = Some(json!({ "families": list }));
    }
}

/// Parses `argv` (program name first), runs the command and writes the report.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Some(cap) = cli.witness_cap {
        report::set_witness_cap(cap);
    }
    report::set_parallel(cli.parallel == OnOff::On);
    let command: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let start = Instant::now();
    match run_cmd(&cli, ReportDocument::new(command)) {
        Ok(mut rep) => {
            rep.finish();
            if cli.timing {
                rep.timing_ms = Some(start.elapsed().as_millis());
            }
            let color = cli.format == Format::Text
                && std::env::var_os("NO_COLOR").is_none()
                && std::io::stdout().is_terminal();
            let _ = out.write_all(emit_report(&rep, cli.format, color).as_bytes());
            rep.exit_code()
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Resource(msg)) => {
            let _ = writeln!(err, "resource limit: {msg}");
            EXIT_RESOURCE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_true() {
        let mut rep = ReportDocument::new(vec![]);
        rep.finish();
        assert!(rep.overall);
        let s = emit_report(&rep, Format::Json, false);
        assert!(s.contains("\"checks\": []"));
    }

    #[test]
    fn failing_check_schema() {
        let f = Field::prime(5).unwrap();
        let w = Witness::basis(&[0], vec!["e1".into()], Vector::from_i64(f, &[1]), Vector::from_i64(f, &[0]));
        let c = Check::from_witnesses("U3", 1, vec![w]);
        let mut rep = ReportDocument::new(vec!["unified".into()]);
        rep.canonical(&VerificationReport::new(vec![c]));
        rep.finish();
        assert!(!rep.overall);
        let v: Value = serde_json::from_str(&emit_report(&rep, Format::Json, false)).unwrap();
        assert_eq!(v["checks"][0]["condition_id"], "U3");
        assert_eq!(v["checks"][0]["passed"], false);
        assert_eq!(v["checks"][0]["witnesses"][0]["lhs"][0], "1 mod 5");
    }

    #[test]
    fn usage_errors_exit_2() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["malcev", "frobnicate"], &mut o, &mut e), EXIT_USAGE);
        assert_eq!(run(["malcev", "check", "/nonexistent/file.alg"], &mut o, &mut e), EXIT_USAGE);
        assert_eq!(run(["malcev", "--help"], &mut o, &mut e), EXIT_PASS);
    }
}
