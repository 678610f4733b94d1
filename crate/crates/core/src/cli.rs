//! Batch runs behind the `tcl` binary: configuration, the survey table and
//! text/JSON/CSV rendering. Output is assembled sequentially in input order,
//! so the worker count never changes what gets printed.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis;
use crate::rings::{parse_element, RingError, RingHandle, DEFAULT_MAX_SIZE};
use crate::theorems::{self, CheckError, CheckResult, Status};
use crate::torsion::{self, IndexReport, Mode, SearchOptions};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Index,
    Decompose { element: String, n: u64 },
    Verify { check: Option<String> },
    Survey,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub specs: Vec<String>,
    pub strong: bool,
    pub conjugacy_reduction: bool,
    pub format: Format,
    pub max_size: u64,
    /// Worker threads; 0 picks the logical CPU count.
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub timing: bool,
}

impl RunConfig {
    pub fn new(command: Command, specs: Vec<String>) -> Self {
        RunConfig {
            command,
            specs,
            strong: false,
            conjugacy_reduction: true,
            format: Format::Text,
            max_size: DEFAULT_MAX_SIZE,
            jobs: 0,
            out: None,
            timing: true,
        }
    }

    fn search(&self) -> SearchOptions {
        SearchOptions { mode: Mode::from_strong(self.strong), conjugacy_reduction: self.conjugacy_reduction }
    }
}

/// Rings surveyed when `survey` is given no specs.
pub const DEFAULT_SURVEY: &[&str] = &[
    "GF(2)",
    "GF(3)",
    "GF(4)",
    "GF(5)",
    "GF(7)",
    "GF(8)",
    "GF(9)",
    "GF(16)",
    "M(2,GF(2))",
    "M(3,GF(2))",
    "M(2,GF(3))",
    "M(2,GF(4))",
    "T(1,GF(2))",
    "T(2,GF(2))",
    "T(3,GF(2))",
    "T(4,GF(2))",
    "T(5,GF(2))",
    "T(2,GF(3))",
    "P(GF(2),GF(4))",
    "P(GF(4),GF(8))",
    "P(GF(2),GF(4),GF(8))",
    "P(GF(3),GF(3))",
    "P(M(2,GF(2)),GF(4))",
    "Q(GF(2),2,1)",
    "Q(GF(2),2,2)",
    "Q(GF(4),2,1)",
    "Q(GF(3),2,1)",
    "Q(GF(3),3,1)",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("{0}")]
    Absent(String),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Ring(RingError::SizeGuardExceeded { .. }) => 4,
            CliError::Ring(_) => 2,
            CliError::Absent(_) => 3,
            CliError::ChecksFailed(_) | CliError::Io { .. } => 1,
        }
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Ring(r) => CliError::Ring(r),
            CheckError::UnknownCheck(_) => CliError::Usage(e.to_string()),
        }
    }
}

/// Rendered output plus the outcome that decides the exit code. Output is
/// still produced when the outcome is an error (failed checks, absent
/// decompositions, survey rows).
#[derive(Debug)]
pub struct Execution {
    pub output: String,
    pub outcome: Result<(), CliError>,
}

impl Execution {
    pub fn exit_code(&self) -> i32 {
        self.outcome.as_ref().map_or_else(CliError::exit_code, |_| 0)
    }
}

/// One survey line; every field is `None` when the ring failed to build.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyRow {
    pub ring: String,
    pub size: Option<u32>,
    pub units: Option<usize>,
    pub unit_exponent: Option<u64>,
    pub plain_index: Option<u64>,
    /// `None` inside a built row means no strong decomposition exists.
    pub strong_index: Option<u64>,
    pub characteristic: Option<u64>,
    pub nil_index_of_jacobson: Option<u32>,
    pub flags: Option<analysis::StructureFlags>,
    pub elapsed_ms: Option<f64>,
    pub error: Option<String>,
}

pub const SURVEY_COLUMNS: &[&str] = &[
    "ring",
    "size",
    "units",
    "unit_exponent",
    "plain_index",
    "strong_index",
    "characteristic",
    "nil_index_j",
    "abelian",
    "reduced",
    "boolean",
    "commutative",
    "units_eq_1_plus_j",
    "elapsed_ms",
    "error",
];

fn survey_row(spec: &str, config: &RunConfig) -> SurveyRow {
    let start = std::time::Instant::now();
    let ring = match RingHandle::parse_with_limit(spec, config.max_size) {
        Ok(r) => r,
        Err(e) => {
            return SurveyRow {
                ring: spec.to_string(),
                size: None,
                units: None,
                unit_exponent: None,
                plain_index: None,
                strong_index: None,
                characteristic: None,
                nil_index_of_jacobson: None,
                flags: None,
                elapsed_ms: None,
                error: Some(e.to_string()),
            }
        }
    };
    let opts = config.search();
    let plain = torsion::torsion_clean_index(&ring, SearchOptions { mode: Mode::Plain, ..opts });
    let strong = torsion::torsion_clean_index(&ring, SearchOptions { mode: Mode::Strong, ..opts });
    let report = analysis::analyze(&ring);
    SurveyRow {
        ring: ring.spec().to_string(),
        size: Some(ring.size()),
        units: Some(report.units.len()),
        unit_exponent: Some(report.unit_group_exponent),
        plain_index: plain.index,
        strong_index: strong.index,
        characteristic: Some(report.characteristic),
        nil_index_of_jacobson: Some(report.nil_index_of_jacobson),
        flags: Some(report.flags),
        elapsed_ms: config.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
        error: None,
    }
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// One row per spec, in input order; a failing spec yields an error row.
pub fn cmd_survey(specs: &[String], config: &RunConfig) -> Vec<SurveyRow> {
    with_pool(config.jobs, || specs.par_iter().map(|s| survey_row(s, config)).collect())
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

pub fn survey_csv(rows: &[SurveyRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SURVEY_COLUMNS).unwrap();
    for r in rows {
        let built = r.error.is_none();
        let flag = |f: fn(&analysis::StructureFlags) -> bool| {
            r.flags.as_ref().map(|x| f(x).to_string()).unwrap_or_default()
        };
        let strong = match (built, r.strong_index) {
            (true, None) => "none".to_string(),
            (_, s) => opt(&s),
        };
        w.write_record([
            r.ring.clone(),
            opt(&r.size),
            opt(&r.units),
            opt(&r.unit_exponent),
            opt(&r.plain_index),
            strong,
            opt(&r.characteristic),
            opt(&r.nil_index_of_jacobson),
            flag(|f| f.abelian),
            flag(|f| f.reduced),
            flag(|f| f.boolean),
            flag(|f| f.commutative),
            flag(|f| f.units_equal_one_plus_j),
            r.elapsed_ms.map(|t| format!("{t:.3}")).unwrap_or_default(),
            opt(&r.error),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn survey_text(rows: &[SurveyRow]) -> String {
    let mut s = format!(
        "{:<24} {:>7} {:>6} {:>8} {:>6} {:>7} {:>5} {:>4}\n",
        "ring", "|R|", "|U|", "exp(U)", "plain", "strong", "char", "nilJ"
    );
    for r in rows {
        if let Some(e) = &r.error {
            writeln!(s, "{:<24} error: {e}", r.ring).unwrap();
            continue;
        }
        let strong = r.strong_index.map_or("none".to_string(), |n| n.to_string());
        writeln!(
            s,
            "{:<24} {:>7} {:>6} {:>8} {:>6} {:>7} {:>5} {:>4}",
            r.ring,
            opt(&r.size),
            opt(&r.units),
            opt(&r.unit_exponent),
            opt(&r.plain_index),
            strong,
            opt(&r.characteristic),
            opt(&r.nil_index_of_jacobson)
        )
        .unwrap();
    }
    s
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn index_text(ring: &RingHandle, rep: &IndexReport) -> String {
    let mut s = String::new();
    writeln!(s, "ring: {}", rep.ring).unwrap();
    writeln!(s, "mode: {}", rep.mode).unwrap();
    match rep.index {
        Some(n) => writeln!(s, "index: {n}").unwrap(),
        None => {
            let w = rep.no_decomposition_witness.unwrap();
            writeln!(s, "index: none ({} has no decomposition)", ring.wrap(w)).unwrap()
        }
    }
    for w in &rep.witnesses {
        writeln!(s, "witness: {} {} needs order {}", w.element, ring.wrap(w.element), w.order).unwrap();
    }
    writeln!(s, "exp(U): {}", rep.exponent_of_units).unwrap();
    writeln!(
        s,
        "elements: {} (order sets computed: {}, distinct: {})",
        rep.element_count, rep.stats.classes_scanned, rep.stats.distinct_order_sets
    )
    .unwrap();
    if let Some(t) = rep.elapsed_ms {
        writeln!(s, "elapsed: {t:.3} ms").unwrap();
    }
    s
}

fn analyze_text(ring: &RingHandle, rep: &analysis::StructureReport) -> String {
    let mut s = String::new();
    let f = &rep.flags;
    writeln!(s, "ring: {} ({} elements, characteristic {})", rep.ring, rep.size, rep.characteristic).unwrap();
    writeln!(s, "idempotents: {}", rep.idempotents.len()).unwrap();
    writeln!(s, "units: {} (exponent {})", rep.units.len(), rep.unit_group_exponent).unwrap();
    writeln!(s, "jacobson: {} elements, nil index {}", rep.jacobson.len(), rep.nil_index_of_jacobson).unwrap();
    writeln!(s, "center: {} elements", rep.center_size).unwrap();
    let prims: Vec<String> =
        rep.primitive_central_idempotents.iter().map(|&e| ring.wrap(e).to_string()).collect();
    writeln!(s, "primitive central idempotents: {}", prims.join(" ")).unwrap();
    writeln!(
        s,
        "abelian: {}  reduced: {}  boolean: {}  commutative: {}  U = 1 + J: {}",
        f.abelian, f.reduced, f.boolean, f.commutative, f.units_equal_one_plus_j
    )
    .unwrap();
    s
}

fn verify_text(results: &[CheckResult]) -> String {
    let mut s = String::new();
    for r in results {
        write!(s, "{:<22} {:<15} {}", r.id, r.status.to_string(), r.detail).unwrap();
        if let Some(w) = &r.witness {
            write!(s, " witness {w:?}").unwrap();
        }
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct AbsentRecord<'a> {
    ring: &'a str,
    r: u32,
    n: u64,
    strong: bool,
    certificate: Option<()>,
}

/// Single-element probe, rendered.
pub fn cmd_decompose(ring: &RingHandle, element: &str, n: u64, config: &RunConfig) -> Execution {
    let r = match parse_element(ring, element) {
        Ok(r) => r,
        Err(e) => return Execution { output: String::new(), outcome: Err(e.into()) },
    };
    if n == 0 {
        let err = CliError::Usage("n must be positive".into());
        return Execution { output: String::new(), outcome: Err(err) };
    }
    match torsion::decompose(&r, n, config.strong) {
        Some(c) => {
            let output = match config.format {
                Format::Json => json(&c.to_record()),
                _ => format!(
                    "{} = {} + {}\ne = {} (enc {}), u = {} (enc {}), o(u) = {}{}\n",
                    c.r,
                    c.e,
                    c.u,
                    c.e,
                    c.e.enc(),
                    c.u,
                    c.u.enc(),
                    c.order,
                    if c.strong { ", eu = ue" } else { "" }
                ),
            };
            Execution { output, outcome: Ok(()) }
        }
        None => {
            let what = if config.strong { "strongly " } else { "" };
            let msg = format!("{r} has no {what}{n}-torsion clean decomposition in {ring}");
            let output = match config.format {
                Format::Json => json(&AbsentRecord {
                    ring: ring.spec(),
                    r: r.enc(),
                    n,
                    strong: config.strong,
                    certificate: None,
                }),
                _ => format!("absent: {msg}\n"),
            };
            Execution { output, outcome: Err(CliError::Absent(msg)) }
        }
    }
}

fn parse_all(config: &RunConfig) -> Result<Vec<RingHandle>, CliError> {
    config.specs.iter().map(|s| Ok(RingHandle::parse_with_limit(s, config.max_size)?)).collect()
}

fn single(config: &RunConfig) -> Result<RingHandle, CliError> {
    if config.specs.len() != 1 {
        return Err(CliError::Usage(format!("expected one ring spec, got {}", config.specs.len())));
    }
    Ok(parse_all(config)?.remove(0))
}

/// Runs a configured command and renders its output.
pub fn execute(config: &RunConfig) -> Execution {
    let failed = |e: CliError| Execution { output: String::new(), outcome: Err(e) };
    if config.format == Format::Csv && config.command != Command::Survey {
        return failed(CliError::Usage("--csv is only available for survey".into()));
    }
    if config.command == Command::Survey {
        let specs: Vec<String> = if config.specs.is_empty() {
            DEFAULT_SURVEY.iter().map(|s| s.to_string()).collect()
        } else {
            config.specs.clone()
        };
        let rows = cmd_survey(&specs, config);
        let output = match config.format {
            Format::Csv => survey_csv(&rows),
            Format::Json => json(&rows),
            Format::Text => survey_text(&rows),
        };
        return Execution { output, outcome: Ok(()) };
    }
    let ring = match single(config) {
        Ok(r) => r,
        Err(e) => return failed(e),
    };
    with_pool(config.jobs, || match &config.command {
        Command::Analyze => {
            let rep = analysis::analyze(&ring);
            let output = match config.format {
                Format::Json => json(&rep),
                _ => analyze_text(&ring, &rep),
            };
            Execution { output, outcome: Ok(()) }
        }
        Command::Index => {
            let mut rep = torsion::torsion_clean_index(&ring, config.search());
            if !config.timing {
                rep.elapsed_ms = None;
            }
            let output = match config.format {
                Format::Json => json(&rep),
                _ => index_text(&ring, &rep),
            };
            let outcome = match rep.no_decomposition_witness {
                Some(w) => Err(CliError::Absent(format!(
                    "{} has no strong decomposition in {}",
                    ring.wrap(w),
                    ring
                ))),
                None => Ok(()),
            };
            Execution { output, outcome }
        }
        Command::Decompose { element, n } => cmd_decompose(&ring, element, *n, config),
        Command::Verify { check } => {
            let results = match check {
                Some(id) => match theorems::run_check(&ring, id) {
                    Ok(r) => vec![r],
                    Err(e) => return failed(e.into()),
                },
                None => theorems::run_suite(&ring),
            };
            let fails = results.iter().filter(|r| r.status == Status::Fail).count();
            let output = match config.format {
                Format::Json => json(&results),
                _ => verify_text(&results),
            };
            let outcome = if fails == 0 { Ok(()) } else { Err(CliError::ChecksFailed(fails)) };
            Execution { output, outcome }
        }
        Command::Survey => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsion::{verify_certificate, Certificate, CertificateRecord};

    fn config(command: Command, specs: &[&str]) -> RunConfig {
        let mut c = RunConfig::new(command, specs.iter().map(|s| s.to_string()).collect());
        c.timing = false;
        c
    }

    #[test]
    fn survey_examples() {
        let c = config(Command::Survey, &[]);
        let specs: Vec<String> = ["M(2,GF(2))", "M(3,GF(2))"].map(String::from).to_vec();
        let rows = cmd_survey(&specs, &c);
        let got: Vec<_> = rows.iter().map(|r| (r.plain_index, r.strong_index)).collect();
        assert_eq!(got, vec![(Some(2), Some(6)), (Some(3), Some(84))]);
        let specs: Vec<String> = (1..=5).map(|m| format!("T({m},GF(2))")).collect();
        let idx: Vec<_> = cmd_survey(&specs, &c).iter().map(|r| r.plain_index.unwrap()).collect();
        assert_eq!(idx, vec![1, 2, 4, 4, 8]);
    }

    #[test]
    fn survey_rows_capture_errors() {
        let c = config(Command::Survey, &[]);
        let specs: Vec<String> = ["GF(2)", "GF(6)", "M(9,GF(2))"].map(String::from).to_vec();
        let rows = cmd_survey(&specs, &c);
        assert_eq!(rows.len(), 3);
        assert!(rows[0].error.is_none());
        assert!(rows[1].error.as_deref().unwrap().contains("prime power"));
        assert!(rows[2].error.is_some());
        let csv = survey_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), SURVEY_COLUMNS.join(","));
        assert!(lines.next().unwrap().starts_with("GF(2),2,1,1,1,1,2,1,true,true,true,true,true,,"));
    }

    #[test]
    fn output_is_independent_of_jobs() {
        let mut a = config(Command::Survey, &["M(2,GF(2))", "T(3,GF(2))", "P(GF(2),GF(4))"]);
        a.format = Format::Csv;
        let mut b = a.clone();
        a.jobs = 1;
        b.jobs = 3;
        assert_eq!(execute(&a).output, execute(&b).output);
        a.format = Format::Json;
        b.format = Format::Json;
        assert_eq!(execute(&a).output, execute(&b).output);
    }

    #[test]
    fn decompose_examples() {
        let mut c = config(Command::Decompose { element: "[[1,1],[1,0]]".into(), n: 2 }, &["M(2,GF(2))"]);
        c.format = Format::Json;
        let ok = execute(&c);
        assert_eq!(ok.exit_code(), 0);
        let rec: CertificateRecord = serde_json::from_str(&ok.output).unwrap();
        assert_eq!((rec.e, rec.u, rec.order), (1, 6, 2));
        let ring = RingHandle::parse("M(2,GF(2))").unwrap();
        assert!(verify_certificate(&Certificate::from_record(&ring, &rec).unwrap()));

        c.strong = true;
        assert_eq!(execute(&c).exit_code(), 3);

        let mut z = config(Command::Decompose { element: "0".into(), n: 1 }, &["GF(2)"]);
        z.strong = true;
        z.format = Format::Json;
        let rec: CertificateRecord = serde_json::from_str(&execute(&z).output).unwrap();
        assert_eq!((rec.e, rec.u), (1, 1));

        let bad = config(Command::Decompose { element: "99".into(), n: 1 }, &["GF(2)"]);
        assert_eq!(execute(&bad).exit_code(), 2);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(execute(&config(Command::Index, &["GF(6)"])).exit_code(), 2);
        let mut big = config(Command::Index, &["M(4,GF(4))"]);
        assert_eq!(execute(&big).exit_code(), 4);
        big.max_size = 1 << 30;
        big.specs = vec!["GF(3)".into()];
        assert_eq!(execute(&big).exit_code(), 0);
        let v = config(Command::Verify { check: Some("no-such-check".into()) }, &["GF(2)"]);
        assert_eq!(execute(&v).exit_code(), 2);
        let mut csv = config(Command::Index, &["GF(2)"]);
        csv.format = Format::Csv;
        assert_eq!(execute(&csv).exit_code(), 2);
    }

    #[test]
    fn index_json_round_trips() {
        let mut c = config(Command::Index, &["M(2,GF(3))"]);
        c.format = Format::Json;
        let first = execute(&c).output;
        let rep: IndexReport = serde_json::from_str(&first).unwrap();
        assert_eq!(rep.exponent_of_units % rep.index.unwrap(), 0);
        assert_eq!(rep.elapsed_ms, None);
        assert_eq!(first, execute(&c).output);
        c.conjugacy_reduction = false;
        let unreduced: IndexReport = serde_json::from_str(&execute(&c).output).unwrap();
        assert_eq!(rep.normalized(), unreduced.normalized());
    }

    #[test]
    fn verify_outputs() {
        let mut c = config(Command::Verify { check: None }, &["T(3,GF(2))"]);
        c.format = Format::Json;
        let ex = execute(&c);
        assert_eq!(ex.exit_code(), 0);
        let results: Vec<CheckResult> = serde_json::from_str(&ex.output).unwrap();
        assert_eq!(results.len(), theorems::CHECK_IDS.len());
        c.command = Command::Verify { check: Some("thm-stn".into()) };
        let one: Vec<CheckResult> = serde_json::from_str(&execute(&c).output).unwrap();
        assert_eq!(one[0].status, Status::NotApplicable);
    }
}
