//! Result records and their byte-stable serializations.
//!
//! Every JSON artifact carries `"schema": "pbtv/1"` and a `"kind"` tag.
//! CSV artifacts share one documented column set (see [`CSV_HEADER`]).
//! Serialization is a pure function of the record contents, and records
//! are pure functions of (seed, config, suite), so re-running a sweep
//! reproduces its output files byte for byte. Wall-clock metadata
//! (timestamps, durations) is deliberately excluded from the artifacts;
//! it appears only in human-readable summaries.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use pbtv_core::{BoundReport, Pmf};
use serde::Serialize;

use crate::error::HarnessError;

pub const SCHEMA: &str = "pbtv/1";

/// One candidate instance with its evaluated objective.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchRecord {
    /// What the objective measures, e.g. `homog-ratio` or `thm1-slack`.
    pub objective_kind: String,
    pub objective: f64,
    pub seed: u64,
    /// Instance index (sweeps) or winning start index (searches).
    pub iteration: u64,
    pub n: usize,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    /// Left partition block, for split-type objectives.
    pub partition: Option<Vec<usize>>,
    /// Interpolation point, for derivative checks.
    pub t: Option<f64>,
    /// Event set, for derivative checks.
    pub event: Option<Vec<i64>>,
    /// Creation time; display-only, never serialized into artifacts.
    #[serde(skip)]
    pub timestamp: String,
}

impl SearchRecord {
    pub fn new(objective_kind: &str, objective: f64, seed: u64, iteration: u64) -> Self {
        Self {
            objective_kind: objective_kind.to_string(),
            objective,
            seed,
            iteration,
            n: 0,
            p: Vec::new(),
            q: Vec::new(),
            partition: None,
            t: None,
            event: None,
            timestamp: crate::time::utc_now_iso8601(),
        }
    }

    pub fn with_pair(mut self, p: &pbtv_core::ParamVec, q: &pbtv_core::ParamVec) -> Self {
        self.n = p.len();
        self.p = p.values().to_vec();
        self.q = q.values().to_vec();
        self
    }
}

/// Outcome of one certification sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub mode: String,
    pub n: String,
    pub instances: usize,
    pub tolerance: f64,
    /// Instances whose checked inequality failed at the tolerance.
    pub violations: Vec<SearchRecord>,
    pub min_slack: Option<SearchRecord>,
    pub max_slack: Option<SearchRecord>,
    /// Smallest recorded slack of the sharpened split conjecture
    /// (split-lemma suite only); recorded, never asserted.
    pub conjecture_min: Option<SearchRecord>,
    /// Wall-clock time of the run; display-only.
    #[serde(skip)]
    pub duration: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema: &'static str,
    kind: &'static str,
    #[serde(flatten)]
    body: T,
}

fn to_json<T: Serialize>(kind: &'static str, body: T) -> String {
    let env = Envelope {
        schema: SCHEMA,
        kind,
        body,
    };
    let mut text = serde_json::to_string_pretty(&env).expect("records contain finite numbers");
    text.push('\n');
    text
}

/// Column set shared by all CSV artifacts. Vector-valued columns join
/// their entries with `;`. Record rows leave the trailing summary columns
/// empty; the summary row leaves the record columns empty.
pub const CSV_HEADER: &str =
    "record,suite,seed,iteration,objective_kind,objective,n,p,q,partition,t,event,instances,violations,tolerance";

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    let mut out = String::new();
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        let _ = write!(out, "{x}");
    }
    out
}

fn record_row(kind: &str, suite: &str, r: &SearchRecord) -> String {
    format!(
        "{kind},{suite},{seed},{iter},{okind},{obj},{n},{p},{q},{part},{t},{event},,,\n",
        seed = r.seed,
        iter = r.iteration,
        okind = r.objective_kind,
        obj = r.objective,
        n = r.n,
        p = join(&r.p),
        q = join(&r.q),
        part = r.partition.as_deref().map(join).unwrap_or_default(),
        t = r.t.map(|t| t.to_string()).unwrap_or_default(),
        event = r.event.as_deref().map(join).unwrap_or_default(),
    )
}

/// CSV rendering of a sweep: header; one row per violation; extreme and
/// conjecture rows when present; a summary row. A zero-instance report
/// renders as the bare header.
pub fn suite_report_csv(report: &SuiteReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    if report.instances == 0 {
        return out;
    }
    for v in &report.violations {
        out.push_str(&record_row("violation", &report.suite, v));
    }
    if let Some(r) = &report.min_slack {
        out.push_str(&record_row("min_slack", &report.suite, r));
    }
    if let Some(r) = &report.max_slack {
        out.push_str(&record_row("max_slack", &report.suite, r));
    }
    if let Some(r) = &report.conjecture_min {
        out.push_str(&record_row("conjecture_min", &report.suite, r));
    }
    let _ = writeln!(
        out,
        "summary,{suite},{seed},,,,,,,,,,{instances},{violations},{tol}",
        suite = report.suite,
        seed = report.seed,
        instances = report.instances,
        violations = report.violations.len(),
        tol = report.tolerance,
    );
    out
}

pub fn suite_report_json(report: &SuiteReport) -> String {
    to_json("suite-report", report)
}

pub fn search_record_json(record: &SearchRecord) -> String {
    to_json("search-record", record)
}

pub fn search_record_csv(record: &SearchRecord) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    out.push_str(&record_row("search", &record.objective_kind, record));
    out
}

/// Wire form of a pair certificate; field names are part of the format.
#[derive(Serialize)]
struct BoundReportBody<'a> {
    n: usize,
    tv_pb: f64,
    delta: f64,
    sigma2_p: f64,
    sigma2_q: f64,
    phi_pq: f64,
    phi_qp: f64,
    upper_thm1: f64,
    upper_symmetric: f64,
    slack_upper_thm1: f64,
    slack_upper_symmetric: f64,
    dominating: bool,
    lower_thm2: Option<f64>,
    slack_lower_thm2: Option<f64>,
    g_min: Option<f64>,
    g_sum: Option<f64>,
    max_g: Option<f64>,
    j_value: Option<f64>,
    j_bound: Option<f64>,
    slack_j: Option<f64>,
    pigeonhole_lower: Option<f64>,
    slack_pigeonhole: Option<f64>,
    all_pass: bool,
    p: &'a [f64],
    q: &'a [f64],
}

pub fn bound_report_json(report: &BoundReport, p: &pbtv_core::ParamVec, q: &pbtv_core::ParamVec) -> String {
    to_json(
        "bound-report",
        BoundReportBody {
            n: report.n,
            tv_pb: report.tv_pb,
            delta: report.delta,
            sigma2_p: report.sigma2_p,
            sigma2_q: report.sigma2_q,
            phi_pq: report.phi_pq,
            phi_qp: report.phi_qp,
            upper_thm1: report.upper_thm1,
            upper_symmetric: report.upper_symmetric,
            slack_upper_thm1: report.slack_upper_thm1,
            slack_upper_symmetric: report.slack_upper_symmetric,
            dominating: report.dominating,
            lower_thm2: report.lower_thm2,
            slack_lower_thm2: report.slack_lower_thm2,
            g_min: report.g_min,
            g_sum: report.g_sum,
            max_g: report.max_g,
            j_value: report.j_value,
            j_bound: report.j_bound,
            slack_j: report.slack_j,
            pigeonhole_lower: report.pigeonhole_lower,
            slack_pigeonhole: report.slack_pigeonhole,
            all_pass: report.all_pass(),
            p: p.values(),
            q: q.values(),
        },
    )
}

/// One-row CSV form of a pair certificate (with its own header).
pub const BOUND_CSV_HEADER: &str =
    "n,tv_pb,delta,sigma2_p,sigma2_q,phi_pq,phi_qp,upper_thm1,upper_symmetric,slack_upper_thm1,slack_upper_symmetric,dominating,lower_thm2,slack_lower_thm2,g_min,g_sum,max_g,j_value,j_bound,slack_j,pigeonhole_lower,slack_pigeonhole,all_pass";

pub fn bound_report_csv(report: &BoundReport) -> String {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    format!(
        "{}\n{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        BOUND_CSV_HEADER,
        report.n,
        report.tv_pb,
        report.delta,
        report.sigma2_p,
        report.sigma2_q,
        report.phi_pq,
        report.phi_qp,
        report.upper_thm1,
        report.upper_symmetric,
        report.slack_upper_thm1,
        report.slack_upper_symmetric,
        report.dominating,
        opt(report.lower_thm2),
        opt(report.slack_lower_thm2),
        opt(report.g_min),
        opt(report.g_sum),
        opt(report.max_g),
        opt(report.j_value),
        opt(report.j_bound),
        opt(report.slack_j),
        opt(report.pigeonhole_lower),
        opt(report.slack_pigeonhole),
        report.all_pass(),
    )
}

/// Wire form of a homogenization certificate, matching the bound-report
/// conventions.
#[derive(Serialize)]
struct HomogReportBody<'a> {
    n: usize,
    p_bar: f64,
    q_bar: f64,
    tv_product_lb: f64,
    lb_path: &'static str,
    tv_binom: f64,
    ratio: Option<f64>,
    slack: f64,
    constant_check: bool,
    p: &'a [f64],
    q: &'a [f64],
}

fn homog_body<'a>(
    report: &pbtv_core::homog::HomogReport,
    p: &'a pbtv_core::ParamVec,
    q: &'a pbtv_core::ParamVec,
) -> HomogReportBody<'a> {
    HomogReportBody {
        n: report.n,
        p_bar: report.p_bar,
        q_bar: report.q_bar,
        tv_product_lb: report.tv_product_lb,
        lb_path: match report.lb_path {
            pbtv_core::homog::LowerBoundPath::BruteForce => "brute-force",
            pbtv_core::homog::LowerBoundPath::PartitionedPhi => "partitioned-phi",
        },
        tv_binom: report.tv_binom,
        ratio: report.ratio,
        slack: report.slack,
        constant_check: report.constant_check,
        p: p.values(),
        q: q.values(),
    }
}

pub fn homog_report_json(
    report: &pbtv_core::homog::HomogReport,
    p: &pbtv_core::ParamVec,
    q: &pbtv_core::ParamVec,
) -> String {
    to_json("homog-report", homog_body(report, p, q))
}

pub const HOMOG_CSV_HEADER: &str =
    "n,p_bar,q_bar,tv_product_lb,lb_path,tv_binom,ratio,slack,constant_check,p,q";

/// One-row CSV form of a homogenization certificate (with its own header).
pub fn homog_report_csv(
    report: &pbtv_core::homog::HomogReport,
    p: &pbtv_core::ParamVec,
    q: &pbtv_core::ParamVec,
) -> String {
    let body = homog_body(report, p, q);
    format!(
        "{}\n{},{},{},{},{},{},{},{},{},{},{}\n",
        HOMOG_CSV_HEADER,
        body.n,
        body.p_bar,
        body.q_bar,
        body.tv_product_lb,
        body.lb_path,
        body.tv_binom,
        body.ratio.map(|r| r.to_string()).unwrap_or_default(),
        body.slack,
        body.constant_check,
        join(body.p),
        join(body.q),
    )
}

/// The pmf wire format: `{"offset": int, "mass": [real, ...]}`.
pub fn pmf_json(pmf: &Pmf) -> String {
    #[derive(Serialize)]
    struct PmfBody<'a> {
        offset: i64,
        mass: &'a [f64],
    }
    let mut text = serde_json::to_string(&PmfBody {
        offset: pmf.offset(),
        mass: pmf.masses(),
    })
    .expect("masses are finite");
    text.push('\n');
    text
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn from_path(path: &Path) -> Result<Self, HarnessError> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Ok(Format::Json),
            Some("csv") => Ok(Format::Csv),
            _ => Err(HarnessError::BadFormat(path.display().to_string())),
        }
    }
}

/// Render a suite report in the requested format.
pub fn suite_report_bytes(report: &SuiteReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => suite_report_json(report).into_bytes(),
        Format::Csv => suite_report_csv(report).into_bytes(),
    }
}

/// Write a suite report to `path`, picking the format from the extension.
pub fn emit_suite_report(report: &SuiteReport, path: &Path) -> Result<(), HarnessError> {
    let format = Format::from_path(path)?;
    std::fs::write(path, suite_report_bytes(report, format))?;
    Ok(())
}

/// Write a search record to `path`, picking the format from the extension.
pub fn emit_search_record(record: &SearchRecord, path: &Path) -> Result<(), HarnessError> {
    let bytes = match Format::from_path(path)? {
        Format::Json => search_record_json(record).into_bytes(),
        Format::Csv => search_record_csv(record).into_bytes(),
    };
    std::fs::write(path, bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_record() -> SearchRecord {
        let mut r = SearchRecord::new("thm1-slack", 0.25, 7, 3);
        r.n = 2;
        r.p = vec![0.5, 1.0];
        r.q = vec![0.25, 0.5];
        r
    }

    fn sample_report() -> SuiteReport {
        SuiteReport {
            suite: "thm1".into(),
            seed: 7,
            mode: "uniform".into(),
            n: "1..8".into(),
            instances: 10,
            tolerance: 1e-9,
            violations: vec![],
            min_slack: Some(sample_record()),
            max_slack: Some(sample_record()),
            conjecture_min: None,
            duration: Duration::from_millis(5),
        }
    }

    #[test]
    fn json_carries_schema_and_omits_clock() {
        let json = suite_report_json(&sample_report());
        assert!(json.contains("\"schema\": \"pbtv/1\""));
        assert!(json.contains("\"kind\": \"suite-report\""));
        assert!(!json.contains("timestamp"));
        assert!(!json.contains("duration"));
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["instances"], 10);
    }

    #[test]
    fn csv_layout() {
        let report = sample_report();
        let csv = suite_report_csv(&report);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("min_slack,thm1,7,3,thm1-slack,0.25,2,0.5;1,0.25;0.5"));
        assert!(lines.last().unwrap().starts_with("summary,thm1,7,"));
        assert!(lines.last().unwrap().ends_with("10,0,0.000000001"));
    }

    #[test]
    fn empty_report_is_header_only() {
        let mut report = sample_report();
        report.instances = 0;
        report.min_slack = None;
        report.max_slack = None;
        let csv = suite_report_csv(&report);
        assert_eq!(csv, format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn identical_reports_serialize_identically() {
        let a = sample_report();
        let mut b = sample_report();
        b.duration = Duration::from_secs(3600); // volatile field, no effect
        assert_eq!(
            suite_report_bytes(&a, Format::Json),
            suite_report_bytes(&b, Format::Json)
        );
        assert_eq!(
            suite_report_bytes(&a, Format::Csv),
            suite_report_bytes(&b, Format::Csv)
        );
    }

    #[test]
    fn homog_report_serializes_both_ways() {
        let p = pbtv_core::ParamVec::new(vec![0.8, 0.3]).unwrap();
        let q = pbtv_core::ParamVec::new(vec![0.2, 0.3]).unwrap();
        let rep = pbtv_core::homog::homog_certificate(&p, &q, true).unwrap();
        let json = homog_report_json(&rep, &p, &q);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["kind"], "homog-report");
        assert_eq!(parsed["lb_path"], "brute-force");
        assert_eq!(parsed["constant_check"], true);
        let csv = homog_report_csv(&rep, &p, &q);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], HOMOG_CSV_HEADER);
        assert!(lines[1].starts_with("2,0.55,0.25,"));
        assert!(lines[1].ends_with("0.8;0.3,0.2;0.3"));
    }

    #[test]
    fn pmf_wire_format_is_exact() {
        let pmf = pbtv_core::binom_pmf(2, 0.5).unwrap();
        assert_eq!(pmf_json(&pmf), "{\"offset\":0,\"mass\":[0.25,0.5,0.25]}\n");
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(Format::from_path(Path::new("x.json")).unwrap(), Format::Json);
        assert_eq!(Format::from_path(Path::new("x.csv")).unwrap(), Format::Csv);
        assert!(Format::from_path(Path::new("x.txt")).is_err());
    }
}
