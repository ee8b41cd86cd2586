//! Configuration loading, the verification suites and the report format.

mod config;
mod suites;

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use config::{
    fixture_config, load_config, parse_config, parse_point, parse_raw_config, point_value, read_raw_config, Bounds, Config, ModeName, RawConfig, RawCurve,
    RawFunction, RawTerm,
};
pub use suites::{chain_record, chain_words, run_build_motive, run_suite, Suite};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Flagged,
}

impl Status {
    pub fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Flagged => "FLAG",
        }
    }
}

/// One check: an identifier, the source identity it exercises, the outcome
/// and structured evidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub details: Value,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, status: Status, details: Value) -> CheckRecord {
        CheckRecord { id: id.into(), anchor: anchor.into(), status, details }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub flagged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub config: Value,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: u64, config: Value, records: Vec<CheckRecord>) -> Report {
        let mut summary = Summary { total: records.len(), ..Summary::default() };
        for r in &records {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Flagged => summary.flagged += 1,
            }
        }
        Report { suite: suite.into(), seed, config, records, summary }
    }

    pub fn record(&self, id: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    /// `0` when nothing failed (flags allowed), `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail == 0 {
            0
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(Error::Input(format!("unknown format {other:?} (expected json or text)"))),
        }
    }
}

pub fn render_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

const DETAIL_WIDTH: usize = 400;

pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "suite {}  seed {}", r.suite, r.seed);
    for rec in &r.records {
        let _ = writeln!(s, "[{}] {}  ({})", rec.status.label(), rec.id, rec.anchor);
        let mut d = serde_json::to_string(&rec.details).expect("details serialize");
        if d.chars().count() > DETAIL_WIDTH {
            d = d.chars().take(DETAIL_WIDTH).collect::<String>() + " ...";
        }
        let _ = writeln!(s, "    {d}");
    }
    let m = &r.summary;
    let _ = writeln!(s, "{} checks: {} pass, {} fail, {} flagged", m.total, m.pass, m.fail, m.flagged);
    s
}

pub fn render(r: &Report, format: Format) -> String {
    match format {
        Format::Json => render_json(r),
        Format::Text => render_text(r),
    }
}

/// Writes the report to `path`, or to standard output when `path` is `None`.
pub fn emit_report(r: &Report, format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(r, format);
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Error::Input(format!("cannot write report: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let recs = vec![
            CheckRecord::new("a", "=2(Δ−Ψ)", Status::Pass, json!({"x": 1})),
            CheckRecord::new("b", "(Fₙ)", Status::Flagged, json!({"readings": 2})),
        ];
        Report::new("divisors", 7, json!({}), recs)
    }

    #[test]
    fn summary_and_exit_code() {
        let r = sample();
        assert_eq!(r.summary, Summary { total: 2, pass: 1, fail: 0, flagged: 1 });
        assert_eq!(r.exit_code(), 0);
        let mut recs = r.records.clone();
        recs.push(CheckRecord::new("c", "", Status::Fail, Value::Null));
        assert_eq!(Report::new("x", 0, json!({}), recs).exit_code(), 1);
    }

    #[test]
    fn json_round_trips() {
        let r = sample();
        let back: Report = serde_json::from_str(&render_json(&r)).unwrap();
        assert_eq!(back, r);
        assert!(render_json(&r).contains("\"status\": \"flagged\""));
    }

    #[test]
    fn text_lists_anchor() {
        let t = render_text(&sample());
        assert!(t.contains("[PASS] a  (=2(Δ−Ψ))"));
        assert!(t.contains("[FLAG] b"));
    }

    #[test]
    fn unwritable_path_is_input_error() {
        let err = emit_report(&sample(), Format::Json, Some(Path::new("/nonexistent/dir/r.json"))).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }
}
