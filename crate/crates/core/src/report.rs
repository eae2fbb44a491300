//! Versioned, deterministic verification reports.
//!
//! A report is a JSON document with schema tag [`SCHEMA`]. Each record
//! carries its witness text together with the SHA-256 digest of that text,
//! so a reader can recompute every digest. Records are sorted by name and
//! wall-clock times are only present when timing was requested, which makes
//! the serialized report a pure function of the command and the seed.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;

/// Schema tag written into every report.
pub const SCHEMA: &str = "thetaobs-report v1";

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// A computed value that is reported without an expected answer.
    Recorded,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Recorded => "RECORDED",
        }
    }
}

/// An error that ended a check, by kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordError {
    pub kind: String,
    pub message: String,
}

/// One check in a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    /// Dotted check name; reports are sorted by it.
    pub name: String,
    /// The mathematical statement being checked, in words.
    pub anchor: String,
    pub verdict: Verdict,
    /// One-line human summary.
    pub summary: String,
    /// Canonical evidence text (orders, counts, counterexamples, tables).
    pub witness: String,
    /// Lowercase hex SHA-256 of `witness`.
    pub witness_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<RecordError>,
    /// Wall time in milliseconds, only when timing was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

/// Hex SHA-256 of a witness text.
pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Record {
    pub fn new(name: &str, anchor: &str, verdict: Verdict, summary: String, witness: String) -> Self {
        Record {
            name: name.to_string(),
            anchor: anchor.to_string(),
            verdict,
            summary,
            witness_sha256: digest(&witness),
            witness,
            error: None,
            wall_ms: None,
        }
    }

    /// A failed record for a check that returned an error.
    pub fn from_error(name: &str, anchor: &str, err: &Error) -> Self {
        let mut r = Record::new(name, anchor, Verdict::Fail, err.to_string(), err.to_string());
        r.error = Some(RecordError { kind: err.kind().to_string(), message: err.to_string() });
        r
    }

    /// Whether the stored digest matches the witness text.
    pub fn digest_matches(&self) -> bool {
        digest(&self.witness) == self.witness_sha256
    }
}

/// Record counts by verdict.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub pass: usize,
    pub fail: usize,
    pub recorded: usize,
}

/// A complete report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    /// The command line that produced the report, without the program name.
    pub command: Vec<String>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<String>,
    pub totals: Totals,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(command: Vec<String>, seed: u64, level: Option<String>) -> Self {
        Report { schema: SCHEMA.to_string(), command, seed, level, totals: Totals::default(), records: Vec::new() }
    }

    /// Add records, keeping them sorted by name and the totals current.
    pub fn extend<I: IntoIterator<Item = Record>>(&mut self, records: I) {
        self.records.extend(records);
        self.records.sort_by(|a, b| a.name.cmp(&b.name));
        self.totals = Totals::default();
        for r in &self.records {
            match r.verdict {
                Verdict::Pass => self.totals.pass += 1,
                Verdict::Fail => self.totals.fail += 1,
                Verdict::Recorded => self.totals.recorded += 1,
            }
        }
    }

    pub fn push(&mut self, record: Record) {
        self.extend([record]);
    }

    pub fn failed(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.verdict == Verdict::Fail)
    }

    /// Whether the schema tag is current and every digest recomputes.
    pub fn is_valid(&self) -> bool {
        self.schema == SCHEMA
            && self.records.iter().all(Record::digest_matches)
            && self.records.windows(2).all(|w| w[0].name <= w[1].name)
    }

    /// Process exit status: 0 when nothing failed, 3 when a failure was a
    /// capacity error, otherwise 1.
    pub fn exit_code(&self) -> i32 {
        if self.failed().any(|r| r.error.as_ref().is_some_and(|e| e.kind == "capacity")) {
            3
        } else if self.totals.fail > 0 {
            1
        } else {
            0
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("report JSON: {e}")))
    }

    /// Aligned human-readable table: verdict, name and summary per record.
    pub fn table(&self) -> String {
        let width = self.records.iter().map(|r| r.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for r in &self.records {
            let time = r.wall_ms.map(|ms| format!(" [{ms} ms]")).unwrap_or_default();
            let _ = writeln!(out, "{:<8} {:<width$}  {}{}", r.verdict.label(), r.name, r.summary, time);
        }
        let t = self.totals;
        let _ = writeln!(out, "{} passed, {} failed, {} recorded", t.pass, t.fail, t.recorded);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_text() {
        assert_eq!(digest(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn records_sorted_and_counted() {
        let mut rep = Report::new(vec!["x".into()], 7, None);
        rep.push(Record::new("b", "", Verdict::Fail, "no".into(), "w".into()));
        rep.push(Record::new("a", "", Verdict::Pass, "yes".into(), "w".into()));
        assert_eq!(rep.records[0].name, "a");
        assert_eq!(rep.totals, Totals { pass: 1, fail: 1, recorded: 0 });
        assert_eq!(rep.exit_code(), 1);
        assert!(rep.is_valid());
    }

    #[test]
    fn capacity_errors_exit_three() {
        let mut rep = Report::new(vec![], 0, None);
        rep.push(Record::from_error("a", "", &Error::Capacity("too big".into())));
        assert_eq!(rep.exit_code(), 3);
    }

    #[test]
    fn json_round_trip_and_tamper_detection() {
        let mut rep = Report::new(vec!["verify-all".into()], 1, Some("quick".into()));
        rep.push(Record::new("a", "anchor", Verdict::Recorded, "s".into(), "witness".into()));
        let text = rep.to_json();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, rep);
        assert!(!text.contains("wall_ms"));
        let mut bad = back;
        bad.records[0].witness.push('!');
        assert!(!bad.is_valid());
    }
}
