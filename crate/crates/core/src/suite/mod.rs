//! The verification suite behind `thetaobs verify-all`.
//!
//! Twelve criteria, each a group of named checks. Every check yields one
//! [`Record`]; the record name starts with `cNN.` so a sorted report groups
//! the checks of a criterion together. All randomness is derived from the
//! configured seed, and all parallel work returns results in index order,
//! so a report depends only on the seed and the level.

mod commands;
mod criteria;

pub use commands::{classify_record, classify_report, obstruction_report, paramod_report, DEFAULT_SEED};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::report::{Record, Report, Verdict};

/// How much work each criterion does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// The counts named by the criteria themselves.
    Quick,
    /// Larger samples, the `(3,4)` paramodular shape and the negligibility
    /// reports for `g = 2, 3` in addition.
    Full,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Quick => "quick",
            Level::Full => "full",
        })
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(Error::Input(format!("unknown level {other:?} (expected quick or full)"))),
        }
    }
}

/// Suite parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub level: Level,
    /// Record wall-clock times (this makes reports differ between runs).
    pub timing: bool,
}

impl SuiteConfig {
    pub fn new(seed: u64, level: Level) -> Self {
        SuiteConfig { seed, level, timing: false }
    }

    fn full(&self) -> bool {
        self.level == Level::Full
    }
}

/// Criterion numbers and titles, in order.
pub const CRITERIA: [(u8, &str); 12] = [
    (1, "classification round trip"),
    (2, "theta group axioms and pairing"),
    (3, "Schrödinger representation"),
    (4, "odd-order canonical splitting"),
    (5, "exceptional isomorphisms"),
    (6, "stabilizer structure for g = 4"),
    (7, "obstruction class"),
    (8, "negligibility report for g = 4"),
    (9, "Baer sum and restriction"),
    (10, "quadratic refinements"),
    (11, "paramodular shadows"),
    (12, "determinism"),
];

/// Name prefix of the records of criterion `id`.
pub fn criterion_prefix(id: u8) -> String {
    format!("c{id:02}.")
}

/// Run one criterion and return its records in name order.
pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> Vec<Record> {
    let mut ctx = Ctx::new(cfg);
    match id {
        1 => criteria::classification(&mut ctx),
        2 => criteria::theta_axioms(&mut ctx),
        3 => criteria::schrodinger(&mut ctx),
        4 => criteria::odd_splitting(&mut ctx),
        5 => criteria::exceptional(&mut ctx),
        6 => criteria::stabilizer(&mut ctx),
        7 => criteria::obstruction(&mut ctx),
        8 => criteria::negligibility(&mut ctx),
        9 => criteria::baer_sum(&mut ctx),
        10 => criteria::quadratic(&mut ctx),
        11 => criteria::paramodular(&mut ctx),
        12 => determinism(&mut ctx),
        other => ctx.fail_input(&format!("c{other:02}.unknown"), "criterion index", other),
    }
    let mut records = ctx.records;
    records.sort_by(|a, b| a.name.cmp(&b.name));
    records
}

/// Run every criterion into one report.
pub fn run_suite(cfg: &SuiteConfig, command: Vec<String>) -> Report {
    let mut report = Report::new(command, cfg.seed, Some(cfg.level.to_string()));
    for (id, _) in CRITERIA {
        report.extend(run_criterion(id, cfg));
    }
    report
}

/// Whether every record of criterion `id` in `report` is a pass or a
/// recorded value, and there is at least one record.
pub fn criterion_passed(report: &Report, id: u8) -> bool {
    let prefix = criterion_prefix(id);
    let mut records = report.records.iter().filter(|r| r.name.starts_with(&prefix)).peekable();
    records.peek().is_some() && records.all(|r| r.verdict != Verdict::Fail)
}

/// The randomized criteria are run a second time and compared record by
/// record with a fresh first run (wall times excluded).
fn determinism(ctx: &mut Ctx<'_>) {
    let cfg = SuiteConfig { timing: false, ..*ctx.cfg };
    for id in [1u8, 4, 5, 11] {
        let name = format!("c12.rerun.c{id:02}");
        ctx.check(&name, "a fixed seed reproduces identical records", || {
            let first = serde_json::to_string(&run_criterion(id, &cfg)).expect("records serialize");
            let second = serde_json::to_string(&run_criterion(id, &cfg)).expect("records serialize");
            Ok(Outcome::check(
                first == second,
                format!("criterion {id} reproduced byte for byte ({} bytes)", first.len()),
                format!("{}\n", crate::report::digest(&first)),
            ))
        });
    }
}

/// An independent random stream for (criterion, index) under `seed`.
pub(crate) fn stream_rng(seed: u64, criterion: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((criterion << 32) | index);
    rng
}

/// Result of one check before it becomes a [`Record`].
pub(crate) struct Outcome {
    verdict: Verdict,
    summary: String,
    witness: String,
}

impl Outcome {
    pub(crate) fn check(ok: bool, summary: String, witness: String) -> Self {
        Outcome { verdict: Verdict::from_bool(ok), summary, witness }
    }

    pub(crate) fn recorded(summary: String, witness: String) -> Self {
        Outcome { verdict: Verdict::Recorded, summary, witness }
    }
}

/// Collects records for one criterion.
pub(crate) struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    records: Vec<Record>,
    /// Time spent in shared preparation, charged to the next check.
    carry_ms: u64,
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a SuiteConfig) -> Self {
        Ctx { cfg, records: Vec::new(), carry_ms: 0 }
    }

    pub(crate) fn seed(&self) -> u64 {
        self.cfg.seed
    }

    pub(crate) fn full(&self) -> bool {
        self.cfg.full()
    }

    fn push(&mut self, mut record: Record, ms: u64) {
        if self.cfg.timing {
            record.wall_ms = Some(ms + self.carry_ms);
        }
        self.carry_ms = 0;
        self.records.push(record);
    }

    /// Run one check; an error becomes a failed record.
    pub(crate) fn check<F>(&mut self, name: &str, anchor: &str, f: F)
    where
        F: FnOnce() -> Result<Outcome>,
    {
        let start = Instant::now();
        let record = match f() {
            Ok(o) => Record::new(name, anchor, o.verdict, o.summary, o.witness),
            Err(e) => Record::from_error(name, anchor, &e),
        };
        self.push(record, start.elapsed().as_millis() as u64);
    }

    /// Compute data shared by several checks. On error a failed record
    /// under `name` is pushed and `None` returned.
    pub(crate) fn prepare<T, F>(&mut self, name: &str, anchor: &str, f: F) -> Option<T>
    where
        F: FnOnce() -> Result<T>,
    {
        let start = Instant::now();
        let result = f();
        let ms = start.elapsed().as_millis() as u64;
        match result {
            Ok(v) => {
                self.carry_ms += ms;
                Some(v)
            }
            Err(e) => {
                self.push(Record::from_error(name, anchor, &e), ms);
                None
            }
        }
    }

    /// Add a record built elsewhere (its wall time is the carried time).
    pub(crate) fn add(&mut self, record: Record) {
        self.push(record, 0);
    }

    fn fail_input(&mut self, name: &str, anchor: &str, id: u8) {
        let err = Error::Input(format!("no criterion {id}"));
        self.push(Record::from_error(name, anchor, &err), 0);
    }
}
