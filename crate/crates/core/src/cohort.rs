//! Cohort discovery: event timelines become finite traces, and a closed
//! formula is checked per subject.
//!
//! Codes are absent after the record ends: a trace of length `n` is read as
//! the ω-word `trace · ∅^ω`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use chrono::Datelike;
/// Calendar date type of [`IngestOptions::origin`].
pub use chrono::NaiveDate;
use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::{Alphabet, Mode};
use crate::error::{CohortError, EvalError};
use crate::eval::{CompiledFormula, EvalConfig, Truth3};
use crate::formula::Formula;
use crate::term::Env;
use crate::words::{FiniteTrace, LassoWord, Letter};

/// Calendar unit that dates are grouped by; `None` means the time column
/// already holds positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Bin {
    Day,
    Week,
    Month,
    #[default]
    None,
}

impl FromStr for Bin {
    type Err = String;

    fn from_str(s: &str) -> Result<Bin, String> {
        match s {
            "day" => Ok(Bin::Day),
            "week" => Ok(Bin::Week),
            "month" => Ok(Bin::Month),
            "none" => Ok(Bin::None),
            other => Err(format!("unknown bin `{other}` (expected day, week, month or none)")),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    pub bin: Bin,
    /// First day of bin 1. Without it each subject starts at its own
    /// earliest event.
    pub origin: Option<NaiveDate>,
}

/// Subjects' traces over one shared props-mode alphabet of codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cohort {
    alphabet: Alphabet,
    traces: BTreeMap<String, FiniteTrace>,
}

enum Time {
    Index(u64),
    Date(NaiveDate),
}

struct Row {
    line: u64,
    subject: String,
    time: Time,
    code: String,
}

fn parse_time(raw: &str, bin: Bin, line: u64) -> Result<Time, CohortError> {
    let raw = raw.trim();
    if bin == Bin::None {
        let value: i64 = raw.parse().map_err(|_| CohortError::MalformedRow(line, format!("time `{raw}` is not an integer")))?;
        return match u64::try_from(value) {
            Ok(v) if v >= 1 => Ok(Time::Index(v)),
            _ => Err(CohortError::NonPositiveTime(line)),
        };
    }
    // Accept a date or the date part of a timestamp.
    let day = raw.get(..10).unwrap_or(raw);
    NaiveDate::parse_from_str(day, "%Y-%m-%d")
        .map(Time::Date)
        .map_err(|_| CohortError::MalformedRow(line, format!("time `{raw}` is not an ISO date")))
}

/// Bin index of `date` counted from `origin`, starting at 1. Bins are
/// half-open: `[origin + k·unit, origin + (k+1)·unit)`.
fn bin_index(origin: NaiveDate, date: NaiveDate, bin: Bin) -> Option<u64> {
    let days = (date - origin).num_days();
    if days < 0 {
        return None;
    }
    let k = match bin {
        Bin::Day | Bin::None => days,
        Bin::Week => days / 7,
        Bin::Month => {
            let months = (date.year() - origin.year()) as i64 * 12 + date.month() as i64 - origin.month() as i64;
            months - i64::from(date.day() < origin.day())
        }
    };
    Some(k as u64 + 1)
}

fn read_rows<R: Read>(reader: R, bin: Bin) -> Result<Vec<Row>, CohortError> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = csv
        .headers()
        .map_err(|e| CohortError::MalformedRow(1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != ["subject_id", "time", "code"] {
        return Err(CohortError::MalformedRow(1, format!("expected header subject_id,time,code, found {}", header.join(","))));
    }
    let mut rows = vec![];
    for (k, record) in csv.records().enumerate() {
        let line = k as u64 + 2;
        let record = record.map_err(|e| CohortError::MalformedRow(line, e.to_string()))?;
        if record.len() != 3 {
            return Err(CohortError::MalformedRow(line, format!("expected 3 fields, found {}", record.len())));
        }
        let (subject, code) = (record[0].to_string(), record[2].to_string());
        if subject.is_empty() || code.is_empty() {
            return Err(CohortError::MalformedRow(line, "empty subject or code".into()));
        }
        rows.push(Row { line, subject, time: parse_time(&record[1], bin, line)?, code });
    }
    if rows.is_empty() {
        return Err(CohortError::EmptyFile);
    }
    Ok(rows)
}

pub fn ingest_csv(path: &Path, opts: &IngestOptions) -> Result<Cohort, CohortError> {
    ingest_reader(std::fs::File::open(path)?, opts)
}

/// Reads `subject_id,time,code` rows. Position `i` of a subject's trace
/// holds every code binned to `i`; gaps are empty.
pub fn ingest_reader<R: Read>(reader: R, opts: &IngestOptions) -> Result<Cohort, CohortError> {
    let rows = read_rows(reader, opts.bin)?;
    let mut earliest: BTreeMap<&str, NaiveDate> = BTreeMap::new();
    for row in &rows {
        if let Time::Date(d) = row.time {
            let e = earliest.entry(&row.subject).or_insert(d);
            *e = (*e).min(d);
        }
    }
    let mut events: BTreeMap<String, BTreeMap<u64, BTreeSet<String>>> = BTreeMap::new();
    for row in &rows {
        let index = match row.time {
            Time::Index(i) => i,
            Time::Date(d) => {
                let origin = opts.origin.unwrap_or(earliest[row.subject.as_str()]);
                bin_index(origin, d, opts.bin).ok_or(CohortError::NonPositiveTime(row.line))?
            }
        };
        events.entry(row.subject.clone()).or_default().entry(index).or_default().insert(row.code.clone());
    }
    let codes: BTreeSet<&String> = rows.iter().map(|r| &r.code).collect();
    let alphabet = Alphabet::props(codes)?;
    let traces = events
        .into_iter()
        .map(|(subject, by_time)| {
            let len = *by_time.keys().last().expect("subjects have events");
            let positions = (1..=len)
                .map(|i| match by_time.get(&i) {
                    Some(cs) => Letter::from_ids(cs.iter().map(|c| alphabet.id(c).expect("codes are in the alphabet"))),
                    None => Letter::empty(),
                })
                .collect();
            let trace = FiniteTrace::new(alphabet.clone(), positions).expect("traces are non-empty and in the alphabet");
            (subject, trace)
        })
        .collect();
    Ok(Cohort { alphabet, traces })
}

impl Cohort {
    pub fn new(alphabet: Alphabet, traces: BTreeMap<String, FiniteTrace>) -> Result<Cohort, CohortError> {
        if alphabet.mode() != Mode::Props {
            return Err(EvalError::ModeMismatch { expected: Mode::Props }.into());
        }
        if traces.values().any(|t| t.alphabet() != &alphabet) {
            return Err(EvalError::AlphabetMismatch.into());
        }
        Ok(Cohort { alphabet, traces })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn traces(&self) -> &BTreeMap<String, FiniteTrace> {
        &self.traces
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    /// Rows `(subject, position, code)` in subject, position, code order.
    /// Empty positions produce no rows, so a trace ending in gaps is not
    /// recovered by re-ingesting.
    pub fn to_rows(&self) -> Vec<(String, u64, String)> {
        let mut rows = vec![];
        for (subject, trace) in &self.traces {
            for (k, letter) in trace.positions().iter().enumerate() {
                let mut codes: Vec<&str> = letter.symbols(&self.alphabet).collect();
                codes.sort_unstable();
                rows.extend(codes.into_iter().map(|c| (subject.clone(), k as u64 + 1, c.to_string())));
            }
        }
        rows
    }

    /// The rows as CSV with positions in the time column (`--bin none`).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("subject_id,time,code\n");
        for (s, t, c) in self.to_rows() {
            let _ = writeln!(out, "{s},{t},{c}");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Positions {
    /// Every position of the record.
    #[default]
    All,
    /// Position 1 only: membership of the whole record.
    FirstOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubjectReport {
    pub id: String,
    /// Truth at position 1.
    pub truth: Truth3,
    /// Positions (within the record) where the formula is definitely true.
    pub positions: Vec<u64>,
    pub first_match: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub unknown_positions: Vec<u64>,
    /// Leading quantifier values at position 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    #[serde(rename = "true")]
    pub true_: usize,
    #[serde(rename = "false")]
    pub false_: usize,
    pub unknown: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    /// `null` when each word gets the default bound.
    pub bound: Option<u64>,
    pub assume_complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryReport {
    pub subjects: Vec<SubjectReport>,
    pub summary: Summary,
    pub config: ConfigEcho,
}

impl QueryReport {
    /// Whether any evaluated position was undecided.
    pub fn has_unknown(&self) -> bool {
        self.subjects.iter().any(|s| s.truth == Truth3::Unknown || !s.unknown_positions.is_empty())
    }

    /// Process exit code: 0 when everything was decided, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.has_unknown() {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One line per subject: `id  truth  first_match  positions`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("id\ttruth\tfirst_match\tpositions\n");
        for s in &self.subjects {
            let first = s.first_match.map(|p| p.to_string()).unwrap_or_default();
            let positions: Vec<String> = s.positions.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "{}\t{}\t{}\t{}", s.id, s.truth, first, positions.join(","));
        }
        out
    }
}

fn subject_report(
    id: &str,
    trace: &FiniteTrace,
    phi: &CompiledFormula,
    cfg: &EvalConfig,
    positions: Positions,
) -> Result<SubjectReport, EvalError> {
    let w = LassoWord::from_finite(trace).map_err(|_| EvalError::ModeMismatch { expected: Mode::Props })?;
    let env = Env::new();
    let first = phi.evaluate(&w, 1, &env, cfg)?;
    let mut report = SubjectReport {
        id: id.to_string(),
        truth: first.truth,
        positions: vec![],
        first_match: None,
        unknown_positions: vec![],
        witness: (first.truth == Truth3::True && !first.witness.is_empty()).then(|| first.witness.into_iter().collect()),
    };
    let truths = match positions {
        Positions::All => phi.check_many(&w, &(2..=trace.len() as u64).collect::<Vec<_>>(), &env, cfg)?,
        Positions::FirstOnly => vec![],
    };
    for (i, truth) in (1..).zip(std::iter::once(first.truth).chain(truths)) {
        match truth {
            Truth3::True => {
                report.positions.push(i);
                report.first_match.get_or_insert(i);
            }
            Truth3::Unknown => report.unknown_positions.push(i),
            Truth3::False => {}
        }
    }
    Ok(report)
}

/// Checks a closed formula on every subject, in parallel.
pub fn run_query(phi: &Formula, cohort: &Cohort, cfg: &EvalConfig, positions: Positions) -> Result<QueryReport, CohortError> {
    run_query_with(phi, cohort, cfg, positions, true)
}

/// [`run_query`] with the parallelism made explicit; the report does not
/// depend on it.
pub fn run_query_with(
    phi: &Formula,
    cohort: &Cohort,
    cfg: &EvalConfig,
    positions: Positions,
    parallel: bool,
) -> Result<QueryReport, CohortError> {
    let free: Vec<String> = phi.free_vars().into_iter().collect();
    if !free.is_empty() {
        return Err(EvalError::OpenFormula(free).into());
    }
    let compiled = CompiledFormula::compile(phi, &cohort.alphabet)?;
    let subjects: Vec<(&String, &FiniteTrace)> = cohort.traces.iter().collect();
    let one = |(id, trace): &(&String, &FiniteTrace)| subject_report(id, trace, &compiled, cfg, positions);
    let subjects: Vec<SubjectReport> = if parallel {
        subjects.par_iter().map(one).collect::<Result<_, _>>()?
    } else {
        subjects.iter().map(one).collect::<Result<_, _>>()?
    };
    let mut summary = Summary::default();
    for s in &subjects {
        match s.truth {
            Truth3::True => summary.true_ += 1,
            Truth3::False => summary.false_ += 1,
            Truth3::Unknown => summary.unknown += 1,
        }
    }
    Ok(QueryReport {
        subjects,
        summary,
        config: ConfigEcho { bound: cfg.quant_bound, assume_complete: cfg.assume_complete },
    })
}
