//! Line-delimited JSON fixture corpus and its runner.
//!
//! Each line is one record:
//! `{"label": "11A3", "curve": "[0,-1,1,0,0]", "expected": [{"check": "global", "w": 1, "provenance": "..."}]}`.

use num_bigint::BigInt;
use rootnum::curve::{self, KodairaType, ReductionClass, WeierstrassModel};
use rootnum::globalroot::{self, FieldDescriptor};
use rootnum::{localroot, predict, Error, Result, Sign};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::Path;

pub const BUNDLED_CORPUS: &str = include_str!("../fixtures/corpus.jsonl");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureRecord {
    pub label: String,
    pub curve: WeierstrassModel,
    #[serde(default)]
    pub hints: Vec<String>,
    pub expected: Vec<Assertion>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Assertion {
    #[serde(flatten)]
    pub check: Check,
    pub provenance: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    Global { w: Sign },
    Local { p: String, w: Sign },
    Class { p: String, class: ReductionClass },
    Kodaira { p: String, kodaira: KodairaType },
    Basechange { field: FieldDescriptor, w: Sign },
    Twist { d: String, w: Sign },
    Tower { p: u32, n: u32, m: String, w: Sign },
    Root2 { w: Sign },
    Zeta8 { w: Sign },
    Congruent { n: String, congruent: bool },
}

#[derive(Debug, Clone, Serialize)]
pub struct AssertionResult {
    pub label: String,
    pub check: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureReport {
    pub records: usize,
    pub assertions: usize,
    pub passed: usize,
    pub failed: usize,
    pub results: Vec<AssertionResult>,
}

pub fn run_fixtures(path: &Path) -> Result<FixtureReport> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    run_corpus(&text)
}

/// Parses and evaluates every record. A malformed line fails the whole run.
pub fn run_corpus(text: &str) -> Result<FixtureReport> {
    let records = parse_corpus(text)?;
    let mut results = Vec::new();
    for rec in &records {
        let hints = rec
            .hints
            .iter()
            .map(|h| int(h))
            .collect::<Result<Vec<_>>>()?;
        for a in &rec.expected {
            results.push(evaluate(rec, &hints, a));
        }
    }
    let passed = results.iter().filter(|r| r.pass).count();
    Ok(FixtureReport {
        records: records.len(),
        assertions: results.len(),
        passed,
        failed: results.len() - passed,
        results,
    })
}

pub fn parse_corpus(text: &str) -> Result<Vec<FixtureRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let perr = |msg: String| Error::ParseError { line: i + 1, msg };
        let rec: FixtureRecord = serde_json::from_str(line).map_err(|e| perr(e.to_string()))?;
        if rec.expected.is_empty() {
            return Err(perr(format!("record {} has no assertions", rec.label)));
        }
        if let Some(a) = rec.expected.iter().find(|a| a.provenance.trim().is_empty()) {
            return Err(perr(format!("record {}: {} assertion has no provenance", rec.label, describe(&a.check))));
        }
        out.push(rec);
    }
    Ok(out)
}

fn int(s: &str) -> Result<BigInt> {
    s.parse().map_err(|_| Error::ParseError { line: 0, msg: format!("not an integer: {s:?}") })
}

fn describe(c: &Check) -> String {
    match c {
        Check::Global { .. } => "global".into(),
        Check::Local { p, .. } => format!("local@{p}"),
        Check::Class { p, .. } => format!("class@{p}"),
        Check::Kodaira { p, .. } => format!("kodaira@{p}"),
        Check::Basechange { field, .. } => format!("basechange {field}"),
        Check::Twist { d, .. } => format!("twist d={d}"),
        Check::Tower { p, n, m, .. } => format!("tower p={p} n={n} m={m}"),
        Check::Root2 { .. } => "root2".into(),
        Check::Zeta8 { .. } => "zeta8".into(),
        Check::Congruent { n, .. } => format!("congruent n={n}"),
    }
}

fn evaluate(rec: &FixtureRecord, hints: &[BigInt], a: &Assertion) -> AssertionResult {
    let e = &rec.curve;
    let (expected, actual): (Value, Result<Value>) = match &a.check {
        Check::Global { w } => (json!(w), globalroot::global_root_number_with_hints(e, hints).map(|v| json!(v))),
        Check::Local { p, w } => (
            json!(w),
            if p == "inf" {
                Ok(json!(localroot::root_number_infinite()))
            } else {
                int(p).and_then(|p| localroot::local_root_number(e, &p)).map(|v| json!(v))
            },
        ),
        Check::Class { p, class } => (
            json!(class),
            int(p).and_then(|p| curve::reduction_class(e, &p)).map(|v| json!(v)),
        ),
        Check::Kodaira { p, kodaira } => (
            json!(kodaira.to_string()),
            int(p).and_then(|p| curve::kodaira_type(e, &p)).map(|r| json!(r.kodaira.to_string())),
        ),
        Check::Basechange { field, w } => (
            json!(w),
            globalroot::base_change_root_number_with_hints(e, field, hints).map(|v| json!(v)),
        ),
        Check::Twist { d, w } => (
            json!(w),
            int(d).and_then(|d| globalroot::quadratic_twist_root_with_hints(e, &d, hints)).map(|v| json!(v)),
        ),
        Check::Tower { p, n, m, w } => (
            json!(w),
            int(m).and_then(|m| globalroot::tower_root_number_with_hints(e, *p, *n, &m, hints)).map(|v| json!(v)),
        ),
        Check::Root2 { w } => (json!(w), localroot::root_number_2(e).map(|v| json!(v))),
        Check::Zeta8 { w } => (
            json!(w),
            predict::zeta8_growth(e).map(|r| json!(r.root_number)),
        ),
        Check::Congruent { n, congruent } => (
            json!(congruent),
            int(n).and_then(|n| predict::predicted_congruent(&n)).map(|v| json!(v.predicted_congruent)),
        ),
    };
    let actual = actual.unwrap_or_else(|err| json!({ "error": err.to_string() }));
    AssertionResult {
        label: rec.label.clone(),
        check: describe(&a.check),
        pass: actual == expected,
        expected,
        actual,
        provenance: a.provenance.clone(),
    }
}
