//! JSON and CSV serialization of experiment results.
//!
//! JSON is `{"schema_version": 1, "results": [...]}` with a `type` tag on
//! every result. Counts are decimal strings everywhere.

use std::collections::BTreeMap;

use anyhow::Result;
use serde::{Deserialize, Serialize};
use vinoslice_core::counting::{CountParams, CountReport};

use crate::args::Format;
use crate::fit::FitResult;

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 10] = ["experiment", "s", "k", "r", "t", "X", "H", "count", "method", "elapsed_s"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    pub experiment: String,
    pub s: u32,
    pub k: Option<u32>,
    pub r: Option<u32>,
    /// Number of equations.
    pub t: usize,
    #[serde(rename = "X")]
    pub x: u64,
    #[serde(rename = "H")]
    pub h: Option<u64>,
    pub count: String,
    pub method: String,
    pub elapsed_s: f64,
    /// Tuple in display form, for auxiliary counts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple: Option<String>,
}

impl From<&CountReport> for CountRow {
    fn from(rep: &CountReport) -> Self {
        let (s, k, r, t, x, h, tuple) = match &rep.params {
            CountParams::Sliced { s, k, r, x } => (*s, Some(*k), Some(*r), *k as usize - 1, *x, None, None),
            CountParams::Vmvt { sigma, d, x } => (*sigma, Some(*d), None, *d as usize, *x, None, None),
            CountParams::Aux { f, s, r, x, h } => {
                let k = f.degrees().first().map(|d| *d as u32 + r);
                (*s, k, Some(*r), f.t(), *x, Some(*h), Some(f.describe()))
            }
            CountParams::Lifted { s, k, r, x, h } => (*s, Some(*k), Some(*r), *k as usize, *x, Some(*h), None),
        };
        CountRow {
            experiment: rep.params.experiment().to_string(),
            s,
            k,
            r,
            t,
            x,
            h,
            count: rep.count.to_string(),
            method: rep.method.as_str().to_string(),
            elapsed_s: rep.elapsed.as_secs_f64(),
            tuple,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    /// What was fitted, e.g. `count-i` or a solution label.
    pub series: String,
    #[serde(flatten)]
    pub fit: FitResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub within_target: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiRow {
    pub n: usize,
    pub tuple: String,
    pub psi: String,
    pub total_degree: u32,
    pub certified: bool,
    pub vanishing: bool,
    pub nonvanishing: bool,
    pub phi: String,
    pub recombination: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitiesRow {
    pub quadratic_identity: bool,
    pub sextic_vanishes: bool,
    pub sextic_divisible: bool,
    pub f63: String,
    pub f63_bidegree: (u32, u32),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetRow {
    pub n: usize,
    pub tuple: String,
    pub det: String,
    pub minors: usize,
    pub expansion_matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaRow {
    pub m: usize,
    pub tuple: String,
    pub theta: String,
    pub recombination: bool,
    /// `(point, value)` pairs as decimal strings.
    pub samples: Vec<(Vec<String>, String)>,
    pub min_abs_sample: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyRow {
    pub s: u32,
    pub tuple: String,
    #[serde(rename = "X")]
    pub x: u64,
    #[serde(rename = "H")]
    pub h: u64,
    pub total: u64,
    pub histogram: BTreeMap<String, u64>,
    pub witnesses_verified: bool,
    /// Divisibility of the common relation value on `S_s` solutions.
    pub divisibility_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub s: u32,
    pub k: u32,
    pub r: u32,
    pub kappa: u32,
    pub t: usize,
    pub degrees: Vec<u32>,
    pub u: String,
    pub v: String,
    pub w: String,
    pub delta: String,
    pub kappa_in_range: bool,
    pub s_in_range: bool,
    pub aux_constraint: bool,
    /// Named exponents as exact rationals, in a fixed order.
    pub targets: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Entry {
    Count(CountRow),
    Fit(FitRow),
    Psi(PsiRow),
    Identities(IdentitiesRow),
    Det(DetRow),
    Theta(ThetaRow),
    Classify(ClassifyRow),
    Bounds(BoundsRow),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub results: Vec<Entry>,
}

impl Report {
    pub fn new(results: Vec<Entry>) -> Self {
        Report { schema_version: SCHEMA_VERSION, results }
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

/// Serializes `entries` deterministically.
///
/// CSV holds count rows under [`CSV_COLUMNS`]; derived fits are dropped
/// there (the `fit` command recomputes them). Without count rows the CSV
/// is `type,field,value` triples.
pub fn emit_report(entries: &[Entry], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&Report::new(entries.to_vec()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let counts: Vec<&CountRow> = entries
                .iter()
                .filter_map(|e| match e {
                    Entry::Count(c) => Some(c),
                    _ => None,
                })
                .collect();
            if !counts.is_empty() || entries.is_empty() {
                w.write_record(CSV_COLUMNS)?;
                for c in counts {
                    w.write_record([
                        c.experiment.clone(),
                        c.s.to_string(),
                        opt(&c.k),
                        opt(&c.r),
                        c.t.to_string(),
                        c.x.to_string(),
                        opt(&c.h),
                        c.count.clone(),
                        c.method.clone(),
                        format!("{:.6}", c.elapsed_s),
                    ])?;
                }
            } else {
                w.write_record(["type", "field", "value"])?;
                for e in entries {
                    let value = serde_json::to_value(e)?;
                    let obj = value.as_object().expect("entries serialize to objects");
                    let ty = obj["type"].as_str().unwrap_or_default().to_string();
                    for (k, v) in obj.iter().filter(|(k, _)| *k != "type") {
                        let text = match v {
                            serde_json::Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        w.write_record([ty.as_str(), k.as_str(), text.as_str()])?;
                    }
                }
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
    }
}

/// Reads the `X` and `count` columns of a count CSV.
pub fn read_count_csv(text: &str) -> Result<Vec<(u64, num_bigint::BigInt)>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let col =
        |name: &str| headers.iter().position(|h| h == name).ok_or_else(|| anyhow::anyhow!("missing column `{name}`"));
    let (xi, ci) = (col("X")?, col("count")?);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        out.push((rec[xi].trim().parse()?, rec[ci].trim().parse()?));
    }
    Ok(out)
}
