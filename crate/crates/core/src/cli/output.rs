use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::commands::{
    AsymptPayload, ExactPayload, MomentValue, MomentsPayload, ReportPayload, VerifyPayload,
};
use super::{Format, RunConfig};
use crate::asymptotics::AsymptoticConstants;
use crate::error::{Error, Result};
use crate::simulator::SampleStats;

pub const SCHEMA_VERSION: u32 = 1;

/// Module result, tagged by subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Payload {
    Simulate(SampleStats),
    Exact(ExactPayload),
    Moments(MomentsPayload),
    Asympt(AsymptPayload),
    Verify(VerifyPayload),
    Report(ReportPayload),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: RunConfig,
    /// Unix seconds; `None` unless `--timestamp` was given.
    pub timestamp: Option<u64>,
    pub payload: Payload,
    pub diagnostics: Value,
}

impl ResultEnvelope {
    pub fn new(config: RunConfig, payload: Payload, diagnostics: Value, stamp: bool) -> Self {
        let timestamp = stamp.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            timestamp,
            payload,
            diagnostics,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Shortest round-trip form, with an exponent for very small or large values.
fn num(x: &f64) -> String {
    format!("{x:?}")
}

fn opt(i: Option<usize>) -> String {
    i.map(|v| v.to_string()).unwrap_or_default()
}

fn push_matrix(rows: &mut Vec<Vec<String>>, prefix: &[String], name: &str, m: &[Vec<f64>]) {
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let mut r = prefix.to_vec();
            r.extend([
                name.to_string(),
                (i + 1).to_string(),
                (j + 1).to_string(),
                num(v),
            ]);
            rows.push(r);
        }
    }
}

fn push_vector(
    rows: &mut Vec<Vec<String>>,
    prefix: &[String],
    name: &str,
    v: &[f64],
    offset: usize,
) {
    for (i, x) in v.iter().enumerate() {
        let mut r = prefix.to_vec();
        r.extend([
            name.to_string(),
            (i + offset).to_string(),
            String::new(),
            num(x),
        ]);
        rows.push(r);
    }
}

fn push_scalar(rows: &mut Vec<Vec<String>>, prefix: &[String], name: &str, v: f64) {
    let mut r = prefix.to_vec();
    r.extend([name.to_string(), String::new(), String::new(), num(&v)]);
    rows.push(r);
}

fn push_constants(rows: &mut Vec<Vec<String>>, prefix: &[String], c: &AsymptoticConstants) {
    push_vector(rows, prefix, "theta", &c.theta, 1);
    push_matrix(rows, prefix, "sigma", &c.sigma);
    push_scalar(rows, prefix, "vacancy_mean_const", c.vacancy_mean_const);
}

impl Payload {
    pub fn csv_table(&self) -> CsvTable {
        let mut rows = Vec::new();
        match self {
            Payload::Simulate(s) => {
                push_vector(&mut rows, &[], "mean", &s.mean, 1);
                push_matrix(&mut rows, &[], "covariance", &s.covariance);
                push_vector(&mut rows, &[], "mean_std_error", &s.mean_std_error, 1);
                push_scalar(&mut rows, &[], "projected_mean", s.projected_mean);
                push_vector(
                    &mut rows,
                    &[],
                    "standardized_moment",
                    &s.standardized_moments,
                    0,
                );
                for (m, r) in s.standardized_ratios.iter().enumerate() {
                    if let Some(r) = r {
                        rows.push(vec![
                            "standardized_ratio".into(),
                            m.to_string(),
                            String::new(),
                            num(r),
                        ]);
                    }
                }
                push_scalar(&mut rows, &[], "replications", s.replications as f64);
                push_scalar(&mut rows, &[], "invalid_states", s.invalid_states as f64);
                CsvTable {
                    header: vec!["quantity", "i", "j", "value"],
                    rows,
                }
            }
            Payload::Exact(e) => {
                let method = serde_json::to_value(e.method)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default();
                for entry in &e.entries {
                    let counts: Vec<String> = entry.counts.iter().map(u64::to_string).collect();
                    rows.push(vec![
                        method.clone(),
                        counts.join(" "),
                        entry.hats.to_string(),
                        entry.numerator.clone(),
                        entry.denominator.clone(),
                        num(&entry.probability),
                    ]);
                }
                CsvTable {
                    header: vec![
                        "method",
                        "counts",
                        "hats",
                        "numerator",
                        "denominator",
                        "probability",
                    ],
                    rows,
                }
            }
            Payload::Moments(m) => {
                for row in &m.rows {
                    let value = match &row.value {
                        MomentValue::Float(x) => num(x),
                        MomentValue::Exact(s) => s.clone(),
                    };
                    rows.push(vec![
                        row.table.clone(),
                        row.n.to_string(),
                        opt(row.i),
                        opt(row.j),
                        value,
                    ]);
                }
                CsvTable {
                    header: vec!["table", "n", "i", "j", "value"],
                    rows,
                }
            }
            Payload::Asympt(a) => {
                push_constants(&mut rows, &["quadrature".to_string()], &a.quadrature);
                push_constants(&mut rows, &["extrapolation".to_string()], &a.extrapolation);
                let p = ["comparison".to_string()];
                push_scalar(&mut rows, &p, "theta_max_diff", a.comparison.theta_max_diff);
                push_scalar(&mut rows, &p, "sigma_max_diff", a.comparison.sigma_max_diff);
                push_scalar(&mut rows, &p, "vacancy_diff", a.comparison.vacancy_diff);
                CsvTable {
                    header: vec!["route", "quantity", "i", "j", "value"],
                    rows,
                }
            }
            Payload::Verify(v) => {
                for c in &v.criteria {
                    for check in &c.checks {
                        let comparison = serde_json::to_value(check.comparison)
                            .ok()
                            .and_then(|v| v.as_str().map(str::to_string))
                            .unwrap_or_default();
                        rows.push(vec![
                            c.id.to_string(),
                            c.name.clone(),
                            check.label.clone(),
                            num(&check.measured),
                            num(&check.target),
                            num(&check.tolerance),
                            comparison,
                            check.passed.to_string(),
                        ]);
                    }
                }
                CsvTable {
                    header: vec![
                        "id",
                        "name",
                        "check",
                        "measured",
                        "target",
                        "tolerance",
                        "comparison",
                        "passed",
                    ],
                    rows,
                }
            }
            Payload::Report(r) => {
                for row in &r.rows {
                    let p = [row.k.to_string()];
                    push_scalar(&mut rows, &p, "e_k_at_1", row.e_k_at_1);
                    push_vector(&mut rows, &p, "theta", &row.theta, 1);
                    push_matrix(&mut rows, &p, "sigma", &row.sigma);
                    push_scalar(&mut rows, &p, "vacancy_mean_const", row.vacancy_mean_const);
                    push_scalar(&mut rows, &p, "theta_route_diff", row.theta_route_diff);
                    push_scalar(&mut rows, &p, "sigma_route_diff", row.sigma_route_diff);
                }
                CsvTable {
                    header: vec!["k", "quantity", "i", "j", "value"],
                    rows,
                }
            }
        }
    }
}

/// Serializes the envelope. JSON keys are sorted and floats use the
/// shortest representation that round-trips, so equal envelopes give equal
/// bytes.
pub fn render(envelope: &ResultEnvelope, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let value =
                serde_json::to_value(envelope).map_err(|e| Error::Serialize(e.to_string()))?;
            let mut text = serde_json::to_string_pretty(&value)
                .map_err(|e| Error::Serialize(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => {
            let table = envelope.payload.csv_table();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header)
                .map_err(|e| Error::Serialize(e.to_string()))?;
            for row in &table.rows {
                w.write_record(row)
                    .map_err(|e| Error::Serialize(e.to_string()))?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Error::Serialize(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
        }
    }
}

pub fn write_result(envelope: &ResultEnvelope, path: &Path, format: Format) -> Result<()> {
    let text = render(envelope, format)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
