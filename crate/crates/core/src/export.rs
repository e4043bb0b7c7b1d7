//! Tabular output: mission records, scheme comparisons and plot-ready
//! figure series, as CSV or JSON.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use chrono::SecondsFormat;
use serde_json::{Map, Number, Value};

use crate::engine::{access_table, Comparison, MissionReport, Scenario};
use crate::error::GeometryError;
use crate::metrics::{reliability, MetricSummary, MissionRecord, ReliabilityTable, RfScenario, RunningStats};
use crate::schemes::Scheme;

pub const RECORD_HEADER: [&str; 9] =
    ["target_id", "sample_time", "scheme", "scenario", "hops", "path_m", "latency_s", "reliability", "success"];

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn opt_f64(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Float)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Array of objects keyed by column name; empty cells become `null`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.header.iter().zip(row).map(|(k, c)| (k.to_string(), c.json())).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        out.write_all(b"\n")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv|json)")),
        }
    }
}

impl Table {
    pub fn write<W: Write>(&self, format: Format, out: W) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out).map_err(std::io::Error::other),
            Format::Json => self.write_json(out),
        }
    }
}

pub fn records_table(records: &[MissionRecord]) -> Table {
    let rows = records
        .iter()
        .map(|r| {
            vec![
                Cell::Int(r.target_id as u64),
                Cell::Text(r.sample_time.to_rfc3339_opts(SecondsFormat::AutoSi, true)),
                Cell::Text(r.scheme.to_string()),
                Cell::Text(r.scenario.to_string()),
                r.hops.map_or(Cell::Empty, |h| Cell::Int(h as u64)),
                Cell::opt_f64(r.path_m),
                Cell::opt_f64(r.latency_s),
                Cell::opt_f64(r.reliability),
                Cell::Bool(r.success()),
            ]
        })
        .collect();
    Table { header: RECORD_HEADER.to_vec(), rows }
}

pub fn comparison_table(cmp: &Comparison) -> Table {
    let rows = cmp
        .rows
        .iter()
        .map(|r| {
            vec![
                Cell::Text(r.scenario.to_string()),
                Cell::Text(r.scheme.to_string()),
                Cell::Int(r.attempts),
                Cell::Int(r.successes),
                Cell::Float(r.resilience),
                Cell::opt_f64(r.hops_mean),
                Cell::opt_f64(r.path_mean_m),
                Cell::opt_f64(r.latency_mean_s),
                Cell::opt_f64(r.reliability_mean),
                Cell::opt_f64(r.latency_ratio),
                Cell::opt_f64(r.hops_ratio),
                Cell::opt_f64(r.path_ratio),
            ]
        })
        .collect();
    Table {
        header: vec![
            "scenario",
            "scheme",
            "attempts",
            "successes",
            "resilience",
            "hops_mean",
            "path_mean_m",
            "latency_mean_s",
            "reliability_mean",
            "latency_ratio",
            "hops_ratio",
            "path_ratio",
        ],
        rows,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    Hops,
    PathLen,
    Latency,
    Resilience,
    Reliability,
    Access,
}

impl Figure {
    pub const ALL: [Figure; 6] =
        [Figure::Hops, Figure::PathLen, Figure::Latency, Figure::Resilience, Figure::Reliability, Figure::Access];

    pub fn as_str(self) -> &'static str {
        match self {
            Figure::Hops => "hops",
            Figure::PathLen => "pathlen",
            Figure::Latency => "latency",
            Figure::Resilience => "resilience",
            Figure::Reliability => "reliability",
            Figure::Access => "access",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Figure {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Figure::ALL
            .into_iter()
            .find(|f| f.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown series {s:?} (expected hops|pathlen|latency|resilience|reliability|access)"))
    }
}

/// Label of the reliability series recomputed with every link at 0.999.
pub const UNIFORM_VARIANT: &str = "uniform_0.999";

fn schemes_of(report: &MissionReport) -> Vec<Scheme> {
    let mut out: Vec<Scheme> = Vec::new();
    for r in &report.records {
        if !out.contains(&r.scheme) {
            out.push(r.scheme);
        }
    }
    out
}

fn first_scenario(report: &MissionReport) -> Option<RfScenario> {
    report.records.first().map(|r| r.scenario)
}

fn per_target_rows(
    report: &MissionReport,
    scenario: RfScenario,
    value: impl Fn(&MetricSummary) -> Option<f64>,
) -> Vec<Vec<Cell>> {
    let mut rows = Vec::new();
    for scheme in schemes_of(report) {
        for ((s, rf, target), summary) in &report.summary.per_target {
            if *s == scheme && *rf == scenario {
                rows.push(vec![Cell::Int(*target as u64), Cell::Text(scheme.to_string()), Cell::opt_f64(value(summary))]);
            }
        }
    }
    rows
}

/// Tidy data behind one figure. Hop and path-length series do not depend on
/// the RF scenario and are taken from the first one in the report.
pub fn figure_table(figure: Figure, scenario: &Scenario, report: &MissionReport, access_step: f64) -> Result<Table, GeometryError> {
    let first = first_scenario(report).unwrap_or(RfScenario::S1);
    Ok(match figure {
        Figure::Hops => Table { header: vec!["target_id", "scheme", "hops_mean"], rows: per_target_rows(report, first, |s| s.hops.mean()) },
        Figure::PathLen => Table {
            header: vec!["target_id", "scheme", "path_mean_m"],
            rows: per_target_rows(report, first, |s| s.path_length.mean()),
        },
        Figure::Latency => {
            let mut rows = Vec::new();
            for rf in &scenario.scenarios {
                for mut row in per_target_rows(report, *rf, |s| s.latency.mean()) {
                    row.insert(2, Cell::Text(rf.to_string()));
                    rows.push(row);
                }
            }
            Table { header: vec!["target_id", "scheme", "scenario", "latency_mean_s"], rows }
        }
        Figure::Resilience => {
            let rows = schemes_of(report)
                .into_iter()
                .filter_map(|scheme| {
                    report.summary.get(scheme, first).map(|s| {
                        vec![Cell::Text(scheme.to_string()), Cell::Int(s.attempts), Cell::Int(s.successes), Cell::Float(s.resilience())]
                    })
                })
                .collect();
            Table { header: vec!["scheme", "attempts", "successes", "resilience"], rows }
        }
        Figure::Reliability => reliability_table(scenario, report, first),
        Figure::Access => {
            let rows = access_table(scenario, access_step)?
                .into_iter()
                .map(|a| {
                    vec![
                        Cell::Int(a.ordinal as u64),
                        Cell::Text(a.layer.to_string()),
                        Cell::Int(a.plane as u64),
                        Cell::Int(a.index as u64),
                        Cell::Float(a.fraction),
                    ]
                })
                .collect();
            Table { header: vec!["sat_id", "layer", "plane", "index", "access_fraction"], rows }
        }
    })
}

fn reliability_table(scenario: &Scenario, report: &MissionReport, rf: RfScenario) -> Table {
    let uniform = ReliabilityTable::uniform(0.999);
    let mut rows = Vec::new();
    for scheme in schemes_of(report) {
        let mut by_target: std::collections::BTreeMap<usize, (RunningStats, RunningStats)> = Default::default();
        for r in report.records.iter().filter(|r| r.scheme == scheme && r.scenario == rf) {
            let entry = by_target.entry(r.target_id).or_default();
            if let (Some(phi), Some(route)) = (r.reliability, &r.outcome.route) {
                entry.0.push(phi);
                if let Ok(u) = reliability(route, &uniform, scenario.reliability_mode) {
                    entry.1.push(u);
                }
            }
        }
        for (target, (table, flat)) in by_target {
            for (variant, stats) in [("table", table), (UNIFORM_VARIANT, flat)] {
                rows.push(vec![
                    Cell::Int(target as u64),
                    Cell::Text(scheme.to_string()),
                    Cell::Text(variant.to_string()),
                    Cell::opt_f64(stats.mean()),
                ]);
            }
        }
    }
    Table { header: vec!["target_id", "scheme", "variant", "reliability_mean"], rows }
}
