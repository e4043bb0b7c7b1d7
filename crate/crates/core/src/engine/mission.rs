//! The 24-hour mission loop.

use std::sync::Arc;

use chrono::{DateTime, Utc};
use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use super::Scenario;
use crate::access::access_fraction;
use crate::error::{GeometryError, MetricsError};
use crate::metrics::{aggregate, latency, reliability, Aggregate, MetricSummary, MissionRecord, RfScenario};
use crate::orbital::{Propagator, TwoBody};
use crate::schemes::{evaluate, mission_rng, LayerSnapshots, LinkFailures, MissionOutcome, Scheme};
use crate::topology::{Layer, Satellite};

#[derive(Debug, Clone, PartialEq)]
pub struct MissionReport {
    /// Ordered by target, sample, then scheme and scenario in scenario order.
    pub records: Vec<MissionRecord>,
    pub summary: Aggregate,
    /// Satellite positions propagated more than a week past their epoch.
    pub stale_positions: usize,
}

/// Every fourth LEO satellite by ordinal, starting at ordinal 0.
pub fn select_targets(leo: &[Satellite]) -> Vec<Satellite> {
    let mut targets: Vec<Satellite> = leo.iter().filter(|s| s.id.ordinal % 4 == 0).cloned().collect();
    targets.sort_by_key(|s| s.id.ordinal);
    targets
}

pub fn run_mission(scenario: &Scenario) -> Result<MissionReport, MetricsError> {
    run_mission_with(scenario, &TwoBody)
}

pub fn run_mission_with(scenario: &Scenario, propagator: &dyn Propagator) -> Result<MissionReport, MetricsError> {
    let times = scenario.sample_times();
    let targets: Vec<(usize, usize)> = select_targets(scenario.leo.satellites())
        .iter()
        .map(|s| (scenario.leo.slot_of(&s.id).expect("target from this layer"), s.id.ordinal))
        .collect();

    let per_sample = times
        .par_iter()
        .enumerate()
        .map(|(sample_index, &t)| sample(scenario, propagator, &targets, sample_index, t))
        .collect::<Result<Vec<_>, _>>()?;

    let stale_positions = per_sample.iter().map(|(_, stale)| stale).sum();
    if stale_positions > 0 {
        warn!("{stale_positions} satellite positions were propagated more than a week from their element epoch");
    }
    let mut records: Vec<MissionRecord> = per_sample.into_iter().flat_map(|(r, _)| r).collect();
    // stable: keeps scheme and scenario order within a (target, sample) pair
    records.sort_by_key(|r| (r.target_id, r.sample_index));
    let summary = aggregate(&records)?;
    Ok(MissionReport { records, summary, stale_positions })
}

fn sample(
    scenario: &Scenario,
    propagator: &dyn Propagator,
    targets: &[(usize, usize)],
    sample_index: usize,
    t: DateTime<Utc>,
) -> Result<(Vec<MissionRecord>, usize), MetricsError> {
    let layers = LayerSnapshots {
        leo: scenario.leo.snapshot(propagator, t),
        meo: scenario.meo.as_ref().map(|n| n.snapshot(propagator, t)),
        geo: scenario.geo.as_ref().map(|n| n.snapshot(propagator, t)),
    };
    let stale = layers.leo.stale_count()
        + layers.meo.as_ref().map_or(0, |s| s.stale_count())
        + layers.geo.as_ref().map_or(0, |s| s.stale_count());

    let mut records = Vec::with_capacity(targets.len() * scenario.schemes.len() * scenario.scenarios.len());
    for &(slot, target_id) in targets {
        for &scheme in &scenario.schemes {
            let mut rng = mission_rng(scenario.seed, target_id, sample_index, scheme);
            let failures = scenario.stochastic_failures.then_some(LinkFailures { phis: scenario.phis, rng: &mut rng });
            let outcome = Arc::new(evaluate(scheme, &scenario.gs, slot, &layers, scenario.grazing_margin, failures));
            for &rf in &scenario.scenarios {
                records.push(build_record(scenario, target_id, sample_index, t, scheme, rf, Arc::clone(&outcome))?);
            }
        }
    }
    Ok((records, stale))
}

fn build_record(
    scenario: &Scenario,
    target_id: usize,
    sample_index: usize,
    sample_time: DateTime<Utc>,
    scheme: Scheme,
    rf: RfScenario,
    outcome: Arc<MissionOutcome>,
) -> Result<MissionRecord, MetricsError> {
    let (hops, path_m, latency_s, rel) = match &outcome.route {
        Some(route) if outcome.success => (
            Some(route.n_h()),
            Some(route.total_length()),
            Some(latency(route, &scenario.rates, rf, &scenario.delay)?),
            Some(reliability(route, &scenario.phis, scenario.reliability_mode)?),
        ),
        _ => (None, None, None, None),
    };
    Ok(MissionRecord {
        target_id,
        sample_index,
        sample_time,
        scheme,
        scenario: rf,
        outcome,
        hops,
        path_m,
        latency_s,
        reliability: rel,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub scenario: RfScenario,
    pub scheme: Scheme,
    pub attempts: u64,
    pub successes: u64,
    pub resilience: f64,
    pub hops_mean: Option<f64>,
    pub path_mean_m: Option<f64>,
    pub latency_mean_s: Option<f64>,
    pub reliability_mean: Option<f64>,
    /// Mean latency of this scheme over that of the reference scheme.
    pub latency_ratio: Option<f64>,
    pub hops_ratio: Option<f64>,
    pub path_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub reference: Scheme,
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    pub fn row(&self, scheme: Scheme, scenario: RfScenario) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.scheme == scheme && r.scenario == scenario)
    }
}

fn ratio(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(a), Some(b)) if b != 0.0 => Some(a / b),
        _ => None,
    }
}

/// Per-scenario means and resilience of every scheme, with ratios against
/// MLN (or the first scheme when MLN was not run).
pub fn compare_schemes(report: &MissionReport) -> Comparison {
    let schemes: Vec<Scheme> = {
        let mut seen = Vec::new();
        for r in &report.records {
            if !seen.contains(&r.scheme) {
                seen.push(r.scheme);
            }
        }
        seen
    };
    let reference = if schemes.contains(&Scheme::Mln) { Scheme::Mln } else { schemes.first().copied().unwrap_or(Scheme::Mln) };
    let mut scenarios: Vec<RfScenario> = report.summary.overall.keys().map(|k| k.1).collect();
    scenarios.sort();
    scenarios.dedup();

    let empty = MetricSummary::default();
    let mut rows = Vec::new();
    for &rf in &scenarios {
        let base = report.summary.get(reference, rf).unwrap_or(&empty);
        for &scheme in &schemes {
            let s = report.summary.get(scheme, rf).unwrap_or(&empty);
            rows.push(ComparisonRow {
                scenario: rf,
                scheme,
                attempts: s.attempts,
                successes: s.successes,
                resilience: s.resilience(),
                hops_mean: s.hops.mean(),
                path_mean_m: s.path_length.mean(),
                latency_mean_s: s.latency.mean(),
                reliability_mean: s.reliability.mean(),
                latency_ratio: ratio(s.latency.mean(), base.latency.mean()),
                hops_ratio: ratio(s.hops.mean(), base.hops.mean()),
                path_ratio: ratio(s.path_length.mean(), base.path_length.mean()),
            });
        }
    }
    Comparison { reference, rows }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccessRow {
    pub ordinal: usize,
    pub layer: Layer,
    pub plane: usize,
    pub index: usize,
    pub fraction: f64,
}

/// GS access fraction of every satellite over the mission window, sampled
/// every `step` seconds.
pub fn access_table(scenario: &Scenario, step: f64) -> Result<Vec<AccessRow>, GeometryError> {
    let sats: Vec<&Satellite> = scenario.layers().flat_map(|n| n.satellites()).collect();
    sats.par_iter()
        .map(|s| {
            let fraction = access_fraction(&scenario.gs, s, (scenario.t_start, scenario.t_end), step, &TwoBody)?;
            Ok(AccessRow { ordinal: s.id.ordinal, layer: s.id.layer, plane: s.id.plane, index: s.id.index, fraction })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::load_scenario;
    use crate::metrics::MetricSummary;

    fn small(extra: &str) -> Scenario {
        load_scenario(&format!(r#"{{"T_end": "2022-08-14 07:00:00" {extra}}}"#), None).unwrap()
    }

    #[test]
    fn target_selection() {
        let s = Scenario::default_mission();
        let t = select_targets(s.leo.satellites());
        assert_eq!(t.len(), 20);
        assert_eq!(t.iter().map(|s| s.id.ordinal).collect::<Vec<_>>(), (0..78).step_by(4).collect::<Vec<_>>());
        assert_eq!(select_targets(&s.leo.satellites()[..4]).len(), 1);
        let three = select_targets(&s.leo.satellites()[..3]);
        assert_eq!(three.len(), 1);
        assert_eq!(three[0].id.ordinal, 0);
    }

    #[test]
    fn record_count_and_order() {
        let s = small(r#", "schemes": ["mln"], "scenarios": ["S1"]"#);
        let report = run_mission(&s).unwrap();
        assert_eq!(report.records.len(), 20 * 6);
        let keys: Vec<(usize, usize)> = report.records.iter().map(|r| (r.target_id, r.sample_index)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);

        let full = run_mission(&Scenario::default_mission()).unwrap();
        assert_eq!(full.records.len(), 20 * 24 * 4 * 4);
    }

    #[test]
    fn records_match_route_metrics() {
        let s = small("");
        let report = run_mission(&s).unwrap();
        for r in &report.records {
            match &r.outcome.route {
                Some(route) => {
                    assert!(r.outcome.success);
                    assert_eq!(r.hops, Some(route.n_h()));
                    assert_eq!(r.path_m, Some(route.total_length()));
                    assert_eq!(r.latency_s, Some(latency(route, &s.rates, r.scenario, &s.delay).unwrap()));
                    assert_eq!(r.reliability, Some(reliability(route, &s.phis, s.reliability_mode).unwrap()));
                    route.check().unwrap();
                }
                None => assert!(r.hops.is_none() && r.latency_s.is_none() && !r.outcome.success),
            }
        }
    }

    #[test]
    fn independent_of_thread_count() {
        let s = small(r#", "stochastic_failures": true, "seed": 11"#);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| run_mission(&s).unwrap());
        let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| run_mission(&s).unwrap());
        assert_eq!(one, many);
    }

    #[test]
    fn seeds_change_stochastic_outcomes_only() {
        let base = run_mission(&small(r#", "schemes": ["mln"], "scenarios": ["S1"], "seed": 1"#)).unwrap();
        let other = run_mission(&small(r#", "schemes": ["mln"], "scenarios": ["S1"], "seed": 2"#)).unwrap();
        assert_eq!(base, other);
        let lossy = |seed: u64| {
            let s = small(&format!(
                r#", "scenarios": ["S1"], "seed": {seed}, "stochastic_failures": true,
                   "phi_1": 0.5, "phi_2": 0.6, "phi_3": 0.6, "phi_4": 0.55, "phi_gs_leo": 0.6, "phi_gs_meo": 0.6, "phi_gs_geo": 0.6"#
            ));
            run_mission(&s).unwrap()
        };
        assert_eq!(lossy(3), lossy(3));
        assert_ne!(lossy(3), lossy(4));
    }

    #[test]
    fn comparison_of_identical_schemes() {
        let s = small(r#", "schemes": ["mln"]"#);
        let mut report = run_mission(&s).unwrap();
        let twin: Vec<MissionRecord> = report
            .records
            .iter()
            .map(|r| MissionRecord { scheme: Scheme::LeoMln, ..r.clone() })
            .collect();
        report.records.extend(twin);
        report.summary = aggregate(&report.records).unwrap();
        let cmp = compare_schemes(&report);
        assert_eq!(cmp.reference, Scheme::Mln);
        assert_eq!(cmp.rows.len(), 8);
        for row in &cmp.rows {
            assert_eq!(row.latency_ratio, Some(1.0));
            assert_eq!(row.hops_ratio, Some(1.0));
            assert_eq!(row.path_ratio, Some(1.0));
        }
    }

    #[test]
    fn summary_is_an_ordered_fold() {
        let report = run_mission(&small("")).unwrap();
        let mut by_hand = MetricSummary::default();
        for r in report.records.iter().filter(|r| r.scheme == Scheme::GeoOnly && r.scenario == RfScenario::S3) {
            by_hand.record(r);
        }
        assert_eq!(report.summary.get(Scheme::GeoOnly, RfScenario::S3), Some(&by_hand));
    }

    #[test]
    fn access_rows() {
        let s = small("");
        let rows = access_table(&s, 600.0).unwrap();
        assert_eq!(rows.len(), 101);
        assert_eq!(rows.iter().map(|r| r.ordinal).collect::<Vec<_>>(), (0..101).collect::<Vec<_>>());
        assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r.fraction)));
        assert_eq!(rows[98].fraction, 1.0);
        assert!(access_table(&s, 0.0).is_err());
    }
}
