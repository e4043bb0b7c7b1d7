//! Latency, reliability and resilience of telecommand deliveries.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::MetricsError;
use crate::schemes::{MissionOutcome, Scheme};
use crate::topology::{LinkType, Route};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Payload mix of the four evaluated link configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RfScenario {
    S1,
    S2,
    S3,
    S4,
}

impl RfScenario {
    pub const ALL: [RfScenario; 4] = [RfScenario::S1, RfScenario::S2, RfScenario::S3, RfScenario::S4];
}

impl fmt::Display for RfScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for RfScenario {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "S1" => Ok(RfScenario::S1),
            "S2" => Ok(RfScenario::S2),
            "S3" => Ok(RfScenario::S3),
            "S4" => Ok(RfScenario::S4),
            other => Err(format!("unknown scenario {other:?} (expected S1..S4)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Ka,
    L,
    Fso,
}

/// Band carried by each link class in each scenario.
pub fn band(link: LinkType, scenario: RfScenario) -> Band {
    use LinkType::*;
    use RfScenario::*;
    match (scenario, link) {
        (S4, _) => Band::Fso,
        (S3, GsLeo | GsMeo | GsGeo) => Band::Fso,
        (S2, GeoGeo | GeoLeo) => Band::L,
        _ => Band::Ka,
    }
}

/// Data rate per (link class, scenario), bits per second.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkRateTable {
    rates: BTreeMap<(LinkType, RfScenario), f64>,
}

impl LinkRateTable {
    /// Builds the full table from one rate per band. Ka-band GEO-LEO cells
    /// use the dedicated RF GEO-LEO rate.
    pub fn from_band_rates(r_k: f64, r_l: f64, r_o_gl: f64, r_r_gl: f64) -> Self {
        let mut rates = BTreeMap::new();
        for s in RfScenario::ALL {
            for l in LinkType::ALL {
                let r = match (band(l, s), l) {
                    (Band::Ka, LinkType::GeoLeo) => r_r_gl,
                    (Band::Ka, _) => r_k,
                    (Band::L, _) => r_l,
                    (Band::Fso, _) => r_o_gl,
                };
                rates.insert((l, s), r);
            }
        }
        Self { rates }
    }

    pub fn empty() -> Self {
        Self { rates: BTreeMap::new() }
    }

    pub fn set(&mut self, link: LinkType, scenario: RfScenario, rate: f64) {
        self.rates.insert((link, scenario), rate);
    }

    pub fn rate(&self, link: LinkType, scenario: RfScenario) -> Result<f64, MetricsError> {
        self.rates
            .get(&(link, scenario))
            .copied()
            .filter(|r| *r > 0.0)
            .ok_or(MetricsError::MissingRate { link, scenario: scenario.to_string() })
    }
}

impl Default for LinkRateTable {
    fn default() -> Self {
        Self::from_band_rates(324e6, 150e3, 1.8e9, 324e6)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayConstants {
    /// Telecommand frame size, bits.
    pub packet_bits: f64,
    /// m/s.
    pub light_speed: f64,
    /// Per-hop processing delay, seconds.
    pub processing: f64,
    /// Per-hop queuing delay, seconds.
    pub queuing: f64,
}

impl Default for DelayConstants {
    fn default() -> Self {
        Self { packet_bits: 1024.0 * 8.0, light_speed: SPEED_OF_LIGHT, processing: 100e-6, queuing: 100e-6 }
    }
}

/// Per-hop link reliability by link class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityTable {
    pub leo_isl: f64,
    pub ring_isl: f64,
    pub geo_leo: f64,
    pub meo_leo: f64,
    pub gs_leo: f64,
    pub gs_meo: f64,
    pub gs_geo: f64,
}

impl Default for ReliabilityTable {
    fn default() -> Self {
        Self {
            leo_isl: 0.9980,
            ring_isl: 0.9990,
            geo_leo: 0.9990,
            meo_leo: 0.9985,
            gs_leo: 0.9985,
            gs_meo: 0.9985,
            gs_geo: 0.9990,
        }
    }
}

impl ReliabilityTable {
    pub fn uniform(phi: f64) -> Self {
        Self { leo_isl: phi, ring_isl: phi, geo_leo: phi, meo_leo: phi, gs_leo: phi, gs_meo: phi, gs_geo: phi }
    }

    pub fn phi(&self, link: LinkType) -> f64 {
        match link {
            LinkType::LeoLeo => self.leo_isl,
            LinkType::MeoMeo | LinkType::GeoGeo => self.ring_isl,
            LinkType::GeoLeo => self.geo_leo,
            LinkType::MeoLeo => self.meo_leo,
            LinkType::GsLeo => self.gs_leo,
            LinkType::GsMeo => self.gs_meo,
            LinkType::GsGeo => self.gs_geo,
        }
    }

    pub fn entries(&self) -> [(&'static str, f64); 7] {
        [
            ("phi_1", self.leo_isl),
            ("phi_2", self.ring_isl),
            ("phi_3", self.geo_leo),
            ("phi_4", self.meo_leo),
            ("phi_gs_leo", self.gs_leo),
            ("phi_gs_meo", self.gs_meo),
            ("phi_gs_geo", self.gs_geo),
        ]
    }

    /// GEO links at least as reliable as MEO links, which are at least as
    /// reliable as LEO links.
    pub fn is_ordered(&self) -> bool {
        self.geo_leo >= self.meo_leo && self.meo_leo >= self.leo_isl
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReliabilityMode {
    /// Product of per-hop reliabilities.
    #[default]
    Series,
    /// `1 - prod(1 - phi)`.
    Literal,
}

impl FromStr for ReliabilityMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "series" => Ok(ReliabilityMode::Series),
            "literal" | "literal_eq2" => Ok(ReliabilityMode::Literal),
            other => Err(format!("unknown reliability mode {other:?} (expected series|literal)")),
        }
    }
}

/// End-to-end delay: sum over hops of propagation, transmission, queuing
/// and processing delay.
pub fn latency(route: &Route, rates: &LinkRateTable, scenario: RfScenario, consts: &DelayConstants) -> Result<f64, MetricsError> {
    route.hops.iter().try_fold(0.0, |acc, hop| {
        let r = rates.rate(hop.link_type, scenario)?;
        Ok(acc + hop.length / consts.light_speed + consts.packet_bits / r + consts.queuing + consts.processing)
    })
}

pub fn reliability(route: &Route, phis: &ReliabilityTable, mode: ReliabilityMode) -> Result<f64, MetricsError> {
    if route.hops.is_empty() {
        return Err(MetricsError::NoHops);
    }
    let per_hop = route.hops.iter().map(|h| phis.phi(h.link_type));
    Ok(match mode {
        ReliabilityMode::Series => per_hop.product(),
        ReliabilityMode::Literal => 1.0 - per_hop.map(|p| 1.0 - p).product::<f64>(),
    })
}

/// Share of successful missions.
pub fn resilience(outcomes: &[MissionOutcome]) -> Result<f64, MetricsError> {
    if outcomes.is_empty() {
        return Err(MetricsError::NoOutcomes);
    }
    let ok = outcomes.iter().filter(|o| o.success).count();
    Ok(ok as f64 / outcomes.len() as f64)
}

/// Mergeable mean/variance/min/max accumulator (Welford with Chan's merge).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunningStats {
    pub count: u64,
    pub mean: f64,
    m2: f64,
    pub min: f64,
    pub max: f64,
}

impl Default for RunningStats {
    fn default() -> Self {
        Self { count: 0, mean: 0.0, m2: 0.0, min: f64::INFINITY, max: f64::NEG_INFINITY }
    }
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    pub fn merge(&self, other: &Self) -> Self {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        Self {
            count: self.count + other.count,
            mean: self.mean + delta * other.count as f64 / n,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * other.count as f64 / n,
            min: self.min.min(other.min),
            max: self.max.max(other.max),
        }
    }

    /// Population standard deviation.
    pub fn stddev(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.m2 / self.count as f64).sqrt()
        }
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then_some(self.mean)
    }
}

impl FromIterator<f64> for RunningStats {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        for x in iter {
            s.push(x);
        }
        s
    }
}

/// Per-group statistics over delivered packets, plus resilience over all attempts.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct MetricSummary {
    pub attempts: u64,
    pub successes: u64,
    pub hops: RunningStats,
    pub path_length: RunningStats,
    pub latency: RunningStats,
    pub reliability: RunningStats,
}

impl MetricSummary {
    pub fn resilience(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.successes as f64 / self.attempts as f64
        }
    }

    pub fn merge(&self, other: &Self) -> Self {
        Self {
            attempts: self.attempts + other.attempts,
            successes: self.successes + other.successes,
            hops: self.hops.merge(&other.hops),
            path_length: self.path_length.merge(&other.path_length),
            latency: self.latency.merge(&other.latency),
            reliability: self.reliability.merge(&other.reliability),
        }
    }

    /// Counts one attempt; metrics are only folded in for deliveries.
    pub fn record(&mut self, rec: &MissionRecord) {
        self.attempts += 1;
        if let (Some(h), Some(p), Some(l), Some(r)) = (rec.hops, rec.path_m, rec.latency_s, rec.reliability) {
            self.successes += 1;
            self.hops.push(h as f64);
            self.path_length.push(p);
            self.latency.push(l);
            self.reliability.push(r);
        }
    }
}

/// One (target, sample, scheme, scenario) evaluation. Metric fields are
/// `None` for failed missions.
#[derive(Debug, Clone, PartialEq)]
pub struct MissionRecord {
    pub target_id: usize,
    pub sample_index: usize,
    pub sample_time: DateTime<Utc>,
    pub scheme: Scheme,
    pub scenario: RfScenario,
    pub outcome: Arc<MissionOutcome>,
    pub hops: Option<usize>,
    pub path_m: Option<f64>,
    pub latency_s: Option<f64>,
    pub reliability: Option<f64>,
}

impl MissionRecord {
    pub fn success(&self) -> bool {
        self.outcome.success
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Aggregate {
    pub overall: BTreeMap<(Scheme, RfScenario), MetricSummary>,
    pub per_target: BTreeMap<(Scheme, RfScenario, usize), MetricSummary>,
}

impl Aggregate {
    pub fn get(&self, scheme: Scheme, scenario: RfScenario) -> Option<&MetricSummary> {
        self.overall.get(&(scheme, scenario))
    }
}

/// Folds records in order into per-(scheme, scenario) and per-target summaries.
pub fn aggregate(records: &[MissionRecord]) -> Result<Aggregate, MetricsError> {
    if records.is_empty() {
        return Err(MetricsError::NoRecords);
    }
    let mut agg = Aggregate::default();
    for rec in records {
        agg.overall.entry((rec.scheme, rec.scenario)).or_default().record(rec);
        agg.per_target.entry((rec.scheme, rec.scenario, rec.target_id)).or_default().record(rec);
    }
    Ok(agg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::FailureReason;
    use crate::topology::{Layer, Node, RouteHop, RouteLayer, SatId};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn sat(ordinal: usize) -> Node {
        Node::Sat(SatId { layer: Layer::Leo, plane: 0, index: ordinal, ordinal })
    }

    fn route(hops: &[(f64, LinkType)]) -> Route {
        Route {
            hops: hops
                .iter()
                .enumerate()
                .map(|(i, &(length, link_type))| RouteHop { from: sat(i), to: sat(i + 1), length, link_type })
                .collect(),
            layer_used: RouteLayer::Leo,
        }
    }

    #[test]
    fn one_ka_hop() {
        let r = route(&[(1_000e3, LinkType::GsLeo)]);
        let d = latency(&r, &LinkRateTable::default(), RfScenario::S1, &DelayConstants::default()).unwrap();
        // 1e6/c + 8192/324e6 + 2e-4
        assert_relative_eq!(d, 3.560_924_902_598_804e-3, max_relative = 1e-12);
    }

    #[test]
    fn one_l_band_geo_hop() {
        let r = route(&[(35_786e3, LinkType::GeoLeo)]);
        let d = latency(&r, &LinkRateTable::default(), RfScenario::S2, &DelayConstants::default()).unwrap();
        assert_relative_eq!(d, 0.174_182_580_440_944, max_relative = 1e-12);
    }

    #[test]
    fn empty_route_has_no_delay() {
        let r = Route::empty(RouteLayer::Leo);
        assert_eq!(latency(&r, &LinkRateTable::default(), RfScenario::S3, &DelayConstants::default()).unwrap(), 0.0);
    }

    #[test]
    fn missing_rate_is_an_error() {
        let r = route(&[(1e6, LinkType::MeoMeo)]);
        let err = latency(&r, &LinkRateTable::empty(), RfScenario::S1, &DelayConstants::default());
        assert!(matches!(err, Err(MetricsError::MissingRate { link: LinkType::MeoMeo, .. })));
    }

    #[test]
    fn band_table() {
        assert_eq!(band(LinkType::GeoLeo, RfScenario::S2), Band::L);
        assert_eq!(band(LinkType::GeoGeo, RfScenario::S2), Band::L);
        assert_eq!(band(LinkType::MeoLeo, RfScenario::S2), Band::Ka);
        assert_eq!(band(LinkType::GsGeo, RfScenario::S3), Band::Fso);
        assert_eq!(band(LinkType::LeoLeo, RfScenario::S3), Band::Ka);
        let t = LinkRateTable::default();
        for l in LinkType::ALL {
            assert_eq!(t.rate(l, RfScenario::S1).unwrap(), 324e6);
            assert_eq!(t.rate(l, RfScenario::S4).unwrap(), 1.8e9);
        }
    }

    #[test]
    fn reliability_modes() {
        let t = ReliabilityTable::uniform(0.998);
        let one = route(&[(1.0, LinkType::LeoLeo)]);
        assert_relative_eq!(reliability(&one, &t, ReliabilityMode::Series).unwrap(), 0.998);
        assert_relative_eq!(reliability(&one, &t, ReliabilityMode::Literal).unwrap(), 0.998, max_relative = 1e-12);
        let three = route(&[(1.0, LinkType::LeoLeo); 3]);
        let t = ReliabilityTable::uniform(0.999);
        assert_relative_eq!(reliability(&three, &t, ReliabilityMode::Series).unwrap(), 0.997_002_999, max_relative = 1e-12);
        let two = route(&[(1.0, LinkType::LeoLeo); 2]);
        let t = ReliabilityTable::uniform(0.9);
        assert_relative_eq!(reliability(&two, &t, ReliabilityMode::Literal).unwrap(), 0.99, max_relative = 1e-12);
        assert!(reliability(&Route::empty(RouteLayer::Leo), &t, ReliabilityMode::Series).is_err());
    }

    #[test]
    fn default_phis_are_ordered() {
        assert!(ReliabilityTable::default().is_ordered());
        assert!(ReliabilityTable::uniform(0.999).is_ordered());
    }

    #[test]
    fn resilience_counts() {
        let ok = MissionOutcome::success(route(&[(1.0, LinkType::GsLeo)]));
        let bad = MissionOutcome::failure(FailureReason::NoSourceSat);
        assert_eq!(resilience(&[ok.clone(), ok.clone()]).unwrap(), 1.0);
        assert_eq!(resilience(std::slice::from_ref(&bad)).unwrap(), 0.0);
        assert_eq!(resilience(&[ok, bad.clone(), bad]).unwrap(), 1.0 / 3.0);
        assert_eq!(resilience(&[]), Err(MetricsError::NoOutcomes));
    }

    #[test]
    fn stats_single_and_pair() {
        let s: RunningStats = [4.0].into_iter().collect();
        assert_eq!((s.mean, s.min, s.max, s.stddev()), (4.0, 4.0, 4.0, 0.0));
        let s: RunningStats = [2.0, 6.0].into_iter().collect();
        assert_eq!(s.mean, 4.0);
        assert_eq!(s.stddev(), 2.0);
    }

    fn link() -> impl Strategy<Value = LinkType> {
        proptest::sample::select(LinkType::ALL.to_vec())
    }

    proptest! {
        #[test]
        fn merge_matches_sequential(xs in proptest::collection::vec(-1e3f64..1e3, 0..50), split in 0usize..50) {
            let split = split.min(xs.len());
            let all: RunningStats = xs.iter().copied().collect();
            let a: RunningStats = xs[..split].iter().copied().collect();
            let b: RunningStats = xs[split..].iter().copied().collect();
            let m = a.merge(&b);
            prop_assert_eq!(m.count, all.count);
            if !xs.is_empty() {
                let naive = xs.iter().sum::<f64>() / xs.len() as f64;
                prop_assert!((m.mean - naive).abs() < 1e-9);
                prop_assert!((m.stddev() - all.stddev()).abs() < 1e-7);
            }
        }

        #[test]
        fn latency_is_monotone(
            hops in proptest::collection::vec((1e3f64..5e7, link()), 1..10),
            which in 0usize..10,
            bump in 1.0f64..1e6,
            scenario in proptest::sample::select(RfScenario::ALL.to_vec()),
        ) {
            let rates = LinkRateTable::default();
            let consts = DelayConstants::default();
            let base_route = route(&hops);
            let base = latency(&base_route, &rates, scenario, &consts).unwrap();

            let mut longer = hops.clone();
            let i = which % hops.len();
            longer[i].0 += bump;
            prop_assert!(latency(&route(&longer), &rates, scenario, &consts).unwrap() > base);

            for c in [
                DelayConstants { packet_bits: consts.packet_bits * 2.0, ..consts },
                DelayConstants { queuing: consts.queuing * 2.0, ..consts },
                DelayConstants { processing: consts.processing * 2.0, ..consts },
            ] {
                prop_assert!(latency(&base_route, &rates, scenario, &c).unwrap() > base);
            }

            let faster = LinkRateTable::from_band_rates(648e6, 300e3, 3.6e9, 648e6);
            prop_assert!(latency(&base_route, &faster, scenario, &consts).unwrap() < base);
            let s1 = latency(&base_route, &rates, RfScenario::S1, &consts).unwrap();
            let s4 = latency(&base_route, &rates, RfScenario::S4, &consts).unwrap();
            prop_assert!(s4 <= s1);
        }

        #[test]
        fn reliability_bounds(phis in proptest::collection::vec(0.5f64..=1.0, 1..=7)) {
            // one distinct link class per hop so every hop can carry its own phi
            let classes = [
                LinkType::GsLeo, LinkType::LeoLeo, LinkType::MeoMeo, LinkType::GeoLeo,
                LinkType::MeoLeo, LinkType::GsMeo, LinkType::GsGeo,
            ];
            let table = ReliabilityTable {
                gs_leo: phis[0],
                leo_isl: *phis.get(1).unwrap_or(&1.0),
                ring_isl: *phis.get(2).unwrap_or(&1.0),
                geo_leo: *phis.get(3).unwrap_or(&1.0),
                meo_leo: *phis.get(4).unwrap_or(&1.0),
                gs_meo: *phis.get(5).unwrap_or(&1.0),
                gs_geo: *phis.get(6).unwrap_or(&1.0),
            };
            let hops: Vec<(f64, LinkType)> = classes[..phis.len()].iter().map(|&l| (1.0, l)).collect();
            let r = route(&hops);
            let series = reliability(&r, &table, ReliabilityMode::Series).unwrap();
            let literal = reliability(&r, &table, ReliabilityMode::Literal).unwrap();
            let min = phis.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = phis.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(series <= min + 1e-15);
            prop_assert!(literal >= max - 1e-15);
            prop_assert!((series - phis.iter().product::<f64>()).abs() < 1e-12);
            prop_assert!((literal - (1.0 - phis.iter().map(|p| 1.0 - p).product::<f64>())).abs() < 1e-12);
        }
    }

    fn record(target: usize, scheme: Scheme, metrics: Option<(usize, f64, f64, f64)>) -> MissionRecord {
        let outcome = match metrics {
            Some(_) => MissionOutcome::success(route(&[(1.0, LinkType::GsLeo)])),
            None => MissionOutcome::failure(FailureReason::NoSourceSat),
        };
        MissionRecord {
            target_id: target,
            sample_index: 0,
            sample_time: chrono::DateTime::<Utc>::UNIX_EPOCH,
            scheme,
            scenario: RfScenario::S1,
            outcome: Arc::new(outcome),
            hops: metrics.map(|m| m.0),
            path_m: metrics.map(|m| m.1),
            latency_s: metrics.map(|m| m.2),
            reliability: metrics.map(|m| m.3),
        }
    }

    #[test]
    fn aggregate_means() {
        assert_eq!(aggregate(&[]), Err(MetricsError::NoRecords));
        let one = aggregate(&[record(0, Scheme::Mln, Some((3, 10.0, 0.5, 0.99)))]).unwrap();
        let s = one.get(Scheme::Mln, RfScenario::S1).unwrap();
        assert_eq!((s.hops.mean, s.path_length.mean, s.latency.mean, s.reliability.mean), (3.0, 10.0, 0.5, 0.99));

        let recs = [
            record(0, Scheme::Mln, Some((2, 10.0, 0.25, 0.99))),
            record(4, Scheme::Mln, Some((4, 30.0, 0.75, 0.97))),
            record(4, Scheme::Mln, None),
            record(0, Scheme::GeoOnly, None),
        ];
        let agg = aggregate(&recs).unwrap();
        let s = agg.get(Scheme::Mln, RfScenario::S1).unwrap();
        assert_eq!((s.attempts, s.successes), (3, 2));
        assert_relative_eq!(s.resilience(), 2.0 / 3.0);
        assert_relative_eq!(s.hops.mean, 3.0);
        assert_relative_eq!(s.path_length.mean, 20.0);
        assert_relative_eq!(s.latency.mean, 0.5);
        assert_relative_eq!(s.reliability.mean, 0.98);
        let t4 = agg.per_target[&(Scheme::Mln, RfScenario::S1, 4)];
        assert_eq!((t4.attempts, t4.successes, t4.hops.mean), (2, 1, 4.0));
        assert_eq!(agg.get(Scheme::GeoOnly, RfScenario::S1).unwrap().hops.mean(), None);
    }

    proptest! {
        #[test]
        fn aggregate_matches_two_pass_mean(values in prop::collection::vec((1usize..12, 0.0..1e8f64, 0.0..1.0f64, 0.9..1.0f64), 1..200)) {
            let recs: Vec<MissionRecord> = values.iter().map(|&v| record(0, Scheme::Mln, Some(v))).collect();
            let s = aggregate(&recs).unwrap().overall[&(Scheme::Mln, RfScenario::S1)];
            let n = values.len() as f64;
            let mean = |f: fn(&(usize, f64, f64, f64)) -> f64| values.iter().map(f).sum::<f64>() / n;
            prop_assert!((s.hops.mean - mean(|v| v.0 as f64)).abs() < 1e-9);
            prop_assert!((s.path_length.mean - mean(|v| v.1)).abs() <= 1e-9 * mean(|v| v.1).max(1.0));
            prop_assert!((s.latency.mean - mean(|v| v.2)).abs() < 1e-12);
            prop_assert!((s.reliability.mean - mean(|v| v.3)).abs() < 1e-12);
        }
    }
}
