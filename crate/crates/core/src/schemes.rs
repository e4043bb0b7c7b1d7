//! Telecommand delivery schemes.
//!
//! [`mln_prepare`] walks the layers LEO, MEO, GEO in order: the first layer
//! with a source satellite over the ground station whose relay succeeds
//! delivers the packet. A layer without a source, or whose transmission
//! fails, hands over to the next one; no layer is revisited.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::access::{nearest_sat_to_gs, GroundStation};
use crate::metrics::ReliabilityTable;
use crate::topology::{
    direct_route, route_via_geo, route_via_meo, route_within_leo, uplink, Layer, Route, RouteError, RouteLayer,
    SatnetSnapshot,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Mln,
    Traditional,
    GeoOnly,
    LeoMln,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Mln, Scheme::Traditional, Scheme::GeoOnly, Scheme::LeoMln];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Mln => "mln",
            Scheme::Traditional => "traditional",
            Scheme::GeoOnly => "geo_only",
            Scheme::LeoMln => "leo_mln",
        }
    }

    fn stream_tag(self) -> u64 {
        match self {
            Scheme::Mln => 0,
            Scheme::Traditional => 1,
            Scheme::GeoOnly => 2,
            Scheme::LeoMln => 3,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "mln" => Ok(Scheme::Mln),
            "traditional" => Ok(Scheme::Traditional),
            "geo_only" => Ok(Scheme::GeoOnly),
            "leo_mln" => Ok(Scheme::LeoMln),
            other => Err(format!("unknown scheme {other:?} (expected mln|traditional|geo_only|leo_mln)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub stochastic_failures: bool,
    pub rng_seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FailureReason {
    NoSourceSat,
    NoTargetLos,
    LinkFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OutcomeLayer {
    Leo,
    Meo,
    Geo,
    Direct,
    None,
}

impl From<RouteLayer> for OutcomeLayer {
    fn from(l: RouteLayer) -> Self {
        match l {
            RouteLayer::Leo => OutcomeLayer::Leo,
            RouteLayer::Meo => OutcomeLayer::Meo,
            RouteLayer::Geo => OutcomeLayer::Geo,
            RouteLayer::Direct => OutcomeLayer::Direct,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MissionOutcome {
    pub success: bool,
    pub route: Option<Route>,
    pub layer_used: OutcomeLayer,
    pub failure_reason: Option<FailureReason>,
}

impl MissionOutcome {
    pub fn success(route: Route) -> Self {
        Self { success: true, layer_used: route.layer_used.into(), route: Some(route), failure_reason: None }
    }

    pub fn failure(reason: FailureReason) -> Self {
        Self { success: false, route: None, layer_used: OutcomeLayer::None, failure_reason: Some(reason) }
    }
}

/// Positions of every layer at one sample time. MEO and GEO may be absent.
#[derive(Debug, Clone)]
pub struct LayerSnapshots<'a> {
    pub leo: SatnetSnapshot<'a>,
    pub meo: Option<SatnetSnapshot<'a>>,
    pub geo: Option<SatnetSnapshot<'a>>,
}

impl<'a> LayerSnapshots<'a> {
    pub fn get(&self, layer: Layer) -> Option<&SatnetSnapshot<'a>> {
        match layer {
            Layer::Leo => Some(&self.leo),
            Layer::Meo => self.meo.as_ref(),
            Layer::Geo => self.geo.as_ref(),
        }
    }
}

/// Per-hop Bernoulli link failures drawn from the reliability table.
pub struct LinkFailures<'r> {
    pub phis: ReliabilityTable,
    pub rng: &'r mut dyn RngCore,
}

/// Fails each hop independently with probability `1 - phi(link)`; any
/// failed hop turns the outcome into a link failure.
pub fn apply_stochastic_failures(outcome: MissionOutcome, phis: &ReliabilityTable, rng: &mut dyn RngCore) -> MissionOutcome {
    let Some(route) = &outcome.route else { return outcome };
    for hop in &route.hops {
        let phi = phis.phi(hop.link_type).clamp(0.0, 1.0);
        if !rng.gen_bool(phi) {
            return MissionOutcome::failure(FailureReason::LinkFailure);
        }
    }
    outcome
}

/// Independent stream per (seed, target, sample, scheme), so results do not
/// depend on evaluation order.
pub fn mission_rng(seed: u64, target_ordinal: usize, sample_index: usize, scheme: Scheme) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stream = ((sample_index as u64) << 24) | ((target_ordinal as u64 & 0xffff) << 8) | scheme.stream_tag();
    rng.set_stream(stream);
    rng
}

fn transmit(route: Route, failures: &mut Option<LinkFailures<'_>>) -> MissionOutcome {
    let out = MissionOutcome::success(route);
    match failures {
        Some(f) => apply_stochastic_failures(out, &f.phis, &mut *f.rng),
        None => out,
    }
}

fn relay_reason(e: RouteError) -> FailureReason {
    match e {
        RouteError::NoTargetLos => FailureReason::NoTargetLos,
        RouteError::Blocked => FailureReason::LinkFailure,
    }
}

/// Layered fallback over `order`. The failure reason of the last layer
/// attempted is reported when every layer fails.
fn layered(
    gs: &GroundStation,
    target: usize,
    layers: &LayerSnapshots<'_>,
    order: &[Layer],
    grazing_margin: f64,
    mut failures: Option<LinkFailures<'_>>,
) -> MissionOutcome {
    let mut reason = FailureReason::NoSourceSat;
    for &layer in order {
        let Some(snap) = layers.get(layer) else {
            reason = FailureReason::NoSourceSat;
            continue;
        };
        let Some(src) = nearest_sat_to_gs(gs, snap) else {
            reason = FailureReason::NoSourceSat;
            continue;
        };
        let relay = match layer {
            Layer::Leo => {
                if src == target {
                    // the source is the target itself: delivered, regardless of link draws
                    return MissionOutcome::success(Route::empty(RouteLayer::Leo).prepend(uplink(gs, snap, src)));
                }
                route_within_leo(src, target, snap)
            }
            Layer::Meo => route_via_meo(src, target, snap, &layers.leo, grazing_margin),
            Layer::Geo => route_via_geo(src, target, snap, &layers.leo, grazing_margin),
        };
        match relay {
            Ok(route) => {
                let out = transmit(route.prepend(uplink(gs, snap, src)), &mut failures);
                if out.success {
                    return out;
                }
                reason = FailureReason::LinkFailure;
            }
            Err(e) => reason = relay_reason(e),
        }
    }
    MissionOutcome::failure(reason)
}

/// Multi-layer scheme: LEO, then MEO, then GEO.
pub fn mln_prepare(
    gs: &GroundStation,
    target: usize,
    layers: &LayerSnapshots<'_>,
    grazing_margin: f64,
    failures: Option<LinkFailures<'_>>,
) -> MissionOutcome {
    layered(gs, target, layers, &Layer::ALL, grazing_margin, failures)
}

/// Multi-layer scheme restricted to the LEO layer.
pub fn leo_mln(gs: &GroundStation, target: usize, layers: &LayerSnapshots<'_>, failures: Option<LinkFailures<'_>>) -> MissionOutcome {
    layered(gs, target, layers, &[Layer::Leo], 0.0, failures)
}

/// Relay every packet through the GEO belt.
pub fn geo_only(
    gs: &GroundStation,
    target: usize,
    layers: &LayerSnapshots<'_>,
    grazing_margin: f64,
    failures: Option<LinkFailures<'_>>,
) -> MissionOutcome {
    layered(gs, target, layers, &[Layer::Geo], grazing_margin, failures)
}

/// Send only while the target itself is above the LEO elevation mask.
pub fn traditional(gs: &GroundStation, target: usize, leo: &SatnetSnapshot<'_>, mut failures: Option<LinkFailures<'_>>) -> MissionOutcome {
    match direct_route(gs, target, leo) {
        Some(route) => transmit(route, &mut failures),
        None => MissionOutcome::failure(FailureReason::NoSourceSat),
    }
}

pub fn evaluate(
    scheme: Scheme,
    gs: &GroundStation,
    target: usize,
    layers: &LayerSnapshots<'_>,
    grazing_margin: f64,
    failures: Option<LinkFailures<'_>>,
) -> MissionOutcome {
    match scheme {
        Scheme::Mln => mln_prepare(gs, target, layers, grazing_margin, failures),
        Scheme::Traditional => traditional(gs, target, &layers.leo, failures),
        Scheme::GeoOnly => geo_only(gs, target, layers, grazing_margin, failures),
        Scheme::LeoMln => leo_mln(gs, target, layers, failures),
    }
}
