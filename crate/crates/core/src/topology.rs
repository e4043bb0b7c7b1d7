//! Satnet layers, per-layer connectivity and multi-hop routes.
//!
//! LEO uses a +grid: two in-plane neighbours plus the same-index satellites
//! of the adjacent planes, with no links across the seam between the last
//! and first plane. MEO and GEO rings only link ring-adjacent satellites.

use std::collections::BTreeSet;
use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::access::{has_line_of_sight, is_visible_gs, GroundStation};
use crate::error::ConstellationError;
use crate::orbital::{generate_constellation, ConstellationSpec, EcefPosition, KeplerElements, Propagator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    Leo,
    Meo,
    Geo,
}

impl Layer {
    pub const ALL: [Layer; 3] = [Layer::Leo, Layer::Meo, Layer::Geo];

    pub fn as_str(self) -> &'static str {
        match self {
            Layer::Leo => "LEO",
            Layer::Meo => "MEO",
            Layer::Geo => "GEO",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SatId {
    pub layer: Layer,
    pub plane: usize,
    pub index: usize,
    /// Unique within a scenario.
    pub ordinal: usize,
}

impl fmt::Display for SatId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.layer, self.plane, self.index)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Satellite {
    pub id: SatId,
    pub elements: KeplerElements,
}

/// One constellation acting as a network layer.
///
/// Satellites are stored plane-major, so the satellite at `(plane, index)`
/// sits at slot `plane * sats_per_plane + index`.
#[derive(Debug, Clone)]
pub struct Satnet {
    layer: Layer,
    plane_count: usize,
    sats_per_plane: usize,
    satellites: Vec<Satellite>,
    outages: BTreeSet<usize>,
}

impl Satnet {
    pub fn new(
        layer: Layer,
        plane_count: usize,
        sats_per_plane: usize,
        satellites: Vec<Satellite>,
    ) -> Result<Self, ConstellationError> {
        if plane_count == 0 || sats_per_plane == 0 {
            return Err(ConstellationError::Empty);
        }
        if satellites.len() != plane_count * sats_per_plane {
            return Err(ConstellationError::Invalid(format!(
                "{layer}: {} satellites for a {plane_count}x{sats_per_plane} layout",
                satellites.len()
            )));
        }
        for (slot, sat) in satellites.iter().enumerate() {
            let want = (slot / sats_per_plane, slot % sats_per_plane);
            if sat.id.layer != layer || (sat.id.plane, sat.id.index) != want {
                return Err(ConstellationError::Invalid(format!(
                    "{layer}: satellite {} stored at slot {slot}",
                    sat.id
                )));
            }
        }
        Ok(Self { layer, plane_count, sats_per_plane, satellites, outages: BTreeSet::new() })
    }

    /// Generates the shell and numbers it from `first_ordinal`.
    pub fn from_spec(spec: &ConstellationSpec, first_ordinal: usize) -> Result<Self, ConstellationError> {
        let mut sats = generate_constellation(spec)?;
        for s in &mut sats {
            s.id.ordinal += first_ordinal;
        }
        Self::new(spec.layer, spec.plane_count, spec.sats_per_plane, sats)
    }

    pub fn layer(&self) -> Layer {
        self.layer
    }
    pub fn plane_count(&self) -> usize {
        self.plane_count
    }
    pub fn sats_per_plane(&self) -> usize {
        self.sats_per_plane
    }
    pub fn satellites(&self) -> &[Satellite] {
        &self.satellites
    }
    pub fn len(&self) -> usize {
        self.satellites.len()
    }
    pub fn is_empty(&self) -> bool {
        self.satellites.is_empty()
    }

    pub fn slot(&self, plane: usize, index: usize) -> usize {
        plane * self.sats_per_plane + index
    }

    pub fn slot_of(&self, id: &SatId) -> Option<usize> {
        (id.layer == self.layer && id.plane < self.plane_count && id.index < self.sats_per_plane)
            .then(|| self.slot(id.plane, id.index))
    }

    /// Marks a satellite as failed. Failed satellites are never chosen as
    /// source or destination, and walks through them are blocked.
    pub fn with_outage(mut self, id: &SatId) -> Self {
        if let Some(slot) = self.slot_of(id) {
            self.outages.insert(slot);
        }
        self
    }

    pub fn is_up(&self, slot: usize) -> bool {
        !self.outages.contains(&slot)
    }

    pub fn snapshot(&self, propagator: &dyn Propagator, time: DateTime<Utc>) -> SatnetSnapshot<'_> {
        let mut stale = 0;
        let positions = self
            .satellites
            .iter()
            .map(|s| {
                let p = propagator.propagate(&s.elements, time);
                stale += usize::from(p.stale);
                p.position
            })
            .collect();
        SatnetSnapshot { net: self, time, positions, stale }
    }

    /// Up to four +grid neighbours: in-plane `index ± 1` (wrapping) and
    /// same-index satellites in planes `plane ± 1` (not wrapping).
    pub fn neighbors(&self, id: &SatId) -> Vec<SatId> {
        let Some(_) = self.slot_of(id) else { return Vec::new() };
        let spp = self.sats_per_plane;
        let mut out: Vec<SatId> = Vec::with_capacity(4);
        let mut push = |plane: usize, index: usize| {
            let n = self.satellites[self.slot(plane, index)].id;
            if n != *id && !out.contains(&n) {
                out.push(n);
            }
        };
        push(id.plane, (id.index + 1) % spp);
        push(id.plane, (id.index + spp - 1) % spp);
        if id.plane > 0 {
            push(id.plane - 1, id.index);
        }
        if id.plane + 1 < self.plane_count {
            push(id.plane + 1, id.index);
        }
        out
    }

    /// Deterministic minimal walk: cross planes at constant index, then go
    /// round the destination plane the shorter way (forward on ties).
    /// Returned slots include both endpoints.
    pub fn grid_walk(&self, from: usize, to: usize) -> Vec<usize> {
        let spp = self.sats_per_plane;
        let (mut plane, index) = (from / spp, from % spp);
        let (dst_plane, dst_index) = (to / spp, to % spp);
        let mut walk = vec![from];
        while plane != dst_plane {
            plane = if dst_plane > plane { plane + 1 } else { plane - 1 };
            walk.push(self.slot(plane, index));
        }
        let forward = (dst_index + spp - index) % spp;
        let backward = spp - forward;
        let mut i = index;
        if forward <= backward {
            for _ in 0..forward {
                i = (i + 1) % spp;
                walk.push(self.slot(plane, i));
            }
        } else {
            for _ in 0..backward {
                i = (i + spp - 1) % spp;
                walk.push(self.slot(plane, i));
            }
        }
        walk
    }
}

/// Positions of every satellite of a satnet at one instant.
#[derive(Debug, Clone)]
pub struct SatnetSnapshot<'a> {
    net: &'a Satnet,
    time: DateTime<Utc>,
    positions: Vec<EcefPosition>,
    stale: usize,
}

impl<'a> SatnetSnapshot<'a> {
    pub fn net(&self) -> &'a Satnet {
        self.net
    }
    pub fn time(&self) -> DateTime<Utc> {
        self.time
    }
    pub fn layer(&self) -> Layer {
        self.net.layer
    }
    pub fn len(&self) -> usize {
        self.positions.len()
    }
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
    pub fn satellite(&self, slot: usize) -> &'a Satellite {
        &self.net.satellites[slot]
    }
    pub fn position(&self, slot: usize) -> &EcefPosition {
        &self.positions[slot]
    }
    /// Number of satellites whose elements were outside their validity window.
    pub fn stale_count(&self) -> usize {
        self.stale
    }
    /// Slots of satellites that are not in outage.
    pub fn available(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&s| self.net.is_up(s))
    }

    fn node(&self, slot: usize) -> Node {
        Node::Sat(self.satellite(slot).id)
    }

    fn distance(&self, a: usize, b: usize) -> f64 {
        (self.positions[a].vector() - self.positions[b].vector()).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Ground,
    Sat(SatId),
}

impl Node {
    fn layer(&self) -> Option<Layer> {
        match self {
            Node::Ground => None,
            Node::Sat(id) => Some(id.layer),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Ground => f.write_str("GS"),
            Node::Sat(id) => id.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LinkType {
    GsLeo,
    GsMeo,
    GsGeo,
    LeoLeo,
    MeoMeo,
    MeoLeo,
    GeoGeo,
    GeoLeo,
}

impl LinkType {
    pub const ALL: [LinkType; 8] = [
        LinkType::GsLeo,
        LinkType::GsMeo,
        LinkType::GsGeo,
        LinkType::LeoLeo,
        LinkType::MeoMeo,
        LinkType::MeoLeo,
        LinkType::GeoGeo,
        LinkType::GeoLeo,
    ];

    /// Link type for a hop between the given endpoints, or `None` when the
    /// hop is not admissible (anything towards the ground, LEO/MEO to GEO,
    /// LEO to MEO, GEO to MEO).
    pub fn between(from: Option<Layer>, to: Option<Layer>) -> Option<LinkType> {
        use Layer::*;
        Some(match (from, to) {
            (None, Some(Leo)) => LinkType::GsLeo,
            (None, Some(Meo)) => LinkType::GsMeo,
            (None, Some(Geo)) => LinkType::GsGeo,
            (Some(Leo), Some(Leo)) => LinkType::LeoLeo,
            (Some(Meo), Some(Meo)) => LinkType::MeoMeo,
            (Some(Meo), Some(Leo)) => LinkType::MeoLeo,
            (Some(Geo), Some(Geo)) => LinkType::GeoGeo,
            (Some(Geo), Some(Leo)) => LinkType::GeoLeo,
            _ => return None,
        })
    }

    pub fn is_ground_link(self) -> bool {
        matches!(self, LinkType::GsLeo | LinkType::GsMeo | LinkType::GsGeo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteHop {
    pub from: Node,
    pub to: Node,
    /// Meters.
    pub length: f64,
    pub link_type: LinkType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RouteLayer {
    Leo,
    Meo,
    Geo,
    Direct,
}

impl From<Layer> for RouteLayer {
    fn from(l: Layer) -> Self {
        match l {
            Layer::Leo => RouteLayer::Leo,
            Layer::Meo => RouteLayer::Meo,
            Layer::Geo => RouteLayer::Geo,
        }
    }
}

/// Path lengths by segment class, meters.
///
/// `d[0..3]` are the ground uplinks to a LEO, MEO and GEO source;
/// `d[3]` MEO ring, `d[4]` MEO to target, `d[5]` GEO ring, `d[6]` GEO to
/// target, `d[7]` LEO grid.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PathSegments {
    pub d: [f64; 8],
}

impl PathSegments {
    fn class(link: LinkType) -> usize {
        match link {
            LinkType::GsLeo => 0,
            LinkType::GsMeo => 1,
            LinkType::GsGeo => 2,
            LinkType::MeoMeo => 3,
            LinkType::MeoLeo => 4,
            LinkType::GeoGeo => 5,
            LinkType::GeoLeo => 6,
            LinkType::LeoLeo => 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    pub hops: Vec<RouteHop>,
    pub layer_used: RouteLayer,
}

impl Route {
    pub fn empty(layer_used: RouteLayer) -> Self {
        Self { hops: Vec::new(), layer_used }
    }

    /// Hop count.
    pub fn n_h(&self) -> usize {
        self.hops.len()
    }

    /// Sum of hop lengths, meters.
    pub fn total_length(&self) -> f64 {
        self.hops.iter().map(|h| h.length).sum()
    }

    pub fn segments(&self) -> PathSegments {
        let mut seg = PathSegments::default();
        for h in &self.hops {
            seg.d[PathSegments::class(h.link_type)] += h.length;
        }
        seg
    }

    /// Nodes visited, in order.
    pub fn nodes(&self) -> Vec<Node> {
        let mut nodes: Vec<Node> = self.hops.first().map(|h| h.from).into_iter().collect();
        nodes.extend(self.hops.iter().map(|h| h.to));
        nodes
    }

    /// Prepends `hop` and keeps the route's layer.
    pub fn prepend(mut self, hop: RouteHop) -> Self {
        self.hops.insert(0, hop);
        self
    }

    /// Checks chaining, acyclicity, link admissibility and positive lengths.
    pub fn check(&self) -> Result<(), String> {
        for w in self.hops.windows(2) {
            if w[0].to != w[1].from {
                return Err(format!("hop {} -> {} does not chain into {}", w[0].from, w[0].to, w[1].from));
            }
        }
        let nodes = self.nodes();
        for (i, n) in nodes.iter().enumerate() {
            if nodes[..i].contains(n) {
                return Err(format!("node {n} repeats"));
            }
        }
        for h in &self.hops {
            if LinkType::between(h.from.layer(), h.to.layer()) != Some(h.link_type) {
                return Err(format!("inadmissible hop {} -> {} as {:?}", h.from, h.to, h.link_type));
            }
            if !(h.length > 0.0) {
                return Err(format!("hop {} -> {} has length {}", h.from, h.to, h.length));
            }
        }
        Ok(())
    }
}

/// Why a route could not be built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteError {
    /// No satellite of the relay layer can see the target.
    NoTargetLos,
    /// The walk crosses a satellite in outage.
    Blocked,
}

fn sat_hop(snap: &SatnetSnapshot<'_>, a: usize, b: usize, link_type: LinkType) -> RouteHop {
    RouteHop { from: snap.node(a), to: snap.node(b), length: snap.distance(a, b), link_type }
}

fn walk_hops(snap: &SatnetSnapshot<'_>, from: usize, to: usize, link_type: LinkType) -> Result<Vec<RouteHop>, RouteError> {
    let walk = snap.net.grid_walk(from, to);
    if walk.iter().any(|&s| !snap.net.is_up(s)) {
        return Err(RouteError::Blocked);
    }
    Ok(walk.windows(2).map(|w| sat_hop(snap, w[0], w[1], link_type)).collect())
}

/// The +grid neighbours of a LEO satellite.
pub fn leo_neighbors(sat: &SatId, leo: &Satnet) -> Vec<SatId> {
    debug_assert_eq!(sat.layer, Layer::Leo);
    leo.neighbors(sat)
}

/// Grid route between two LEO slots at the snapshot instant. `src == target`
/// gives an empty route. Fails only when the walk crosses an outage.
pub fn route_within_leo(src: usize, target: usize, leo: &SatnetSnapshot<'_>) -> Result<Route, RouteError> {
    Ok(Route { hops: walk_hops(leo, src, target, LinkType::LeoLeo)?, layer_used: RouteLayer::Leo })
}

fn route_via_ring(
    src: usize,
    target: usize,
    ring: &SatnetSnapshot<'_>,
    leo: &SatnetSnapshot<'_>,
    grazing_margin: f64,
) -> Result<Route, RouteError> {
    let target_pos = leo.position(target);
    let dest = crate::access::nearest_sat_to_target(target_pos, ring, grazing_margin)
        .ok_or(RouteError::NoTargetLos)?;
    let (isl, down) = match ring.layer() {
        Layer::Meo => (LinkType::MeoMeo, LinkType::MeoLeo),
        Layer::Geo => (LinkType::GeoGeo, LinkType::GeoLeo),
        Layer::Leo => unreachable!("ring relay from the LEO layer"),
    };
    let mut hops = walk_hops(ring, src, dest, isl)?;
    hops.push(RouteHop {
        from: ring.node(dest),
        to: leo.node(target),
        length: (ring.position(dest).vector() - target_pos.vector()).norm(),
        link_type: down,
    });
    Ok(Route { hops, layer_used: ring.layer().into() })
}

/// Ring walk from a MEO source to the MEO satellite nearest the target,
/// then down to the target.
pub fn route_via_meo(
    src_meo: usize,
    target: usize,
    meo: &SatnetSnapshot<'_>,
    leo: &SatnetSnapshot<'_>,
    grazing_margin: f64,
) -> Result<Route, RouteError> {
    debug_assert_eq!(meo.layer(), Layer::Meo);
    route_via_ring(src_meo, target, meo, leo, grazing_margin)
}

/// As [`route_via_meo`], over the GEO belt.
pub fn route_via_geo(
    src_geo: usize,
    target: usize,
    geo: &SatnetSnapshot<'_>,
    leo: &SatnetSnapshot<'_>,
    grazing_margin: f64,
) -> Result<Route, RouteError> {
    debug_assert_eq!(geo.layer(), Layer::Geo);
    route_via_ring(src_geo, target, geo, leo, grazing_margin)
}

/// Uplink hop from the ground station to a satellite of `snap`.
pub fn uplink(gs: &GroundStation, snap: &SatnetSnapshot<'_>, slot: usize) -> RouteHop {
    let gs_pos = gs.ecef(snap.time());
    let link_type = LinkType::between(None, Some(snap.layer())).expect("ground uplinks are admissible");
    RouteHop {
        from: Node::Ground,
        to: snap.node(slot),
        length: (snap.position(slot).vector() - gs_pos.vector()).norm(),
        link_type,
    }
}

/// Single ground-to-target hop when the target clears the LEO elevation mask.
pub fn direct_route(gs: &GroundStation, target: usize, leo: &SatnetSnapshot<'_>) -> Option<Route> {
    is_visible_gs(gs, leo.position(target), Layer::Leo)
        .then(|| Route { hops: vec![uplink(gs, leo, target)], layer_used: RouteLayer::Direct })
}

/// Whether every hop of `route` between satellites clears the Earth limb.
pub fn route_has_los(route: &Route, positions: impl Fn(&Node) -> Option<EcefPosition>, margin: f64) -> bool {
    route.hops.iter().filter(|h| !h.link_type.is_ground_link()).all(|h| {
        match (positions(&h.from), positions(&h.to)) {
            (Some(a), Some(b)) => has_line_of_sight(&a, &b, margin),
            _ => false,
        }
    })
}
