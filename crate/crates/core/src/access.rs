//! Visibility geometry between the ground station and satellites, and
//! between satellites.

use chrono::{DateTime, Duration, Utc};

use crate::error::GeometryError;
use crate::orbital::{geodetic_to_ecef, EcefPosition, GeodeticCoord, Propagator, EARTH_RADIUS_M};
use crate::topology::{Layer, Satellite, SatnetSnapshot};

/// Default clearance above the surface for inter-satellite links, meters.
pub const DEFAULT_GRAZING_MARGIN_M: f64 = 100_000.0;

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStation {
    pub name: String,
    pub site: GeodeticCoord,
    /// Elevation mask for LEO links (minElev1), degrees.
    pub min_elevation_ngso: f64,
    /// Elevation mask for MEO and GEO links (minElev2), degrees.
    pub min_elevation_geo_meo: f64,
}

impl GroundStation {
    pub fn new(
        name: impl Into<String>,
        site: GeodeticCoord,
        min_elevation_ngso: f64,
        min_elevation_geo_meo: f64,
    ) -> Result<Self, GeometryError> {
        for (field, v) in [("min_elevation_ngso", min_elevation_ngso), ("min_elevation_geo_meo", min_elevation_geo_meo)] {
            if !(0.0..90.0).contains(&v) {
                return Err(GeometryError::OutOfRange { field, value: v });
            }
        }
        Ok(Self { name: name.into(), site, min_elevation_ngso, min_elevation_geo_meo })
    }

    pub fn ecef(&self, t: DateTime<Utc>) -> EcefPosition {
        geodetic_to_ecef(&self.site, t)
    }

    /// Mask that applies to links with satellites of `layer`.
    pub fn min_elevation(&self, layer: Layer) -> f64 {
        match layer {
            Layer::Leo => self.min_elevation_ngso,
            Layer::Meo | Layer::Geo => self.min_elevation_geo_meo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessSample {
    pub time: DateTime<Utc>,
    pub visible: bool,
    pub elevation: f64,
    pub slant_range: f64,
}

/// Straight-line distance between two positions sampled at the same instant.
pub fn slant_range(a: &EcefPosition, b: &EcefPosition) -> Result<f64, GeometryError> {
    if a.time != b.time {
        return Err(GeometryError::TimestampMismatch(a.time.to_rfc3339(), b.time.to_rfc3339()));
    }
    Ok((a.vector() - b.vector()).norm())
}

/// Elevation of `sat` above the GS horizon, degrees.
pub fn elevation(gs: &GroundStation, sat: &EcefPosition) -> f64 {
    let site = gs.ecef(sat.time).vector();
    let look = sat.vector() - site;
    let zenith = site.normalize();
    let sin_el = (zenith.dot(&look) / look.norm()).clamp(-1.0, 1.0);
    sin_el.asin().to_degrees()
}

/// Elevation-mask test for a satellite of `layer`; the mask is inclusive.
pub fn is_visible_gs(gs: &GroundStation, sat: &EcefPosition, layer: Layer) -> bool {
    elevation(gs, sat) >= gs.min_elevation(layer)
}

/// Earth-limb test: the closest point of segment `ab` to the Earth's centre
/// must be at least `grazing_margin` above the surface (to 1 mm).
pub fn has_line_of_sight(a: &EcefPosition, b: &EcefPosition, grazing_margin: f64) -> bool {
    let (pa, pb) = (a.vector(), b.vector());
    let ab = pb - pa;
    let len2 = ab.norm_squared();
    let closest = if len2 == 0.0 {
        pa
    } else {
        let s = (-pa.dot(&ab) / len2).clamp(0.0, 1.0);
        pa + ab * s
    };
    closest.norm() >= EARTH_RADIUS_M + grazing_margin - 1e-3
}

fn nearest_by<F>(snap: &SatnetSnapshot<'_>, origin: &EcefPosition, mut admit: F) -> Option<usize>
where
    F: FnMut(&EcefPosition) -> bool,
{
    let o = origin.vector();
    snap.available()
        .filter(|&s| admit(snap.position(s)))
        .map(|s| ((snap.position(s).vector() - o).norm(), snap.satellite(s).id.ordinal, s))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, _, s)| s)
}

/// Closest satellite of `snap` that clears the GS mask for its layer;
/// exact range ties go to the lower ordinal.
pub fn nearest_sat_to_gs(gs: &GroundStation, snap: &SatnetSnapshot<'_>) -> Option<usize> {
    let layer = snap.layer();
    let site = gs.ecef(snap.time());
    nearest_by(snap, &site, |p| is_visible_gs(gs, p, layer))
}

/// Closest satellite of `snap` with line of sight to `target`.
pub fn nearest_sat_to_target(target: &EcefPosition, snap: &SatnetSnapshot<'_>, grazing_margin: f64) -> Option<usize> {
    nearest_by(snap, target, |p| has_line_of_sight(target, p, grazing_margin))
}

/// One visibility sample.
pub fn sample_access(gs: &GroundStation, sat: &Satellite, t: DateTime<Utc>, propagator: &dyn Propagator) -> AccessSample {
    let pos = propagator.propagate(&sat.elements, t).position;
    let el = elevation(gs, &pos);
    AccessSample {
        time: t,
        visible: el >= gs.min_elevation(sat.id.layer),
        elevation: el,
        slant_range: (pos.vector() - gs.ecef(t).vector()).norm(),
    }
}

/// Fraction of instants `start, start + step, ...` before `end` at which
/// the satellite clears the GS mask.
pub fn access_fraction(
    gs: &GroundStation,
    sat: &Satellite,
    window: (DateTime<Utc>, DateTime<Utc>),
    step: f64,
    propagator: &dyn Propagator,
) -> Result<f64, GeometryError> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(GeometryError::InvalidStep(step));
    }
    let (start, end) = window;
    if end <= start {
        return Err(GeometryError::EmptyWindow);
    }
    let step_ns = (step * 1e9).round() as i64;
    if step_ns == 0 {
        return Err(GeometryError::InvalidStep(step));
    }
    let (mut total, mut visible) = (0usize, 0usize);
    let mut t = start;
    while t < end {
        total += 1;
        visible += usize::from(sample_access(gs, sat, t, propagator).visible);
        t += Duration::nanoseconds(step_ns);
    }
    Ok(visible as f64 / total as f64)
}
