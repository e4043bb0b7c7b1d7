//! Scenario documents.
//!
//! A scenario is a JSON object whose keys follow the parameter symbols of
//! the evaluation setup (`minElev1`, `T_sample`, `phi_1`, ...). Omitted keys
//! take the default mission values; `constellations.meo` or
//! `constellations.geo` set to `null` removes that layer.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Duration, NaiveDateTime, TimeZone, Utc};
use serde_json::{Map, Value};

use crate::access::{GroundStation, DEFAULT_GRAZING_MARGIN_M};
use crate::error::{ConfigError, GeometryError};
use crate::metrics::{DelayConstants, LinkRateTable, ReliabilityMode, ReliabilityTable, RfScenario, SPEED_OF_LIGHT};
use crate::orbital::{parse_tle, ConstellationSpec, GeodeticCoord, GEO_ALTITUDE_M};
use crate::schemes::{Scheme, SchemeConfig};
use crate::topology::{Layer, SatId, Satellite, Satnet};

/// JSON schema of the scenario document.
pub const SCENARIO_SCHEMA: &str = include_str!("../../schema/scenario.schema.json");

const TOP_KEYS: &[&str] = &[
    "$schema",
    "T_start",
    "T_end",
    "T_sample",
    "minElev1",
    "minElev2",
    "M",
    "k",
    "m",
    "r_k",
    "r_l",
    "r_o_gl",
    "r_r_gl",
    "phi_1",
    "phi_2",
    "phi_3",
    "phi_4",
    "phi_gs_leo",
    "phi_gs_meo",
    "phi_gs_geo",
    "gs",
    "constellations",
    "schemes",
    "scenarios",
    "seed",
    "stochastic_failures",
    "reliability_mode",
    "grazing_margin_m",
];
const GS_KEYS: &[&str] = &["name", "lat", "lng", "alt_m"];
const LAYER_KEYS: &[&str] = &["leo", "meo", "geo"];
const SHELL_KEYS: &[&str] = &[
    "planes",
    "sats_per_plane",
    "altitude_km",
    "inclination",
    "raan_spread",
    "raan_offset",
    "phasing",
    "anchor_lon",
    "tle_file",
];

pub const DEFAULT_T_START: &str = "2022-08-14 01:00:00";
pub const DEFAULT_T_END: &str = "2022-08-15 01:00:00";

#[derive(Debug, Clone)]
pub struct Scenario {
    pub gs: GroundStation,
    pub leo: Satnet,
    pub meo: Option<Satnet>,
    pub geo: Option<Satnet>,
    pub t_start: DateTime<Utc>,
    pub t_end: DateTime<Utc>,
    /// Seconds between samples.
    pub t_sample: f64,
    pub delay: DelayConstants,
    pub rates: LinkRateTable,
    pub phis: ReliabilityTable,
    pub reliability_mode: ReliabilityMode,
    pub schemes: Vec<Scheme>,
    pub scenarios: Vec<RfScenario>,
    pub seed: u64,
    pub stochastic_failures: bool,
    pub grazing_margin: f64,
}

impl Scenario {
    /// The default mission: an empty document.
    pub fn default_mission() -> Self {
        load_scenario("{}", None).expect("defaults are valid")
    }

    pub fn sample_times(&self) -> Vec<DateTime<Utc>> {
        sample_times(self.t_start, self.t_end, self.t_sample)
    }

    pub fn scheme_configs(&self) -> Vec<SchemeConfig> {
        self.schemes
            .iter()
            .map(|&scheme| SchemeConfig { scheme, stochastic_failures: self.stochastic_failures, rng_seed: self.seed })
            .collect()
    }

    pub fn layers(&self) -> impl Iterator<Item = &Satnet> {
        std::iter::once(&self.leo).chain(self.meo.as_ref()).chain(self.geo.as_ref())
    }

    /// Re-checks the invariants enforced at load time, for scenarios
    /// assembled or edited in code.
    pub fn validate(&self) -> Result<(), ConfigError> {
        check_window(self.t_start, self.t_end, self.t_sample)?;
        check_reliability(&self.phis)?;
        if self.schemes.is_empty() {
            return Err(ConfigError::invalid("schemes", "at least one scheme is required"));
        }
        if self.scenarios.is_empty() {
            return Err(ConfigError::invalid("scenarios", "at least one scenario is required"));
        }
        for (path, v) in [
            ("M", self.delay.packet_bits),
            ("k", self.delay.processing),
            ("m", self.delay.queuing),
            ("c", self.delay.light_speed),
        ] {
            positive(path, v)?;
        }
        if self.grazing_margin < 0.0 || !self.grazing_margin.is_finite() {
            return Err(ConfigError::invalid("grazing_margin_m", "must be finite and non-negative"));
        }
        Ok(())
    }
}

/// Instants `start + n * step` strictly before `end`.
pub fn sample_times(start: DateTime<Utc>, end: DateTime<Utc>, step: f64) -> Vec<DateTime<Utc>> {
    let step_ns = (step * 1e9).round() as i64;
    if step_ns <= 0 {
        return Vec::new();
    }
    (0..)
        .map(|n: i64| start + Duration::nanoseconds(n * step_ns))
        .take_while(|t| *t < end)
        .collect()
}

/// Accepts `YYYY-MM-DD HH:MM:SS` (read as UTC) or RFC 3339.
pub fn parse_timestamp(text: &str) -> Option<DateTime<Utc>> {
    let text = text.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(text) {
        return Some(t.with_timezone(&Utc));
    }
    ["%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M:%S%.f"]
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(text, f).ok())
        .map(|n| Utc.from_utc_datetime(&n))
}

pub fn load_scenario_file(path: &Path) -> Result<Scenario, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    load_scenario(&text, path.parent())
}

/// Parses and validates a scenario document. Relative `tle_file` paths are
/// resolved against `base_dir`.
pub fn load_scenario(text: &str, base_dir: Option<&Path>) -> Result<Scenario, ConfigError> {
    let doc: Value = if text.trim().is_empty() {
        Value::Object(Map::new())
    } else {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?
    };
    let Value::Object(root) = doc else {
        return Err(ConfigError::Parse("top level must be an object".to_string()));
    };
    check_unknown_keys(&root)?;

    let t_start = timestamp(&root, "T_start", DEFAULT_T_START)?;
    let t_end = timestamp(&root, "T_end", DEFAULT_T_END)?;
    let t_sample = number(&root, "", "T_sample")?.unwrap_or(3600.0);
    check_window(t_start, t_end, t_sample)?;

    let gs_obj = object(&root, "", "gs")?;
    let gs_num = |key: &str, default: f64| -> Result<f64, ConfigError> {
        Ok(match gs_obj {
            Some(o) => number(o, "gs", key)?.unwrap_or(default),
            None => default,
        })
    };
    let lat = gs_num("lat", 51.0447)?;
    let lng = gs_num("lng", -114.0719)?;
    let alt = gs_num("alt_m", 0.0)?;
    let name = match gs_obj {
        Some(o) => string(o, "gs", "name")?.unwrap_or("Calgary").to_string(),
        None => "Calgary".to_string(),
    };
    let site = GeodeticCoord::new(lat, lng, alt).map_err(|e| ConfigError::invalid(field_path(&e), e.to_string()))?;
    let min1 = number(&root, "", "minElev1")?.unwrap_or(25.0);
    let min2 = number(&root, "", "minElev2")?.unwrap_or(10.0);
    let gs = GroundStation::new(name, site, min1, min2).map_err(|e| ConfigError::invalid(field_path(&e), e.to_string()))?;

    let packet_bytes = number(&root, "", "M")?.unwrap_or(1024.0);
    let delay = DelayConstants {
        packet_bits: positive("M", packet_bytes)? * 8.0,
        light_speed: SPEED_OF_LIGHT,
        processing: positive("k", number(&root, "", "k")?.unwrap_or(100e-6))?,
        queuing: positive("m", number(&root, "", "m")?.unwrap_or(100e-6))?,
    };

    let rate = |key: &str, default: f64| -> Result<f64, ConfigError> { positive(key, number(&root, "", key)?.unwrap_or(default)) };
    let rates = LinkRateTable::from_band_rates(rate("r_k", 324e6)?, rate("r_l", 150e3)?, rate("r_o_gl", 1.8e9)?, rate("r_r_gl", 324e6)?);

    let defaults = ReliabilityTable::default();
    let phi = |key: &str, default: f64| -> Result<f64, ConfigError> { Ok(number(&root, "", key)?.unwrap_or(default)) };
    let phis = ReliabilityTable {
        leo_isl: phi("phi_1", defaults.leo_isl)?,
        ring_isl: phi("phi_2", defaults.ring_isl)?,
        geo_leo: phi("phi_3", defaults.geo_leo)?,
        meo_leo: phi("phi_4", defaults.meo_leo)?,
        gs_leo: phi("phi_gs_leo", defaults.gs_leo)?,
        gs_meo: phi("phi_gs_meo", defaults.gs_meo)?,
        gs_geo: phi("phi_gs_geo", defaults.gs_geo)?,
    };
    check_reliability(&phis)?;

    let epoch = t_start;
    let layers = object(&root, "", "constellations")?;
    let layer_entry = |key: &str| -> LayerEntry<'_> {
        match layers.and_then(|o| o.get(key)) {
            None => LayerEntry::Default,
            Some(Value::Null) => LayerEntry::Absent,
            Some(v) => LayerEntry::Given(v),
        }
    };
    let leo_path = "constellations.leo";
    let leo = match layer_entry("leo") {
        LayerEntry::Absent => return Err(ConfigError::invalid(leo_path, "the LEO layer is required")),
        entry => build_layer(Layer::Leo, entry, leo_path, epoch, 0, base_dir)?.expect("present"),
    };
    let meo = build_layer(Layer::Meo, layer_entry("meo"), "constellations.meo", epoch, leo.len(), base_dir)?;
    let next = leo.len() + meo.as_ref().map_or(0, Satnet::len);
    let geo = build_layer(Layer::Geo, layer_entry("geo"), "constellations.geo", epoch, next, base_dir)?;

    let schemes = list(&root, "schemes", &Scheme::ALL)?;
    let scenarios = list(&root, "scenarios", &RfScenario::ALL)?;

    let seed = match root.get("seed") {
        None => 0,
        Some(v) => v.as_u64().ok_or_else(|| ConfigError::invalid("seed", "expected a non-negative integer"))?,
    };
    let stochastic_failures = match root.get("stochastic_failures") {
        None => false,
        Some(v) => v.as_bool().ok_or_else(|| ConfigError::invalid("stochastic_failures", "expected a boolean"))?,
    };
    let reliability_mode = match string(&root, "", "reliability_mode")? {
        None => ReliabilityMode::default(),
        Some(s) => s.parse().map_err(|e: String| ConfigError::invalid("reliability_mode", e))?,
    };
    let grazing_margin = number(&root, "", "grazing_margin_m")?.unwrap_or(DEFAULT_GRAZING_MARGIN_M);

    let scenario = Scenario {
        gs,
        leo,
        meo,
        geo,
        t_start,
        t_end,
        t_sample,
        delay,
        rates,
        phis,
        reliability_mode,
        schemes,
        scenarios,
        seed,
        stochastic_failures,
        grazing_margin,
    };
    scenario.validate()?;
    Ok(scenario)
}

enum LayerEntry<'a> {
    Default,
    Absent,
    Given(&'a Value),
}

fn default_shell(layer: Layer, epoch: DateTime<Utc>) -> ConstellationSpec {
    match layer {
        Layer::Leo => ConstellationSpec::polar(6, 13, 1_015e3, 98.98, epoch),
        Layer::Meo => ConstellationSpec::ring(Layer::Meo, 20, 8_062e3, None, epoch),
        Layer::Geo => ConstellationSpec::geo(3, Some(-98.0), epoch),
    }
}

fn build_layer(
    layer: Layer,
    entry: LayerEntry<'_>,
    path: &str,
    epoch: DateTime<Utc>,
    first_ordinal: usize,
    base_dir: Option<&Path>,
) -> Result<Option<Satnet>, ConfigError> {
    let obj = match entry {
        LayerEntry::Absent => return Ok(None),
        LayerEntry::Default => None,
        LayerEntry::Given(Value::Object(o)) => Some(o),
        LayerEntry::Given(_) => return Err(ConfigError::invalid(path, "expected an object or null")),
    };
    if let Some(file) = obj.map(|o| string(o, path, "tle_file")).transpose()?.flatten() {
        return tle_layer(layer, obj.expect("object"), path, file, first_ordinal, base_dir).map(Some);
    }

    let mut spec = default_shell(layer, epoch);
    if let Some(o) = obj {
        let count = |key: &str, current: usize| -> Result<usize, ConfigError> {
            match o.get(key) {
                None => Ok(current),
                Some(v) => v
                    .as_u64()
                    .filter(|&n| n > 0)
                    .map(|n| n as usize)
                    .ok_or_else(|| ConfigError::invalid(format!("{path}.{key}"), "expected a positive integer")),
            }
        };
        spec.plane_count = count("planes", spec.plane_count)?;
        spec.sats_per_plane = count("sats_per_plane", spec.sats_per_plane)?;
        if let Some(km) = number(o, path, "altitude_km")? {
            spec.altitude = km * 1e3;
        }
        if let Some(v) = number(o, path, "inclination")? {
            spec.inclination = v;
        }
        if let Some(v) = number(o, path, "raan_spread")? {
            spec.raan_spread = v;
        }
        if let Some(v) = number(o, path, "raan_offset")? {
            spec.raan_offset = v;
        }
        if o.contains_key("phasing") {
            spec.phasing_offset = nullable_number(o, path, "phasing")?;
        }
        if o.contains_key("anchor_lon") {
            spec.anchor_longitude = nullable_number(o, path, "anchor_lon")?;
        }
    }
    if layer == Layer::Geo && spec.altitude != GEO_ALTITUDE_M {
        return Err(ConfigError::invalid(format!("{path}.altitude_km"), "GEO altitude is fixed at 35786 km"));
    }
    Satnet::from_spec(&spec, first_ordinal)
        .map(Some)
        .map_err(|e| ConfigError::invalid(path, e.to_string()))
}

/// Satellites from a TLE file, taken plane-major in file order.
fn tle_layer(
    layer: Layer,
    obj: &Map<String, Value>,
    path: &str,
    file: &str,
    first_ordinal: usize,
    base_dir: Option<&Path>,
) -> Result<Satnet, ConfigError> {
    let full: PathBuf = match base_dir {
        Some(dir) if Path::new(file).is_relative() => dir.join(file),
        _ => PathBuf::from(file),
    };
    let text = std::fs::read_to_string(&full).map_err(|source| ConfigError::Io { path: full.display().to_string(), source })?;
    let records = parse_tle(&text).map_err(|source| ConfigError::Tle { path: full.display().to_string(), source })?;
    if records.is_empty() {
        return Err(ConfigError::invalid(format!("{path}.tle_file"), "no element sets in file"));
    }
    let planes = match obj.get("planes") {
        None => 1,
        Some(v) => v
            .as_u64()
            .filter(|&n| n > 0)
            .ok_or_else(|| ConfigError::invalid(format!("{path}.planes"), "expected a positive integer"))? as usize,
    };
    if records.len() % planes != 0 {
        return Err(ConfigError::invalid(
            format!("{path}.planes"),
            format!("{} element sets do not split into {planes} planes", records.len()),
        ));
    }
    let per_plane = records.len() / planes;
    if let Some(v) = obj.get("sats_per_plane") {
        if v.as_u64() != Some(per_plane as u64) {
            return Err(ConfigError::invalid(
                format!("{path}.sats_per_plane"),
                format!("file holds {per_plane} satellites per plane"),
            ));
        }
    }
    let sats = records
        .into_iter()
        .enumerate()
        .map(|(k, r)| Satellite {
            id: SatId { layer, plane: k / per_plane, index: k % per_plane, ordinal: first_ordinal + k },
            elements: r.parsed,
        })
        .collect();
    Satnet::new(layer, planes, per_plane, sats).map_err(|e| ConfigError::invalid(path, e.to_string()))
}

fn check_unknown_keys(root: &Map<String, Value>) -> Result<(), ConfigError> {
    fn scan(obj: &Map<String, Value>, prefix: &str, known: &[&str], out: &mut Vec<String>) {
        let known: BTreeSet<&str> = known.iter().copied().collect();
        for key in obj.keys() {
            if !known.contains(key.as_str()) {
                out.push(if prefix.is_empty() { key.clone() } else { format!("{prefix}.{key}") });
            }
        }
    }
    let mut unknown = Vec::new();
    scan(root, "", TOP_KEYS, &mut unknown);
    if let Some(Value::Object(gs)) = root.get("gs") {
        scan(gs, "gs", GS_KEYS, &mut unknown);
    }
    if let Some(Value::Object(layers)) = root.get("constellations") {
        scan(layers, "constellations", LAYER_KEYS, &mut unknown);
        for key in LAYER_KEYS {
            if let Some(Value::Object(shell)) = layers.get(*key) {
                scan(shell, &format!("constellations.{key}"), SHELL_KEYS, &mut unknown);
            }
        }
    }
    if unknown.is_empty() {
        Ok(())
    } else {
        Err(ConfigError::UnknownKeys(unknown))
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn number(obj: &Map<String, Value>, prefix: &str, key: &str) -> Result<Option<f64>, ConfigError> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_f64()
            .filter(|x| x.is_finite())
            .map(Some)
            .ok_or_else(|| ConfigError::invalid(join(prefix, key), "expected a number")),
    }
}

fn nullable_number(obj: &Map<String, Value>, prefix: &str, key: &str) -> Result<Option<f64>, ConfigError> {
    match obj.get(key) {
        Some(Value::Null) => Ok(None),
        _ => number(obj, prefix, key),
    }
}

fn string<'a>(obj: &'a Map<String, Value>, prefix: &str, key: &str) -> Result<Option<&'a str>, ConfigError> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v.as_str().map(Some).ok_or_else(|| ConfigError::invalid(join(prefix, key), "expected a string")),
    }
}

fn object<'a>(obj: &'a Map<String, Value>, prefix: &str, key: &str) -> Result<Option<&'a Map<String, Value>>, ConfigError> {
    match obj.get(key) {
        None => Ok(None),
        Some(Value::Object(o)) => Ok(Some(o)),
        Some(_) => Err(ConfigError::invalid(join(prefix, key), "expected an object")),
    }
}

fn timestamp(obj: &Map<String, Value>, key: &str, default: &str) -> Result<DateTime<Utc>, ConfigError> {
    let text = string(obj, "", key)?.unwrap_or(default);
    parse_timestamp(text).ok_or_else(|| ConfigError::invalid(key, format!("cannot read {text:?} as a UTC timestamp")))
}

/// Names of a string list that must draw from `all`; absent means all of them.
fn list<T: std::str::FromStr<Err = String> + Copy + PartialEq>(
    obj: &Map<String, Value>,
    key: &str,
    all: &[T],
) -> Result<Vec<T>, ConfigError> {
    let Some(v) = obj.get(key) else { return Ok(all.to_vec()) };
    let items = v.as_array().ok_or_else(|| ConfigError::invalid(key, "expected a list of names"))?;
    let mut out = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let path = format!("{key}[{i}]");
        let name = item.as_str().ok_or_else(|| ConfigError::invalid(&path, "expected a string"))?;
        let parsed: T = name.parse().map_err(|e| ConfigError::invalid(&path, e))?;
        if !out.contains(&parsed) {
            out.push(parsed);
        }
    }
    if out.is_empty() {
        return Err(ConfigError::invalid(key, "must not be empty"));
    }
    Ok(out)
}

fn positive(path: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::invalid(path, format!("must be positive, got {v}")))
    }
}

fn check_window(start: DateTime<Utc>, end: DateTime<Utc>, step: f64) -> Result<(), ConfigError> {
    if start >= end {
        return Err(ConfigError::invalid("T_end", "must be later than T_start"));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(ConfigError::invalid("T_sample", format!("must be positive, got {step}")));
    }
    if sample_times(start, end, step).is_empty() {
        return Err(ConfigError::invalid("T_sample", "yields no sample instants"));
    }
    Ok(())
}

fn check_reliability(phis: &ReliabilityTable) -> Result<(), ConfigError> {
    for (name, phi) in phis.entries() {
        if !(phi > 0.0 && phi <= 1.0) {
            return Err(ConfigError::invalid(name, format!("reliability must lie in (0, 1], got {phi}")));
        }
    }
    if !phis.is_ordered() {
        return Err(ConfigError::invalid(
            "phi_3",
            "GEO-LEO reliability must be at least the MEO-LEO value, which must be at least the LEO ISL value",
        ));
    }
    Ok(())
}

fn field_path(e: &GeometryError) -> &'static str {
    match e {
        GeometryError::OutOfRange { field: "latitude", .. } => "gs.lat",
        GeometryError::OutOfRange { field: "longitude", .. } => "gs.lng",
        GeometryError::OutOfRange { field: "altitude", .. } => "gs.alt_m",
        GeometryError::OutOfRange { field: "min_elevation_ngso", .. } => "minElev1",
        _ => "minElev2",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::LinkType;

    fn err(text: &str) -> ConfigError {
        load_scenario(text, None).unwrap_err()
    }

    fn invalid_path(e: ConfigError) -> String {
        match e {
            ConfigError::Invalid { path, .. } => path,
            other => panic!("expected a validation error, got {other}"),
        }
    }

    #[test]
    fn empty_document_gives_mission_defaults() {
        let s = load_scenario("{}", None).unwrap();
        assert_eq!(s.t_start, Utc.with_ymd_and_hms(2022, 8, 14, 1, 0, 0).unwrap());
        assert_eq!(s.t_end, Utc.with_ymd_and_hms(2022, 8, 15, 1, 0, 0).unwrap());
        assert_eq!(s.t_sample, 3600.0);
        assert_eq!(s.gs.site.latitude(), 51.0447);
        assert_eq!(s.gs.site.longitude(), -114.0719);
        assert_eq!(s.gs.min_elevation_ngso, 25.0);
        assert_eq!(s.gs.min_elevation_geo_meo, 10.0);
        assert_eq!(s.delay.packet_bits, 8192.0);
        assert_eq!(s.delay.processing, 100e-6);
        assert_eq!(s.delay.queuing, 100e-6);
        assert_eq!(s.rates.rate(LinkType::GsLeo, RfScenario::S1).unwrap(), 324e6);
        assert_eq!(s.rates.rate(LinkType::GeoLeo, RfScenario::S2).unwrap(), 150e3);
        assert_eq!(s.rates.rate(LinkType::GsGeo, RfScenario::S3).unwrap(), 1.8e9);
        assert_eq!(s.phis, ReliabilityTable::default());
        assert_eq!((s.phis.leo_isl, s.phis.ring_isl, s.phis.geo_leo, s.phis.meo_leo), (0.998, 0.999, 0.999, 0.9985));
        assert_eq!((s.leo.len(), s.meo.as_ref().unwrap().len(), s.geo.as_ref().unwrap().len()), (78, 20, 3));
        assert_eq!(s.leo.plane_count(), 6);
        assert_eq!(s.sample_times().len(), 24);
        assert_eq!(s.schemes, Scheme::ALL.to_vec());
        assert_eq!(s.scenarios, RfScenario::ALL.to_vec());
        assert_eq!(s.reliability_mode, ReliabilityMode::Series);
        assert!(!s.stochastic_failures);
        let ordinals: Vec<usize> = s.layers().flat_map(|n| n.satellites().iter().map(|x| x.id.ordinal)).collect();
        assert_eq!(ordinals, (0..101).collect::<Vec<_>>());
    }

    #[test]
    fn overrides() {
        let s = load_scenario(
            r#"{"M": 2048, "T_sample": 60, "minElev1": 30, "seed": 7, "schemes": ["mln", "geo_only"],
                "scenarios": ["S2"], "constellations": {"meo": null, "leo": {"planes": 2, "sats_per_plane": 4}},
                "reliability_mode": "literal_eq2", "T_start": "2022-08-14T01:00:00Z"}"#,
            None,
        )
        .unwrap();
        assert_eq!(s.delay.packet_bits, 16384.0);
        assert_eq!(s.sample_times().len(), 1440);
        assert_eq!(s.gs.min_elevation_ngso, 30.0);
        assert_eq!(s.seed, 7);
        assert_eq!(s.schemes, vec![Scheme::Mln, Scheme::GeoOnly]);
        assert_eq!(s.scenarios, vec![RfScenario::S2]);
        assert!(s.meo.is_none());
        assert_eq!(s.leo.len(), 8);
        assert_eq!(s.geo.as_ref().unwrap().satellites()[0].id.ordinal, 8);
        assert_eq!(s.reliability_mode, ReliabilityMode::Literal);
    }

    #[test]
    fn validation_errors_name_the_field() {
        assert_eq!(invalid_path(err(r#"{"T_sample": 0}"#)), "T_sample");
        assert_eq!(invalid_path(err(r#"{"T_end": "2022-08-14 00:00:00"}"#)), "T_end");
        assert_eq!(invalid_path(err(r#"{"T_start": "yesterday"}"#)), "T_start");
        assert_eq!(invalid_path(err(r#"{"M": -1}"#)), "M");
        assert_eq!(invalid_path(err(r#"{"r_l": 0}"#)), "r_l");
        assert_eq!(invalid_path(err(r#"{"phi_1": 1.5}"#)), "phi_1");
        assert_eq!(invalid_path(err(r#"{"phi_1": 0.9995}"#)), "phi_3");
        assert_eq!(invalid_path(err(r#"{"gs": {"lat": 95}}"#)), "gs.lat");
        assert_eq!(invalid_path(err(r#"{"minElev2": 90}"#)), "minElev2");
        assert_eq!(invalid_path(err(r#"{"schemes": ["mln", "fast"]}"#)), "schemes[1]");
        assert_eq!(invalid_path(err(r#"{"constellations": {"leo": null}}"#)), "constellations.leo");
        assert_eq!(invalid_path(err(r#"{"constellations": {"leo": {"planes": 0}}}"#)), "constellations.leo.planes");
        assert_eq!(invalid_path(err(r#"{"constellations": {"geo": {"altitude_km": 20000}}}"#)), "constellations.geo.altitude_km");
        assert_eq!(invalid_path(err(r#"{"seed": -3}"#)), "seed");
        assert!(matches!(err("[1, 2]"), ConfigError::Parse(_)));
        assert!(matches!(err("{"), ConfigError::Parse(_)));
    }

    #[test]
    fn unknown_keys_are_listed() {
        match err(r#"{"T_sampel": 1, "gs": {"lon": 3}, "constellations": {"leo": {"alt": 1}, "heo": {}}}"#) {
            ConfigError::UnknownKeys(keys) => assert_eq!(
                keys,
                vec!["T_sampel", "gs.lon", "constellations.heo", "constellations.leo.alt"]
            ),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn tle_layer_from_file() {
        let dir = std::env::temp_dir().join(format!("mlnsim-tle-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let epoch = Utc.with_ymd_and_hms(2022, 8, 14, 1, 0, 0).unwrap();
        let shell = ConstellationSpec::geo(3, Some(-98.0), epoch);
        let text: String = (0..3)
            .map(|k| crate::orbital::render_tle(&format!("GEO {k}"), 40_000 + k as u32, &shell.elements_of(k).unwrap()))
            .collect();
        std::fs::write(dir.join("geo.tle"), text).unwrap();
        let s = load_scenario(r#"{"constellations": {"geo": {"tle_file": "geo.tle"}}}"#, Some(&dir)).unwrap();
        let geo = s.geo.unwrap();
        assert_eq!(geo.len(), 3);
        assert_eq!(geo.satellites()[2].id.ordinal, 100);
        let e = load_scenario(r#"{"constellations": {"geo": {"tle_file": "geo.tle", "planes": 2}}}"#, Some(&dir)).unwrap_err();
        assert_eq!(invalid_path(e), "constellations.geo.planes");
        let e = load_scenario(r#"{"constellations": {"geo": {"tle_file": "missing.tle"}}}"#, Some(&dir)).unwrap_err();
        assert!(matches!(e, ConfigError::Io { .. }));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn timestamps() {
        let want = Utc.with_ymd_and_hms(2022, 8, 14, 1, 0, 0).unwrap();
        assert_eq!(parse_timestamp("2022-08-14 01:00:00"), Some(want));
        assert_eq!(parse_timestamp("2022-08-14T03:00:00+02:00"), Some(want));
        assert_eq!(parse_timestamp("2022-08-14T01:30:00Z"), Some(want + Duration::minutes(30)));
        assert_eq!(parse_timestamp("14/08/2022"), None);
    }

    #[test]
    fn schema_lists_every_key() {
        let schema: Value = serde_json::from_str(SCENARIO_SCHEMA).unwrap();
        let props = |v: &Value| -> BTreeSet<String> { v["properties"].as_object().unwrap().keys().cloned().collect() };
        let set = |keys: &[&str]| keys.iter().map(|k| k.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(props(&schema), set(TOP_KEYS));
        assert_eq!(props(&schema["properties"]["gs"]), set(GS_KEYS));
        assert_eq!(props(&schema["properties"]["constellations"]), set(LAYER_KEYS));
        assert_eq!(props(&schema["$defs"]["shell"]), set(SHELL_KEYS));
    }
}
