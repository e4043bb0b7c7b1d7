use chrono::{DateTime, Utc};

use super::{gmst, KeplerElements, GEO_ALTITUDE_M};
use crate::error::ConstellationError;
use crate::topology::{Layer, SatId, Satellite};

/// Evenly spaced circular shell.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstellationSpec {
    pub layer: Layer,
    pub plane_count: usize,
    pub sats_per_plane: usize,
    /// Meters above the reference sphere.
    pub altitude: f64,
    pub inclination: f64,
    /// Mean-anomaly offset between the first satellites of adjacent planes,
    /// degrees. `None` uses `360 / (planes * sats_per_plane)`.
    pub phasing_offset: Option<f64>,
    /// Degrees of RAAN covered by the planes; plane `p` sits at
    /// `raan_offset + p * raan_spread / plane_count`.
    pub raan_spread: f64,
    pub raan_offset: f64,
    /// Earth-fixed longitude of satellite (0, 0) at epoch. Exact for
    /// equatorial shells; for inclined shells it fixes the argument of
    /// latitude relative to the node instead.
    pub anchor_longitude: Option<f64>,
    pub epoch: DateTime<Utc>,
}

impl ConstellationSpec {
    /// Near-polar shell with planes spread over 180 degrees of RAAN.
    pub fn polar(plane_count: usize, sats_per_plane: usize, altitude: f64, inclination: f64, epoch: DateTime<Utc>) -> Self {
        Self {
            layer: Layer::Leo,
            plane_count,
            sats_per_plane,
            altitude,
            inclination,
            phasing_offset: None,
            raan_spread: 180.0,
            raan_offset: 0.0,
            anchor_longitude: None,
            epoch,
        }
    }

    /// Single equatorial ring.
    pub fn ring(layer: Layer, sats: usize, altitude: f64, anchor_longitude: Option<f64>, epoch: DateTime<Utc>) -> Self {
        Self {
            layer,
            plane_count: 1,
            sats_per_plane: sats,
            altitude,
            inclination: 0.0,
            phasing_offset: Some(0.0),
            raan_spread: 360.0,
            raan_offset: 0.0,
            anchor_longitude,
            epoch,
        }
    }

    /// Geostationary belt of `sats` evenly spaced slots.
    pub fn geo(sats: usize, anchor_longitude: Option<f64>, epoch: DateTime<Utc>) -> Self {
        Self::ring(Layer::Geo, sats, GEO_ALTITUDE_M, anchor_longitude, epoch)
    }

    pub fn total(&self) -> usize {
        self.plane_count * self.sats_per_plane
    }

    pub fn phasing(&self) -> f64 {
        self.phasing_offset.unwrap_or_else(|| 360.0 / self.total() as f64)
    }

    pub fn validate(&self) -> Result<(), ConstellationError> {
        if self.plane_count == 0 || self.sats_per_plane == 0 {
            return Err(ConstellationError::Empty);
        }
        if !(self.altitude > 0.0) || !self.altitude.is_finite() {
            return Err(ConstellationError::Invalid(format!("altitude {} m must be positive", self.altitude)));
        }
        if !(0.0..=180.0).contains(&self.inclination) {
            return Err(ConstellationError::Invalid(format!("inclination {} outside [0, 180]", self.inclination)));
        }
        if self.layer == Layer::Geo && (self.altitude != GEO_ALTITUDE_M || self.inclination != 0.0) {
            return Err(ConstellationError::Invalid(
                "a GEO shell must be equatorial at 35786 km".to_string(),
            ));
        }
        let finite = [self.raan_spread, self.raan_offset, self.phasing()]
            .into_iter()
            .chain(self.anchor_longitude)
            .all(f64::is_finite);
        if !finite {
            return Err(ConstellationError::Invalid("non-finite angle".to_string()));
        }
        Ok(())
    }

    /// Elements of the satellite at ordinal `k` (plane-major order).
    pub fn elements_of(&self, k: usize) -> Result<KeplerElements, ConstellationError> {
        let plane = k / self.sats_per_plane;
        let index = k % self.sats_per_plane;
        let raan = self.raan_offset + plane as f64 * self.raan_spread / self.plane_count as f64;
        let anchor = match self.anchor_longitude {
            Some(lon) => lon + gmst(self.epoch) - self.raan_offset,
            None => 0.0,
        };
        let mean_anomaly = anchor
            + index as f64 * 360.0 / self.sats_per_plane as f64
            + plane as f64 * self.phasing();
        Ok(KeplerElements::circular(self.altitude, self.inclination, raan, mean_anomaly, self.epoch)?)
    }
}

/// All satellites of a shell, ordinals `0..plane_count * sats_per_plane`.
pub fn generate_constellation(spec: &ConstellationSpec) -> Result<Vec<Satellite>, ConstellationError> {
    spec.validate()?;
    (0..spec.total())
        .map(|k| {
            Ok(Satellite {
                id: SatId {
                    layer: spec.layer,
                    plane: k / spec.sats_per_plane,
                    index: k % spec.sats_per_plane,
                    ordinal: k,
                },
                elements: spec.elements_of(k)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbital::{propagate, EARTH_RADIUS_M};
    use approx::assert_abs_diff_eq;
    use chrono::TimeZone;

    fn epoch() -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2022, 8, 14, 1, 0, 0).unwrap()
    }

    fn spacing(a: &Satellite, b: &Satellite) -> f64 {
        (b.elements.mean_anomaly_epoch() - a.elements.mean_anomaly_epoch()).rem_euclid(360.0)
    }

    #[test]
    fn polar_leo_shell() {
        let sats = generate_constellation(&ConstellationSpec::polar(6, 13, 1_015e3, 98.98, epoch())).unwrap();
        assert_eq!(sats.len(), 78);
        assert_abs_diff_eq!(spacing(&sats[0], &sats[1]), 27.692_307_7, epsilon = 1e-6);
        assert_abs_diff_eq!(sats[13].elements.raan(), 30.0);
        assert_abs_diff_eq!(sats[77].elements.raan(), 150.0);
        assert_eq!(sats[14].id, SatId { layer: Layer::Leo, plane: 1, index: 1, ordinal: 14 });
        assert_abs_diff_eq!(sats[0].elements.semi_major_axis(), EARTH_RADIUS_M + 1_015e3);
        // default Walker phasing: 360 / 78 between adjacent planes
        assert_abs_diff_eq!(spacing(&sats[0], &sats[13]), 360.0 / 78.0, epsilon = 1e-9);
    }

    #[test]
    fn geo_belt() {
        let sats = generate_constellation(&ConstellationSpec::geo(3, None, epoch())).unwrap();
        assert_eq!(sats.len(), 3);
        assert_abs_diff_eq!(spacing(&sats[0], &sats[1]), 120.0, epsilon = 1e-9);
        assert_abs_diff_eq!(spacing(&sats[1], &sats[2]), 120.0, epsilon = 1e-9);
    }

    #[test]
    fn meo_ring() {
        let spec = ConstellationSpec::ring(Layer::Meo, 20, 8_062e3, None, epoch());
        let sats = generate_constellation(&spec).unwrap();
        assert_eq!(sats.len(), 20);
        assert_abs_diff_eq!(spacing(&sats[4], &sats[5]), 18.0, epsilon = 1e-9);
    }

    #[test]
    fn anchor_longitude_places_first_slot() {
        let sats = generate_constellation(&ConstellationSpec::geo(3, Some(-98.0), epoch())).unwrap();
        let lons: Vec<f64> = sats.iter().map(|s| propagate(&s.elements, epoch()).position.longitude()).collect();
        assert_abs_diff_eq!(lons[0], -98.0, epsilon = 1e-9);
        assert_abs_diff_eq!(lons[1], 22.0, epsilon = 1e-9);
        assert_abs_diff_eq!(lons[2], 142.0, epsilon = 1e-9);
    }

    #[test]
    fn invalid_specs() {
        let mut spec = ConstellationSpec::polar(0, 13, 1_015e3, 98.98, epoch());
        assert_eq!(generate_constellation(&spec), Err(ConstellationError::Empty));
        spec.plane_count = 6;
        spec.sats_per_plane = 0;
        assert_eq!(generate_constellation(&spec), Err(ConstellationError::Empty));
        let mut geo = ConstellationSpec::geo(3, None, epoch());
        geo.inclination = 5.0;
        assert!(generate_constellation(&geo).is_err());
    }

    #[test]
    fn elements_are_a_function_of_ordinal() {
        let spec = ConstellationSpec::polar(6, 13, 1_015e3, 98.98, epoch());
        let sats = generate_constellation(&spec).unwrap();
        for k in [0, 7, 40, 77] {
            assert_eq!(spec.elements_of(k).unwrap(), sats[k].elements);
        }
    }
}
