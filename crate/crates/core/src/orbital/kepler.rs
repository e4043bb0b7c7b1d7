use std::f64::consts::{PI, TAU};

use chrono::{DateTime, Utc};
use nalgebra::{Rotation3, Vector3};

use super::{eci_to_ecef, normalize_degrees, seconds_between, EcefPosition, EARTH_RADIUS_M, MU_EARTH};
use crate::error::KeplerError;

/// Two-body elements are trusted for this many days either side of epoch.
pub const STALE_AFTER_DAYS: f64 = 7.0;

const MAX_ITERATIONS: usize = 50;
const KEPLER_TOLERANCE: f64 = 1e-12;

/// Classical orbital elements. Lengths in meters, angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeplerElements {
    semi_major_axis: f64,
    eccentricity: f64,
    inclination: f64,
    raan: f64,
    arg_perigee: f64,
    mean_anomaly_epoch: f64,
    epoch: DateTime<Utc>,
}

impl KeplerElements {
    /// Validates the element set and wraps the angles into `[0, 360)`.
    pub fn new(
        semi_major_axis: f64,
        eccentricity: f64,
        inclination: f64,
        raan: f64,
        arg_perigee: f64,
        mean_anomaly_epoch: f64,
        epoch: DateTime<Utc>,
    ) -> Result<Self, KeplerError> {
        if !(semi_major_axis > EARTH_RADIUS_M) || !semi_major_axis.is_finite() {
            return Err(KeplerError::Elements(format!(
                "semi-major axis {semi_major_axis} m is not above the Earth's surface"
            )));
        }
        if !(0.0..1.0).contains(&eccentricity) {
            return Err(KeplerError::Eccentricity(eccentricity));
        }
        if !(0.0..=180.0).contains(&inclination) {
            return Err(KeplerError::Elements(format!("inclination {inclination} outside [0, 180]")));
        }
        for (name, v) in [("raan", raan), ("arg_perigee", arg_perigee), ("mean_anomaly", mean_anomaly_epoch)] {
            if !v.is_finite() {
                return Err(KeplerError::Elements(format!("{name} is not finite")));
            }
        }
        Ok(Self {
            semi_major_axis,
            eccentricity,
            inclination,
            raan: normalize_degrees(raan),
            arg_perigee: normalize_degrees(arg_perigee),
            mean_anomaly_epoch: normalize_degrees(mean_anomaly_epoch),
            epoch,
        })
    }

    /// Circular orbit at `altitude` meters above the reference sphere.
    pub fn circular(
        altitude: f64,
        inclination: f64,
        raan: f64,
        mean_anomaly_epoch: f64,
        epoch: DateTime<Utc>,
    ) -> Result<Self, KeplerError> {
        Self::new(EARTH_RADIUS_M + altitude, 0.0, inclination, raan, 0.0, mean_anomaly_epoch, epoch)
    }

    pub fn semi_major_axis(&self) -> f64 {
        self.semi_major_axis
    }
    pub fn eccentricity(&self) -> f64 {
        self.eccentricity
    }
    pub fn inclination(&self) -> f64 {
        self.inclination
    }
    pub fn raan(&self) -> f64 {
        self.raan
    }
    pub fn arg_perigee(&self) -> f64 {
        self.arg_perigee
    }
    pub fn mean_anomaly_epoch(&self) -> f64 {
        self.mean_anomaly_epoch
    }
    pub fn epoch(&self) -> DateTime<Utc> {
        self.epoch
    }

    /// Mean motion in rad/s.
    pub fn mean_motion(&self) -> f64 {
        (MU_EARTH / self.semi_major_axis.powi(3)).sqrt()
    }

    pub fn period(&self) -> f64 {
        orbital_period(self.semi_major_axis)
    }
}

/// Two-body orbital period in seconds.
pub fn orbital_period(semi_major_axis: f64) -> f64 {
    TAU * (semi_major_axis.powi(3) / MU_EARTH).sqrt()
}

/// Solves `E - e sin E = M` by Newton iteration starting from `E = M`.
pub fn solve_kepler(mean_anomaly: f64, eccentricity: f64) -> Result<f64, KeplerError> {
    if !(0.0..1.0).contains(&eccentricity) {
        return Err(KeplerError::Eccentricity(eccentricity));
    }
    // reduce to [-pi, pi) and add the whole turns back at the end
    let turns = ((mean_anomaly + PI) / TAU).floor();
    let m = mean_anomaly - turns * TAU;
    let mut e_anom = m;
    for _ in 0..MAX_ITERATIONS {
        let f = e_anom - eccentricity * e_anom.sin() - m;
        if f.abs() < 1e-15 {
            break;
        }
        e_anom -= f / (1.0 - eccentricity * e_anom.cos());
    }
    let result = e_anom + turns * TAU;
    if (result - eccentricity * result.sin() - mean_anomaly).abs() < KEPLER_TOLERANCE {
        Ok(result)
    } else {
        Err(KeplerError::NoConvergence { mean_anomaly, eccentricity })
    }
}

/// Inertial (equator/equinox of date) position at `t`, meters.
pub fn propagate_inertial(elements: &KeplerElements, t: DateTime<Utc>) -> Vector3<f64> {
    let dt = seconds_between(elements.epoch, t);
    let mean_anomaly = elements.mean_anomaly_epoch.to_radians() + elements.mean_motion() * dt;
    let e = elements.eccentricity;
    // the eccentricity was validated on construction, so this cannot fail
    let ecc_anomaly = solve_kepler(mean_anomaly.rem_euclid(TAU), e)
        .expect("Kepler solver converges for validated eccentricity");
    let a = elements.semi_major_axis;
    let perifocal = Vector3::new(
        a * (ecc_anomaly.cos() - e),
        a * (1.0 - e * e).sqrt() * ecc_anomaly.sin(),
        0.0,
    );
    let rotation = Rotation3::from_axis_angle(&Vector3::z_axis(), elements.raan.to_radians())
        * Rotation3::from_axis_angle(&Vector3::x_axis(), elements.inclination.to_radians())
        * Rotation3::from_axis_angle(&Vector3::z_axis(), elements.arg_perigee.to_radians());
    rotation * perifocal
}

/// Result of a propagation request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagated {
    pub position: EcefPosition,
    /// Set when `t` lies outside the element set's validity window.
    pub stale: bool,
}

/// Source of satellite positions. [`TwoBody`] is the only model shipped.
pub trait Propagator: Send + Sync {
    fn propagate(&self, elements: &KeplerElements, t: DateTime<Utc>) -> Propagated;
}

/// Unperturbed Keplerian motion.
#[derive(Debug, Clone, Copy, Default)]
pub struct TwoBody;

impl Propagator for TwoBody {
    fn propagate(&self, elements: &KeplerElements, t: DateTime<Utc>) -> Propagated {
        let position = eci_to_ecef(propagate_inertial(elements, t), t);
        let age_days = seconds_between(elements.epoch, t).abs() / 86_400.0;
        Propagated { position, stale: age_days > STALE_AFTER_DAYS }
    }
}

/// Two-body propagation into the Earth-fixed frame.
pub fn propagate(elements: &KeplerElements, t: DateTime<Utc>) -> Propagated {
    TwoBody.propagate(elements, t)
}
