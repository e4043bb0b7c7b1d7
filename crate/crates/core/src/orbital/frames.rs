use chrono::{DateTime, Utc};
use nalgebra::{Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use super::{julian_date, normalize_degrees, EARTH_RADIUS_M, JD_J2000};
use crate::error::GeometryError;

/// Geodetic site on the reference sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodeticCoord {
    latitude: f64,
    longitude: f64,
    altitude: f64,
}

impl GeodeticCoord {
    /// Latitude and longitude in degrees, altitude in meters.
    pub fn new(latitude: f64, longitude: f64, altitude: f64) -> Result<Self, GeometryError> {
        if !(-90.0..=90.0).contains(&latitude) {
            return Err(GeometryError::OutOfRange { field: "latitude", value: latitude });
        }
        if !(-180.0..=180.0).contains(&longitude) {
            return Err(GeometryError::OutOfRange { field: "longitude", value: longitude });
        }
        if !(altitude >= 0.0) {
            return Err(GeometryError::OutOfRange { field: "altitude", value: altitude });
        }
        Ok(Self { latitude, longitude, altitude })
    }

    pub fn latitude(&self) -> f64 {
        self.latitude
    }

    pub fn longitude(&self) -> f64 {
        self.longitude
    }

    pub fn altitude(&self) -> f64 {
        self.altitude
    }
}

/// Earth-centered Earth-fixed position at an instant, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcefPosition {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub time: DateTime<Utc>,
}

impl EcefPosition {
    pub fn new(x: f64, y: f64, z: f64, time: DateTime<Utc>) -> Self {
        Self { x, y, z, time }
    }

    pub fn from_vector(v: Vector3<f64>, time: DateTime<Utc>) -> Self {
        Self { x: v.x, y: v.y, z: v.z, time }
    }

    pub fn vector(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn norm(&self) -> f64 {
        self.vector().norm()
    }

    /// Spherical latitude in degrees.
    pub fn latitude(&self) -> f64 {
        (self.z / self.norm()).asin().to_degrees()
    }

    /// Longitude in degrees, `(-180, 180]`.
    pub fn longitude(&self) -> f64 {
        self.y.atan2(self.x).to_degrees()
    }
}

/// Greenwich mean sidereal time (IAU-1982) in degrees, `[0, 360)`.
pub fn gmst(t: DateTime<Utc>) -> f64 {
    let centuries = (julian_date(t) - JD_J2000) / 36_525.0;
    let seconds = 67_310.548_41
        + (876_600.0 * 3_600.0 + 8_640_184.812_866) * centuries
        + 0.093_104 * centuries * centuries
        - 6.2e-6 * centuries * centuries * centuries;
    normalize_degrees(seconds / 240.0)
}

/// Rotates an inertial position into the Earth-fixed frame at `t`.
pub fn eci_to_ecef(inertial: Vector3<f64>, t: DateTime<Utc>) -> EcefPosition {
    let theta = gmst(t).to_radians();
    let rot = Rotation3::from_axis_angle(&Vector3::z_axis(), -theta);
    EcefPosition::from_vector(rot * inertial, t)
}

/// Spherical-Earth geodetic to ECEF conversion, stamped with `t`.
pub fn geodetic_to_ecef(site: &GeodeticCoord, t: DateTime<Utc>) -> EcefPosition {
    let r = EARTH_RADIUS_M + site.altitude;
    let (lat, lon) = (site.latitude.to_radians(), site.longitude.to_radians());
    EcefPosition::new(
        r * lat.cos() * lon.cos(),
        r * lat.cos() * lon.sin(),
        r * lat.sin(),
        t,
    )
}
