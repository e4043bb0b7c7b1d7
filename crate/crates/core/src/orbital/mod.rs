//! Orbital elements, two-body propagation and reference-frame conversions.
//!
//! Everything here works on a spherical Earth of radius [`EARTH_RADIUS_M`],
//! with UTC used in place of UT1 for the sidereal-time rotation.

mod constellation;
mod frames;
mod kepler;
mod tle;

use chrono::{DateTime, Utc};

pub use constellation::{generate_constellation, ConstellationSpec};
pub use frames::{eci_to_ecef, geodetic_to_ecef, gmst, EcefPosition, GeodeticCoord};
pub use kepler::{
    orbital_period, propagate, propagate_inertial, solve_kepler, KeplerElements, Propagated,
    Propagator, TwoBody, STALE_AFTER_DAYS,
};
pub use tle::{parse_tle, render_tle, tle_checksum, TleRecord};

/// Earth gravitational parameter, m³/s².
pub const MU_EARTH: f64 = 3.986_004_418e14;

/// Mean Earth radius (IUGG), meters.
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

/// Geostationary altitude above the reference sphere, meters.
pub const GEO_ALTITUDE_M: f64 = 35_786_000.0;

const JD_UNIX_EPOCH: f64 = 2_440_587.5;
const JD_J2000: f64 = 2_451_545.0;

/// Julian date of a UTC instant.
pub fn julian_date(t: DateTime<Utc>) -> f64 {
    let secs = t.timestamp() as f64 + f64::from(t.timestamp_subsec_nanos()) * 1e-9;
    JD_UNIX_EPOCH + secs / 86_400.0
}

/// Signed seconds from `from` to `to`.
pub fn seconds_between(from: DateTime<Utc>, to: DateTime<Utc>) -> f64 {
    let d = to - from;
    match d.num_nanoseconds() {
        Some(ns) => ns as f64 * 1e-9,
        None => d.num_milliseconds() as f64 * 1e-3,
    }
}

/// Wraps an angle in degrees into `[0, 360)`.
pub fn normalize_degrees(angle: f64) -> f64 {
    let a = angle.rem_euclid(360.0);
    // rem_euclid can return exactly 360.0 for tiny negative inputs
    if a >= 360.0 {
        0.0
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    #[test]
    fn julian_date_of_j2000() {
        let t = Utc.with_ymd_and_hms(2000, 1, 1, 12, 0, 0).unwrap();
        assert_eq!(julian_date(t), JD_J2000);
    }

    #[test]
    fn normalize_wraps_negative_angles() {
        assert_eq!(normalize_degrees(-90.0), 270.0);
        assert_eq!(normalize_degrees(720.0), 0.0);
        assert_eq!(normalize_degrees(-1e-18), 0.0);
    }
}
