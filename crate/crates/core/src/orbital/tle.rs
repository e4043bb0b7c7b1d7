//! NORAD two-line element sets.
//!
//! Only the fields needed for two-body propagation are interpreted; drag
//! terms are carried verbatim in the stored lines.

use std::f64::consts::TAU;

use chrono::{Datelike, Duration, TimeZone, Utc};

use super::{KeplerElements, MU_EARTH};
use crate::error::TleError;

const LINE_LEN: usize = 69;

#[derive(Debug, Clone, PartialEq)]
pub struct TleRecord {
    pub name: String,
    pub line1: String,
    pub line2: String,
    pub catalog_number: String,
    /// Revolutions per day, as printed.
    pub mean_motion: f64,
    pub parsed: KeplerElements,
}

/// Modulo-10 checksum over the first 68 columns: digits count their value,
/// minus signs count one, everything else zero.
pub fn tle_checksum(line: &str) -> u32 {
    line.bytes()
        .take(LINE_LEN - 1)
        .map(|b| match b {
            b'0'..=b'9' => u32::from(b - b'0'),
            b'-' => 1,
            _ => 0,
        })
        .sum::<u32>()
        % 10
}

/// Parses every 2-line or 3-line group in `text`. Blank lines are ignored.
pub fn parse_tle(text: &str) -> Result<Vec<TleRecord>, TleError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();

    let mut records = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (name, first) = if lines[i].1.starts_with("1 ") {
            (None, i)
        } else {
            (Some(lines[i].1.trim().to_string()), i + 1)
        };
        let Some(&(n1, l1)) = lines.get(first) else {
            return Err(TleError::Truncated { line: lines[i].0 });
        };
        let Some(&(n2, l2)) = lines.get(first + 1) else {
            return Err(TleError::Truncated { line: n1 });
        };
        let mut record = parse_pair(n1, l1, n2, l2)?;
        if let Some(name) = name {
            record.name = name;
        }
        records.push(record);
        i = first + 2;
    }
    Ok(records)
}

fn check_line(number: usize, line: &str, expected: char) -> Result<(), TleError> {
    if !line.is_ascii() || line.len() != LINE_LEN {
        return Err(TleError::LineLength { line: number, expected: LINE_LEN, found: line.chars().count() });
    }
    if !line.starts_with(expected) || line.as_bytes()[1] != b' ' {
        return Err(TleError::LineNumber { line: number, expected });
    }
    let found = field(number, line, 69, 69, "checksum")?;
    let found: u32 = found
        .parse()
        .map_err(|_| field_error(number, line, 69, 69, "checksum"))?;
    let expected = tle_checksum(line);
    if found != expected {
        return Err(TleError::Checksum { line: number, expected, found });
    }
    Ok(())
}

/// 1-based, inclusive column range, trimmed.
fn field<'a>(number: usize, line: &'a str, start: usize, end: usize, name: &'static str) -> Result<&'a str, TleError> {
    line.get(start - 1..end)
        .map(str::trim)
        .ok_or_else(|| field_error(number, line, start, end, name))
}

fn field_error(number: usize, line: &str, start: usize, end: usize, name: &'static str) -> TleError {
    TleError::Field {
        line: number,
        start,
        end,
        field: name,
        text: line.get(start - 1..end).unwrap_or("").to_string(),
    }
}

fn number(line_no: usize, line: &str, start: usize, end: usize, name: &'static str) -> Result<f64, TleError> {
    let text = field(line_no, line, start, end, name)?;
    text.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| field_error(line_no, line, start, end, name))
}

fn parse_pair(n1: usize, l1: &str, n2: usize, l2: &str) -> Result<TleRecord, TleError> {
    check_line(n1, l1, '1')?;
    check_line(n2, l2, '2')?;

    let catalog = field(n1, l1, 3, 7, "catalog number")?;
    if catalog.is_empty() {
        return Err(field_error(n1, l1, 3, 7, "catalog number"));
    }
    if field(n2, l2, 3, 7, "catalog number")? != catalog {
        return Err(TleError::CatalogMismatch { line: n2 });
    }

    let year = field(n1, l1, 19, 20, "epoch year")?;
    let year: i32 = year.parse().map_err(|_| field_error(n1, l1, 19, 20, "epoch year"))?;
    let year = if year < 57 { 2000 + year } else { 1900 + year };
    let day = number(n1, l1, 21, 32, "epoch day")?;
    if !(1.0..367.0).contains(&day) {
        return Err(field_error(n1, l1, 21, 32, "epoch day"));
    }
    let epoch = Utc.with_ymd_and_hms(year, 1, 1, 0, 0, 0).unwrap()
        + Duration::nanoseconds(((day - 1.0) * 86_400e9).round() as i64);

    let inclination = number(n2, l2, 9, 16, "inclination")?;
    let raan = number(n2, l2, 18, 25, "right ascension")?;
    let ecc_digits = field(n2, l2, 27, 33, "eccentricity")?;
    if ecc_digits.is_empty() || !ecc_digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(field_error(n2, l2, 27, 33, "eccentricity"));
    }
    let eccentricity: f64 = format!("0.{ecc_digits}").parse().expect("digits form a decimal");
    let arg_perigee = number(n2, l2, 35, 42, "argument of perigee")?;
    let mean_anomaly = number(n2, l2, 44, 51, "mean anomaly")?;
    let mean_motion = number(n2, l2, 53, 63, "mean motion")?;
    if mean_motion <= 0.0 {
        return Err(field_error(n2, l2, 53, 63, "mean motion"));
    }

    let n = mean_motion * TAU / 86_400.0;
    let semi_major_axis = (MU_EARTH / (n * n)).cbrt();
    let parsed = KeplerElements::new(
        semi_major_axis,
        eccentricity,
        inclination,
        raan,
        arg_perigee,
        mean_anomaly,
        epoch,
    )
    .map_err(|source| TleError::Elements { line: n2, source })?;

    Ok(TleRecord {
        name: String::new(),
        line1: l1.to_string(),
        line2: l2.to_string(),
        catalog_number: catalog.to_string(),
        mean_motion,
        parsed,
    })
}

fn with_checksum(mut body: String) -> String {
    debug_assert_eq!(body.len(), LINE_LEN - 1);
    let sum = tle_checksum(&body);
    body.push(char::from(b'0' + sum as u8));
    body
}

/// Renders a drag-free element set as a named three-line TLE.
///
/// Angles are printed to 1e-4 degrees and eccentricity to 1e-7, so a
/// parse of the output reproduces the elements to that precision.
pub fn render_tle(name: &str, catalog: u32, elements: &KeplerElements) -> String {
    let epoch = elements.epoch();
    let year_start = Utc.with_ymd_and_hms(epoch.year(), 1, 1, 0, 0, 0).unwrap();
    let day = 1.0 + super::seconds_between(year_start, epoch) / 86_400.0;
    let mean_motion = elements.mean_motion() * 86_400.0 / TAU;
    let ecc = format!("{:.7}", elements.eccentricity());
    // keep angles that round up to 360.0000 in range
    let angle = |a: f64| {
        let r = (a * 1e4).round() / 1e4;
        if r >= 360.0 { 0.0 } else { r }
    };
    let line1 = with_checksum(format!(
        "1 {catalog:05}U 00000A   {:02}{day:012.8}  .00000000  00000-0  00000-0 0  999",
        epoch.year() % 100
    ));
    let line2 = with_checksum(format!(
        "2 {catalog:05} {:8.4} {:8.4} {} {:8.4} {:8.4} {:11.8}    0",
        elements.inclination(),
        angle(elements.raan()),
        &ecc[2..],
        angle(elements.arg_perigee()),
        angle(elements.mean_anomaly_epoch()),
        mean_motion,
    ));
    format!("{name}\n{line1}\n{line2}\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const ISS: &str = "ISS (ZARYA)
1 25544U 98067A   08264.51782528 -.00002182  00000-0 -11606-4 0  2927
2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.72125391563537
";

    /// Independent extraction: whitespace-split tokens of line 2.
    fn reference_fields(line2: &str) -> (f64, f64, f64) {
        let tok: Vec<&str> = line2.split_whitespace().collect();
        let inc: f64 = tok[2].parse().unwrap();
        let ecc: f64 = ("0.".to_string() + tok[4]).parse().unwrap();
        let mm_rev: f64 = tok[7][..11].parse().unwrap();
        let n = mm_rev * 2.0 * std::f64::consts::PI / 86_400.0;
        let a = (3.986_004_418e14 / (n * n)).powf(1.0 / 3.0);
        (a, ecc, inc)
    }

    #[test]
    fn parses_reference_iss_element_set() {
        let recs = parse_tle(ISS).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert_eq!(r.name, "ISS (ZARYA)");
        assert_eq!(r.catalog_number, "25544");
        let (a, e, i) = reference_fields(ISS.lines().nth(2).unwrap());
        assert_relative_eq!(r.parsed.semi_major_axis(), a, max_relative = 1e-6);
        assert_relative_eq!(r.parsed.eccentricity(), e, max_relative = 1e-6);
        assert_relative_eq!(r.parsed.inclination(), i, max_relative = 1e-6);
        assert_relative_eq!(r.parsed.raan(), 247.4627);
        assert_eq!(r.parsed.epoch().year(), 2008);
        assert_eq!(r.parsed.epoch().ordinal(), 264);
    }

    #[test]
    fn two_line_groups_have_no_name() {
        let text: String = ISS.lines().skip(1).map(|l| format!("{l}\n")).collect();
        let recs = parse_tle(&text).unwrap();
        assert_eq!(recs[0].name, "");
    }

    #[test]
    fn empty_input_yields_nothing() {
        assert!(parse_tle("").unwrap().is_empty());
        assert!(parse_tle("\n  \n").unwrap().is_empty());
    }

    #[test]
    fn altered_checksum_is_rejected() {
        let bad = ISS.replace("0  2927", "0  2928");
        match parse_tle(&bad) {
            Err(TleError::Checksum { line, expected, found }) => {
                assert_eq!((line, expected, found), (2, 7, 8));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_field_names_columns() {
        // corrupt inclination, then fix the checksum so the field parser sees it
        let l2 = "2 25544  51.64x6 247.4627 0006703 130.5360 325.0288 15.7212539156353";
        let l2 = with_checksum(l2.to_string());
        let text = format!("{}\n{}\n", ISS.lines().nth(1).unwrap(), l2);
        match parse_tle(&text) {
            Err(TleError::Field { line, start, end, .. }) => assert_eq!((line, start, end), (2, 9, 16)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn catalog_numbers_must_agree() {
        let l2 = with_checksum("2 25545  51.6416 247.4627 0006703 130.5360 325.0288 15.7212539156353".into());
        let text = format!("{}\n{}\n", ISS.lines().nth(1).unwrap(), l2);
        assert!(matches!(parse_tle(&text), Err(TleError::CatalogMismatch { line: 2 })));
    }

    #[test]
    fn missing_second_line() {
        let text: String = ISS.lines().take(2).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_tle(&text), Err(TleError::Truncated { .. })));
    }

    #[test]
    fn short_line() {
        let text = "1 25544U\n2 25544\n";
        assert!(matches!(parse_tle(text), Err(TleError::LineLength { line: 1, .. })));
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(
            alt in 400e3f64..36_000e3,
            ecc in 0.0f64..0.3,
            inc in 0.0f64..180.0,
            raan in 0.0f64..360.0,
            argp in 0.0f64..360.0,
            m0 in 0.0f64..360.0,
            secs in 0i64..(40 * 365 * 86_400),
            cat in 1u32..99_999,
        ) {
            let epoch = Utc.with_ymd_and_hms(2000, 1, 1, 0, 0, 0).unwrap() + Duration::seconds(secs);
            let el = KeplerElements::new(6_371e3 + alt + 1e3, ecc, inc, raan, argp, m0, epoch).unwrap();
            let text = render_tle("SYN", cat, &el);
            let rec = parse_tle(&text).unwrap().pop().unwrap();
            prop_assert_eq!(rec.line1.len(), 69);
            prop_assert_eq!(rec.line2.len(), 69);
            let p = rec.parsed;
            prop_assert!((p.semi_major_axis() / el.semi_major_axis() - 1.0).abs() < 1e-6);
            prop_assert!((p.eccentricity() - el.eccentricity()).abs() <= 5e-8);
            let ang = |a: f64, b: f64| ((a - b + 180.0).rem_euclid(360.0) - 180.0).abs();
            prop_assert!(ang(p.inclination(), el.inclination()) <= 5e-5 + 1e-9);
            prop_assert!(ang(p.raan(), el.raan()) <= 5e-5 + 1e-9);
            prop_assert!(ang(p.mean_anomaly_epoch(), el.mean_anomaly_epoch()) <= 5e-5 + 1e-9);
            prop_assert!((p.epoch() - el.epoch()).num_milliseconds().abs() <= 1);
            // a second pass is a fixed point
            let again = render_tle("SYN", cat, &p);
            prop_assert_eq!(again, text);
        }
    }
}
