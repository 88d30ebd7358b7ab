//! Reading and writing polygons and point sets.
//!
//! Polygons: a JSON array of `[x, y]` pairs, an object with a `vertices`
//! array, a GeoJSON `Polygon` (or `Feature` wrapping one; the outer ring is
//! used), or WKT `POLYGON ((x y, ...))`. Point sets: a JSON array of `[x, y]`
//! pairs or `{"x": .., "y": ..}` objects, optionally under a `points` key.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::geom::{convex_hull, ConvexPolygon, Point2};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn point_from_value(v: &Value) -> Result<Point2> {
    let num = |v: &Value| v.as_f64().ok_or_else(|| parse_err(format!("expected a number, got {v}")));
    match v {
        Value::Array(xy) if xy.len() >= 2 => Ok(Point2::new(num(&xy[0])?, num(&xy[1])?)),
        Value::Object(m) => match (m.get("x"), m.get("y")) {
            (Some(x), Some(y)) => Ok(Point2::new(num(x)?, num(y)?)),
            _ => Err(parse_err("point object needs `x` and `y`")),
        },
        _ => Err(parse_err(format!("expected [x, y], got {v}"))),
    }
}

fn points_from_array(v: &Value) -> Result<Vec<Point2>> {
    v.as_array()
        .ok_or_else(|| parse_err("expected an array of points"))?
        .iter()
        .map(point_from_value)
        .collect()
}

fn ring_from_json(v: &Value) -> Result<Vec<Point2>> {
    match v {
        Value::Array(_) => points_from_array(v),
        Value::Object(m) => {
            if let Some(g) = m.get("geometry") {
                return ring_from_json(g);
            }
            if let Some(vs) = m.get("vertices") {
                return points_from_array(vs);
            }
            match (m.get("type").and_then(Value::as_str), m.get("coordinates")) {
                (Some("Polygon"), Some(Value::Array(rings))) => {
                    points_from_array(rings.first().ok_or_else(|| parse_err("polygon has no rings"))?)
                }
                _ => Err(parse_err("expected `vertices`, a GeoJSON Polygon, or a Feature")),
            }
        }
        _ => Err(parse_err("expected a JSON array or object")),
    }
}

/// Parses `POLYGON ((x y, x y, ...))`; only the outer ring is read.
pub fn parse_wkt_polygon(text: &str) -> Result<Vec<Point2>> {
    let t = text.trim();
    let rest = t
        .get(..7)
        .filter(|head| head.eq_ignore_ascii_case("polygon"))
        .map(|_| t[7..].trim_start())
        .ok_or_else(|| parse_err("WKT must start with POLYGON"))?;
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.trim_start().strip_prefix('('))
        .ok_or_else(|| parse_err("expected `((` after POLYGON"))?;
    let ring = &inner[..inner.find(')').ok_or_else(|| parse_err("unterminated ring"))?];
    ring.split(',')
        .map(|pair| {
            let nums: Vec<f64> = pair
                .split_whitespace()
                .map(|s| s.parse::<f64>().map_err(|e| parse_err(format!("bad coordinate `{s}`: {e}"))))
                .collect::<Result<_>>()?;
            match nums.as_slice() {
                [x, y, ..] => Ok(Point2::new(*x, *y)),
                _ => Err(parse_err(format!("expected `x y`, got `{}`", pair.trim()))),
            }
        })
        .collect()
}

/// Parses a polygon ring in any supported format, detected from the text.
pub fn parse_polygon(text: &str) -> Result<Vec<Point2>> {
    match text.trim_start().chars().next() {
        Some('[') | Some('{') => ring_from_json(&serde_json::from_str(text)?),
        Some(_) => parse_wkt_polygon(text),
        None => Err(parse_err("empty input")),
    }
}

/// Reads a polygon file. With `hull`, the convex hull of the vertices is
/// used; otherwise the ring must already be convex.
pub fn load_polygon(path: &Path, hull: bool) -> Result<ConvexPolygon> {
    let ring = parse_polygon(&std::fs::read_to_string(path)?)?;
    if hull {
        convex_hull(&ring)
    } else {
        ConvexPolygon::new(ring)
    }
}

pub fn parse_points(text: &str) -> Result<Vec<Point2>> {
    let v: Value = serde_json::from_str(text)?;
    match &v {
        Value::Object(m) => points_from_array(m.get("points").ok_or_else(|| parse_err("missing `points`"))?),
        _ => points_from_array(&v),
    }
}

pub fn load_points(path: &Path) -> Result<Vec<Point2>> {
    parse_points(&std::fs::read_to_string(path)?)
}

pub fn polygon_to_wkt(poly: &ConvexPolygon) -> String {
    let mut s = String::from("POLYGON ((");
    let v = poly.vertices();
    for p in v.iter().chain(v.first()) {
        if !s.ends_with('(') {
            s.push_str(", ");
        }
        let _ = write!(s, "{} {}", p.x, p.y);
    }
    s.push_str("))");
    s
}

pub fn points_to_json(points: &[Point2]) -> Value {
    Value::Array(points.iter().map(|p| serde_json::json!([p.x, p.y])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_forms() {
        let a = parse_polygon("[[0,0],[1,0],[0,1]]").unwrap();
        let b = parse_polygon(r#"{"vertices": [[0,0],[1,0],[0,1]]}"#).unwrap();
        let c = parse_polygon(r#"{"type":"Feature","geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[0,1],[0,0]]]}}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(&c[..3], &a[..]);
        assert!(parse_polygon(r#"{"type":"Point"}"#).is_err());
    }

    #[test]
    fn wkt_round_trip() {
        let poly = ConvexPolygon::new(parse_polygon("polygon ((0 0, 2 0, 2 1.5, 0 1.5, 0 0))").unwrap()).unwrap();
        assert_eq!(poly.len(), 4);
        let again = ConvexPolygon::new(parse_polygon(&polygon_to_wkt(&poly)).unwrap()).unwrap();
        assert_eq!(again.vertices(), poly.vertices());
        assert!(parse_wkt_polygon("POINT (1 2)").is_err());
        assert!(parse_wkt_polygon("POLYGON ((0 0, 1))").is_err());
    }

    #[test]
    fn point_sets() {
        let a = parse_points("[[0.5, 0.25]]").unwrap();
        let b = parse_points(r#"{"points": [{"x": 0.5, "y": 0.25}]}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_points(&points_to_json(&a).to_string()).unwrap(), a);
        assert!(parse_points("[[1]]").is_err());
    }
}
