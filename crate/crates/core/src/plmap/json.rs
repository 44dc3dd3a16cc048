//! The JSON map file format:
//!
//! ```json
//! {"kind": "circle", "pieces": [{"left": "0", "slope": "3/2", "value_at_left": "3/8"}, ...]}
//! ```
//!
//! Circle values are read mod 1. A piece may give `"intercept"` (the `b` of
//! `a·t + b`) instead of `"value_at_left"`.

use serde::{Deserialize, Serialize};

use super::{MapError, PLCircleMap, PLIntervalMap};
use crate::arith::Rational;

/// One piece as written in a map file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceSpec {
    pub left: Rational,
    pub slope: Rational,
    pub value_at_left: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPiece {
    left: String,
    slope: String,
    value_at_left: Option<String>,
    intercept: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMapFile {
    kind: String,
    pieces: Vec<RawPiece>,
}

#[derive(Serialize)]
struct OutMapFile<'a> {
    kind: &'a str,
    pieces: Vec<PieceSpec>,
}

/// A parsed and fully validated map file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapFile {
    Circle(PLCircleMap),
    Interval(PLIntervalMap),
}

fn field(idx: usize, name: &str, raw: &str) -> Result<Rational, MapError> {
    raw.parse().map_err(|_| MapError::BadRational { field: format!("pieces[{idx}].{name}"), value: raw.to_string() })
}

impl MapFile {
    pub fn from_json_str(s: &str) -> Result<Self, MapError> {
        let raw: RawMapFile = serde_json::from_str(s).map_err(|e| MapError::Format(e.to_string()))?;
        let mut specs = Vec::with_capacity(raw.pieces.len());
        for (i, p) in raw.pieces.iter().enumerate() {
            let left = field(i, "left", &p.left)?;
            let slope = field(i, "slope", &p.slope)?;
            let value = match (&p.value_at_left, &p.intercept) {
                (Some(v), None) => field(i, "value_at_left", v)?,
                (None, Some(b)) => &slope * &left + field(i, "intercept", b)?,
                _ => {
                    return Err(MapError::Format(format!(
                        "pieces[{i}] needs exactly one of value_at_left or intercept"
                    )))
                }
            };
            specs.push((left, slope, value));
        }
        match raw.kind.as_str() {
            "circle" => Ok(MapFile::Circle(PLCircleMap::from_mod1_pieces(specs)?)),
            "interval" => Ok(MapFile::Interval(PLIntervalMap::from_pieces(specs)?)),
            other => Err(MapError::Format(format!("kind must be \"circle\" or \"interval\", got {other:?}"))),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let (kind, pieces) = match self {
            MapFile::Circle(f) => ("circle", f.pieces()),
            MapFile::Interval(f) => ("interval", f.pieces()),
        };
        let circle = matches!(self, MapFile::Circle(_));
        let pieces = pieces
            .iter()
            .map(|p| PieceSpec {
                left: p.left.clone(),
                slope: p.slope.clone(),
                value_at_left: if circle { p.value.fract() } else { p.value.clone() },
            })
            .collect();
        serde_json::to_value(OutMapFile { kind, pieces }).expect("map serializes")
    }

    pub fn into_circle(self) -> Result<PLCircleMap, MapError> {
        match self {
            MapFile::Circle(f) => Ok(f),
            MapFile::Interval(_) => Err(MapError::Format("expected a circle map".into())),
        }
    }

    pub fn into_interval(self) -> Result<PLIntervalMap, MapError> {
        match self {
            MapFile::Interval(f) => Ok(f),
            MapFile::Circle(_) => Err(MapError::Format("expected an interval map".into())),
        }
    }
}

impl PLCircleMap {
    pub fn to_json_value(&self) -> serde_json::Value {
        MapFile::Circle(self.clone()).to_json_value()
    }
}

impl PLIntervalMap {
    pub fn to_json_value(&self) -> serde_json::Value {
        MapFile::Interval(self.clone()).to_json_value()
    }
}
