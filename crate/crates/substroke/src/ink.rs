//! Ink model: points, strokes, characters, and their JSON format.
//!
//! The file format is a single JSON object:
//!
//! ```text
//! {"version":1, "y_down":false, "label":null, "meta":{...},
//!  "strokes":[{"points":[[x,y],...]},...]}
//! ```
//!
//! Unknown top-level keys are rejected. Documents captured in screen
//! coordinates declare `"y_down": true`; parsing reflects their y values so
//! the in-memory model is always y-up (a positive turn cross product means
//! counter-clockwise). Serialization always writes the canonical y-up form,
//! and `parse(serialize(c)) == c` holds exactly for any valid character.
//!
//! Everything here is an immutable value; no operation reorders strokes or
//! points.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A pen position. Raw input is unbounded; after preprocessing both
/// coordinates lie in [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// The point sequence produced between one pen-down and the next pen-up.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stroke {
    pub points: Vec<Point>,
}

impl Stroke {
    pub fn new(points: Vec<Point>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point by 1-based index.
    pub fn pt(&self, n: usize) -> Point {
        self.points[n - 1]
    }

    /// Polyline length.
    pub fn arc_length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(&w[1])).sum()
    }
}

/// Optional provenance carried alongside a character.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Meta {
    pub source: Option<String>,
    pub writer: Option<String>,
}

/// An ordered sequence of strokes in writing order, with an optional class
/// label so the same format serves raw ink, ground truth, and classifier
/// datasets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Character {
    pub strokes: Vec<Stroke>,
    pub label: Option<u32>,
    pub meta: Meta,
}

impl Character {
    pub fn new(strokes: Vec<Stroke>) -> Self {
        Self {
            strokes,
            label: None,
            meta: Meta::default(),
        }
    }

    pub fn point_count(&self) -> usize {
        self.strokes.iter().map(Stroke::len).sum()
    }
}

/// Structural class of a sub-unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubUnitLabel {
    Cw,
    Ccw,
    Straight,
    Loop,
    Point,
    Unlabeled,
}

impl fmt::Display for SubUnitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SubUnitLabel::Cw => "cw",
            SubUnitLabel::Ccw => "ccw",
            SubUnitLabel::Straight => "straight",
            SubUnitLabel::Loop => "loop",
            SubUnitLabel::Point => "point",
            SubUnitLabel::Unlabeled => "unlabeled",
        };
        f.write_str(s)
    }
}

/// A labeled index range within one stroke. Indices are 1-based and
/// inclusive; the ranges of the sub-units of a stroke are disjoint and cover
/// it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubUnit {
    /// 1-based stroke ordinal within the character.
    pub stroke: usize,
    /// First point index (1-based, inclusive).
    pub start: usize,
    /// Last point index (1-based, inclusive).
    pub end: usize,
    pub label: SubUnitLabel,
}

impl SubUnit {
    pub fn point_count(&self) -> usize {
        self.end - self.start + 1
    }
}

/// Parse or validation failure for an ink document.
#[derive(Debug, thiserror::Error)]
pub enum InkError {
    #[error("malformed ink document: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("unsupported version {0}")]
    Version(u32),
    #[error("empty stroke {stroke}")]
    EmptyStroke { stroke: usize },
    #[error("non-finite coordinate at stroke {stroke} point {point}")]
    NonFinite { stroke: usize, point: usize },
    #[error("character has no strokes")]
    NoStrokes,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InkDoc {
    version: u32,
    y_down: bool,
    label: Option<u32>,
    meta: Meta,
    strokes: Vec<StrokeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StrokeDoc {
    points: Vec<[f64; 2]>,
}

/// Parse an ink JSON document.
///
/// Strokes come back in file order. If the header declares screen
/// coordinates (`y_down`), every y is reflected about the document's
/// y-extent so the result is y-up.
pub fn parse_ink(text: &str) -> Result<Character, InkError> {
    let doc: InkDoc = serde_json::from_str(text)?;
    if doc.version != 1 {
        return Err(InkError::Version(doc.version));
    }
    if doc.strokes.is_empty() {
        return Err(InkError::NoStrokes);
    }
    for (si, s) in doc.strokes.iter().enumerate() {
        if s.points.is_empty() {
            return Err(InkError::EmptyStroke { stroke: si + 1 });
        }
        for (pi, p) in s.points.iter().enumerate() {
            if !p[0].is_finite() || !p[1].is_finite() {
                return Err(InkError::NonFinite {
                    stroke: si + 1,
                    point: pi + 1,
                });
            }
        }
    }
    let mut strokes: Vec<Stroke> = doc
        .strokes
        .into_iter()
        .map(|s| Stroke::new(s.points.into_iter().map(|[x, y]| Point::new(x, y)).collect()))
        .collect();
    if doc.y_down {
        let lo = strokes
            .iter()
            .flat_map(|s| s.points.iter())
            .map(|p| p.y)
            .fold(f64::INFINITY, f64::min);
        let hi = strokes
            .iter()
            .flat_map(|s| s.points.iter())
            .map(|p| p.y)
            .fold(f64::NEG_INFINITY, f64::max);
        for s in &mut strokes {
            for p in &mut s.points {
                p.y = (lo + hi) - p.y;
            }
        }
    }
    Ok(Character {
        strokes,
        label: doc.label,
        meta: doc.meta,
    })
}

/// Serialize a character to the canonical ink JSON form.
///
/// Coordinates use shortest round-trip formatting, so
/// `parse_ink(serialize_ink(c)) == c` exactly, and serializing the parse of a
/// serialized document reproduces it byte for byte.
pub fn serialize_ink(c: &Character) -> String {
    let doc = InkDoc {
        version: 1,
        y_down: false,
        label: c.label,
        meta: c.meta.clone(),
        strokes: c
            .strokes
            .iter()
            .map(|s| StrokeDoc {
                points: s.points.iter().map(|p| [p.x, p.y]).collect(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("ink document serialization cannot fail")
}

/// One violated invariant, locating the stroke/point involved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based stroke index, 0 for character-level findings.
    pub stroke: usize,
    /// 1-based point index, 0 when the finding is not about one point.
    pub point: usize,
    pub rule: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stroke {} point {}: {}", self.stroke, self.point, self.rule)
    }
}

/// Check the preprocessed-character invariants: every stroke non-empty, all
/// coordinates finite and inside [0, 1], no two consecutive points equal.
/// Returns an empty list iff all hold. Raw (unpreprocessed) ink legitimately
/// fails the bounds checks.
pub fn validate(c: &Character) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if c.strokes.is_empty() {
        out.push(Diagnostic {
            stroke: 0,
            point: 0,
            rule: "character has no strokes".into(),
        });
    }
    for (si, s) in c.strokes.iter().enumerate() {
        if s.is_empty() {
            out.push(Diagnostic {
                stroke: si + 1,
                point: 0,
                rule: "empty stroke".into(),
            });
            continue;
        }
        for (pi, p) in s.points.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                out.push(Diagnostic {
                    stroke: si + 1,
                    point: pi + 1,
                    rule: "non-finite coordinate".into(),
                });
                continue;
            }
            if p.x < 0.0 || p.x > 1.0 {
                out.push(Diagnostic {
                    stroke: si + 1,
                    point: pi + 1,
                    rule: "x out of [0,1]".into(),
                });
            }
            if p.y < 0.0 || p.y > 1.0 {
                out.push(Diagnostic {
                    stroke: si + 1,
                    point: pi + 1,
                    rule: "y out of [0,1]".into(),
                });
            }
        }
        for (pi, w) in s.points.windows(2).enumerate() {
            if w[0] == w[1] {
                out.push(Diagnostic {
                    stroke: si + 1,
                    point: pi + 2,
                    rule: "repeated point".into(),
                });
            }
        }
    }
    out
}
