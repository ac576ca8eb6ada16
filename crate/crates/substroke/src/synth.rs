//! Ground-truth generator: ideal characters composed from labeled
//! primitives, plus a handwriting-style perturbation model.
//!
//! Every composed character carries its true segmentation (boundary indices,
//! structural labels, and boundary positions as arc-length fractions so the
//! truth survives resampling). Randomness comes from SplitMix64 — seeded,
//! platform-independent, and stable across runs — so corpora are reproducible
//! byte for byte; per-sample generators are derived from (seed, class,
//! sample) and never shared.

use serde::{Deserialize, Serialize};

use crate::geometry::{cross, UnitVec};
use crate::ink::{Character, Point, Stroke, SubUnitLabel};

/// SplitMix64: 64-bit mixing generator (Steele, Lea, Flood 2014). Chosen for
/// reproducibility — the sequence is fully specified by this code.
#[derive(Clone, Debug)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal via Box–Muller.
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_f64().max(f64::MIN_POSITIVE);
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

/// Derive an independent stream from key material.
pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut acc = 0x243F_6A88_85A3_08D3u64; // arbitrary odd constant
    for &p in parts {
        let mut s = SplitMix64::new(acc ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        acc = s.next_u64();
    }
    acc
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SynthError {
    #[error("degenerate primitive geometry: {0}")]
    Degenerate(String),
    #[error("disconnected primitives at stroke {stroke} junction {junction}: gap {gap}")]
    Disconnected {
        stroke: usize,
        junction: usize,
        gap: f64,
    },
    #[error("primitive {index} in stroke {stroke} samples to only {points} points")]
    PrimitiveTooShort {
        stroke: usize,
        index: usize,
        points: usize,
    },
    #[error("a point primitive must be the only primitive of its stroke")]
    PointNotAlone,
}

/// One labeled building block of an ideal stroke. Drawing direction is
/// encoded geometrically: line from→to order, arc and loop sweep sign
/// (positive sweeps counter-clockwise).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimitiveSpec {
    Line {
        from: [f64; 2],
        to: [f64; 2],
    },
    Arc {
        center: [f64; 2],
        radius: f64,
        start_deg: f64,
        sweep_deg: f64,
    },
    /// A circle traversed once, stopping `gap` short of closure (chord
    /// length of the opening). Positive sweep goes counter-clockwise.
    Loop {
        center: [f64; 2],
        radius: f64,
        start_deg: f64,
        ccw: bool,
        gap: f64,
    },
    /// A one- or two-point stroke.
    Dot {
        at: [f64; 2],
        two_points: bool,
    },
}

impl PrimitiveSpec {
    pub fn label(&self) -> SubUnitLabel {
        match self {
            PrimitiveSpec::Line { .. } => SubUnitLabel::Straight,
            PrimitiveSpec::Arc { sweep_deg, .. } => {
                if *sweep_deg < 0.0 {
                    SubUnitLabel::Cw
                } else {
                    SubUnitLabel::Ccw
                }
            }
            PrimitiveSpec::Loop { .. } => SubUnitLabel::Loop,
            PrimitiveSpec::Dot { .. } => SubUnitLabel::Point,
        }
    }

    fn loop_sweep_deg(radius: f64, ccw: bool, gap: f64) -> f64 {
        let gap_angle = 2.0 * (gap / (2.0 * radius)).asin();
        let mag = 360.0 - gap_angle.to_degrees();
        if ccw {
            mag
        } else {
            -mag
        }
    }

    pub fn start_point(&self) -> Point {
        match *self {
            PrimitiveSpec::Line { from, .. } => Point::new(from[0], from[1]),
            PrimitiveSpec::Arc {
                center,
                radius,
                start_deg,
                ..
            }
            | PrimitiveSpec::Loop {
                center,
                radius,
                start_deg,
                ..
            } => {
                let a = start_deg.to_radians();
                Point::new(center[0] + radius * a.cos(), center[1] + radius * a.sin())
            }
            PrimitiveSpec::Dot { at, .. } => Point::new(at[0], at[1]),
        }
    }

    pub fn end_point(&self) -> Point {
        match *self {
            PrimitiveSpec::Line { to, .. } => Point::new(to[0], to[1]),
            PrimitiveSpec::Arc {
                center,
                radius,
                start_deg,
                sweep_deg,
            } => {
                let a = (start_deg + sweep_deg).to_radians();
                Point::new(center[0] + radius * a.cos(), center[1] + radius * a.sin())
            }
            PrimitiveSpec::Loop {
                center,
                radius,
                start_deg,
                ccw,
                gap,
            } => {
                let sweep = Self::loop_sweep_deg(radius, ccw, gap);
                let a = (start_deg + sweep).to_radians();
                Point::new(center[0] + radius * a.cos(), center[1] + radius * a.sin())
            }
            PrimitiveSpec::Dot { at, .. } => Point::new(at[0], at[1]),
        }
    }
}

/// Sample a primitive at arc-length spacing `delta`. The step count is
/// rounded so both endpoints are hit exactly and spacing stays within a few
/// percent of `delta`; a loop's closure chord therefore equals its `gap`
/// exactly.
pub fn sample_primitive(spec: &PrimitiveSpec, delta: f64) -> Result<Stroke, SynthError> {
    if !(delta > 0.0) {
        return Err(SynthError::Degenerate(format!("delta {delta}")));
    }
    let pts = match *spec {
        PrimitiveSpec::Line { from, to } => {
            let len = (to[0] - from[0]).hypot(to[1] - from[1]);
            if len == 0.0 {
                return Err(SynthError::Degenerate("zero-length line".into()));
            }
            let n = (len / delta).round().max(1.0) as usize;
            (0..=n)
                .map(|k| {
                    let t = k as f64 / n as f64;
                    Point::new(from[0] + t * (to[0] - from[0]), from[1] + t * (to[1] - from[1]))
                })
                .collect()
        }
        PrimitiveSpec::Arc {
            center,
            radius,
            start_deg,
            sweep_deg,
        } => {
            if radius <= 0.0 || sweep_deg == 0.0 {
                return Err(SynthError::Degenerate("arc radius/sweep".into()));
            }
            sample_circle(center, radius, start_deg, sweep_deg, delta)
        }
        PrimitiveSpec::Loop {
            center,
            radius,
            start_deg,
            ccw,
            gap,
        } => {
            if radius <= 0.0 || gap <= 0.0 || gap >= 2.0 * radius {
                return Err(SynthError::Degenerate("loop radius/gap".into()));
            }
            let sweep = PrimitiveSpec::loop_sweep_deg(radius, ccw, gap);
            sample_circle(center, radius, start_deg, sweep, delta)
        }
        PrimitiveSpec::Dot { at, two_points } => {
            let mut pts = vec![Point::new(at[0], at[1])];
            if two_points {
                pts.push(Point::new(at[0] + delta, at[1]));
            }
            pts
        }
    };
    Ok(Stroke::new(pts))
}

fn sample_circle(center: [f64; 2], r: f64, start_deg: f64, sweep_deg: f64, delta: f64) -> Vec<Point> {
    let arc_len = sweep_deg.abs().to_radians() * r;
    let n = (arc_len / delta).round().max(1.0) as usize;
    (0..=n)
        .map(|k| {
            let a = (start_deg + sweep_deg * k as f64 / n as f64).to_radians();
            Point::new(center[0] + r * a.cos(), center[1] + r * a.sin())
        })
        .collect()
}

/// True segmentation of one composed stroke.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrokeTruth {
    /// Segmentation points on the composed (unperturbed) stroke, 1-based.
    pub pi: Vec<usize>,
    /// Label of each segment between consecutive points (a single label for
    /// a point stroke).
    pub labels: Vec<SubUnitLabel>,
    /// Interior boundaries as arc-length fractions, for re-locating them
    /// after resampling.
    pub boundary_fractions: Vec<f64>,
}

impl StrokeTruth {
    /// Expected interior boundary indices on a stroke resampled to
    /// `n_points` roughly uniform points.
    pub fn expected_boundaries(&self, n_points: usize) -> Vec<usize> {
        self.boundary_fractions
            .iter()
            .map(|f| (f * (n_points - 1) as f64).round() as usize + 1)
            .collect()
    }
}

/// True segmentation of a composed character.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub strokes: Vec<StrokeTruth>,
}

impl GroundTruth {
    pub fn subunit_count(&self) -> usize {
        self.strokes.iter().map(|s| s.labels.len()).sum()
    }

    pub fn labels(&self) -> Vec<SubUnitLabel> {
        self.strokes.iter().flat_map(|s| s.labels.iter().copied()).collect()
    }
}

const CONNECT_TOL: f64 = 1e-9;

/// Compose strokes from per-stroke primitive lists sampled at `delta`.
///
/// Consecutive primitives must connect end-to-start; the shared point is kept
/// once. The returned truth marks each junction with the boundary index the
/// ideal rules place there: after a loop the boundary is one past its last
/// point, at a loop's start its first point, and at a curve/straight junction
/// the junction point joins the side whose local turn sign it shares.
pub fn compose_character(
    strokes: &[Vec<PrimitiveSpec>],
    delta: f64,
) -> Result<(Character, GroundTruth), SynthError> {
    let mut out_strokes = Vec::with_capacity(strokes.len());
    let mut truths = Vec::with_capacity(strokes.len());
    for (si, prims) in strokes.iter().enumerate() {
        if prims.is_empty() {
            return Err(SynthError::Degenerate(format!("stroke {} has no primitives", si + 1)));
        }
        if prims.len() > 1 && prims.iter().any(|p| matches!(p, PrimitiveSpec::Dot { .. })) {
            return Err(SynthError::PointNotAlone);
        }
        let mut pts: Vec<Point> = Vec::new();
        let mut junctions: Vec<(usize, SubUnitLabel, SubUnitLabel)> = Vec::new();
        for (ki, spec) in prims.iter().enumerate() {
            let piece = sample_primitive(spec, delta)?;
            if prims.len() > 1 && piece.len() < 5 {
                return Err(SynthError::PrimitiveTooShort {
                    stroke: si + 1,
                    index: ki + 1,
                    points: piece.len(),
                });
            }
            if ki == 0 {
                pts.extend(piece.points);
            } else {
                let gap = pts.last().expect("non-empty").distance(&piece.points[0]);
                if gap > CONNECT_TOL {
                    return Err(SynthError::Disconnected {
                        stroke: si + 1,
                        junction: ki,
                        gap,
                    });
                }
                junctions.push((pts.len(), prims[ki - 1].label(), spec.label()));
                pts.extend(piece.points.into_iter().skip(1));
            }
        }
        let stroke = Stroke::new(pts);
        let truth = stroke_truth(&stroke, &junctions, prims);
        out_strokes.push(stroke);
        truths.push(truth);
    }
    Ok((
        Character::new(out_strokes),
        GroundTruth { strokes: truths },
    ))
}

/// Sign of the turn at point `at` (needs at-1 and at+1 in range).
fn turn_sign_at(s: &Stroke, at: usize) -> i8 {
    let a = UnitVec::between(s.pt(at - 1), s.pt(at));
    let b = UnitVec::between(s.pt(at), s.pt(at + 1));
    match (a, b) {
        (Ok(a), Ok(b)) => {
            let v = cross(a, b);
            if v > 1e-9 {
                1
            } else if v < -1e-9 {
                -1
            } else {
                0
            }
        }
        _ => 0,
    }
}

fn stroke_truth(
    s: &Stroke,
    junctions: &[(usize, SubUnitLabel, SubUnitLabel)],
    prims: &[PrimitiveSpec],
) -> StrokeTruth {
    let n = s.len();
    let labels: Vec<SubUnitLabel> = prims.iter().map(PrimitiveSpec::label).collect();
    if n <= 2 {
        return StrokeTruth {
            pi: if n == 1 { vec![1] } else { vec![1, 2] },
            labels: vec![SubUnitLabel::Point],
            boundary_fractions: Vec::new(),
        };
    }
    let mut interior: Vec<usize> = Vec::new();
    for &(k, before, after) in junctions {
        let b = if after == SubUnitLabel::Loop {
            k // a loop segment starts at its first point
        } else if before == SubUnitLabel::Loop {
            k + 1 // the boundary after a loop sits one past its last point
        } else {
            // the junction point joins the side whose turn sign it shares
            let here = turn_sign_at(s, k);
            let prev = turn_sign_at(s, k - 1);
            let next = turn_sign_at(s, k + 1);
            if here == prev && here != next {
                k + 1
            } else {
                k
            }
        };
        interior.push(b.clamp(2, n - 1));
    }
    interior.sort_unstable();
    interior.dedup();

    // cumulative arc length for fraction bookkeeping
    let total = s.arc_length();
    let mut cum = Vec::with_capacity(n);
    cum.push(0.0);
    for w in s.points.windows(2) {
        cum.push(cum.last().unwrap() + w[0].distance(&w[1]));
    }
    let fractions = interior.iter().map(|&i| cum[i - 1] / total).collect();

    let mut pi = Vec::with_capacity(interior.len() + 2);
    pi.push(1);
    pi.extend(interior.iter().copied());
    pi.push(n);
    StrokeTruth {
        pi,
        labels,
        boundary_fractions: fractions,
    }
}

/// Handwriting-style noise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    /// Per-point Gaussian displacement scale, normalized units. The noise is
    /// band-limited (smoothed across neighboring points) so it behaves like
    /// writing tremor rather than per-sample static.
    pub jitter_sigma: f64,
    /// Maximum perpendicular bowing of a stroke, normalized units. Models
    /// the way handwritten "straight" strokes come out curved.
    pub bow: f64,
    pub seed: u64,
}

/// Apply bowing then jitter. Deterministic for a given seed; stroke and
/// point counts are unchanged. Callers re-preprocess before segmentation.
pub fn perturb(c: &Character, noise: &NoiseParams) -> Character {
    let mut out = c.clone();
    for (si, stroke) in out.strokes.iter_mut().enumerate() {
        let mut rng = SplitMix64::new(derive_seed(&[noise.seed, si as u64]));
        let n = stroke.len();
        if n >= 2 {
            bow_stroke(stroke, noise.bow, &mut rng);
        }
        // band-limited jitter: iid gaussian displacements smoothed with a
        // short moving average, rescaled to the requested sigma
        let window = 9usize;
        let half = window / 2;
        let raw: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.next_gaussian(), rng.next_gaussian()))
            .collect();
        for i in 0..n {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            let k = (hi - lo + 1) as f64;
            let mx = raw[lo..=hi].iter().map(|v| v.0).sum::<f64>() / k;
            let my = raw[lo..=hi].iter().map(|v| v.1).sum::<f64>() / k;
            let scale = noise.jitter_sigma * k.sqrt();
            stroke.points[i].x += scale * mx;
            stroke.points[i].y += scale * my;
        }
    }
    out
}

fn bow_stroke(stroke: &mut Stroke, bow: f64, rng: &mut SplitMix64) {
    let n = stroke.len();
    let first = stroke.points[0];
    let last = stroke.points[n - 1];
    let chord = first.distance(&last);
    let arc = stroke.arc_length();
    // perpendicular of the end-to-end chord; for nearly closed strokes the
    // chord direction is unstable, so draw a direction instead
    let (nx, ny) = if chord > 0.05 * arc && chord > 0.0 {
        let dx = (last.x - first.x) / chord;
        let dy = (last.y - first.y) / chord;
        (-dy, dx)
    } else {
        let a = rng.range(0.0, std::f64::consts::TAU);
        (a.cos(), a.sin())
    };
    let sign = if rng.next_f64() < 0.5 { -1.0 } else { 1.0 };
    let amp = bow * sign;
    for (i, p) in stroke.points.iter_mut().enumerate() {
        let t = i as f64 / (n - 1) as f64;
        let w = (std::f64::consts::PI * t).sin();
        p.x += amp * w * nx;
        p.y += amp * w * ny;
    }
}

/// Rotate (degrees, about the point cloud center), scale, and translate a
/// character. Isometries leave the ground truth untouched.
pub fn transform_character(c: &Character, rot_deg: f64, scale: f64, tx: f64, ty: f64) -> Character {
    let mut out = c.clone();
    let pts = || out.strokes.iter().flat_map(|s| s.points.iter());
    let n = pts().count() as f64;
    let cx = pts().map(|p| p.x).sum::<f64>() / n;
    let cy = pts().map(|p| p.y).sum::<f64>() / n;
    let (sa, ca) = rot_deg.to_radians().sin_cos();
    for s in &mut out.strokes {
        for p in &mut s.points {
            let (dx, dy) = (p.x - cx, p.y - cy);
            p.x = cx + scale * (ca * dx - sa * dy) + tx;
            p.y = cy + scale * (sa * dx + ca * dy) + ty;
        }
    }
    out
}

pub mod corpus;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{classify_single_subunit, extract_ideal_subunits};

    #[test]
    fn splitmix_reference_values() {
        // first outputs for seed 1234567 (published splitmix64 test vector)
        let mut r = SplitMix64::new(1234567);
        assert_eq!(r.next_u64(), 6457827717110365317);
        assert_eq!(r.next_u64(), 3203168211198807973);
    }

    #[test]
    fn line_samples_uniform_and_straight() {
        let spec = PrimitiveSpec::Line {
            from: [0.0, 0.0],
            to: [0.0, 1.0],
        };
        let s = sample_primitive(&spec, 0.01).unwrap();
        assert_eq!(s.len(), 101);
        assert_eq!(
            classify_single_subunit(&s, 0.01).unwrap(),
            SubUnitLabel::Straight
        );
    }

    #[test]
    fn arc_classifies_by_construction() {
        let spec = PrimitiveSpec::Arc {
            center: [0.5, 0.5],
            radius: 0.2,
            start_deg: 90.0,
            sweep_deg: -160.0,
        };
        let s = sample_primitive(&spec, 0.01).unwrap();
        assert_eq!(classify_single_subunit(&s, 0.01).unwrap(), SubUnitLabel::Cw);
    }

    #[test]
    fn loop_satisfies_closure_and_turn() {
        let spec = PrimitiveSpec::Loop {
            center: [0.5, 0.5],
            radius: 0.15,
            start_deg: -90.0,
            ccw: true,
            gap: 0.01,
        };
        let s = sample_primitive(&spec, 0.01).unwrap();
        let gap = s.pt(1).distance(&s.pt(s.len()));
        assert!((gap - 0.01).abs() < 1e-9, "gap {gap}");
        assert_eq!(classify_single_subunit(&s, 0.01).unwrap(), SubUnitLabel::Loop);
    }

    #[test]
    fn single_line_truth_covers_stroke() {
        let (c, t) = compose_character(
            &[vec![PrimitiveSpec::Line {
                from: [0.0, 0.0],
                to: [0.5, 0.0],
            }]],
            0.01,
        )
        .unwrap();
        assert_eq!(t.strokes[0].pi, vec![1, c.strokes[0].len()]);
        assert_eq!(t.strokes[0].labels, vec![SubUnitLabel::Straight]);
    }

    #[test]
    fn disconnected_primitives_error() {
        let r = compose_character(
            &[vec![
                PrimitiveSpec::Line {
                    from: [0.0, 0.0],
                    to: [0.5, 0.0],
                },
                PrimitiveSpec::Line {
                    from: [0.6, 0.0],
                    to: [0.6, 0.5],
                },
            ]],
            0.01,
        );
        assert!(matches!(r, Err(SynthError::Disconnected { .. })));
    }

    #[test]
    fn composed_truth_matches_ideal_segmenter() {
        // straight lead-in meeting a clockwise arc at a sharp corner; the
        // arc curves away from the line so nothing comes near closure
        let lead = PrimitiveSpec::Line {
            from: [0.2, 0.9],
            to: [0.2, 0.5],
        };
        // corner at (0.2, 0.5): tangent flips from -90 deg to +45 deg, then
        // a clockwise arc (center on the right of the new tangent)
        let r = 0.15;
        let cd = (45.0f64 - 90.0).to_radians();
        let center = [0.2 + r * cd.cos(), 0.5 + r * cd.sin()];
        let arc = PrimitiveSpec::Arc {
            center,
            radius: r,
            start_deg: 45.0 + 90.0,
            sweep_deg: -150.0,
        };
        let (c, truth) = compose_character(&[vec![lead, arc]], 0.01).unwrap();
        let subs = extract_ideal_subunits(&c.strokes[0], 1, 0.01).unwrap();
        let mut got_pi = vec![1];
        got_pi.extend(subs.iter().skip(1).map(|u| u.start));
        got_pi.push(c.strokes[0].len());
        assert_eq!(got_pi, truth.strokes[0].pi, "subs = {subs:?}");
        let got_labels: Vec<SubUnitLabel> = subs.iter().map(|u| u.label).collect();
        assert_eq!(got_labels, truth.strokes[0].labels);
    }

    #[test]
    fn perturb_zero_noise_is_identity() {
        let (c, _) = compose_character(
            &[vec![PrimitiveSpec::Line {
                from: [0.1, 0.1],
                to: [0.9, 0.7],
            }]],
            0.01,
        )
        .unwrap();
        let p = perturb(
            &c,
            &NoiseParams {
                jitter_sigma: 0.0,
                bow: 0.0,
                seed: 7,
            },
        );
        assert_eq!(p, c);
    }

    #[test]
    fn perturb_deterministic_and_count_preserving() {
        let (c, _) = compose_character(
            &[
                vec![PrimitiveSpec::Line {
                    from: [0.1, 0.1],
                    to: [0.9, 0.7],
                }],
                vec![PrimitiveSpec::Arc {
                    center: [0.5, 0.5],
                    radius: 0.2,
                    start_deg: 0.0,
                    sweep_deg: 200.0,
                }],
            ],
            0.01,
        )
        .unwrap();
        let noise = NoiseParams {
            jitter_sigma: 0.005,
            bow: 0.015,
            seed: 99,
        };
        let a = perturb(&c, &noise);
        let b = perturb(&c, &noise);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.strokes.len(), c.strokes.len());
        for (x, y) in a.strokes.iter().zip(&c.strokes) {
            assert_eq!(x.len(), y.len());
        }
    }

    #[test]
    fn bowed_line_reads_as_curve() {
        // bow 0.02 over a 0.45 span: end-slope ~ 0.02*pi/0.45 = 0.14, so the
        // long-baseline relation clears the +/-0.1 threshold
        let (c, _) = compose_character(
            &[vec![PrimitiveSpec::Line {
                from: [0.25, 0.5],
                to: [0.70, 0.5],
            }]],
            0.01,
        )
        .unwrap();
        let p = perturb(
            &c,
            &NoiseParams {
                jitter_sigma: 0.0,
                bow: 0.02,
                seed: 3,
            },
        );
        let cfg = crate::config::Config::default();
        let cw = crate::detect::detect_cw_segments(&p.strokes[0], &cfg);
        let ccw = crate::detect::detect_ccw_segments(&p.strokes[0], &cfg);
        assert!(
            !cw.is_empty() || !ccw.is_empty(),
            "bowed line should produce a curve mark"
        );
    }

    #[test]
    fn transform_preserves_structure() {
        let (c, _) = compose_character(
            &[vec![PrimitiveSpec::Arc {
                center: [0.5, 0.5],
                radius: 0.2,
                start_deg: 0.0,
                sweep_deg: -150.0,
            }]],
            0.01,
        )
        .unwrap();
        let t = transform_character(&c, 17.0, 1.0, 0.05, -0.03);
        assert_eq!(
            classify_single_subunit(&t.strokes[0], 0.01).unwrap(),
            SubUnitLabel::Cw
        );
    }
}
