//! Normalization pipeline: dedup, location/size normalization,
//! equal-distance resampling, smoothing.
//!
//! The stages run in that order on every stroke. After the pipeline the
//! character sits in the unit box (min x = min y = 0, larger box side = 1),
//! consecutive points are a fixed distance apart, and the trace roughness is
//! reduced by a centered moving average that leaves stroke endpoints
//! untouched. The detectors' point-count thresholds assume this sampling
//! density.

use serde::{Deserialize, Serialize};

use crate::ink::{Character, Point, Stroke};

/// How coordinates are mapped into the unit box.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizeMode {
    /// One shared scale 1/max(width, height): aspect ratio preserved, the
    /// longer box side spans exactly [0, 1].
    #[default]
    Uniform,
    /// Independent per-axis scaling: both axes span [0, 1]. Distorts
    /// curvature; kept for comparison.
    PerAxis,
}

/// Pipeline constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessParams {
    /// Target distance between consecutive points, in normalized units.
    pub delta: f64,
    /// Moving-average window length; odd, >= 1.
    pub smooth_window: usize,
    /// Number of smoothing passes; 0 disables smoothing.
    pub smooth_passes: usize,
    pub normalize: NormalizeMode,
}

impl Default for PreprocessParams {
    fn default() -> Self {
        Self {
            delta: 0.01,
            smooth_window: 5,
            smooth_passes: 1,
            normalize: NormalizeMode::Uniform,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PreprocessError {
    #[error("delta must be > 0 (got {0})")]
    BadDelta(f64),
    #[error("smooth_window must be odd and >= 1 (got {0})")]
    BadWindow(usize),
    #[error("degenerate character: all points identical")]
    DegenerateCharacter,
    #[error("character has no points")]
    Empty,
}

impl PreprocessParams {
    pub fn validate(&self) -> Result<(), PreprocessError> {
        if !(self.delta > 0.0) {
            return Err(PreprocessError::BadDelta(self.delta));
        }
        if self.smooth_window == 0 || self.smooth_window % 2 == 0 {
            return Err(PreprocessError::BadWindow(self.smooth_window));
        }
        Ok(())
    }
}

/// Drop consecutive duplicate points, keeping the first occurrence.
/// Idempotent; non-consecutive duplicates are left alone.
pub fn remove_repeated_points(s: &Stroke) -> Stroke {
    let mut out: Vec<Point> = Vec::with_capacity(s.len());
    for &p in &s.points {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    Stroke::new(out)
}

/// Map the character into the unit box with one shared affine map
/// (translate the bounding-box corner to the origin, then scale).
pub fn normalize_character(
    c: &Character,
    mode: NormalizeMode,
) -> Result<Character, PreprocessError> {
    let pts = || c.strokes.iter().flat_map(|s| s.points.iter());
    if pts().next().is_none() {
        return Err(PreprocessError::Empty);
    }
    let min_x = pts().map(|p| p.x).fold(f64::INFINITY, f64::min);
    let max_x = pts().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
    let min_y = pts().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let max_y = pts().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
    let (w, h) = (max_x - min_x, max_y - min_y);
    if w == 0.0 && h == 0.0 {
        return Err(PreprocessError::DegenerateCharacter);
    }
    let map = |p: &Point| -> Point {
        let (sx, sy) = match mode {
            NormalizeMode::Uniform => {
                let s = 1.0 / w.max(h);
                (s, s)
            }
            NormalizeMode::PerAxis => (
                if w > 0.0 { 1.0 / w } else { 0.0 },
                if h > 0.0 { 1.0 / h } else { 0.0 },
            ),
        };
        Point::new(
            ((p.x - min_x) * sx).clamp(0.0, 1.0),
            ((p.y - min_y) * sy).clamp(0.0, 1.0),
        )
    };
    let mut out = c.clone();
    for s in &mut out.strokes {
        for p in &mut s.points {
            *p = map(p);
        }
    }
    Ok(out)
}

/// Resample a stroke so consecutive points are exactly `delta` apart.
///
/// Walks the polyline and emits the first crossing of a circle of radius
/// `delta` around the previously emitted point, so every output point lies on
/// the input polyline and every consecutive distance equals `delta` (the
/// final gap to the preserved last point may be shorter).
pub fn resample(s: &Stroke, delta: f64) -> Result<Stroke, PreprocessError> {
    if !(delta > 0.0) {
        return Err(PreprocessError::BadDelta(delta));
    }
    if s.len() < 2 {
        return Ok(s.clone());
    }
    let pts = &s.points;
    let mut out = vec![pts[0]];
    let mut cur = pts[0]; // last emitted point
    let mut seg = 0; // current segment index: pts[seg] -> pts[seg+1]
    let mut pos = pts[0]; // current walk position on that segment
    while seg + 1 < pts.len() {
        let end = pts[seg + 1];
        let d_end = pos.distance(&end);
        // does the circle of radius delta around `cur` cross [pos, end]?
        if cur.distance(&end) >= delta && d_end > 0.0 {
            // solve |pos + t*(end-pos) - cur| = delta for t in (0, 1]
            let (ex, ey) = (end.x - pos.x, end.y - pos.y);
            let (fx, fy) = (pos.x - cur.x, pos.y - cur.y);
            let a = ex * ex + ey * ey;
            let b = 2.0 * (ex * fx + ey * fy);
            let cc = fx * fx + fy * fy - delta * delta;
            let disc = (b * b - 4.0 * a * cc).max(0.0);
            let t = ((-b + disc.sqrt()) / (2.0 * a)).clamp(0.0, 1.0);
            let hit = Point::new(pos.x + t * ex, pos.y + t * ey);
            out.push(hit);
            cur = hit;
            pos = hit;
        } else {
            seg += 1;
            pos = end;
        }
    }
    let last = *pts.last().expect("non-empty");
    match out.last() {
        Some(p) if p.distance(&last) <= delta * 1e-6 => {
            *out.last_mut().expect("non-empty") = last;
        }
        _ => out.push(last),
    }
    Ok(Stroke::new(out))
}

/// Centered moving average of both coordinate sequences, window truncated
/// symmetrically at the stroke ends (so the endpoints are exact fixed
/// points), applied `passes` times.
pub fn smooth(s: &Stroke, window: usize, passes: usize) -> Stroke {
    if window <= 1 || passes == 0 || s.len() < 3 {
        return s.clone();
    }
    let half = window / 2;
    let mut pts = s.points.clone();
    for _ in 0..passes {
        let n = pts.len();
        let mut next = pts.clone();
        for (i, slot) in next.iter_mut().enumerate() {
            let h = half.min(i).min(n - 1 - i);
            if h == 0 {
                continue;
            }
            let span = &pts[i - h..=i + h];
            let k = span.len() as f64;
            slot.x = span.iter().map(|p| p.x).sum::<f64>() / k;
            slot.y = span.iter().map(|p| p.y).sum::<f64>() / k;
        }
        pts = next;
    }
    Stroke::new(pts)
}

/// Full pipeline: dedup, normalize, resample, smooth, applied to every
/// stroke. The output passes [`crate::ink::validate`] with no findings.
pub fn preprocess_character(
    c: &Character,
    params: &PreprocessParams,
) -> Result<Character, PreprocessError> {
    params.validate()?;
    let mut work = c.clone();
    work.strokes = work.strokes.iter().map(remove_repeated_points).collect();
    work = normalize_character(&work, params.normalize)?;
    work.strokes = work
        .strokes
        .iter()
        .map(|s| resample(s, params.delta))
        .collect::<Result<_, _>>()?;
    work.strokes = work
        .strokes
        .iter()
        .map(|s| smooth(s, params.smooth_window, params.smooth_passes))
        .collect();
    // smoothing of a resampled stroke cannot introduce duplicates, but a
    // sub-delta stroke can collapse; dedup once more to keep the contract
    work.strokes = work.strokes.iter().map(remove_repeated_points).collect();
    Ok(work)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ink::validate;

    fn stroke(pts: &[(f64, f64)]) -> Stroke {
        Stroke::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    #[test]
    fn dedup_consecutive_only() {
        let s = stroke(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(remove_repeated_points(&s).len(), 2);
        let s2 = stroke(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        assert_eq!(remove_repeated_points(&s2), s2);
        let s3 = stroke(&[(0.0, 0.0)]);
        assert_eq!(remove_repeated_points(&s3), s3);
    }

    #[test]
    fn dedup_idempotent() {
        let s = stroke(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (1.0, 0.0)]);
        let once = remove_repeated_points(&s);
        assert_eq!(remove_repeated_points(&once), once);
    }

    #[test]
    fn normalize_uniform_long_side_dominates() {
        // box [2,4] x [10,11]: width 2 dominates, x spans [0,1], y spans [0,0.5]
        let c = Character::new(vec![stroke(&[(2.0, 10.0), (4.0, 11.0)])]);
        let n = normalize_character(&c, NormalizeMode::Uniform).unwrap();
        let p0 = n.strokes[0].pt(1);
        let p1 = n.strokes[0].pt(2);
        assert!((p0.x - 0.0).abs() < 1e-12 && (p0.y - 0.0).abs() < 1e-12);
        assert!((p1.x - 1.0).abs() < 1e-12 && (p1.y - 0.5).abs() < 1e-12);
    }

    #[test]
    fn normalize_identity_on_unit_box() {
        let c = Character::new(vec![stroke(&[(0.0, 0.0), (1.0, 1.0), (0.3, 0.7)])]);
        let n = normalize_character(&c, NormalizeMode::Uniform).unwrap();
        assert_eq!(n, c);
    }

    #[test]
    fn normalize_degenerate_errors() {
        let c = Character::new(vec![stroke(&[(0.5, 0.5), (0.5, 0.5)])]);
        assert_eq!(
            normalize_character(&c, NormalizeMode::Uniform).unwrap_err(),
            PreprocessError::DegenerateCharacter
        );
    }

    #[test]
    fn normalize_idempotent() {
        let c = Character::new(vec![stroke(&[(2.0, 10.0), (4.0, 11.0), (3.0, 10.2)])]);
        let once = normalize_character(&c, NormalizeMode::Uniform).unwrap();
        let twice = normalize_character(&once, NormalizeMode::Uniform).unwrap();
        for (a, b) in once.strokes[0].points.iter().zip(&twice.strokes[0].points) {
            assert!(a.distance(b) < 1e-9);
        }
    }

    #[test]
    fn normalize_per_axis_fills_both() {
        let c = Character::new(vec![stroke(&[(2.0, 10.0), (4.0, 11.0)])]);
        let n = normalize_character(&c, NormalizeMode::PerAxis).unwrap();
        let p1 = n.strokes[0].pt(2);
        assert!((p1.x - 1.0).abs() < 1e-12 && (p1.y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resample_uniform_line() {
        let s = stroke(&[(0.0, 0.0), (1.0, 0.0)]);
        let r = resample(&s, 0.1).unwrap();
        assert_eq!(r.len(), 11);
        for (i, p) in r.points.iter().enumerate() {
            assert!((p.x - 0.1 * i as f64).abs() < 1e-9, "i={i} x={}", p.x);
            assert_eq!(p.y, 0.0);
        }
    }

    #[test]
    fn resample_shorter_than_step_keeps_endpoints() {
        let s = stroke(&[(0.0, 0.0), (0.03, 0.0), (0.05, 0.0)]);
        let r = resample(&s, 0.1).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.pt(1), Point::new(0.0, 0.0));
        assert_eq!(r.pt(2), Point::new(0.05, 0.0));
    }

    #[test]
    fn resample_circle_spacing_audit() {
        let n = 500;
        let pts: Vec<(f64, f64)> = (0..=n)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                (0.5 + 0.4 * a.cos(), 0.5 + 0.4 * a.sin())
            })
            .collect();
        let s = stroke(&pts);
        let r = resample(&s, 0.01).unwrap();
        for w in r.points.windows(2).take(r.len() - 2) {
            let d = w[0].distance(&w[1]);
            assert!((0.009..=0.011).contains(&d), "spacing {d}");
        }
        let last_gap = r.points[r.len() - 2].distance(&r.points[r.len() - 1]);
        assert!(last_gap <= 0.011);
    }

    #[test]
    fn resample_rejects_bad_delta() {
        let s = stroke(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(resample(&s, 0.0).is_err());
    }

    #[test]
    fn smooth_keeps_collinear_points() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64 * 0.1, 0.0)).collect();
        let s = stroke(&pts);
        let sm = smooth(&s, 5, 1);
        for (a, b) in s.points.iter().zip(&sm.points) {
            assert!(a.distance(b) < 1e-12);
        }
    }

    #[test]
    fn smooth_zero_passes_is_identity() {
        let s = stroke(&[(0.0, 0.0), (0.3, 0.9), (1.0, 0.1)]);
        assert_eq!(smooth(&s, 5, 0), s);
    }

    #[test]
    fn smooth_reduces_zig_amplitude() {
        // single zig point between two collinear runs; window 3 averages it
        // with its on-line neighbors, strictly reducing the amplitude
        let s = stroke(&[
            (0.0, 0.0),
            (0.1, 0.0),
            (0.2, 0.0),
            (0.3, 0.3),
            (0.4, 0.0),
            (0.5, 0.0),
            (0.6, 0.0),
        ]);
        let sm = smooth(&s, 3, 1);
        let zig = sm.pt(4).y;
        assert!(zig > 0.0 && zig < 0.3, "zig {zig}");
        assert_eq!(sm.pt(1), s.pt(1));
        assert_eq!(sm.pt(7), s.pt(7));
    }

    #[test]
    fn smooth_preserves_endpoints() {
        let s = stroke(&[(0.0, 0.0), (0.3, 0.9), (0.5, 0.2), (0.8, 0.7), (1.0, 0.1)]);
        let sm = smooth(&s, 5, 3);
        assert_eq!(sm.pt(1), s.pt(1));
        assert_eq!(sm.pt(5), s.pt(5));
    }

    #[test]
    fn pipeline_bounds_and_spacing() {
        let pts: Vec<(f64, f64)> = (0..200)
            .map(|i| {
                let t = i as f64 / 199.0;
                (
                    3.0 + 2.0 * t + 0.05 * (t * 40.0).sin(),
                    7.0 + 1.0 * (t * 3.0).cos(),
                )
            })
            .collect();
        let c = Character::new(vec![stroke(&pts)]);
        let out = preprocess_character(&c, &PreprocessParams::default()).unwrap();
        assert!(validate(&out).is_empty());
        let all: Vec<Point> = out.strokes[0].points.clone();
        let min_x = all.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
        let min_y = all.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
        let max_all = all
            .iter()
            .flat_map(|p| [p.x, p.y])
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(min_x.abs() < 1e-9 && min_y.abs() < 1e-9);
        assert!((max_all - 1.0).abs() < 1e-9);
        // the resample stage emits exact delta spacing; the later smoothing
        // pass contracts it a little where curvature is high
        for w in all.windows(2).take(all.len() - 2) {
            let d = w[0].distance(&w[1]);
            assert!((0.007..=0.011).contains(&d), "spacing {d}");
        }
    }

    #[test]
    fn pipeline_keeps_point_strokes() {
        let c = Character::new(vec![
            stroke(&[(0.0, 0.0), (10.0, 0.0)]),
            stroke(&[(5.0, 5.0)]),
        ]);
        let out = preprocess_character(&c, &PreprocessParams::default()).unwrap();
        assert_eq!(out.strokes[1].len(), 1);
    }

    #[test]
    fn pipeline_near_idempotent() {
        let pts: Vec<(f64, f64)> = (0..150)
            .map(|i| {
                let t = i as f64 / 149.0 * std::f64::consts::PI;
                (t.cos(), t.sin())
            })
            .collect();
        let c = Character::new(vec![stroke(&pts)]);
        let once = preprocess_character(&c, &PreprocessParams::default()).unwrap();
        let twice = preprocess_character(&once, &PreprocessParams::default()).unwrap();
        // same stroke structure, points within smoothing tolerance
        assert_eq!(once.strokes.len(), twice.strokes.len());
        let n = once.strokes[0].len().min(twice.strokes[0].len());
        for i in 1..=n.min(10) {
            assert!(once.strokes[0].pt(i).distance(&twice.strokes[0].pt(i)) < 0.02);
        }
    }
}
