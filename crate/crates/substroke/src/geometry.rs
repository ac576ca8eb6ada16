//! Direction kernels over stroke point sequences.
//!
//! All functions take 1-based point indices. The primitive quantities:
//!
//! - step direction `v_n`: unit vector from point n to n+1 (for the last
//!   point of a near-closed stroke, toward the first point);
//! - turn cross product of two unit directions, whose sign classifies the
//!   local turn: negative = clockwise, positive = counter-clockwise, zero =
//!   straight;
//! - direction change: the unsigned angle between two directions, degrees;
//! - direction relation `g(n, q)`: cross product of the chord from n to q+1
//!   with the step at q — a long-baseline turn reading that is robust to
//!   single-step noise;
//! - windowed turn: angle between the chords spanning `window` points into
//!   and out of a point — the noise-robust per-point turn estimate;
//! - total windowed turn: windowed turns sampled every `window` points and
//!   summed, approximating the total direction change of the span.
//!
//! Angles are degrees throughout.

use crate::ink::{Point, Stroke};

/// A unit direction vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVec {
    pub dx: f64,
    pub dy: f64,
}

impl UnitVec {
    /// Unit vector from `a` to `b`. Fails on coincident points.
    pub fn between(a: Point, b: Point) -> Result<Self, GeometryError> {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let norm = dx.hypot(dy);
        if norm == 0.0 {
            return Err(GeometryError::CoincidentPoints);
        }
        Ok(Self {
            dx: dx / norm,
            dy: dy / norm,
        })
    }

    pub fn dot(&self, other: &UnitVec) -> f64 {
        self.dx * other.dx + self.dy * other.dy
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("coincident points have no direction")]
    CoincidentPoints,
    #[error("index out of range: {n} not in [{lo}, {hi}]")]
    IndexOutOfRange { n: usize, lo: usize, hi: usize },
}

fn check_range(n: usize, lo: usize, hi: usize) -> Result<(), GeometryError> {
    if n < lo || n > hi {
        return Err(GeometryError::IndexOutOfRange { n, lo, hi });
    }
    Ok(())
}

/// Step direction `v_n`: unit vector from point n to point n+1, defined for
/// 1 <= n <= N-1. For n = N the direction is taken toward the first point
/// (the closure convention for loop strokes).
pub fn step_direction(s: &Stroke, n: usize) -> Result<UnitVec, GeometryError> {
    let len = s.len();
    check_range(n, 1, len)?;
    if n == len {
        UnitVec::between(s.pt(len), s.pt(1))
    } else {
        UnitVec::between(s.pt(n), s.pt(n + 1))
    }
}

/// 2-D cross product of two unit directions. Sign < 0 means a clockwise
/// turn from `v1` to `v2`, > 0 counter-clockwise, 0 straight.
pub fn cross(v1: UnitVec, v2: UnitVec) -> f64 {
    v1.dx * v2.dy - v1.dy * v2.dx
}

/// Unsigned angle between two unit directions, in degrees within [0, 180].
/// The dot product is clamped to [-1, 1] before the arc cosine.
pub fn direction_change_deg(v1: UnitVec, v2: UnitVec) -> f64 {
    v1.dot(&v2).clamp(-1.0, 1.0).acos().to_degrees()
}

/// Unit vector from point n to point q.
pub fn point_direction(s: &Stroke, n: usize, q: usize) -> Result<UnitVec, GeometryError> {
    let len = s.len();
    check_range(n, 1, len)?;
    check_range(q, 1, len)?;
    if n == q {
        return Err(GeometryError::CoincidentPoints);
    }
    UnitVec::between(s.pt(n), s.pt(q))
}

/// Direction relation `g(n, q)`: for n < q, the cross product of the chord
/// direction from n to q+1 with the step direction from q to q+1. For n > q
/// the value is `g(q, n)` (the printed magnitude-times-sign form is the
/// identity). Negative values read as clockwise, positive as
/// counter-clockwise.
pub fn direction_relation(s: &Stroke, n: usize, q: usize) -> Result<f64, GeometryError> {
    let len = s.len();
    if n == q {
        return Err(GeometryError::IndexOutOfRange { n, lo: 1, hi: len });
    }
    let (a, b) = if n < q { (n, q) } else { (q, n) };
    check_range(a, 1, len.saturating_sub(2))?;
    check_range(b + 1, 2, len)?;
    let chord = point_direction(s, a, b + 1)?;
    let step = point_direction(s, b, b + 1)?;
    Ok(cross(chord, step))
}

/// Windowed turn at point n: the angle, in degrees, between the chord
/// arriving from n-window and the chord leaving toward n+window. Defined for
/// window+1 <= n <= N-window.
pub fn windowed_turn_deg(s: &Stroke, n: usize, window: usize) -> Result<f64, GeometryError> {
    let len = s.len();
    if window == 0 || len < 2 * window + 1 {
        return Err(GeometryError::IndexOutOfRange { n, lo: 1, hi: 0 });
    }
    check_range(n, window + 1, len - window)?;
    let incoming = point_direction(s, n - window, n)?;
    let outgoing = point_direction(s, n, n + window)?;
    Ok(direction_change_deg(incoming, outgoing))
}

/// Total windowed turn over [n, q]: windowed turns sampled at n, n+window,
/// n+2·window, … ≤ q and summed. Sample points outside the valid windowed
/// band contribute zero, which keeps straight strokes at exactly 0. The
/// value approximates the total direction change of the span; over a full
/// convex loop it is close to 360.
pub fn total_windowed_turn_deg(s: &Stroke, n: usize, q: usize, window: usize) -> f64 {
    assert!(n <= q, "span start {} exceeds end {}", n, q);
    let mut total = 0.0;
    let mut l = n;
    while l <= q {
        if let Ok(t) = windowed_turn_deg(s, l, window) {
            total += t;
        }
        l += window.max(1);
    }
    total
}

/// Euclidean distance between points n and q.
pub fn point_distance(s: &Stroke, n: usize, q: usize) -> f64 {
    s.pt(n).distance(&s.pt(q))
}

/// Signs of the turn cross product at every interior point: entry k (0-based)
/// holds sign(cross(v_{k+1}, v_{k+2})) — the turn at point k+2 — using an
/// exactness tolerance for zero. Helper shared by the ideal segmenter and
/// labeling.
pub(crate) fn turn_signs(s: &Stroke, zero_tol: f64) -> Vec<i8> {
    let n = s.len();
    if n < 3 {
        return Vec::new();
    }
    let mut steps = Vec::with_capacity(n - 1);
    for i in 1..n {
        steps.push(UnitVec::between(s.pt(i), s.pt(i + 1)).ok());
    }
    let mut out = Vec::with_capacity(n - 2);
    for i in 0..n - 2 {
        let v = match (steps[i], steps[i + 1]) {
            (Some(a), Some(b)) => cross(a, b),
            _ => 0.0,
        };
        out.push(if v > zero_tol {
            1
        } else if v < -zero_tol {
            -1
        } else {
            0
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ink::Point;

    fn stroke(pts: &[(f64, f64)]) -> Stroke {
        Stroke::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    #[test]
    fn step_direction_basic() {
        let s = stroke(&[(0.0, 0.0), (0.0, 0.5), (1.0, 0.5)]);
        let v = step_direction(&s, 1).unwrap();
        assert!((v.dx - 0.0).abs() < 1e-12 && (v.dy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn step_direction_diagonal() {
        let s = stroke(&[(0.0, 0.0), (1.0, 1.0)]);
        let v = step_direction(&s, 1).unwrap();
        let r = (2.0f64).sqrt() / 2.0;
        assert!((v.dx - r).abs() < 1e-12 && (v.dy - r).abs() < 1e-12);
    }

    #[test]
    fn step_direction_closure_convention() {
        // last point's direction goes toward the first point
        let s = stroke(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let v = step_direction(&s, 4).unwrap();
        assert!((v.dx - 0.0).abs() < 1e-12 && (v.dy + 1.0).abs() < 1e-12);
    }

    #[test]
    fn cross_signs() {
        let e = UnitVec { dx: 1.0, dy: 0.0 };
        let n = UnitVec { dx: 0.0, dy: 1.0 };
        assert_eq!(cross(e, n), 1.0); // counter-clockwise
        assert_eq!(cross(n, e), -1.0); // clockwise
        assert_eq!(cross(e, e), 0.0); // straight
    }

    #[test]
    fn direction_change_range() {
        let e = UnitVec { dx: 1.0, dy: 0.0 };
        let n = UnitVec { dx: 0.0, dy: 1.0 };
        let w = UnitVec { dx: -1.0, dy: 0.0 };
        assert!((direction_change_deg(e, e) - 0.0).abs() < 1e-12);
        assert!((direction_change_deg(e, n) - 90.0).abs() < 1e-12);
        assert!((direction_change_deg(e, w) - 180.0).abs() < 1e-12);
    }

    #[test]
    fn point_direction_matches_step_and_antisymmetry() {
        let s = stroke(&[(0.0, 0.0), (3.0, 4.0), (6.0, 8.0)]);
        let v = point_direction(&s, 1, 2).unwrap();
        let w = step_direction(&s, 1).unwrap();
        assert!((v.dx - w.dx).abs() < 1e-12 && (v.dy - w.dy).abs() < 1e-12);
        assert!((v.dx - 0.6).abs() < 1e-12 && (v.dy - 0.8).abs() < 1e-12);
        let back = point_direction(&s, 2, 1).unwrap();
        assert!((v.dx + back.dx).abs() < 1e-12 && (v.dy + back.dy).abs() < 1e-12);
    }

    #[test]
    fn relation_zero_on_collinear() {
        let s = stroke(&[(0.0, 0.0), (0.1, 0.0), (0.2, 0.0), (0.3, 0.0)]);
        assert!(direction_relation(&s, 1, 2).unwrap().abs() < 1e-12);
    }

    fn arc_stroke(r: f64, n: usize, ccw: bool) -> Stroke {
        // half circle sampled uniformly
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let t = std::f64::consts::PI * (i as f64) / ((n - 1) as f64);
                let a = if ccw { t } else { -t };
                (r * a.cos(), r * a.sin())
            })
            .collect();
        stroke(&pts)
    }

    #[test]
    fn relation_sign_follows_arc_orientation() {
        let ccw = arc_stroke(0.2, 40, true);
        let cw = arc_stroke(0.2, 40, false);
        // brute force over many pairs
        for n in 1..30 {
            for q in (n + 1)..38 {
                assert!(direction_relation(&ccw, n, q).unwrap() > 0.0, "n={n} q={q}");
                assert!(direction_relation(&cw, n, q).unwrap() < 0.0, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn relation_symmetric_under_swap() {
        let s = arc_stroke(0.2, 40, true);
        let a = direction_relation(&s, 3, 17).unwrap();
        let b = direction_relation(&s, 17, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn windowed_turn_straight_is_zero() {
        let pts: Vec<(f64, f64)> = (0..20).map(|i| (i as f64 * 0.01, 0.0)).collect();
        let s = stroke(&pts);
        for n in 4..=17 {
            assert!(windowed_turn_deg(&s, n, 3).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn windowed_turn_right_angle_corner() {
        // straight arms at least `window` points long on each side
        let mut pts: Vec<(f64, f64)> = (0..6).map(|i| (i as f64 * 0.01, 0.0)).collect();
        pts.extend((1..6).map(|i| (0.05, i as f64 * 0.01)));
        let s = stroke(&pts);
        let apex = 6; // 1-based index of the corner point
        let t = windowed_turn_deg(&s, apex, 3).unwrap();
        assert!((t - 90.0).abs() < 1e-9, "got {t}");
    }

    #[test]
    fn windowed_turn_matches_chord_geometry_on_circle() {
        // circle of radius 0.2 sampled at arc step 0.01: the chord-to-chord
        // angle over a +/-3 window is exactly 3 steps of turning
        let r = 0.2;
        let step = 0.01 / r; // radians per sample
        let n_pts = 80;
        let pts: Vec<(f64, f64)> = (0..n_pts)
            .map(|i| {
                let a = step * i as f64;
                (r * a.cos(), r * a.sin())
            })
            .collect();
        let s = stroke(&pts);
        let expected = (3.0 * step).to_degrees();
        for n in [10usize, 25, 40, 70] {
            let t = windowed_turn_deg(&s, n, 3).unwrap();
            assert!((t - expected).abs() < 1e-9, "n={n}: {t} vs {expected}");
        }
    }

    #[test]
    fn total_windowed_turn_endpoints() {
        let pts: Vec<(f64, f64)> = (0..20).map(|i| (i as f64 * 0.01, 0.0)).collect();
        let s = stroke(&pts);
        assert_eq!(total_windowed_turn_deg(&s, 1, 20, 3), 0.0);
        // single-sample span returns the windowed turn alone
        let t = total_windowed_turn_deg(&s, 8, 8, 3);
        assert_eq!(t, windowed_turn_deg(&s, 8, 3).unwrap());
    }

    #[test]
    fn total_windowed_turn_full_loop_near_360() {
        let r = 0.15;
        let n_pts = (2.0 * std::f64::consts::PI * r / 0.01).round() as usize;
        let pts: Vec<(f64, f64)> = (0..n_pts)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / n_pts as f64;
                (r * a.cos(), r * a.sin())
            })
            .collect();
        let s = stroke(&pts);
        let t = total_windowed_turn_deg(&s, 1, s.len(), 3);
        assert!((t - 360.0).abs() < 30.0, "got {t}");
    }

    #[test]
    fn point_distance_cases() {
        let s = stroke(&[(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(point_distance(&s, 1, 1), 0.0);
        assert_eq!(point_distance(&s, 1, 2), 1.0);
        assert_eq!(point_distance(&s, 2, 1), 1.0);
    }

    #[test]
    fn mirror_negates_cross_preserves_angle() {
        let s = arc_stroke(0.2, 40, true);
        let m = Stroke::new(s.points.iter().map(|p| Point::new(-p.x, p.y)).collect());
        for n in 2..=38 {
            let a = cross(
                step_direction(&s, n - 1).unwrap(),
                step_direction(&s, n).unwrap(),
            );
            let b = cross(
                step_direction(&m, n - 1).unwrap(),
                step_direction(&m, n).unwrap(),
            );
            assert!((a + b).abs() < 1e-12);
        }
        let t1 = windowed_turn_deg(&s, 10, 3).unwrap();
        let t2 = windowed_turn_deg(&m, 10, 3).unwrap();
        assert!((t1 - t2).abs() < 1e-12);
    }

    #[test]
    fn closed_polygon_total_turning_360() {
        for n in [8usize, 16, 64] {
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|i| {
                    let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                    (a.cos(), a.sin())
                })
                .collect();
            let s = stroke(&pts);
            // interior direction changes plus the closure terms
            let mut total = 0.0;
            for k in 2..=n - 1 {
                total += direction_change_deg(
                    step_direction(&s, k - 1).unwrap(),
                    step_direction(&s, k).unwrap(),
                );
            }
            let v_close = step_direction(&s, n).unwrap();
            total += direction_change_deg(step_direction(&s, n - 1).unwrap(), v_close);
            total += direction_change_deg(v_close, step_direction(&s, 1).unwrap());
            assert!((total - 360.0).abs() < 1e-6, "n={n}: {total}");
        }
    }
}
