//! Exact segmentation of noise-free strokes.
//!
//! On ideal ink every point of a sub-unit satisfies one structural property
//! exactly: the turn cross product is uniformly negative (clockwise curve),
//! positive (counter-clockwise curve), or zero (straight), or the segment
//! closes on itself with a one-step gap and 360° of total turning (loop).
//! Interior boundaries are found where the turn sign changes, and loop
//! boundaries where the closure-distance test fires. Real handwriting
//! violates these exact properties; [`crate::sue`] handles that case, and
//! this module serves as its oracle on generated input.

use crate::geometry::{direction_change_deg, turn_signs, UnitVec};
use crate::ink::{Stroke, SubUnit, SubUnitLabel};

/// Tolerance below which a turn cross product counts as exactly zero
/// (floating-point dust from constructed geometry).
pub const SIGN_ZERO_TOL: f64 = 1e-9;
/// Relative slack on the loop closure-gap test.
pub const CLOSURE_GAP_SLACK: f64 = 1e-6;
/// Absolute tolerance, degrees, on the loop total-turning test.
pub const LOOP_TURN_TOL_DEG: f64 = 1e-3;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum IdealError {
    #[error("not a single sub-unit stroke: turn sign changes at point {at}")]
    NotSingleSubUnit { at: usize },
    #[error("stroke has coincident consecutive points at {at}")]
    CoincidentPoints { at: usize },
}

/// Total direction change of the span [a, b] with the closure convention:
/// the direction at the last point is taken toward the first, and the
/// direction changes at both the last and first points are included.
fn closed_total_turn_deg(s: &Stroke, a: usize, b: usize) -> Option<f64> {
    if b - a + 1 < 3 {
        return None;
    }
    let mut dirs = Vec::with_capacity(b - a + 1);
    for n in a..b {
        dirs.push(UnitVec::between(s.pt(n), s.pt(n + 1)).ok()?);
    }
    let closure = UnitVec::between(s.pt(b), s.pt(a)).ok()?;
    let mut total = 0.0;
    for w in dirs.windows(2) {
        total += direction_change_deg(w[0], w[1]);
    }
    total += direction_change_deg(*dirs.last()?, closure);
    total += direction_change_deg(closure, dirs[0]);
    Some(total)
}

fn is_loop_span(s: &Stroke, a: usize, b: usize, delta: f64) -> bool {
    if b < a + 3 {
        return false;
    }
    if s.pt(a).distance(&s.pt(b)) > delta * (1.0 + CLOSURE_GAP_SLACK) {
        return false;
    }
    match closed_total_turn_deg(s, a, b) {
        Some(t) => (t - 360.0).abs() <= LOOP_TURN_TOL_DEG,
        None => false,
    }
}

/// Classify a stroke that is a single sub-unit.
///
/// Up to two points is a point stroke. Otherwise the stroke is a loop when
/// its closure gap is at most `delta` and its total turning is 360°, else its
/// uniform turn sign makes it a clockwise curve, counter-clockwise curve, or
/// straight segment. A stroke whose interior turn sign changes is not a
/// single sub-unit and is rejected.
pub fn classify_single_subunit(s: &Stroke, delta: f64) -> Result<SubUnitLabel, IdealError> {
    let n = s.len();
    if n <= 2 {
        return Ok(SubUnitLabel::Point);
    }
    if is_loop_span(s, 1, n, delta) {
        return Ok(SubUnitLabel::Loop);
    }
    let signs = turn_signs(s, SIGN_ZERO_TOL);
    for (k, w) in signs.windows(2).enumerate() {
        if w[0] != w[1] {
            // the change is between the turns at points k+2 and k+3
            return Err(IdealError::NotSingleSubUnit { at: k + 3 });
        }
    }
    Ok(match signs.first().copied().unwrap_or(0) {
        1 => SubUnitLabel::Ccw,
        -1 => SubUnitLabel::Cw,
        _ => SubUnitLabel::Straight,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Source {
    SignChange,
    LoopClosure,
}

/// Segmentation points of an ideal stroke, 1-based and strictly increasing.
///
/// The first and last points are always included. Interior points come from
/// two scans: a sign change of the turn cross product between consecutive
/// interior points marks a boundary at the second of the pair, and a span
/// whose end points sit one step apart with 360° of turning marks loop
/// boundaries at its first point and one past its last. A single-point sign
/// spike (a cusp between two same-sign curves, or a corner between two
/// straight pieces) fires the sign test at two adjacent indices; such pairs
/// collapse to the earlier index so no degenerate one-point sub-unit arises.
pub fn ideal_segmentation_points(s: &Stroke, delta: f64) -> Vec<usize> {
    let n = s.len();
    if n <= 2 {
        return if n == 1 { vec![1] } else { vec![1, 2] };
    }
    let signs = turn_signs(s, SIGN_ZERO_TOL);
    let sign_at = |pt: usize| -> i8 { signs[pt - 2] }; // turn at point `pt`, 2 <= pt <= n-1

    let mut candidates: Vec<(usize, Source)> = Vec::new();
    // sign-change scan over the interior band
    if n >= 6 {
        for k in 3..=n - 3 {
            if sign_at(k) != sign_at(k + 1) {
                candidates.push((k + 1, Source::SignChange));
            }
        }
    }
    // loop-closure scan: greedy left-to-right over non-overlapping spans
    let mut a = 1;
    while a + 3 <= n {
        let mut found = None;
        for b in (a + 3)..=n {
            if is_loop_span(s, a, b, delta) {
                found = Some(b);
                break;
            }
        }
        if let Some(b) = found {
            candidates.push((a, Source::LoopClosure));
            if b < n {
                candidates.push((b + 1, Source::LoopClosure));
            }
            a = b + 1;
        } else {
            a += 1;
        }
    }

    candidates.sort_by_key(|&(i, _)| i);
    candidates.dedup_by_key(|&mut (i, _)| i);
    // collapse adjacent interior candidates; keep a loop boundary over a
    // sign-scan neighbor, otherwise the earlier index
    let mut kept: Vec<(usize, Source)> = Vec::new();
    for (i, src) in candidates {
        match kept.last().copied() {
            Some((prev, prev_src)) if i == prev + 1 => {
                if src == Source::LoopClosure && prev_src != Source::LoopClosure {
                    kept.pop();
                    kept.push((i, src));
                }
            }
            _ => kept.push((i, src)),
        }
    }

    let mut pi: Vec<usize> = kept
        .into_iter()
        .map(|(i, _)| i)
        .filter(|&i| i > 1 && i < n)
        .collect();
    pi.insert(0, 1);
    pi.push(n);
    pi.dedup();
    pi
}

/// Split an ideal stroke at its segmentation points and label each piece.
///
/// Piece m covers [π_m, π_{m+1} − 1]; the final piece also includes the last
/// segmentation point. The pieces partition the stroke.
pub fn extract_ideal_subunits(
    s: &Stroke,
    stroke_index: usize,
    delta: f64,
) -> Result<Vec<SubUnit>, IdealError> {
    let pi = ideal_segmentation_points(s, delta);
    if pi.len() == 1 {
        return Ok(vec![SubUnit {
            stroke: stroke_index,
            start: 1,
            end: 1,
            label: SubUnitLabel::Point,
        }]);
    }
    let mut out = Vec::with_capacity(pi.len() - 1);
    for m in 0..pi.len() - 1 {
        let start = pi[m];
        let end = if m + 2 == pi.len() { pi[m + 1] } else { pi[m + 1] - 1 };
        let piece = Stroke::new(s.points[start - 1..end].to_vec());
        let label = classify_single_subunit(&piece, delta)?;
        out.push(SubUnit {
            stroke: stroke_index,
            start,
            end,
            label,
        });
    }
    Ok(out)
}

/// Number of distinct ways a character with `n` sub-units can be produced:
/// two drawing directions per sub-unit and any stroke order, 2^n · n!.
/// Exact for n ≤ 30; larger values overflow.
pub fn generation_count(n: u32) -> u128 {
    let mut out: u128 = 1 << n;
    for k in 2..=n as u128 {
        out *= k;
    }
    out
}
