//! Raw segment detectors for handwritten strokes.
//!
//! Handwritten ink never satisfies the exact sign properties of ideal
//! strokes, so segments are detected from longer-baseline evidence:
//!
//! - **Curve runs** ([`detect_cw_segments`], [`detect_ccw_segments`]): a point
//!   pair (n, q) is related clockwise when the direction relation g(n, q)
//!   falls at or below `tau_cw` (counter-clockwise at or above `tau_ccw`).
//!   For each anchor n, maximal runs of consecutively related partners are
//!   kept when the anchor lies within `tau_*_ip` indices of the run; a point
//!   is covered when it has a kept related partner at or below its own index,
//!   and maximal covered runs become the marks. Marks at least `tau_su_len`
//!   points long are sub-units, shorter ones pseudo sub-units.
//! - **Loops** ([`detect_loop_segments`]): candidate end-point pairs must sit
//!   within `tau_delta` of each other with a total windowed turn inside
//!   [360 − tau_tdc_lower, 360 + tau_tdc_upper]. Consecutive candidate start
//!   points form one group and the pair with the smallest gap wins. The
//!   candidate is verified by intersecting the outward tangent lines sampled
//!   `tau_lv` points inside each end: the intersection must lie ahead of at
//!   least one of the outward directions.
//! - **Sharp turns** ([`detect_turn_regions`]): maximal runs of points whose
//!   windowed turn angle reaches `tau_rldc` degrees.
//!
//! All detectors are pure and deterministic; ranges are 1-based inclusive.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::geometry::UnitVec;
use crate::ink::{Point, Stroke};

/// What a detector found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkKind {
    /// Loop segment. Sorts first among marks sharing a start index.
    Loop,
    /// Sharp-turn (large direction change) region.
    Turn,
    /// Clockwise curve run.
    Cw,
    /// Counter-clockwise curve run.
    Ccw,
}

/// A detected index range within one stroke.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentMark {
    pub kind: MarkKind,
    /// First point index, 1-based inclusive.
    pub start: usize,
    /// Last point index, 1-based inclusive.
    pub end: usize,
    /// Curve marks: long enough (>= `tau_su_len`) to be a structural
    /// sub-unit. Always true for loops, always false for turn regions.
    pub is_subunit: bool,
}

impl SegmentMark {
    pub fn point_count(&self) -> usize {
        self.end - self.start + 1
    }

    /// A short curve mark: noise at a transition, not structure.
    pub fn is_pseudo(&self) -> bool {
        matches!(self.kind, MarkKind::Cw | MarkKind::Ccw) && !self.is_subunit
    }

    pub(crate) fn midpoint(&self) -> usize {
        (self.start + self.end) / 2
    }

    fn overlaps(&self, other: &SegmentMark) -> bool {
        self.start <= other.end && other.start <= self.end
    }

    fn contained_in(&self, other: &SegmentMark) -> bool {
        other.start <= self.start && self.end <= other.end
    }
}

/// Position order: by start index, loops first on ties so that containing
/// loops dominate.
pub fn sort_marks(marks: &mut [SegmentMark]) {
    marks.sort_by(|a, b| a.start.cmp(&b.start).then(a.kind.cmp(&b.kind)));
}

pub(crate) fn mark_overlaps(a: &SegmentMark, b: &SegmentMark) -> bool {
    a.overlaps(b)
}

pub(crate) fn mark_contained(inner: &SegmentMark, outer: &SegmentMark) -> bool {
    inner.contained_in(outer)
}

/// Consecutive step directions, `None` where points coincide. Entry q-1
/// (0-based) is the direction from point q to q+1.
fn step_directions(s: &Stroke) -> Vec<Option<UnitVec>> {
    (1..s.len())
        .map(|q| UnitVec::between(s.pt(q), s.pt(q + 1)).ok())
        .collect()
}

/// Direction relation for a < b: cross of the chord a -> b+1 with the step
/// b -> b+1. `None` when degenerate.
fn relation(pts: &[Point], steps: &[Option<UnitVec>], a: usize, b: usize) -> Option<f64> {
    let step = steps[b - 1]?;
    let pa = pts[a - 1];
    let pb1 = pts[b]; // point b+1
    let (cx, cy) = (pb1.x - pa.x, pb1.y - pa.y);
    let norm = cx.hypot(cy);
    if norm == 0.0 {
        return None;
    }
    Some((cx * step.dy - cy * step.dx) / norm)
}

fn curve_segments(
    s: &Stroke,
    cfg: &Config,
    kind: MarkKind,
    qualifies: impl Fn(f64) -> bool,
    ip: usize,
) -> Vec<SegmentMark> {
    let n_pts = s.len();
    if n_pts < 3 {
        return Vec::new();
    }
    let steps = step_directions(s);
    let pts = &s.points;
    let mut covered = vec![false; n_pts + 1]; // 1-based
    let mut related = vec![false; n_pts]; // partner flags for one anchor, 1-based q up to n_pts-1

    for anchor in 1..=n_pts - 2 {
        for q in 1..n_pts {
            related[q] = if q == anchor {
                false
            } else {
                let (a, b) = if anchor < q { (anchor, q) } else { (q, anchor) };
                relation(pts, &steps, a, b).map(&qualifies).unwrap_or(false)
            };
        }
        // maximal runs of related partners; a kept run below the anchor
        // covers it
        let mut q = 1;
        while q < n_pts {
            if related[q] {
                let run_start = q;
                while q < n_pts && related[q] {
                    q += 1;
                }
                let run_end = q - 1;
                let near = anchor + ip >= run_start && anchor <= run_end + ip;
                if near && run_start <= anchor {
                    covered[anchor] = true;
                    break;
                }
            } else {
                q += 1;
            }
        }
    }

    let mut out = Vec::new();
    let mut n = 1;
    while n <= n_pts {
        if covered[n] {
            let start = n;
            while n <= n_pts && covered[n] {
                n += 1;
            }
            let end = n - 1;
            out.push(SegmentMark {
                kind,
                start,
                end,
                is_subunit: end - start + 1 >= cfg.tau_su_len,
            });
        } else {
            n += 1;
        }
    }
    out
}

/// Clockwise curve runs.
pub fn detect_cw_segments(s: &Stroke, cfg: &Config) -> Vec<SegmentMark> {
    let tau = cfg.tau_cw;
    curve_segments(s, cfg, MarkKind::Cw, move |g| g <= tau, cfg.tau_cw_ip)
}

/// Counter-clockwise curve runs.
pub fn detect_ccw_segments(s: &Stroke, cfg: &Config) -> Vec<SegmentMark> {
    let tau = cfg.tau_ccw;
    curve_segments(s, cfg, MarkKind::Ccw, move |g| g >= tau, cfg.tau_ccw_ip)
}

/// Windowed turn angle per point; 0 outside the valid band. 1-based.
fn windowed_turns(s: &Stroke, window: usize) -> Vec<f64> {
    let n = s.len();
    let mut out = vec![0.0; n + 1];
    if n < 2 * window + 1 {
        return out;
    }
    for p in window + 1..=n - window {
        if let Ok(t) = crate::geometry::windowed_turn_deg(s, p, window) {
            out[p] = t;
        }
    }
    out
}

/// Loop segments.
pub fn detect_loop_segments(s: &Stroke, cfg: &Config) -> Vec<SegmentMark> {
    let n_pts = s.len();
    if n_pts < 2 * cfg.tau_lv + 3 {
        return Vec::new();
    }
    let mdc = cfg.tau_mdc.max(1);
    let theta = windowed_turns(s, mdc);
    // strided prefix sums by phase: pre[r][j] = sum of theta at indices
    // <= j congruent to r mod mdc
    let mut pre = vec![vec![0.0; n_pts + 1]; mdc];
    for r in 0..mdc {
        for j in 1..=n_pts {
            pre[r][j] = pre[r][j - 1] + if j % mdc == r { theta[j] } else { 0.0 };
        }
    }
    let total_turn = |n: usize, q: usize| -> f64 {
        let r = n % mdc;
        pre[r][q] - pre[r][n - 1]
    };

    let lo = 360.0 - cfg.tau_tdc_lower;
    let hi = 360.0 + cfg.tau_tdc_upper;
    // candidate end-point pairs
    let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
    for n in 1..n_pts {
        for q in n + 1..=n_pts {
            let d = s.pt(n).distance(&s.pt(q));
            if d > cfg.tau_delta {
                continue;
            }
            let t = total_turn(n, q);
            if t >= lo && t <= hi {
                pairs.push((n, q, d));
            }
        }
    }
    if pairs.is_empty() {
        return Vec::new();
    }

    // group pairs whose start points are consecutive; one winner per group
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let mut j = i;
        let mut best = pairs[i];
        while j + 1 < pairs.len() && pairs[j + 1].0 <= pairs[j].0 + 1 {
            j += 1;
            let p = pairs[j];
            if p.2 < best.2 {
                best = p;
            }
        }
        candidates.push((best.0, best.1));
        i = j + 1;
    }

    let mut verified: Vec<(usize, usize)> = candidates
        .into_iter()
        .filter(|&(n, q)| verify_loop(s, n, q, cfg))
        .collect();
    verified.sort_unstable();

    // coalesce overlapping or adjacent verified spans
    let mut out: Vec<SegmentMark> = Vec::new();
    for (a, b) in verified {
        match out.last_mut() {
            Some(m) if a <= m.end + 1 => m.end = m.end.max(b),
            _ => out.push(SegmentMark {
                kind: MarkKind::Loop,
                start: a,
                end: b,
                is_subunit: true,
            }),
        }
    }
    out
}

/// Tangent-intersection verification of a candidate loop [n, q]: the outward
/// directions at the two ends, extended as lines, must meet at a point lying
/// ahead of at least one of them.
fn verify_loop(s: &Stroke, n: usize, q: usize, cfg: &Config) -> bool {
    let lv = cfg.tau_lv;
    let n_pts = s.len();
    if n + lv > n_pts || q <= lv {
        return false;
    }
    let p_n = s.pt(n);
    let p_q = s.pt(q);
    let inner_n = s.pt(n + lv);
    let inner_q = s.pt(q - lv);
    let v1 = match UnitVec::between(inner_n, p_n) {
        Ok(v) => v,
        Err(_) => return false,
    };
    let v2 = match UnitVec::between(inner_q, p_q) {
        Ok(v) => v,
        Err(_) => return false,
    };
    let s1 = (p_n.y - inner_n.y) / (p_n.x - inner_n.x + cfg.epsilon);
    let s2 = (p_q.y - inner_q.y) / (p_q.x - inner_q.x + cfg.epsilon);
    if s1 == s2 {
        return false;
    }
    let x = ((p_q.y - s2 * p_q.x) - (p_n.y - s1 * p_n.x)) / (s1 - s2);
    let y = s1 * x + (p_n.y - s1 * p_n.x);
    if !x.is_finite() || !y.is_finite() {
        return false;
    }
    let ahead1 = v1.dx * (x - p_n.x) + v1.dy * (y - p_n.y);
    let ahead2 = v2.dx * (x - p_q.x) + v2.dy * (y - p_q.y);
    ahead1 > 0.0 || ahead2 > 0.0
}

/// Sharp-turn regions: maximal runs of points whose windowed turn angle is at
/// least `tau_rldc` degrees.
pub fn detect_turn_regions(s: &Stroke, cfg: &Config) -> Vec<SegmentMark> {
    let n_pts = s.len();
    if n_pts < 2 * cfg.tau_mdc + 1 {
        return Vec::new();
    }
    let theta = windowed_turns(s, cfg.tau_mdc);
    let mut out = Vec::new();
    let mut p = 1;
    while p <= n_pts {
        if theta[p] >= cfg.tau_rldc {
            let start = p;
            while p <= n_pts && theta[p] >= cfg.tau_rldc {
                p += 1;
            }
            out.push(SegmentMark {
                kind: MarkKind::Turn,
                start,
                end: p - 1,
                is_subunit: false,
            });
        } else {
            p += 1;
        }
    }
    out
}

/// All four detectors, position-sorted. Detectors whose stroke-length
/// preconditions fail contribute nothing.
pub fn detect_all(s: &Stroke, cfg: &Config) -> Vec<SegmentMark> {
    let mut marks = detect_cw_segments(s, cfg);
    marks.extend(detect_ccw_segments(s, cfg));
    marks.extend(detect_loop_segments(s, cfg));
    marks.extend(detect_turn_regions(s, cfg));
    sort_marks(&mut marks);
    marks
}
