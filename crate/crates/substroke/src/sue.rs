//! Sub-unit extraction for handwritten strokes.
//!
//! The detector marks overlap and over-fragment; this module turns them into
//! a clean partition of the stroke in three steps:
//!
//! 1. [`consolidate_marks`]: same-kind curve marks merge when a sub-unit is
//!    involved and nothing of the opposite kind or a turn region sits between
//!    them; pseudo sub-units overlapping a turn region are dropped; pseudo
//!    sub-units and turn regions contained in a loop are dropped.
//! 2. [`segmentation_points`]: the surviving marks, in position order, are
//!    scanned pairwise. Each rule places one boundary — midway between two
//!    adjoining sub-units, at the midpoint of a pseudo sub-unit or turn
//!    region, or at a loop's first index and one past its last. A pseudo
//!    sub-unit or turn region whose midpoint was already used is skipped when
//!    its own turn comes.
//! 3. [`segment_stroke`]: boundaries become sub-units; each is labeled a loop
//!    when it coincides with a loop mark, otherwise straight when the mean
//!    turn magnitude is small, otherwise by the majority turn sign.
//!
//! Every stroke yields at least one sub-unit; a stroke of at most two points
//! is a single point stroke.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::detect::{detect_all, mark_contained, mark_overlaps, sort_marks, MarkKind, SegmentMark};
use crate::geometry::turn_signs;
use crate::ink::{Character, Stroke, SubUnit, SubUnitLabel};

/// Identifier of the boundary-placement rule that produced a segmentation
/// point, recorded in the trace (19–24).
pub type RuleId = u8;

const RULE_CW_SUBUNIT: RuleId = 19;
const RULE_CW_PSEUDO: RuleId = 20;
const RULE_CCW_SUBUNIT: RuleId = 21;
const RULE_CCW_PSEUDO: RuleId = 22;
const RULE_LOOP: RuleId = 23;
const RULE_TURN: RuleId = 24;

/// Segmentation of one stroke.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentationResult {
    /// Segmentation point indices, 1-based, strictly increasing, starting at
    /// 1 and ending at the stroke's point count.
    pub pi: Vec<usize>,
    /// The extracted sub-units; their ranges partition the stroke.
    pub subunits: Vec<SubUnit>,
    /// Rule that placed each sub-unit's left boundary; `None` for the first.
    pub rules: Vec<Option<RuleId>>,
    /// The consolidated marks the boundaries were derived from.
    pub marks: Vec<SegmentMark>,
}

/// Merge and prune detector marks.
///
/// Merging repeats until stable so chains of adjacent marks collapse fully;
/// the result is unchanged by a second application.
pub fn consolidate_marks(marks: Vec<SegmentMark>, cfg: &Config) -> Vec<SegmentMark> {
    let mut cw: Vec<SegmentMark> = marks.iter().filter(|m| m.kind == MarkKind::Cw).copied().collect();
    let mut ccw: Vec<SegmentMark> = marks.iter().filter(|m| m.kind == MarkKind::Ccw).copied().collect();
    let mut turns: Vec<SegmentMark> = marks.iter().filter(|m| m.kind == MarkKind::Turn).copied().collect();
    let loops: Vec<SegmentMark> = marks.iter().filter(|m| m.kind == MarkKind::Loop).copied().collect();

    merge_same_kind(&mut cw, &ccw, &turns, cfg);
    merge_same_kind(&mut ccw, &cw, &turns, cfg);

    // pseudo curve marks overlapping a turn region are removed
    let overlap_turn = |m: &SegmentMark, turns: &[SegmentMark]| turns.iter().any(|t| mark_overlaps(m, t));
    cw.retain(|m| !(m.is_pseudo() && overlap_turn(m, &turns)));
    ccw.retain(|m| !(m.is_pseudo() && overlap_turn(m, &turns)));

    // pseudo curve marks and turn regions contained in a loop are removed
    let in_loop = |m: &SegmentMark| loops.iter().any(|l| mark_contained(m, l));
    cw.retain(|m| !(m.is_pseudo() && in_loop(m)));
    ccw.retain(|m| !(m.is_pseudo() && in_loop(m)));
    turns.retain(|m| !in_loop(m));

    let mut out = cw;
    out.extend(ccw);
    out.extend(turns);
    out.extend(loops);
    sort_marks(&mut out);
    out
}

/// Merge adjacent same-kind curve marks when at least one is a sub-unit and
/// no blocker (opposite-kind curve or turn region) intersects the gap
/// between them. Runs to fixpoint.
fn merge_same_kind(
    list: &mut Vec<SegmentMark>,
    opposite: &[SegmentMark],
    turns: &[SegmentMark],
    cfg: &Config,
) {
    let blocked = |gap_start: usize, gap_end: usize| -> bool {
        let gap = SegmentMark {
            kind: MarkKind::Turn,
            start: gap_start,
            end: gap_end,
            is_subunit: false,
        };
        gap_start <= gap_end
            && (opposite.iter().any(|m| mark_overlaps(m, &gap))
                || turns.iter().any(|m| mark_overlaps(m, &gap)))
    };
    loop {
        let mut merged_any = false;
        let mut i = 0;
        while i + 1 < list.len() {
            let (a, b) = (list[i], list[i + 1]);
            let mergeable = (a.is_subunit || b.is_subunit)
                && (b.start <= a.end + 1 || !blocked(a.end + 1, b.start - 1));
            if mergeable {
                let merged = SegmentMark {
                    kind: a.kind,
                    start: a.start.min(b.start),
                    end: a.end.max(b.end),
                    is_subunit: a.end.max(b.end) - a.start.min(b.start) + 1 >= cfg.tau_su_len,
                };
                list[i] = merged;
                list.remove(i + 1);
                merged_any = true;
            } else {
                i += 1;
            }
        }
        if !merged_any {
            break;
        }
    }
}

/// Outcome of the boundary scan.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySet {
    pub pi: Vec<usize>,
    /// Rule attributed to each interior boundary, aligned with the interior
    /// entries of `pi` (first match wins when rules coincide on an index).
    pub interior_rules: Vec<(usize, RuleId)>,
}

/// Derive segmentation points from position-ordered consolidated marks.
///
/// Boundaries are clamped into [1, n_points], deduplicated, and sorted; the
/// stroke end points are always present.
pub fn segmentation_points(marks: &[SegmentMark], n_points: usize) -> BoundarySet {
    let mut found: Vec<(usize, RuleId)> = Vec::new();
    let mut consumed = vec![false; marks.len()];

    let add = |idx: usize, rule: RuleId, found: &mut Vec<(usize, RuleId)>| {
        let idx = idx.clamp(1, n_points);
        if idx > 1 && idx < n_points && !found.iter().any(|&(i, _)| i == idx) {
            found.push((idx, rule));
        }
    };

    for j in 0..marks.len() {
        let m = marks[j];
        if consumed[j] {
            continue;
        }
        match m.kind {
            MarkKind::Loop => {
                // boundary one past the loop's last point, clamped at the end
                add(m.end + 1, RULE_LOOP, &mut found);
            }
            MarkKind::Turn => {
                add(m.midpoint(), RULE_TURN, &mut found);
            }
            MarkKind::Cw | MarkKind::Ccw => {
                let Some(&next) = marks.get(j + 1) else { continue };
                let own_rule = match (m.kind, m.is_subunit) {
                    (MarkKind::Cw, true) => RULE_CW_SUBUNIT,
                    (MarkKind::Cw, false) => RULE_CW_PSEUDO,
                    (MarkKind::Ccw, true) => RULE_CCW_SUBUNIT,
                    _ => RULE_CCW_PSEUDO,
                };
                let opposite = match m.kind {
                    MarkKind::Cw => MarkKind::Ccw,
                    _ => MarkKind::Cw,
                };
                if m.is_subunit {
                    match next.kind {
                        k if k == opposite && next.is_pseudo() => {
                            add(next.midpoint(), own_rule, &mut found);
                            consumed[j + 1] = true;
                        }
                        k if k == opposite => {
                            add((m.end + next.start) / 2, own_rule, &mut found);
                        }
                        MarkKind::Loop => {
                            add(next.start, own_rule, &mut found);
                        }
                        MarkKind::Turn => {
                            add(next.midpoint(), own_rule, &mut found);
                            consumed[j + 1] = true;
                        }
                        // same-kind neighbor survives consolidation only in
                        // exotic overlaps; split the gap
                        _ => {
                            add((m.end + next.start) / 2, own_rule, &mut found);
                        }
                    }
                } else {
                    match next.kind {
                        k if k == opposite && next.is_pseudo() => {
                            if m.point_count() > next.point_count() {
                                add(next.midpoint(), own_rule, &mut found);
                                consumed[j + 1] = true;
                            } else {
                                add(m.midpoint(), own_rule, &mut found);
                            }
                        }
                        // opposite sub-unit, loop, turn region, or same kind:
                        // the pseudo's own midpoint is the boundary
                        _ => {
                            add(m.midpoint(), own_rule, &mut found);
                        }
                    }
                }
            }
        }
    }

    found.sort_by_key(|&(i, _)| i);
    let mut pi: Vec<usize> = Vec::with_capacity(found.len() + 2);
    pi.push(1);
    pi.extend(found.iter().map(|&(i, _)| i));
    if n_points > 1 {
        pi.push(n_points);
    }
    pi.dedup();
    BoundarySet {
        pi,
        interior_rules: found,
    }
}

/// Label one extracted range: a loop when it equals a loop mark, a point
/// stroke when it has no interior turns, straight when the mean turn
/// magnitude is below `tau_ccw`, otherwise the majority turn sign.
fn label_range(
    s: &Stroke,
    start: usize,
    end: usize,
    marks: &[SegmentMark],
    cfg: &Config,
) -> SubUnitLabel {
    if marks
        .iter()
        .any(|m| m.kind == MarkKind::Loop && m.start == start && m.end == end)
    {
        return SubUnitLabel::Loop;
    }
    if end - start + 1 <= 2 {
        return SubUnitLabel::Point;
    }
    let piece = Stroke::new(s.points[start - 1..end].to_vec());
    let signs_piece = turn_signs(&piece, 0.0);
    let crosses: Vec<f64> = {
        // recompute magnitudes for the mean; turn_signs only gives signs
        let mut vals = Vec::with_capacity(piece.len().saturating_sub(2));
        for n in 2..piece.len() {
            let a = crate::geometry::step_direction(&piece, n - 1);
            let b = crate::geometry::step_direction(&piece, n);
            if let (Ok(a), Ok(b)) = (a, b) {
                vals.push(crate::geometry::cross(a, b));
            }
        }
        vals
    };
    if crosses.is_empty() {
        return SubUnitLabel::Point;
    }
    let mean_abs = crosses.iter().map(|v| v.abs()).sum::<f64>() / crosses.len() as f64;
    if mean_abs < cfg.tau_ccw {
        return SubUnitLabel::Straight;
    }
    let pos = signs_piece.iter().filter(|&&v| v > 0).count();
    let neg = signs_piece.iter().filter(|&&v| v < 0).count();
    if pos > neg {
        SubUnitLabel::Ccw
    } else if neg > pos {
        SubUnitLabel::Cw
    } else {
        SubUnitLabel::Straight
    }
}

/// Full extraction for one stroke: detect, consolidate, place boundaries,
/// split, label.
pub fn segment_stroke(s: &Stroke, stroke_index: usize, cfg: &Config) -> SegmentationResult {
    let n = s.len();
    if n <= 2 {
        return SegmentationResult {
            pi: if n == 1 { vec![1] } else { vec![1, 2] },
            subunits: vec![SubUnit {
                stroke: stroke_index,
                start: 1,
                end: n.max(1),
                label: SubUnitLabel::Point,
            }],
            rules: vec![None],
            marks: Vec::new(),
        };
    }
    let marks = consolidate_marks(detect_all(s, cfg), cfg);
    let bounds = segmentation_points(&marks, n);
    let pi = bounds.pi;

    let mut subunits = Vec::with_capacity(pi.len().max(1) - 1);
    let mut rules = Vec::with_capacity(subunits.capacity());
    for m in 0..pi.len() - 1 {
        let start = pi[m];
        let end = if m + 2 == pi.len() { pi[m + 1] } else { pi[m + 1] - 1 };
        let label = label_range(s, start, end, &marks, cfg);
        subunits.push(SubUnit {
            stroke: stroke_index,
            start,
            end,
            label,
        });
        rules.push(if m == 0 {
            None
        } else {
            bounds
                .interior_rules
                .iter()
                .find(|&&(i, _)| i == start)
                .map(|&(_, r)| r)
        });
    }
    SegmentationResult {
        pi,
        subunits,
        rules,
        marks,
    }
}

/// Per-stroke segmentation of a preprocessed character, in writing order.
pub fn segment_character(c: &Character, cfg: &Config) -> Vec<SegmentationResult> {
    c.strokes
        .iter()
        .enumerate()
        .map(|(i, s)| segment_stroke(s, i + 1, cfg))
        .collect()
}

/// Serialization wrapper matching the segmentation output format:
/// `{"strokes":[{"pi":[...],"subunits":[{"range":[a,b],"label":...,"rule":...}]}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterSegmentation {
    pub strokes: Vec<StrokeSegmentation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrokeSegmentation {
    pub pi: Vec<usize>,
    pub subunits: Vec<SubUnitRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubUnitRecord {
    pub range: [usize; 2],
    pub label: SubUnitLabel,
    pub rule: Option<RuleId>,
}

impl CharacterSegmentation {
    pub fn from_results(results: &[SegmentationResult]) -> Self {
        Self {
            strokes: results
                .iter()
                .map(|r| StrokeSegmentation {
                    pi: r.pi.clone(),
                    subunits: r
                        .subunits
                        .iter()
                        .zip(&r.rules)
                        .map(|(u, rule)| SubUnitRecord {
                            range: [u.start, u.end],
                            label: u.label,
                            rule: *rule,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// All sub-units of the character in writing order.
    pub fn flat_subunits(results: &[SegmentationResult]) -> Vec<SubUnit> {
        results.iter().flat_map(|r| r.subunits.iter().copied()).collect()
    }
}
