//! Feature extraction and a nearest-centroid classifier harness.
//!
//! Two schemas:
//! - global: the character's x and y coordinate sequences resampled by arc
//!   length to 32 positions each and concatenated (64 values);
//! - local: per sub-unit, a label one-hot (5), normalized arc length,
//!   centroid x/y, net direction x/y, and total windowed turn / 360 —
//!   11 values for each of the first 8 sub-units, zero-padded (88 values).
//!
//! The classifier z-scores features with training-set statistics and assigns
//! the nearest class centroid; it exists to compare feature schemas, not to
//! be a serious recognizer.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::geometry::total_windowed_turn_deg;
use crate::ink::{Character, Point, SubUnit, SubUnitLabel};
use crate::sue::SegmentationResult;

pub const GLOBAL_POSITIONS: usize = 32;
pub const GLOBAL_LEN: usize = 2 * GLOBAL_POSITIONS;
pub const LOCAL_SLOTS: usize = 8;
pub const LOCAL_SLOT_LEN: usize = 11;
pub const LOCAL_LEN: usize = LOCAL_SLOTS * LOCAL_SLOT_LEN;

/// A fixed-length feature vector tagged with its schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub schema: String,
    pub values: Vec<f64>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FeatureError {
    #[error("character has no points")]
    EmptyCharacter,
    #[error("schema mismatch: model {model}, input {input}")]
    SchemaMismatch { model: String, input: String },
    #[error("class {0} has no samples")]
    EmptyClass(u32),
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("inconsistent feature lengths in training set")]
    RaggedFeatures,
}

/// Character-level features: both coordinate sequences resampled to a fixed
/// count by arc length (pen-up jumps count toward arc length) and
/// concatenated, x block first.
pub fn global_features(c: &Character) -> Result<FeatureVector, FeatureError> {
    let pts: Vec<Point> = c.strokes.iter().flat_map(|s| s.points.iter().copied()).collect();
    if pts.is_empty() {
        return Err(FeatureError::EmptyCharacter);
    }
    let mut cum = Vec::with_capacity(pts.len());
    cum.push(0.0);
    for w in pts.windows(2) {
        cum.push(cum.last().unwrap() + w[0].distance(&w[1]));
    }
    let total = *cum.last().unwrap();
    let sample = |target: f64| -> Point {
        if total == 0.0 {
            return pts[0];
        }
        let mut i = match cum.binary_search_by(|v| v.partial_cmp(&target).unwrap()) {
            Ok(i) => i,
            Err(i) => i,
        };
        if i == 0 {
            return pts[0];
        }
        if i >= pts.len() {
            i = pts.len() - 1;
        }
        let (a, b) = (pts[i - 1], pts[i]);
        let seg = cum[i] - cum[i - 1];
        let t = if seg > 0.0 { (target - cum[i - 1]) / seg } else { 0.0 };
        Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
    };
    let mut xs = Vec::with_capacity(GLOBAL_POSITIONS);
    let mut ys = Vec::with_capacity(GLOBAL_POSITIONS);
    for k in 0..GLOBAL_POSITIONS {
        let target = total * k as f64 / (GLOBAL_POSITIONS - 1) as f64;
        let p = sample(target);
        xs.push(p.x);
        ys.push(p.y);
    }
    let mut values = xs;
    values.extend(ys);
    Ok(FeatureVector {
        schema: format!("global{GLOBAL_LEN}"),
        values,
    })
}

fn one_hot(label: SubUnitLabel) -> [f64; 5] {
    let mut v = [0.0; 5];
    match label {
        SubUnitLabel::Cw => v[0] = 1.0,
        SubUnitLabel::Ccw => v[1] = 1.0,
        SubUnitLabel::Straight => v[2] = 1.0,
        SubUnitLabel::Loop => v[3] = 1.0,
        SubUnitLabel::Point => v[4] = 1.0,
        SubUnitLabel::Unlabeled => {}
    }
    v
}

/// Sub-unit-level features for the first 8 sub-units in writing order,
/// zero-padded past the last.
pub fn local_features(
    results: &[SegmentationResult],
    c: &Character,
    cfg: &Config,
) -> Result<FeatureVector, FeatureError> {
    if c.point_count() == 0 {
        return Err(FeatureError::EmptyCharacter);
    }
    let total_len: f64 = c.strokes.iter().map(|s| s.arc_length()).sum();
    let subunits: Vec<SubUnit> = results
        .iter()
        .flat_map(|r| r.subunits.iter().copied())
        .collect();
    let mut values = vec![0.0; LOCAL_LEN];
    for (slot, u) in subunits.iter().take(LOCAL_SLOTS).enumerate() {
        let s = &c.strokes[u.stroke - 1];
        let pts = &s.points[u.start - 1..u.end];
        let base = slot * LOCAL_SLOT_LEN;
        values[base..base + 5].copy_from_slice(&one_hot(u.label));
        let seg_len: f64 = pts.windows(2).map(|w| w[0].distance(&w[1])).sum();
        values[base + 5] = if total_len > 0.0 { seg_len / total_len } else { 0.0 };
        let k = pts.len() as f64;
        values[base + 6] = pts.iter().map(|p| p.x).sum::<f64>() / k;
        values[base + 7] = pts.iter().map(|p| p.y).sum::<f64>() / k;
        let (first, last) = (pts[0], pts[pts.len() - 1]);
        let d = first.distance(&last);
        if d > 0.0 {
            values[base + 8] = (last.x - first.x) / d;
            values[base + 9] = (last.y - first.y) / d;
        }
        values[base + 10] = total_windowed_turn_deg(s, u.start, u.end, cfg.tau_mdc) / 360.0;
    }
    Ok(FeatureVector {
        schema: format!("local{LOCAL_LEN}"),
        values,
    })
}

/// Global and local blocks concatenated.
pub fn combined_features(
    results: &[SegmentationResult],
    c: &Character,
    cfg: &Config,
) -> Result<FeatureVector, FeatureError> {
    let g = global_features(c)?;
    let l = local_features(results, c, cfg)?;
    let mut values = g.values;
    values.extend(l.values);
    Ok(FeatureVector {
        schema: format!("global{GLOBAL_LEN}+local{LOCAL_LEN}"),
        values,
    })
}

/// Per-class mean of z-scored features.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentroidModel {
    pub schema: String,
    pub classes: Vec<u32>,
    pub centroids: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

/// Train per-class centroids. Z-scoring statistics come from the training
/// set only; dimensions with zero variance get unit scale.
pub fn train_centroid(dataset: &[(FeatureVector, u32)]) -> Result<CentroidModel, FeatureError> {
    let Some(first) = dataset.first() else {
        return Err(FeatureError::EmptyTrainingSet);
    };
    let dim = first.0.values.len();
    let schema = first.0.schema.clone();
    for (f, _) in dataset {
        if f.values.len() != dim || f.schema != schema {
            return Err(FeatureError::RaggedFeatures);
        }
    }
    let n = dataset.len() as f64;
    let mut mean = vec![0.0; dim];
    for (f, _) in dataset {
        for (m, v) in mean.iter_mut().zip(&f.values) {
            *m += v / n;
        }
    }
    let mut var = vec![0.0; dim];
    for (f, _) in dataset {
        for ((s, v), m) in var.iter_mut().zip(&f.values).zip(&mean) {
            *s += (v - m) * (v - m) / n;
        }
    }
    let scale: Vec<f64> = var
        .iter()
        .map(|&v| if v > 0.0 { v.sqrt() } else { 1.0 })
        .collect();

    let mut classes: Vec<u32> = dataset.iter().map(|&(_, l)| l).collect();
    classes.sort_unstable();
    classes.dedup();
    let mut centroids = vec![vec![0.0; dim]; classes.len()];
    let mut counts = vec![0usize; classes.len()];
    for (f, label) in dataset {
        let ci = classes.binary_search(label).expect("label present");
        counts[ci] += 1;
        for ((c, v), (m, s)) in centroids[ci]
            .iter_mut()
            .zip(&f.values)
            .zip(mean.iter().zip(&scale))
        {
            *c += (v - m) / s;
        }
    }
    for (ci, count) in counts.iter().enumerate() {
        if *count == 0 {
            return Err(FeatureError::EmptyClass(classes[ci]));
        }
        for c in &mut centroids[ci] {
            *c /= *count as f64;
        }
    }
    Ok(CentroidModel {
        schema,
        classes,
        centroids,
        mean,
        scale,
    })
}

/// Nearest centroid by Euclidean distance in z-scored space. Ties break
/// toward the lowest class id. Scores are negative distances, aligned with
/// `model.classes`.
pub fn classify(model: &CentroidModel, f: &FeatureVector) -> Result<(u32, Vec<f64>), FeatureError> {
    if f.schema != model.schema || f.values.len() != model.mean.len() {
        return Err(FeatureError::SchemaMismatch {
            model: model.schema.clone(),
            input: f.schema.clone(),
        });
    }
    let z: Vec<f64> = f
        .values
        .iter()
        .zip(model.mean.iter().zip(&model.scale))
        .map(|(v, (m, s))| (v - m) / s)
        .collect();
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    let mut scores = Vec::with_capacity(model.classes.len());
    for (ci, centroid) in model.centroids.iter().enumerate() {
        let d2: f64 = centroid.iter().zip(&z).map(|(a, b)| (a - b) * (a - b)).sum();
        let d = d2.sqrt();
        scores.push(-d);
        if d < best_d {
            best_d = d;
            best = ci;
        }
    }
    Ok((model.classes[best], scores))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ink::Stroke;
    use crate::sue::segment_character;

    fn vline_char() -> Character {
        let pts: Vec<Point> = (0..=100).map(|i| Point::new(0.5, i as f64 * 0.01)).collect();
        Character::new(vec![Stroke::new(pts)])
    }

    #[test]
    fn global_vertical_line_shape() {
        let f = global_features(&vline_char()).unwrap();
        assert_eq!(f.values.len(), GLOBAL_LEN);
        for v in &f.values[..GLOBAL_POSITIONS] {
            assert!((v - 0.5).abs() < 1e-9);
        }
        for w in f.values[GLOBAL_POSITIONS..].windows(2) {
            assert!(w[0] <= w[1] + 1e-12, "y not monotone");
        }
    }

    #[test]
    fn global_deterministic() {
        let c = vline_char();
        assert_eq!(global_features(&c).unwrap(), global_features(&c).unwrap());
    }

    #[test]
    fn local_straight_slot() {
        let c = vline_char();
        let cfg = Config::default();
        let seg = segment_character(&c, &cfg);
        let f = local_features(&seg, &c, &cfg).unwrap();
        assert_eq!(f.values.len(), LOCAL_LEN);
        // slot 0 one-hot at straight
        assert_eq!(f.values[2], 1.0);
        assert_eq!(f.values[0] + f.values[1] + f.values[3] + f.values[4], 0.0);
        // windowed-turn term near zero
        assert!(f.values[10].abs() < 0.02, "turn term {}", f.values[10]);
        // slots beyond the first all zero
        assert!(f.values[LOCAL_SLOT_LEN..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn local_loop_turn_term_near_one() {
        let spec = crate::synth::PrimitiveSpec::Loop {
            center: [0.5, 0.5],
            radius: 0.15,
            start_deg: -90.0,
            ccw: true,
            gap: 0.012,
        };
        let s = crate::synth::sample_primitive(&spec, 0.01).unwrap();
        let c = Character::new(vec![s]);
        let cfg = Config::default();
        let seg = segment_character(&c, &cfg);
        let f = local_features(&seg, &c, &cfg).unwrap();
        assert!((f.values[10] - 1.0).abs() < 0.12, "turn term {}", f.values[10]);
    }

    fn toy_set() -> Vec<(FeatureVector, u32)> {
        let fv = |values: Vec<f64>| FeatureVector {
            schema: "toy".into(),
            values,
        };
        vec![
            (fv(vec![0.0, 0.0]), 1),
            (fv(vec![0.1, -0.1]), 1),
            (fv(vec![5.0, 5.0]), 2),
            (fv(vec![5.1, 4.9]), 2),
        ]
    }

    #[test]
    fn separable_toy_set_fully_learned() {
        let data = toy_set();
        let model = train_centroid(&data).unwrap();
        for (f, label) in &data {
            let (got, scores) = classify(&model, f).unwrap();
            assert_eq!(got, *label);
            assert_eq!(scores.len(), 2);
        }
    }

    #[test]
    fn duplicated_training_set_same_model() {
        let data = toy_set();
        let mut doubled = data.clone();
        doubled.extend(data.clone());
        assert_eq!(train_centroid(&data).unwrap(), train_centroid(&doubled).unwrap());
    }

    #[test]
    fn tie_breaks_to_lowest_class() {
        let fv = |values: Vec<f64>| FeatureVector {
            schema: "toy".into(),
            values,
        };
        let data = vec![
            (fv(vec![-1.0]), 2),
            (fv(vec![1.0]), 5),
        ];
        let model = train_centroid(&data).unwrap();
        let (got, _) = classify(&model, &fv(vec![0.0])).unwrap();
        assert_eq!(got, 2);
    }

    #[test]
    fn schema_mismatch_rejected() {
        let model = train_centroid(&toy_set()).unwrap();
        let f = FeatureVector {
            schema: "other".into(),
            values: vec![0.0, 0.0],
        };
        assert!(matches!(
            classify(&model, &f),
            Err(FeatureError::SchemaMismatch { .. })
        ));
    }

    #[test]
    fn scale_invariance_of_argmax() {
        let data = toy_set();
        let model = train_centroid(&data).unwrap();
        let mut scaled = model.clone();
        for c in &mut scaled.centroids {
            for v in c.iter_mut() {
                *v *= 3.5;
            }
        }
        for (f, _) in &data {
            let z_label = {
                // scale the z-scored query too by scaling the input around the mean
                let zf = FeatureVector {
                    schema: f.schema.clone(),
                    values: f
                        .values
                        .iter()
                        .zip(model.mean.iter().zip(&model.scale))
                        .map(|(v, (m, s))| m + 3.5 * (v - m) * s / s)
                        .collect(),
                };
                classify(&scaled, &zf).unwrap().0
            };
            assert_eq!(z_label, classify(&model, f).unwrap().0);
        }
    }

    #[test]
    fn model_json_round_trip() {
        let model = train_centroid(&toy_set()).unwrap();
        let s = serde_json::to_string(&model).unwrap();
        let back: CentroidModel = serde_json::from_str(&s).unwrap();
        assert_eq!(model, back);
    }
}
