//! The shipped corpus recipe: ten character classes with pairs that look
//! alike globally but differ in sub-unit structure, so local features carry
//! real signal.
//!
//! Design constraints that keep the compositions cleanly segmentable, for
//! both the exact segmenter and the heuristic pipeline:
//! - every within-stroke transition is an opposite-curvature flip, a corner
//!   of at least ~130°, or a loop entry/exit;
//! - loops never end a stroke (the exit boundary needs a tail to land on)
//!   and exit tangent-continuously;
//! - curve primitives are long enough to clear the sub-unit length
//!   threshold after resampling.

use serde::{Deserialize, Serialize};

use super::{
    compose_character, derive_seed, perturb, transform_character, GroundTruth, NoiseParams,
    PrimitiveSpec, SplitMix64, SynthError,
};
use crate::ink::Character;

/// A named character class: per-stroke primitive lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassSpec {
    pub id: u32,
    pub name: String,
    pub strokes: Vec<Vec<PrimitiveSpec>>,
}

/// Everything needed to regenerate a corpus byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusManifest {
    pub seed: u64,
    pub delta: f64,
    pub samples_per_class: usize,
    pub train_per_class: usize,
    pub jitter_sigma: f64,
    pub bow: f64,
    pub classes: Vec<ClassSpec>,
}

/// One generated sample: the perturbed character plus its ground truth.
#[derive(Clone, Debug)]
pub struct CorpusSample {
    pub class_id: u32,
    pub class_name: String,
    pub index: usize,
    pub train: bool,
    pub character: Character,
    pub truth: GroundTruth,
}

impl CorpusSample {
    /// Stable file stem, e.g. `c03_s017`.
    pub fn stem(&self) -> String {
        format!("c{:02}_s{:03}", self.class_id, self.index)
    }
}

/// Chains primitives with a running pen position and tangent so transitions
/// are tangent-continuous unless a corner is asked for.
struct PathBuilder {
    pos: [f64; 2],
    tangent_deg: f64,
    prims: Vec<PrimitiveSpec>,
}

impl PathBuilder {
    fn start(x: f64, y: f64, tangent_deg: f64) -> Self {
        Self {
            pos: [x, y],
            tangent_deg,
            prims: Vec::new(),
        }
    }

    /// Straight segment of the given length along the current tangent.
    fn line(mut self, len: f64) -> Self {
        let t = self.tangent_deg.to_radians();
        let to = [self.pos[0] + len * t.cos(), self.pos[1] + len * t.sin()];
        self.prims.push(PrimitiveSpec::Line { from: self.pos, to });
        self.pos = to;
        self
    }

    /// Corner: rotate the tangent in place (positive = counter-clockwise).
    fn turn(mut self, by_deg: f64) -> Self {
        self.tangent_deg += by_deg;
        self
    }

    /// Tangent-continuous circular arc; positive sweep curves
    /// counter-clockwise.
    fn arc(mut self, radius: f64, sweep_deg: f64) -> Self {
        let t = self.tangent_deg;
        let (center_dir, start) = if sweep_deg >= 0.0 {
            (t + 90.0, t - 90.0)
        } else {
            (t - 90.0, t + 90.0)
        };
        let cd = center_dir.to_radians();
        let center = [
            self.pos[0] + radius * cd.cos(),
            self.pos[1] + radius * cd.sin(),
        ];
        let spec = PrimitiveSpec::Arc {
            center,
            radius,
            start_deg: start,
            sweep_deg,
        };
        self.pos = [spec.end_point().x, spec.end_point().y];
        self.tangent_deg = t + sweep_deg;
        self.prims.push(spec);
        self
    }

    /// Tangent-continuous loop stopping `gap` short of closure.
    fn closed_loop(mut self, radius: f64, ccw: bool, gap: f64) -> Self {
        let t = self.tangent_deg;
        let (center_dir, start) = if ccw {
            (t + 90.0, t - 90.0)
        } else {
            (t - 90.0, t + 90.0)
        };
        let cd = center_dir.to_radians();
        let center = [
            self.pos[0] + radius * cd.cos(),
            self.pos[1] + radius * cd.sin(),
        ];
        let spec = PrimitiveSpec::Loop {
            center,
            radius,
            start_deg: start,
            ccw,
            gap,
        };
        let sweep = if ccw { 1.0 } else { -1.0 }
            * (360.0 - (2.0 * (gap / (2.0 * radius)).asin()).to_degrees());
        self.pos = [spec.end_point().x, spec.end_point().y];
        self.tangent_deg = t + sweep;
        self.prims.push(spec);
        self
    }

    fn build(self) -> Vec<PrimitiveSpec> {
        self.prims
    }
}

fn dot(x: f64, y: f64) -> Vec<PrimitiveSpec> {
    vec![PrimitiveSpec::Dot {
        at: [x, y],
        two_points: true,
    }]
}

fn hline(x0: f64, x1: f64, y: f64) -> Vec<PrimitiveSpec> {
    vec![PrimitiveSpec::Line {
        from: [x0, y],
        to: [x1, y],
    }]
}

fn vline(x: f64, y0: f64, y1: f64) -> Vec<PrimitiveSpec> {
    vec![PrimitiveSpec::Line {
        from: [x, y0],
        to: [x, y1],
    }]
}

/// The ten shipped classes.
pub fn standard_classes() -> Vec<ClassSpec> {
    let mut classes = Vec::new();

    // 1: two clockwise arc strokes, a head bar, a post (four strokes)
    classes.push(ClassSpec {
        id: 1,
        name: "hook-pair".into(),
        strokes: vec![
            PathBuilder::start(0.42, 0.78, -170.0).arc(0.20, -160.0).build(),
            PathBuilder::start(0.44, 0.42, -150.0).arc(0.16, -170.0).build(),
            hline(0.05, 0.85, 0.88),
            vline(0.62, 0.88, 0.08),
        ],
    });

    // 2: one stroke with two clockwise bumps split by a cusp, a head bar, a
    // post (three strokes) — globally close to class 1
    classes.push(ClassSpec {
        id: 2,
        name: "double-bump".into(),
        strokes: vec![
            PathBuilder::start(0.40, 0.80, -175.0)
                .arc(0.15, -190.0)
                .turn(135.0)
                .arc(0.15, -190.0)
                .build(),
            hline(0.08, 0.88, 0.90),
            vline(0.66, 0.90, 0.10),
        ],
    });

    // 3: line, corner, counter-clockwise arc, clockwise arc, loop, tail —
    // one stroke with five sub-units
    classes.push(ClassSpec {
        id: 3,
        name: "loop-tail".into(),
        strokes: vec![
            PathBuilder::start(0.22, 0.95, -80.0)
                .line(0.30)
                .turn(140.0)
                .arc(0.14, 160.0)
                .arc(0.13, -150.0)
                .closed_loop(0.085, false, 0.012)
                .line(0.24)
                .build(),
        ],
    });

    // 4: same skeleton as 3 but the loop is an open tight arc and the tail
    // leaves at a corner — four sub-units, globally close to class 3
    classes.push(ClassSpec {
        id: 4,
        name: "curl-tail".into(),
        strokes: vec![
            PathBuilder::start(0.22, 0.95, -80.0)
                .line(0.30)
                .turn(140.0)
                .arc(0.14, 160.0)
                .arc(0.13, -150.0)
                .arc(0.085, -230.0)
                .turn(135.0)
                .line(0.24)
                .build(),
        ],
    });

    // 5: ring with a tangent tail (loop + straight)
    classes.push(ClassSpec {
        id: 5,
        name: "ring-tick".into(),
        strokes: vec![
            PathBuilder::start(0.55, 0.25, 10.0)
                .closed_loop(0.19, true, 0.014)
                .line(0.20)
                .build(),
        ],
    });

    // 6: open ring with a corner tail (counter-clockwise arc + straight) —
    // globally close to class 5
    classes.push(ClassSpec {
        id: 6,
        name: "ring-open".into(),
        strokes: vec![
            PathBuilder::start(0.55, 0.25, 10.0)
                .arc(0.19, 310.0)
                .turn(-135.0)
                .line(0.20)
                .build(),
        ],
    });

    // 7: ess drawn clockwise first
    classes.push(ClassSpec {
        id: 7,
        name: "ess".into(),
        strokes: vec![
            PathBuilder::start(0.30, 0.85, -20.0)
                .arc(0.17, -160.0)
                .arc(0.14, 165.0)
                .build(),
        ],
    });

    // 8: the mirror ess drawn counter-clockwise first
    classes.push(ClassSpec {
        id: 8,
        name: "ess-mirror".into(),
        strokes: vec![
            PathBuilder::start(0.70, 0.85, -160.0)
                .arc(0.17, 160.0)
                .arc(0.14, -165.0)
                .build(),
        ],
    });

    // 9: post with a detached dot
    classes.push(ClassSpec {
        id: 9,
        name: "post-dot".into(),
        strokes: vec![vline(0.50, 0.92, 0.18), dot(0.50, 0.05)],
    });

    // 10: checkmark: two straight segments meeting at a sharp corner
    classes.push(ClassSpec {
        id: 10,
        name: "check".into(),
        strokes: vec![
            PathBuilder::start(0.15, 0.80, -15.0)
                .line(0.55)
                .turn(-140.0)
                .line(0.45)
                .build(),
        ],
    });

    classes
}

impl CorpusManifest {
    /// The shipped recipe: 10 classes × 40 samples (30 train / 10 test),
    /// tremor 0.005, bow 0.015.
    pub fn standard() -> Self {
        Self {
            seed: 0x5eed_2026,
            delta: 0.01,
            samples_per_class: 40,
            train_per_class: 30,
            jitter_sigma: 0.005,
            bow: 0.015,
            classes: standard_classes(),
        }
    }
}

/// Generate one sample: compose the class shape, apply a small per-sample
/// rotation/scale, then perturb. Randomness is derived from
/// (seed, class id, sample index) only.
pub fn generate_sample(
    manifest: &CorpusManifest,
    class: &ClassSpec,
    index: usize,
) -> Result<CorpusSample, SynthError> {
    let (base, truth) = compose_character(&class.strokes, manifest.delta)?;
    let mut rng = SplitMix64::new(derive_seed(&[
        manifest.seed,
        class.id as u64,
        index as u64,
    ]));
    let rot = rng.range(-7.0, 7.0);
    let scale = rng.range(0.94, 1.06);
    let posed = transform_character(&base, rot, scale, 0.0, 0.0);
    let noise = NoiseParams {
        jitter_sigma: manifest.jitter_sigma,
        bow: manifest.bow,
        seed: derive_seed(&[manifest.seed, class.id as u64, index as u64, 1]),
    };
    let mut character = perturb(&posed, &noise);
    character.label = Some(class.id);
    character.meta = crate::ink::Meta {
        source: Some(format!("{}/{}", class.name, index)),
        writer: None,
    };
    Ok(CorpusSample {
        class_id: class.id,
        class_name: class.name.clone(),
        index,
        train: index < manifest.train_per_class,
        character,
        truth,
    })
}

/// Generate the full corpus in (class, index) order.
pub fn generate_corpus(manifest: &CorpusManifest) -> Result<Vec<CorpusSample>, SynthError> {
    let mut out = Vec::with_capacity(manifest.classes.len() * manifest.samples_per_class);
    for class in &manifest.classes {
        for index in 0..manifest.samples_per_class {
            out.push(generate_sample(manifest, class, index)?);
        }
    }
    Ok(out)
}

/// Ideal (noise-free) variants of every class: rotated and translated
/// copies, which are exact isometries of the composed geometry. Returns
/// (character, truth) pairs labeled by class.
pub fn ideal_variants(per_class: usize, seed: u64) -> Vec<(Character, GroundTruth)> {
    let classes = standard_classes();
    let mut out = Vec::with_capacity(classes.len() * per_class);
    for class in &classes {
        let (base, truth) = compose_character(&class.strokes, 0.01)
            .expect("shipped classes always compose");
        for k in 0..per_class {
            let mut rng = SplitMix64::new(derive_seed(&[seed, class.id as u64, k as u64]));
            let rot = rng.range(-30.0, 30.0);
            let tx = rng.range(-0.1, 0.1);
            let ty = rng.range(-0.1, 0.1);
            let mut c = transform_character(&base, rot, 1.0, tx, ty);
            c.label = Some(class.id);
            out.push((c, truth.clone()));
        }
    }
    out
}
