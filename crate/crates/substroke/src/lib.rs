//! Structural analysis of online handwriting strokes.
//!
//! A stroke — the pen trajectory between pen-down and pen-up — is decomposed
//! into *sub-units*: maximal homogeneous segments that are clockwise curves,
//! counter-clockwise curves, straight segments, loops, or point strokes.
//! The crate provides two segmenters plus everything around them:
//!
//! - [`ideal`]: exact segmentation of noise-free strokes from the signs of the
//!   discrete turning function. Serves as the semantic oracle.
//! - [`detect`] + [`sue`]: the heuristic pipeline for real handwriting. Four
//!   detectors find clockwise runs, counter-clockwise runs, loops, and sharp
//!   turns; overlapping marks are merged/pruned; boundary rules turn the
//!   surviving marks into segmentation points and labeled sub-units.
//! - [`preprocess`]: dedup, size/location normalization, equal-distance
//!   resampling, and smoothing, which the detectors' point-count thresholds
//!   assume.
//! - [`synth`]: a deterministic generator of labeled characters (ideal
//!   composition + handwriting-style perturbation) used as ground truth.
//! - [`features`]: character-level global and sub-unit-level local feature
//!   vectors with a nearest-centroid classifier harness.
//! - [`ink`]: the character/stroke/point model and its JSON format.
//! - [`render`]: SVG rendering of segmented characters.
//!
//! All point indices in public contracts are 1-based, matching the
//! segmentation output format; coordinates use a y-up convention so that a
//! positive turn cross product means counter-clockwise.

pub mod config;
pub mod detect;
pub mod features;
pub mod geometry;
pub mod ideal;
pub mod ink;
pub mod preprocess;
pub mod render;
pub mod sue;
pub mod synth;

pub use config::Config;
pub use ink::{Character, Point, Stroke, SubUnit, SubUnitLabel};
pub use sue::{segment_character, segment_stroke, CharacterSegmentation, SegmentationResult};
