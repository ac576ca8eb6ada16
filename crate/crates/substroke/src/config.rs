//! Segmentation thresholds.

use serde::{Deserialize, Serialize};

/// Thresholds for the segment detectors and boundary rules.
///
/// The point-count thresholds (`tau_cw_ip`, `tau_ccw_ip`, `tau_su_len`,
/// `tau_mdc`, `tau_lv`) assume strokes resampled at `delta` spacing; changing
/// `delta` without rescaling them changes detector behavior, which
/// [`Config::warnings`] reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Direction-relation value at or below which a point pair reads as clockwise.
    pub tau_cw: f64,
    /// Direction-relation value at or above which a point pair reads as counter-clockwise.
    pub tau_ccw: f64,
    /// Index proximity: a clockwise relation run counts for an anchor within this many indices.
    pub tau_cw_ip: usize,
    /// Index proximity for counter-clockwise runs.
    pub tau_ccw_ip: usize,
    /// Minimum point count for a curve mark to be a sub-unit rather than a pseudo sub-unit.
    pub tau_su_len: usize,
    /// Windowed turn angle (degrees) at or above which a point belongs to a sharp-turn region.
    pub tau_rldc: f64,
    /// Loop window lower slack: total turn must be at least 360 minus this (degrees).
    pub tau_tdc_lower: f64,
    /// Loop window upper slack: total turn must be at most 360 plus this (degrees).
    pub tau_tdc_upper: f64,
    /// Maximum distance between loop end-point candidates (normalized units).
    pub tau_delta: f64,
    /// Half-width, in points, of the chord window used for the windowed turn angle.
    pub tau_mdc: usize,
    /// Offset, in points, of the tangent samples used to verify a loop candidate.
    pub tau_lv: usize,
    /// Resampling distance the point-count thresholds are calibrated for.
    pub delta: f64,
    /// Guard added to denominators in the loop-verification slope computation.
    pub epsilon: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tau_cw: -0.1,
            tau_ccw: 0.1,
            tau_cw_ip: 6,
            tau_ccw_ip: 6,
            tau_su_len: 14,
            tau_rldc: 105.0,
            tau_tdc_lower: 180.0,
            tau_tdc_upper: 0.0,
            tau_delta: 0.04,
            tau_mdc: 3,
            tau_lv: 5,
            delta: 0.01,
            epsilon: 1e-12,
        }
    }
}

/// Invalid configuration value.
#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("tau_cw must be negative and tau_ccw positive (got {cw}, {ccw})")]
    SignWindow { cw: f64, ccw: f64 },
    #[error("{name} must be >= 1")]
    ZeroCount { name: &'static str },
    #[error("{name} must be > 0")]
    NonPositive { name: &'static str },
}

impl Config {
    /// Check the structural invariants.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.tau_cw < 0.0 && self.tau_ccw > 0.0) {
            return Err(ConfigError::SignWindow {
                cw: self.tau_cw,
                ccw: self.tau_ccw,
            });
        }
        for (name, v) in [
            ("tau_cw_ip", self.tau_cw_ip),
            ("tau_ccw_ip", self.tau_ccw_ip),
            ("tau_su_len", self.tau_su_len),
            ("tau_mdc", self.tau_mdc),
            ("tau_lv", self.tau_lv),
        ] {
            if v < 1 {
                return Err(ConfigError::ZeroCount { name });
            }
        }
        for (name, v) in [("tau_delta", self.tau_delta), ("delta", self.delta)] {
            if !(v > 0.0) {
                return Err(ConfigError::NonPositive { name });
            }
        }
        Ok(())
    }

    /// Non-fatal advisories, e.g. a `delta` override without rescaled
    /// point-count thresholds.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let d = Config::default();
        let counts_default = self.tau_cw_ip == d.tau_cw_ip
            && self.tau_ccw_ip == d.tau_ccw_ip
            && self.tau_su_len == d.tau_su_len
            && self.tau_mdc == d.tau_mdc
            && self.tau_lv == d.tau_lv;
        if (self.delta - d.delta).abs() > f64::EPSILON && counts_default {
            out.push(format!(
                "delta overridden to {} but point-count thresholds are still calibrated \
                 for delta = {}; consider rescaling tau_su_len, tau_cw_ip, tau_ccw_ip, \
                 tau_mdc, tau_lv",
                self.delta, d.delta
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_published_thresholds() {
        let c = Config::default();
        assert_eq!(c.tau_cw, -0.1);
        assert_eq!(c.tau_ccw, 0.1);
        assert_eq!(c.tau_cw_ip, 6);
        assert_eq!(c.tau_ccw_ip, 6);
        assert_eq!(c.tau_su_len, 14);
        assert_eq!(c.tau_rldc, 105.0);
        assert_eq!(c.tau_tdc_lower, 180.0);
        assert_eq!(c.tau_tdc_upper, 0.0);
        assert_eq!(c.tau_delta, 0.04);
        assert_eq!(c.tau_mdc, 3);
        assert_eq!(c.tau_lv, 5);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn delta_override_warns() {
        let cfg = Config {
            delta: 0.02,
            ..Config::default()
        };
        assert_eq!(cfg.warnings().len(), 1);
        assert!(Config::default().warnings().is_empty());
    }

    #[test]
    fn sign_window_enforced() {
        let cfg = Config {
            tau_cw: 0.1,
            ..Config::default()
        };
        assert!(matches!(cfg.validate(), Err(ConfigError::SignWindow { .. })));
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = Config::default();
        let s = serde_json::to_string(&cfg).unwrap();
        let back: Config = serde_json::from_str(&s).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn unknown_keys_rejected() {
        let r: Result<Config, _> = serde_json::from_str(r#"{"tau_cww": 5}"#);
        assert!(r.is_err());
    }
}
