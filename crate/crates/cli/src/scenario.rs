//! Scenario configuration: named presets, JSON files and flag overrides.
//!
//! Precedence, lowest first: the preset named by `--preset` (or `fig1a`
//! when none is given), then the keys present in the `--scenario` file,
//! then individual command-line flags. A scenario file may be partial;
//! its keys are merged recursively into the preset.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use spin_kitten::model::{ModelParams, Spin};
use spin_kitten::phasespace::Distribution;
use spin_kitten::state::{InitialStateSpec, Truncation};

use crate::CliError;

/// Phase space a `distribution` run samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// Qudit sphere (θ, φ).
    Spin,
    /// Oscillator plane β.
    Osc,
    /// Sphere slice of the joint distribution at fixed β.
    Bipartite,
}

/// Uniform time grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    /// First time (1/ω).
    pub start: f64,
    /// Last time (1/ω).
    pub end: f64,
    /// Number of samples, endpoints included.
    pub points: usize,
}

/// Grid resolutions of the sampled outputs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    /// Polar nodes θ ∈ [0, π] of sphere outputs, poles included.
    pub sphere_theta: usize,
    /// Azimuthal nodes φ ∈ [0, 2π) of sphere outputs.
    pub sphere_phi: usize,
    /// Spacing of the oscillator-plane grid.
    pub plane_step: f64,
    /// Tomogram nodes in 𝔟 ∈ [0, π].
    pub tomo_b: usize,
    /// Tomogram nodes in 𝔤 ∈ [0, 2π].
    pub tomo_g: usize,
}

/// Which distribution the `distribution` subcommand emits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionSpec {
    /// P, W or Q.
    pub dist: Distribution,
    /// Spin sphere, oscillator plane or bipartite slice.
    pub space: Space,
    /// Fixed β of the bipartite slice.
    pub beta_slice: Complex64,
}

/// Window scan settings of `revival-scan`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RevivalSpec {
    /// Largest quasiperiod multiple examined.
    pub k_max: u32,
    /// Half-width of each window relative to k·T.
    pub rel_window: f64,
    /// Samples per window.
    pub samples: usize,
    /// d_HS below which a window counts as a revival.
    pub threshold: f64,
}

/// Complete description of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Label copied into manifests.
    pub name: String,
    /// Qudit spin.
    pub spin: Spin,
    /// ω, Δ, λ̃.
    pub params: ModelParams,
    /// Initial quasi-Bell state.
    pub initial: InitialStateSpec,
    /// Photon cutoff policy.
    pub truncation: Truncation,
    /// Time grid of the series subcommands.
    pub time: TimeGrid,
    /// Time of the snapshot subcommands (`evolve`, `distribution`, `tomogram`).
    pub snapshot: f64,
    /// Output grid resolutions.
    pub grids: Grids,
    /// Distribution selection.
    pub distribution: DistributionSpec,
    /// Revival scan settings.
    pub revival: RevivalSpec,
    /// Output directory.
    pub out_dir: String,
}

/// Names accepted by `--preset`.
pub const PRESETS: [&str; 7] = ["fig1a", "fig1b", "fig3a", "fig3b", "fig6a", "fig6b", "fig7"];

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Parameter set pinned by a preset name.
pub fn preset(name: &str) -> Option<Scenario> {
    // (spin, Δ, λ̃, z, α, r, time span, snapshot)
    let (spin, delta, lam, z, alpha, r, end, snapshot) = match name {
        "fig1a" => (Spin::One, 0.16, 0.005, 0.1051, 3.0, 0.2, 6.5e6, 0.785496e6),
        "fig1b" => (Spin::One, 0.16, 0.2, 0.1051, 3.0, 0.2, 6.0e6, 0.785496e6),
        "fig3a" => (Spin::ThreeHalves, 0.15, 0.007, 0.1051, 3.0, 0.2, 2.6e6, 0.284981e6),
        "fig3b" => (Spin::ThreeHalves, 0.15, 0.2, 0.1051, 3.0, 0.2, 6.0e6, 0.284981e6),
        "fig6a" => (Spin::One, 0.12, 0.005, 0.3249, 0.5, 0.0, 2.2e6, 120717.0),
        "fig6b" => (Spin::ThreeHalves, 0.1, 0.01, 0.3249, 0.5, 0.0, 7.0e5, 31685.0),
        "fig7" => (Spin::ThreeHalves, 0.15, 0.002, 0.1051, 3.0, 0.2, 1.5e7, 1.397223e7),
        _ => return None,
    };
    Some(Scenario {
        name: name.to_string(),
        spin,
        params: ModelParams { omega: 1.0, delta, lam_tilde: lam },
        initial: InitialStateSpec { z: re(z), alpha: re(alpha), r, zeta: 0.0, c: re(0.0) },
        truncation: Truncation::default(),
        time: TimeGrid { start: 0.0, end, points: 2000 },
        snapshot,
        grids: Grids { sphere_theta: 91, sphere_phi: 180, plane_step: 0.1, tomo_b: 90, tomo_g: 90 },
        distribution: DistributionSpec { dist: Distribution::P, space: Space::Spin, beta_slice: re(alpha) },
        revival: RevivalSpec { k_max: 5, rel_window: 0.002, samples: 401, threshold: 0.05 },
        out_dir: "out".to_string(),
    })
}

/// Command-line values that override the configuration.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    /// `--out`.
    pub out_dir: Option<String>,
    /// `--t-start`.
    pub t_start: Option<f64>,
    /// `--t-end`.
    pub t_end: Option<f64>,
    /// `--t-points`.
    pub t_points: Option<usize>,
    /// `--time`.
    pub snapshot: Option<f64>,
    /// `--dist`.
    pub dist: Option<Distribution>,
    /// `--space`.
    pub space: Option<Space>,
    /// `--beta-slice`.
    pub beta_slice: Option<Complex64>,
    /// `--n-max`.
    pub n_max: Option<usize>,
    /// `--tail-tol`.
    pub tail_tol: Option<f64>,
    /// `--sphere-grid`.
    pub sphere_grid: Option<(usize, usize)>,
    /// `--tomo-grid`.
    pub tomo_grid: Option<(usize, usize)>,
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

impl Scenario {
    /// Preset, optionally overlaid by the JSON text of a scenario file.
    pub fn load(preset_name: Option<&str>, file_text: Option<&str>) -> Result<Scenario, CliError> {
        let name = preset_name.unwrap_or("fig1a");
        let base = preset(name).ok_or_else(|| CliError::Config(format!("unknown preset '{name}'; known: {}", PRESETS.join(", "))))?;
        let mut value = serde_json::to_value(&base).map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(text) = file_text {
            let over: Value = serde_json::from_str(text).map_err(|e| CliError::Config(format!("scenario file: {e}")))?;
            if !over.is_object() {
                return Err(CliError::Config("scenario file must hold a JSON object".into()));
            }
            merge(&mut value, over);
        }
        let sc: Scenario = serde_json::from_value(value).map_err(|e| CliError::Config(format!("scenario: {e}")))?;
        sc.validate()?;
        Ok(sc)
    }

    /// Apply flag overrides and re-validate.
    pub fn apply(mut self, o: &Overrides) -> Result<Scenario, CliError> {
        if let Some(v) = &o.out_dir {
            self.out_dir = v.clone();
        }
        if let Some(v) = o.t_start {
            self.time.start = v;
        }
        if let Some(v) = o.t_end {
            self.time.end = v;
        }
        if let Some(v) = o.t_points {
            self.time.points = v;
        }
        if let Some(v) = o.snapshot {
            self.snapshot = v;
        }
        if let Some(v) = o.dist {
            self.distribution.dist = v;
        }
        if let Some(v) = o.space {
            self.distribution.space = v;
        }
        if let Some(v) = o.beta_slice {
            self.distribution.beta_slice = v;
        }
        if let Some(v) = o.n_max {
            self.truncation.n_max = Some(v);
        }
        if let Some(v) = o.tail_tol {
            self.truncation.tail_tol = v;
        }
        if let Some((a, b)) = o.sphere_grid {
            self.grids.sphere_theta = a;
            self.grids.sphere_phi = b;
        }
        if let Some((a, b)) = o.tomo_grid {
            self.grids.tomo_b = a;
            self.grids.tomo_g = b;
        }
        self.validate()?;
        Ok(self)
    }

    /// Domain checks shared by every subcommand.
    pub fn validate(&self) -> Result<(), CliError> {
        let cfg = |m: String| Err(CliError::Config(m));
        let p = &self.params;
        ModelParams::new(p.omega, p.delta, p.lam_tilde).map_err(|e| CliError::Config(e.to_string()))?;
        let s = &self.initial;
        InitialStateSpec::new(s.z, s.alpha, s.r, s.zeta, s.c).map_err(|e| CliError::Config(e.to_string()))?;
        if !(self.truncation.tail_tol > 0.0 && self.truncation.tail_tol < 1.0) {
            return cfg(format!("tail_tol must lie in (0, 1), got {}", self.truncation.tail_tol));
        }
        let t = &self.time;
        if !(t.start >= 0.0 && t.end.is_finite() && t.end >= t.start) || t.points < 1 || (t.points > 1 && t.end == t.start) {
            return cfg(format!("invalid time grid [{}, {}] with {} points", t.start, t.end, t.points));
        }
        if !(self.snapshot >= 0.0 && self.snapshot.is_finite()) {
            return cfg(format!("snapshot time must be finite and >= 0, got {}", self.snapshot));
        }
        let g = &self.grids;
        if g.sphere_theta < 2 || g.sphere_phi < 1 || g.tomo_b < 1 || g.tomo_g < 1 || !(g.plane_step > 0.0) {
            return cfg("grid resolutions must be positive (sphere_theta >= 2)".into());
        }
        let r = &self.revival;
        if r.k_max < 1 || r.samples < 3 || !(r.rel_window > 0.0 && r.rel_window < 1.0) || !(r.threshold > 0.0) {
            return cfg("revival settings need k_max >= 1, samples >= 3, 0 < rel_window < 1, threshold > 0".into());
        }
        Ok(())
    }

    /// Pretty JSON text of the scenario.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip_bit_exactly() {
        for name in PRESETS {
            let sc = preset(name).unwrap();
            sc.validate().unwrap();
            let back = Scenario::load(Some("fig7"), Some(&sc.to_json())).unwrap();
            assert_eq!(back, sc);
            assert_eq!(back.to_json(), sc.to_json());
        }
    }

    #[test]
    fn partial_files_and_flags_layer_over_presets() {
        let sc = Scenario::load(Some("fig3a"), Some(r#"{"params": {"delta": 0.2}, "time": {"points": 17}}"#)).unwrap();
        assert_eq!(sc.params.delta, 0.2);
        assert_eq!(sc.params.lam_tilde, 0.007);
        assert_eq!(sc.time.points, 17);
        let sc = sc.apply(&Overrides { t_points: Some(5), n_max: Some(64), ..Default::default() }).unwrap();
        assert_eq!(sc.time.points, 5);
        assert_eq!(sc.truncation.n_max, Some(64));
    }

    #[test]
    fn bad_configuration_is_rejected() {
        assert!(matches!(Scenario::load(Some("fig9"), None), Err(CliError::Config(_))));
        assert!(matches!(Scenario::load(None, Some("[1]")), Err(CliError::Config(_))));
        assert!(matches!(Scenario::load(None, Some(r#"{"bogus": 1}"#)), Err(CliError::Config(_))));
        assert!(matches!(Scenario::load(None, Some(r#"{"params": {"delta": -1}}"#)), Err(CliError::Config(_))));
        assert!(matches!(Scenario::load(None, Some(r#"{"time": {"end": -1}}"#)), Err(CliError::Config(_))));
    }
}
