//! JSON experiment configuration.

use std::path::PathBuf;

use fermi_bridge::simulate::{BandRule, LocalTimeConfig};
use fermi_bridge::{BridgeConfig, GeometryPoint, GridPolicy, ModelPair, Side, SpaceForm, SubmanifoldModel};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Estimate,
    EndpointLaw,
    LocalTime,
    RadialMoments,
    VerifyBounds,
    VerifyVaradhan,
    VerifyDerivatives,
    BridgeVsExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceName {
    Euclidean,
    Hyperbolic,
    Circle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    pub space: SpaceName,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub kappa: Option<f64>,
    pub submanifold: SubmanifoldModel,
}

impl PairConfig {
    pub fn build(&self) -> Result<ModelPair, String> {
        let need_m = || self.m.ok_or_else(|| "pair.m is required for this space".to_string());
        let space = match self.space {
            SpaceName::Euclidean => SpaceForm::euclidean(need_m()?),
            SpaceName::Hyperbolic => SpaceForm::hyperbolic(need_m()?, self.kappa.unwrap_or(-1.0)),
            SpaceName::Circle => Ok(SpaceForm::circle()),
        }
        .map_err(|e| format!("pair: {e}"))?;
        ModelPair::new(space, self.submanifold.clone()).map_err(|e| format!("pair: {e}"))
    }
}

/// Start point: ambient coordinates, or a point at a given distance from `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartPoint {
    Coords(Vec<f64>),
    Distance {
        distance: f64,
        #[serde(default)]
        side: Side,
    },
}

impl StartPoint {
    pub fn build(&self, pair: &ModelPair) -> Result<GeometryPoint, String> {
        let p = match self {
            StartPoint::Coords(c) => GeometryPoint::new(c.clone()),
            StartPoint::Distance { distance, side } => {
                pair.point_at_distance(*distance, *side).map_err(|e| format!("x0: {e}"))?
            }
        };
        pair.check_point(p.coords()).map_err(|e| format!("x0: {e}"))?;
        Ok(p)
    }
}

fn default_t() -> f64 {
    1.0
}

fn default_paths() -> usize {
    10_000
}

fn default_workers() -> usize {
    1
}

fn default_output() -> PathBuf {
    PathBuf::from("results.csv")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub pair: PairConfig,
    #[serde(default)]
    pub x0: Option<StartPoint>,
    #[serde(default = "default_t")]
    pub t_total: f64,
    #[serde(default = "default_paths")]
    pub n_paths: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_output")]
    pub output: PathBuf,

    #[serde(default)]
    pub grid: Option<GridPolicy>,
    #[serde(default)]
    pub cutoffs: Option<Vec<f64>>,
    #[serde(default)]
    pub eps_band: Option<f64>,
    #[serde(default)]
    pub extra_bands: Vec<f64>,
    #[serde(default)]
    pub band_rule: BandRule,
    #[serde(default)]
    pub domain_radius: Option<f64>,
    #[serde(default)]
    pub cut_local_time: Option<bool>,
    #[serde(default)]
    pub exact_cut_crossing: Option<bool>,
    /// Observation times for radial moments and the bridge-law check.
    #[serde(default)]
    pub observe: Vec<f64>,
    /// Radial moment order, 1 or 2.
    #[serde(default)]
    pub moment: Option<u32>,

    /// Report times for local time; time grid for verifiers.
    #[serde(default)]
    pub t_grid: Vec<f64>,
    /// Distance grid for verifiers.
    #[serde(default)]
    pub d_grid: Vec<f64>,
    #[serde(default)]
    pub eps_bands: Vec<f64>,
    #[serde(default)]
    pub h_near: Option<f64>,
    #[serde(default)]
    pub h_far: Option<f64>,
    #[serde(default)]
    pub freeze_radius: Option<f64>,
    #[serde(default)]
    pub sigma2: Option<f64>,
    #[serde(default)]
    pub kappas: Vec<f64>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("config: {e}"))
    }

    fn start(&self, pair: &ModelPair) -> Result<GeometryPoint, String> {
        self.x0.as_ref().ok_or_else(|| "x0 is required for this experiment".to_string())?.build(pair)
    }

    pub fn bridge_config(&self) -> Result<BridgeConfig, String> {
        let pair = self.pair.build()?;
        let x0 = self.start(&pair)?;
        let mut cfg = BridgeConfig::new(pair, x0, self.t_total);
        if let Some(grid) = self.grid {
            cfg = cfg.with_h_max(grid.h_max);
            cfg.grid = grid;
        }
        cfg.n_paths = self.n_paths;
        cfg.seed = self.seed;
        if let Some(c) = &self.cutoffs {
            cfg.cutoffs = c.clone();
        }
        if let Some(e) = self.eps_band {
            cfg.eps_band = e;
        }
        cfg.extra_bands = self.extra_bands.clone();
        cfg.band_rule = self.band_rule;
        if let Some(r) = self.domain_radius {
            cfg.domain_radius = r;
        }
        if let Some(b) = self.cut_local_time {
            cfg.cut_local_time = b;
        }
        if let Some(b) = self.exact_cut_crossing {
            cfg.exact_cut_crossing = b;
        }
        cfg.observe = self.observe.clone();
        cfg.validate().map_err(|e| e.to_string())?;
        cfg.time_grid().map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    pub fn local_time_config(&self) -> Result<LocalTimeConfig, String> {
        let pair = self.pair.build()?;
        let cfg = LocalTimeConfig {
            x0: self.start(&pair)?,
            pair,
            t_grid: self.t_grid.clone(),
            n_paths: self.n_paths,
            seed: self.seed,
            eps_bands: if self.eps_bands.is_empty() { vec![0.01] } else { self.eps_bands.clone() },
            h_near: self.h_near.unwrap_or(1e-4),
            h_far: self.h_far.unwrap_or(1e-2),
            freeze_radius: self.freeze_radius.unwrap_or(f64::INFINITY),
        };
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    /// The verifier grids, with `t in [0.01, 1]` and `d in [0, 2]` by default.
    pub fn verify_grids(&self) -> Result<(Vec<f64>, Vec<f64>), String> {
        let ts = if self.t_grid.is_empty() {
            (0..9).map(|i| 0.01 * 100f64.powf(i as f64 / 8.0)).collect()
        } else {
            self.t_grid.clone()
        };
        let ds = if self.d_grid.is_empty() { (0..9).map(|i| 0.25 * i as f64).collect() } else { self.d_grid.clone() };
        if ts.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            return Err("t_grid entries must be positive".into());
        }
        if ds.iter().any(|&d| !(d >= 0.0 && d.is_finite())) {
            return Err("d_grid entries must be non-negative".into());
        }
        Ok((ts, ds))
    }

    /// Checks every parameter the chosen experiment uses.
    pub fn validate(&self) -> Result<(), String> {
        if self.workers == 0 {
            return Err("workers must be at least 1".into());
        }
        self.pair.build()?;
        match self.experiment {
            Experiment::Estimate | Experiment::EndpointLaw => self.bridge_config().map(|_| ()),
            Experiment::RadialMoments => {
                if self.observe.is_empty() {
                    return Err("radial-moments needs at least one observation time".into());
                }
                if !matches!(self.moment.unwrap_or(2), 1 | 2) {
                    return Err("moment must be 1 or 2".into());
                }
                self.bridge_config().map(|_| ())
            }
            Experiment::BridgeVsExact => {
                let pair = self.pair.build()?;
                if !matches!(pair.submanifold(), SubmanifoldModel::AffineSubspace { .. }) || pair.m() == pair.n() {
                    return Err("bridge-vs-exact needs an affine subspace of R^m".into());
                }
                if self.observe.len() > 1 {
                    return Err("bridge-vs-exact takes at most one observation time".into());
                }
                self.bridge_config().map(|_| ())
            }
            Experiment::LocalTime => self.local_time_config().map(|_| ()),
            Experiment::VerifyBounds | Experiment::VerifyVaradhan | Experiment::VerifyDerivatives => {
                let (ts, _) = self.verify_grids()?;
                if self.experiment == Experiment::VerifyVaradhan && ts.len() < 3 {
                    return Err("verify-varadhan needs at least three times".into());
                }
                if self.experiment == Experiment::VerifyBounds && ts.len() < 2 {
                    return Err("verify-bounds needs at least two times".into());
                }
                if self.sigma2.is_some_and(|s| !(s > 0.0)) {
                    return Err("sigma2 must be positive".into());
                }
                if self.kappas.iter().any(|&k| !(k < 0.0)) {
                    return Err("kappas must be negative".into());
                }
                Ok(())
            }
        }
    }
}
