//! Path generation: Brownian motion, exact Euclidean bridges and Fermi bridges.
//!
//! Every path draws from its own ChaCha8 stream, selected by the path index
//! from a generator seeded with the master seed. Results are collected in
//! index order, so statistics do not depend on the number of worker threads.

mod brownian;
mod fermi;
mod grid;
mod local_time;

pub use brownian::{brownian_step_into, sample_brownian_path, sample_exact_euclidean_bridge};
pub use fermi::{
    accumulate_cut_local_time, sample_fermi_bridge_step, CutLocalTime, PathAccumulator, StepParams, CIRCLE_JUMP_FACTOR,
};
pub use grid::{GridPolicy, TimeGrid};
pub use local_time::{band_increment, bridge_band_occupation, occupation_local_time, BandRule};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{config, Result};
use crate::estimate::EstimateResult;
use crate::geometry::{GeometryPoint, ModelPair, SpaceKind};
use crate::stats::RunningStats;

/// Human-readable description of the per-path random streams.
pub const RNG_SCHEME: &str = "ChaCha8Rng::seed_from_u64(seed) with set_stream(path_index); one stream per path";

/// The random stream of path `index`.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Maps `f` over `n` paths in parallel, returning results in path order.
pub fn map_paths<T, F>(n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> T + Sync,
{
    (0..n)
        .into_par_iter()
        .with_min_len(64)
        .map(|i| {
            let mut rng = path_rng(seed, i as u64);
            f(i as u64, &mut rng)
        })
        .collect()
}

/// Runs `op` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send, F: FnOnce() -> T + Send>(workers: usize, op: F) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| config(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(op))
}

/// Parameters of a Fermi-bridge run.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeConfig {
    pub pair: ModelPair,
    pub x0: GeometryPoint,
    pub t_total: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub grid: GridPolicy,
    /// Cutoffs `c` at which the weight is recorded at time `T - c`; the smallest one ends the simulation.
    pub cutoffs: Vec<f64>,
    /// Times at which `r_N` (and optionally the position) is recorded.
    pub observe: Vec<f64>,
    /// Local-time band half-width.
    pub eps_band: f64,
    /// Further band half-widths tracked on the same paths.
    pub extra_bands: Vec<f64>,
    pub band_rule: BandRule,
    /// Radius of the domain `B_R(N)`.
    pub domain_radius: f64,
    /// Include the cut-locus local time in the weight (circle only).
    pub cut_local_time: bool,
    pub exact_cut_crossing: bool,
    pub record_positions: bool,
}

impl BridgeConfig {
    /// Defaults: `h_max = 1e-3`, cutoffs `{1e-2, 1e-3, 1e-4}`, `eps = sqrt(h_max) / 2`, unbounded domain.
    pub fn new(pair: ModelPair, x0: GeometryPoint, t_total: f64) -> Self {
        let grid = GridPolicy::default();
        Self {
            pair,
            x0,
            t_total,
            n_paths: 10_000,
            seed: 0,
            eps_band: 0.5 * grid.h_max.sqrt(),
            grid,
            cutoffs: vec![1e-2, 1e-3, 1e-4],
            observe: vec![],
            extra_bands: vec![],
            band_rule: BandRule::BridgeConditional,
            domain_radius: f64::INFINITY,
            cut_local_time: true,
            exact_cut_crossing: true,
            record_positions: false,
        }
    }

    /// Sets `h_max` and resets the band width to its default `sqrt(h_max) / 2`.
    pub fn with_h_max(mut self, h_max: f64) -> Self {
        self.grid.h_max = h_max;
        self.eps_band = 0.5 * h_max.sqrt();
        self
    }

    pub fn smallest_cutoff(&self) -> f64 {
        self.cutoffs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self) -> Result<()> {
        self.pair.check_point(self.x0.coords())?;
        if self.n_paths == 0 {
            return Err(config("n_paths must be positive"));
        }
        if !(self.t_total > 0.0 && self.t_total.is_finite()) {
            return Err(config(format!("T must be positive, got {}", self.t_total)));
        }
        if !(self.domain_radius > 0.0) {
            return Err(config("domain radius must be positive"));
        }
        let bands = std::iter::once(self.eps_band).chain(self.extra_bands.iter().copied());
        for eps in bands {
            if !(eps > 0.0) {
                return Err(config(format!("band widths must be positive, got {eps}")));
            }
            if self.pair.space().kind() == SpaceKind::Circle && eps >= std::f64::consts::FRAC_PI_2 {
                return Err(config(format!("band width {eps} exceeds the circle's injectivity scale")));
            }
        }
        if self.pair.space().kind() == SpaceKind::Circle && self.x0.0[0] >= std::f64::consts::TAU {
            return Err(config("circle start point must lie in [0, 2 pi)"));
        }
        self.grid.validate()?;
        Ok(())
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        TimeGrid::build(self.t_total, &self.grid, &self.cutoffs, &self.observe)
    }

    fn step_params(&self, grid: &TimeGrid) -> StepParams {
        StepParams {
            t_total: self.t_total,
            horizon: *grid.times().last().expect("non-empty grid"),
            domain_radius: self.domain_radius,
            exact_cut_crossing: self.exact_cut_crossing,
        }
    }
}

/// What one bridge path reports.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeRecord {
    /// `A + L` at each `T - c`, in the order of `cutoffs`; `-inf` once killed.
    pub log_weights: Vec<f64>,
    /// `A` alone at each cutoff.
    pub log_weights_without_l: Vec<f64>,
    /// `A + L` with each extra band, `[band][cutoff]`.
    pub log_weights_extra: Vec<Vec<f64>>,
    /// `r_N` at each observation time, `NaN` once killed.
    pub r_obs: Vec<f64>,
    /// Positions at observation times followed by the terminal position, when recorded.
    pub positions: Vec<GeometryPoint>,
    pub exited_at: Option<f64>,
    pub max_drift_ratio: f64,
}

/// Simulates one Fermi-bridge path on `grid`.
pub fn simulate_bridge_path(cfg: &BridgeConfig, grid: &TimeGrid, rng: &mut ChaCha8Rng) -> Result<BridgeRecord> {
    let pair = &cfg.pair;
    let params = cfg.step_params(grid);
    let with_l = cfg.cut_local_time && pair.has_charged_cut_locus();
    let band = CutLocalTime { rule: cfg.band_rule, eps: cfg.eps_band, extra: cfg.extra_bands.clone() };
    let cut_idx: Vec<usize> = cfg.cutoffs.iter().map(|&c| grid.index_of_cutoff(c).expect("cutoff on grid")).collect();
    let obs_idx: Vec<usize> = cfg.observe.iter().map(|&t| grid.index_of(t).expect("observation on grid")).collect();

    let mut acc = PathAccumulator::new(pair, &cfg.x0, cfg.extra_bands.len());
    let mut rec = BridgeRecord {
        log_weights: vec![f64::NEG_INFINITY; cut_idx.len()],
        log_weights_without_l: vec![f64::NEG_INFINITY; cut_idx.len()],
        log_weights_extra: vec![vec![f64::NEG_INFINITY; cut_idx.len()]; cfg.extra_bands.len()],
        r_obs: vec![f64::NAN; obs_idx.len()],
        positions: Vec::new(),
        exited_at: None,
        max_drift_ratio: 0.0,
    };
    let mut obs_positions = vec![None; obs_idx.len()];
    let times = grid.times();
    for k in 0..grid.n_steps() {
        let (s, h) = (times[k], times[k + 1] - times[k]);
        sample_fermi_bridge_step(pair, &params, &mut acc, s, h, rng)?;
        if with_l {
            accumulate_cut_local_time(pair, &mut acc, s, h, cfg.t_total, &band)?;
        }
        if !acc.alive {
            break;
        }
        for (j, &idx) in cut_idx.iter().enumerate() {
            if idx == k + 1 {
                rec.log_weights[j] = acc.a_int + acc.l_int;
                rec.log_weights_without_l[j] = acc.a_int;
                for (b, l) in acc.l_extra.iter().enumerate() {
                    rec.log_weights_extra[b][j] = acc.a_int + l;
                }
            }
        }
        for (j, &idx) in obs_idx.iter().enumerate() {
            if idx == k + 1 {
                rec.r_obs[j] = acc.r;
                if cfg.record_positions {
                    obs_positions[j] = Some(acc.position.clone());
                }
            }
        }
    }
    if cfg.record_positions && acc.alive {
        rec.positions = obs_positions.into_iter().flatten().collect();
        rec.positions.push(acc.position.clone());
    }
    rec.exited_at = acc.exited_at;
    rec.max_drift_ratio = acc.max_drift_ratio;
    Ok(rec)
}

/// Simulates `cfg.n_paths` bridge paths in parallel.
pub fn run_bridge(cfg: &BridgeConfig) -> Result<(TimeGrid, Vec<BridgeRecord>)> {
    cfg.validate()?;
    let grid = cfg.time_grid()?;
    let records: Result<Vec<_>> =
        map_paths(cfg.n_paths, cfg.seed, |_, rng| simulate_bridge_path(cfg, &grid, rng)).into_iter().collect();
    Ok((grid, records?))
}

/// Monte Carlo `E[1{t < tau_D} r_N^p(X_t)]` at each observation time of `cfg`.
pub fn radial_moment_mc(cfg: &BridgeConfig, p: u32) -> Result<Vec<(f64, EstimateResult)>> {
    if !(p == 1 || p == 2) {
        return Err(config(format!("radial moment order must be 1 or 2, got {p}")));
    }
    let (_, records) = run_bridge(cfg)?;
    Ok(cfg
        .observe
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let stats: RunningStats =
                records.iter().map(|r| if r.r_obs[j].is_nan() { 0.0 } else { r.r_obs[j].powi(p as i32) }).collect();
            (t, EstimateResult::from_stats(&stats, None))
        })
        .collect())
}

/// Parameters of a Brownian local-time run on a hypersurface.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalTimeConfig {
    pub pair: ModelPair,
    pub x0: GeometryPoint,
    /// Increasing times at which the accumulated local time is reported.
    pub t_grid: Vec<f64>,
    pub n_paths: usize,
    pub seed: u64,
    pub eps_bands: Vec<f64>,
    /// Step size inside the band.
    pub h_near: f64,
    /// Largest step size far from the band.
    pub h_far: f64,
    /// Paths further than this from `N` are frozen; their local time no longer grows.
    pub freeze_radius: f64,
}

impl LocalTimeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pair.codimension() != 1 {
            return Err(config(format!("local time needs a hypersurface, codimension is {}", self.pair.codimension())));
        }
        self.pair.check_point(self.x0.coords())?;
        if self.t_grid.is_empty() || self.t_grid[0] <= 0.0 || self.t_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(config("local-time report times must be positive and increasing"));
        }
        if self.eps_bands.is_empty() || self.eps_bands.iter().any(|&e| !(e > 0.0)) {
            return Err(config("at least one positive band width is required"));
        }
        if !(self.h_near > 0.0 && self.h_far >= self.h_near) {
            return Err(config("need 0 < h_near <= h_far"));
        }
        if !(self.freeze_radius > 0.0) {
            return Err(config("freeze radius must be positive"));
        }
        if self.n_paths == 0 {
            return Err(config("n_paths must be positive"));
        }
        Ok(())
    }
}

/// One Brownian path's local time on `N` for each band, `[band][report time]`.
///
/// The step is `((dist - eps_max) / 6)^2` clamped to `[h_near, h_far]`, so
/// steps are short only near the band. Each step contributes the expected band
/// occupation of a Brownian bridge between the signed distances at its ends.
pub fn simulate_local_time_path(cfg: &LocalTimeConfig, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let pair = &cfg.pair;
    let space = pair.space();
    let eps_max = cfg.eps_bands.iter().copied().fold(0.0, f64::max);
    let mut x = cfg.x0.0.clone();
    let mut next = vec![0.0; x.len()];
    let mut noise = vec![0.0; x.len()];
    let mut u = pair.signed_distance(&x).expect("hypersurface");
    let mut l = vec![0.0; cfg.eps_bands.len()];
    let mut out = vec![vec![0.0; cfg.t_grid.len()]; cfg.eps_bands.len()];
    let mut s = 0.0;
    for (j, &t_report) in cfg.t_grid.iter().enumerate() {
        while s < t_report && u.abs() <= cfg.freeze_radius {
            let gap = (u.abs() - eps_max).max(0.0) / 6.0;
            let mut h = (gap * gap).clamp(cfg.h_near, cfg.h_far);
            if s + h >= t_report || t_report - (s + h) < 1e-12 * t_report {
                h = t_report - s;
            }
            brownian_step_into(space, &x, h, rng, &mut noise, &mut next);
            std::mem::swap(&mut x, &mut next);
            let u_new = pair.signed_distance(&x).expect("hypersurface");
            for (lb, &eps) in l.iter_mut().zip(&cfg.eps_bands) {
                *lb += bridge_band_occupation(u, u_new, h, eps);
            }
            u = u_new;
            s = if h == t_report - s { t_report } else { s + h };
        }
        for (b, lb) in l.iter().enumerate() {
            out[b][j] = *lb;
        }
    }
    out
}

/// Local-time paths in parallel, in path order.
pub fn run_local_time(cfg: &LocalTimeConfig) -> Result<Vec<Vec<Vec<f64>>>> {
    cfg.validate()?;
    Ok(map_paths(cfg.n_paths, cfg.seed, |_, rng| simulate_local_time_path(cfg, rng)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Side;

    #[test]
    fn streams_are_independent_of_worker_count() {
        let pair = ModelPair::hyperbolic_totally_geodesic(3, 2, -1.0).unwrap();
        let x0 = pair.point_at_distance(1.0, Side::Exterior).unwrap();
        let mut cfg = BridgeConfig::new(pair, x0, 1.0).with_h_max(1e-2);
        cfg.n_paths = 300;
        cfg.seed = 77;
        let one = with_workers(1, || run_bridge(&cfg).unwrap().1).unwrap();
        let three = with_workers(3, || run_bridge(&cfg).unwrap().1).unwrap();
        assert_eq!(one, three);
    }

    #[test]
    fn cutoff_grid_indices_are_recorded() {
        let pair = ModelPair::euclidean_affine(2, 1).unwrap();
        let x0 = pair.point_at_distance(1.0, Side::Exterior).unwrap();
        let mut cfg = BridgeConfig::new(pair, x0, 1.0).with_h_max(1e-2);
        cfg.n_paths = 10;
        cfg.observe = vec![0.5];
        let (_, recs) = run_bridge(&cfg).unwrap();
        for r in recs {
            assert_eq!(r.log_weights, vec![0.0; 3]);
            assert!(r.r_obs[0].is_finite());
        }
    }

    #[test]
    fn local_time_config_rejects_point_in_plane() {
        let pair = ModelPair::euclidean_point(2).unwrap();
        let cfg = LocalTimeConfig {
            x0: GeometryPoint(vec![0.0, 0.0]),
            pair,
            t_grid: vec![1.0],
            n_paths: 1,
            seed: 0,
            eps_bands: vec![0.1],
            h_near: 1e-3,
            h_far: 1e-2,
            freeze_radius: 10.0,
        };
        assert!(cfg.validate().is_err());
    }
}
