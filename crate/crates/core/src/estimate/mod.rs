//! Monte Carlo estimators and closed-form verifiers.

mod verify;

pub use verify::{
    fit_upper_bound, h2_in_h3_by_quadrature, probe_points, verify_bounds, verify_gradient_hessian, verify_varadhan,
    BoundRow, BoundsReport, DerivativeReport, DerivativeRow, ProbePoint, VaradhanReport, VaradhanRow,
};

use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF, Normal};

use crate::error::{config, Result};
use crate::geometry::{ModelPair, SpaceKind, SubmanifoldModel};
use crate::kernels::{circle_kernel, integrated_kernel, log_q};
use crate::simulate::{run_bridge, run_local_time, BridgeConfig, BridgeRecord, LocalTimeConfig};
use crate::stats::{adaptive_simpson, ks_one_sample, KsResult, RunningStats};

/// The estimate at one cutoff `c`, i.e. at time `T - c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffPoint {
    pub cutoff: f64,
    pub mean: f64,
    pub stderr: f64,
}

/// A Monte Carlo mean with its uncertainty and, when known, the exact value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub mean: f64,
    pub stderr: f64,
    pub n_paths: usize,
    pub ci95: (f64, f64),
    pub reference: Option<f64>,
    /// Ordered by decreasing cutoff; `mean` is the last entry.
    pub cutoff_series: Vec<CutoffPoint>,
}

impl EstimateResult {
    pub fn new(mean: f64, stderr: f64, n_paths: usize, reference: Option<f64>) -> Self {
        Self {
            mean,
            stderr,
            n_paths,
            ci95: (mean - 1.96 * stderr, mean + 1.96 * stderr),
            reference,
            cutoff_series: vec![],
        }
    }

    pub fn from_stats(stats: &RunningStats, reference: Option<f64>) -> Self {
        Self::new(stats.mean, stats.stderr(), stats.n as usize, reference)
    }

    /// `|mean - reference| / |reference|`.
    pub fn rel_error(&self) -> Option<f64> {
        self.reference.map(|r| ((self.mean - r) / r).abs())
    }

    /// `|mean - reference|` in units of the standard error.
    pub fn z_score(&self) -> Option<f64> {
        self.reference.map(|r| {
            if self.stderr > 0.0 {
                (self.mean - r).abs() / self.stderr
            } else if self.mean == r {
                0.0
            } else {
                f64::INFINITY
            }
        })
    }
}

/// An integrated-kernel estimate with the weight variants computed on the same paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelEstimate {
    pub estimate: EstimateResult,
    /// The weight with the cut-locus local time left out.
    pub without_local_time: EstimateResult,
    /// One estimate per extra band width.
    pub band_study: Vec<(f64, EstimateResult)>,
    /// `q_T(x, N)`.
    pub q: f64,
}

fn sorted_cutoffs(cfg: &BridgeConfig) -> Vec<(usize, f64)> {
    let mut v: Vec<(usize, f64)> = cfg.cutoffs.iter().copied().enumerate().collect();
    v.sort_by(|a, b| b.1.total_cmp(&a.1));
    v
}

fn weight_estimate<F>(
    cfg: &BridgeConfig,
    records: &[BridgeRecord],
    q: f64,
    reference: Option<f64>,
    log_w: F,
) -> EstimateResult
where
    F: Fn(&BridgeRecord, usize) -> f64,
{
    let series: Vec<CutoffPoint> = sorted_cutoffs(cfg)
        .into_iter()
        .map(|(j, c)| {
            let stats: RunningStats = records.iter().map(|r| q * log_w(r, j).exp()).collect();
            CutoffPoint { cutoff: c, mean: stats.mean, stderr: stats.stderr() }
        })
        .collect();
    let last = *series.last().expect("at least one cutoff");
    let mut out = EstimateResult::new(last.mean, last.stderr, records.len(), reference);
    out.cutoff_series = series;
    out
}

/// `p_T(x, N) = q_T(x, N) lim E[1{t < tau_D} exp(A_t + L_t)]`, reported along the cutoff series.
pub fn estimate_integrated_kernel(cfg: &BridgeConfig) -> Result<EstimateResult> {
    Ok(estimate_integrated_kernel_detailed(cfg)?.estimate)
}

/// As [`estimate_integrated_kernel`], with the local-time ablation and band study.
pub fn estimate_integrated_kernel_detailed(cfg: &BridgeConfig) -> Result<KernelEstimate> {
    let (_, records) = run_bridge(cfg)?;
    let pair = &cfg.pair;
    let d = pair.distance(cfg.x0.coords());
    let q = log_q(cfg.t_total, d, pair.codimension()).exp();
    let reference = integrated_kernel(pair, cfg.t_total, cfg.x0.coords()).ok().map(|k| k.value);
    let estimate = weight_estimate(cfg, &records, q, reference, |r, j| r.log_weights[j]);
    let without_local_time = weight_estimate(cfg, &records, q, reference, |r, j| r.log_weights_without_l[j]);
    let band_study = cfg
        .extra_bands
        .iter()
        .enumerate()
        .map(|(b, &eps)| (eps, weight_estimate(cfg, &records, q, reference, |r, j| r.log_weights_extra[b][j])))
        .collect();
    Ok(KernelEstimate { estimate, without_local_time, band_study, q })
}

/// The circle estimator with cut-locus local time; the reference is the image-sum kernel.
pub fn estimate_circle_with_cut_locus(cfg: &BridgeConfig) -> Result<KernelEstimate> {
    if !matches!(cfg.pair.submanifold(), SubmanifoldModel::CirclePoint { .. }) {
        return Err(config("the cut-locus estimator needs a point on the circle"));
    }
    let mut out = estimate_integrated_kernel_detailed(cfg)?;
    let d = cfg.pair.distance(cfg.x0.coords());
    let reference = Some(circle_kernel(cfg.t_total, d, 1e-16)?.value);
    out.estimate.reference = reference;
    out.without_local_time.reference = reference;
    for (_, e) in out.band_study.iter_mut() {
        e.reference = reference;
    }
    Ok(out)
}

/// `int_0^t p_s(x, N) ds` by adaptive Simpson after the substitution `s = u^2`.
pub fn mean_local_time_reference(pair: &ModelPair, x: &[f64], t: f64) -> Result<f64> {
    integrated_kernel(pair, t, x)?;
    let f = |u: f64| {
        let s = (u * u).max(1e-24);
        integrated_kernel(pair, s, x).map(|k| 2.0 * u.max(1e-12) * k.value).unwrap_or(0.0)
    };
    Ok(adaptive_simpson(f, 0.0, t.sqrt(), 1e-10))
}

/// Mean local time on a hypersurface at one report time, per band width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalTimeEstimate {
    pub t: f64,
    pub bands: Vec<(f64, EstimateResult)>,
}

/// Monte Carlo `E[L^N_t]` from Brownian paths, with the quadrature reference when a closed form exists.
pub fn estimate_mean_local_time(cfg: &LocalTimeConfig) -> Result<Vec<LocalTimeEstimate>> {
    let paths = run_local_time(cfg)?;
    cfg.t_grid
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let reference = mean_local_time_reference(&cfg.pair, cfg.x0.coords(), t).ok();
            let bands = cfg
                .eps_bands
                .iter()
                .enumerate()
                .map(|(b, &eps)| {
                    let stats: RunningStats = paths.iter().map(|p| p[b][j]).collect();
                    (eps, EstimateResult::from_stats(&stats, reference))
                })
                .collect();
            Ok(LocalTimeEstimate { t, bands })
        })
        .collect()
}

/// Empirical endpoint law on `N` against the exact one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointLaw {
    /// The one-dimensional coordinate tested: first coordinate of the foot point.
    pub samples: usize,
    /// `(left edge, right edge, count)`.
    pub histogram: Vec<(f64, f64, usize)>,
    pub ks: KsResult,
}

fn histogram(xs: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<(f64, f64, usize)> {
    let w = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in xs {
        let i = (((x - lo) / w).floor().max(0.0) as usize).min(bins - 1);
        counts[i] += 1;
    }
    counts.into_iter().enumerate().map(|(i, c)| (lo + i as f64 * w, lo + (i + 1) as f64 * w, c)).collect()
}

/// Terminal foot points of Fermi-bridge paths compared with the endpoint law.
///
/// Supported: an affine subspace of `R^m` (Gaussian of variance `T` centred at
/// the foot point of `x`), a centred sphere seen from its centre (uniform), and
/// a point (degenerate).
pub fn estimate_endpoint_law(cfg: &BridgeConfig) -> Result<EndpointLaw> {
    let pair = &cfg.pair;
    if pair.space().kind() != SpaceKind::Euclidean {
        return Err(config("endpoint laws are available for Euclidean pairs only"));
    }
    let x0 = cfg.x0.coords();
    let m = pair.m();
    let mut c = cfg.clone();
    c.record_positions = true;
    enum Law {
        Gauss(Normal),
        Sphere(Beta, f64),
        Degenerate,
    }
    let law = match pair.submanifold() {
        SubmanifoldModel::AffineSubspace { n } if *n >= 1 => {
            Law::Gauss(Normal::new(x0[0], cfg.t_total.sqrt()).map_err(|e| config(e.to_string()))?)
        }
        SubmanifoldModel::CenteredSphere { radius } => {
            if x0.iter().any(|&v| v != 0.0) {
                return Err(config("sphere endpoint law is tested from the centre only"));
            }
            let a = (m as f64 - 1.0) / 2.0;
            Law::Sphere(Beta::new(a, a).map_err(|e| config(e.to_string()))?, *radius)
        }
        SubmanifoldModel::Point { .. } | SubmanifoldModel::AffineSubspace { .. } => Law::Degenerate,
        _ => return Err(config("no endpoint law for this pair")),
    };
    let (_, records) = run_bridge(&c)?;
    let ends: Vec<f64> = records
        .iter()
        .filter_map(|r| r.positions.last())
        .filter_map(|p| pair.foot_point(p.coords()))
        .map(|y| y.0[0])
        .collect();
    if ends.is_empty() {
        return Err(config("no path survived to the terminal time"));
    }
    let out = match law {
        Law::Gauss(nrm) => {
            let sd = cfg.t_total.sqrt();
            EndpointLaw {
                samples: ends.len(),
                histogram: histogram(&ends, x0[0] - 4.0 * sd, x0[0] + 4.0 * sd, 40),
                ks: ks_one_sample(&ends, |v| nrm.cdf(v)),
            }
        }
        Law::Sphere(beta, radius) => EndpointLaw {
            samples: ends.len(),
            histogram: histogram(&ends, -radius, radius, 40),
            ks: ks_one_sample(&ends, |v| beta.cdf(((v / radius + 1.0) / 2.0).clamp(0.0, 1.0))),
        },
        Law::Degenerate => EndpointLaw {
            samples: ends.len(),
            histogram: vec![(ends[0], ends[0], ends.len())],
            ks: KsResult { statistic: 0.0, p_value: 1.0, n: ends.len() },
        },
    };
    Ok(out)
}

/// Tail-slope diagnostic of `log P(r_N(X_t) > R)` against `R^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub t: f64,
    /// `(R, P(r_N > R))` for every radius with enough exceedances.
    pub tail: Vec<(f64, f64)>,
    pub slope: f64,
    /// `-(1 - gamma) / (sigma2 (T - t))`.
    pub threshold: f64,
    pub passed: bool,
}

/// Fits the tail slope at the single observation time of `cfg` and compares it with the concentration rate.
pub fn concentration_diagnostic(
    cfg: &BridgeConfig,
    radii: &[f64],
    sigma2: f64,
    gamma: f64,
) -> Result<ConcentrationReport> {
    let t = match cfg.observe.as_slice() {
        [t] => *t,
        _ => return Err(config("concentration diagnostic needs exactly one observation time")),
    };
    let (_, records) = run_bridge(cfg)?;
    let n = records.len() as f64;
    let tail: Vec<(f64, f64)> = radii
        .iter()
        .filter_map(|&rad| {
            let k = records.iter().filter(|r| r.r_obs[0] > rad).count();
            (k >= 20).then_some((rad, k as f64 / n))
        })
        .collect();
    if tail.len() < 2 {
        return Err(config("too few tail points for a slope fit"));
    }
    let xs: Vec<f64> = tail.iter().map(|p| p.0 * p.0).collect();
    let ys: Vec<f64> = tail.iter().map(|p| p.1.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / xs.len() as f64, ys.iter().sum::<f64>() / ys.len() as f64);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let threshold = -(1.0 - gamma) / (sigma2 * (cfg.t_total - t));
    Ok(ConcentrationReport { t, tail, slope, threshold, passed: slope <= threshold })
}
