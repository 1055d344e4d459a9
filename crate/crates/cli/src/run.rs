//! Experiment dispatch and result tables.

use fermi_bridge::estimate::{
    estimate_endpoint_law, estimate_integrated_kernel_detailed, estimate_mean_local_time, verify_bounds,
    verify_gradient_hessian, verify_varadhan, EstimateResult,
};
use fermi_bridge::simulate::{path_rng, radial_moment_mc, run_bridge, sample_exact_euclidean_bridge};
use fermi_bridge::stats::{ks_two_sample, RunningStats};
use fermi_bridge::{Side, SubmanifoldModel};

use crate::config::{Experiment, ExperimentConfig};

/// A CSV cell: text, a real, an integer or nothing.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Real(f64),
    Int(u64),
    Empty,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Real(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

fn opt(v: Option<f64>) -> Cell {
    v.map_or(Cell::Empty, Cell::Real)
}

fn text(s: impl Into<String>) -> Cell {
    Cell::Text(s.into())
}

const VALUE_COLUMNS: [&str; 5] = ["mean", "stderr", "n_paths", "reference", "rel_error"];

/// Experiment-specific key columns followed by the value columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// False when a verification check in the table failed.
    pub passed: bool,
}

impl Table {
    fn new(keys: &[&str]) -> Self {
        let header = keys.iter().chain(VALUE_COLUMNS.iter()).map(|s| s.to_string()).collect();
        Self { header, rows: vec![], passed: true }
    }

    fn push(&mut self, keys: Vec<Cell>, mean: f64, stderr: f64, n: usize, reference: Option<f64>) {
        let rel = reference.filter(|r| *r != 0.0).map(|r| ((mean - r) / r).abs());
        let mut row = keys;
        row.extend([Cell::Real(mean), Cell::Real(stderr), Cell::Int(n as u64), opt(reference), opt(rel)]);
        self.rows.push(row);
    }

    fn push_estimate(&mut self, keys: Vec<Cell>, e: &EstimateResult) {
        self.push(keys, e.mean, e.stderr, e.n_paths, e.reference);
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Table, String> {
    let err = |e: fermi_bridge::Error| e.to_string();
    match cfg.experiment {
        Experiment::Estimate => {
            let bc = cfg.bridge_config()?;
            let k = estimate_integrated_kernel_detailed(&bc).map_err(err)?;
            let mut t = Table::new(&["weight", "eps", "cutoff"]);
            let mut variants = vec![("full".to_string(), bc.eps_band, &k.estimate)];
            if bc.cut_local_time && bc.pair.has_charged_cut_locus() {
                variants.push(("without_local_time".into(), bc.eps_band, &k.without_local_time));
                variants.extend(k.band_study.iter().map(|(e, r)| ("full".to_string(), *e, r)));
            }
            for (name, eps, e) in variants {
                for c in &e.cutoff_series {
                    t.push(
                        vec![text(name.clone()), Cell::Real(eps), Cell::Real(c.cutoff)],
                        c.mean,
                        c.stderr,
                        e.n_paths,
                        e.reference,
                    );
                }
            }
            Ok(t)
        }
        Experiment::EndpointLaw => {
            let bc = cfg.bridge_config()?;
            let law = estimate_endpoint_law(&bc).map_err(err)?;
            let mut t = Table::new(&["row", "lo", "hi"]);
            let n = law.samples as f64;
            for (lo, hi, count) in &law.histogram {
                let p = *count as f64 / n;
                t.push(
                    vec![text("bin"), Cell::Real(*lo), Cell::Real(*hi)],
                    p,
                    (p * (1.0 - p) / n).sqrt(),
                    law.samples,
                    None,
                );
            }
            t.push(vec![text("ks_statistic"), Cell::Empty, Cell::Empty], law.ks.statistic, 0.0, law.ks.n, None);
            t.push(vec![text("ks_p_value"), Cell::Empty, Cell::Empty], law.ks.p_value, 0.0, law.ks.n, None);
            t.passed = law.ks.p_value > 0.01;
            Ok(t)
        }
        Experiment::LocalTime => {
            let lc = cfg.local_time_config()?;
            let mut t = Table::new(&["t", "eps"]);
            for est in estimate_mean_local_time(&lc).map_err(err)? {
                for (eps, e) in &est.bands {
                    t.push_estimate(vec![Cell::Real(est.t), Cell::Real(*eps)], e);
                }
            }
            Ok(t)
        }
        Experiment::RadialMoments => {
            let bc = cfg.bridge_config()?;
            let p = cfg.moment.unwrap_or(2);
            let mut t = Table::new(&["t", "p"]);
            // exact second moment for flat affine pairs
            let exact = |s: f64| match bc.pair.submanifold() {
                SubmanifoldModel::AffineSubspace { .. } if p == 2 => {
                    let (tt, r0, k) = (bc.t_total, bc.pair.distance(bc.x0.coords()), bc.pair.codimension() as f64);
                    Some(r0 * r0 * (tt - s).powi(2) / (tt * tt) + k * s * (tt - s) / tt)
                }
                _ => None,
            };
            for (s, mut e) in radial_moment_mc(&bc, p).map_err(err)? {
                e.reference = exact(s);
                t.push_estimate(vec![Cell::Real(s), Cell::Int(p as u64)], &e);
            }
            Ok(t)
        }
        Experiment::BridgeVsExact => {
            let mut bc = cfg.bridge_config()?;
            let s = cfg.observe.first().copied().unwrap_or(bc.t_total / 2.0);
            bc.observe = vec![s];
            bc.record_positions = true;
            let (_, recs) = run_bridge(&bc).map_err(err)?;
            let axis = bc.pair.m() - 1;
            let fermi: Vec<f64> = recs.iter().filter_map(|r| r.positions.first()).map(|p| p.0[axis]).collect();
            let exact: Vec<f64> = (0..bc.n_paths as u64)
                .map(|i| {
                    let mut rng = path_rng(bc.seed ^ 0x9e37_79b9_7f4a_7c15, i);
                    sample_exact_euclidean_bridge(&bc.pair, &bc.x0, bc.t_total, &[0.0, s], &mut rng)
                        .map(|p| p[1].0[axis])
                })
                .collect::<Result<_, _>>()
                .map_err(err)?;
            let mean_ref = bc.x0.0[axis] * (bc.t_total - s) / bc.t_total;
            let mut t = Table::new(&["row", "t"]);
            for (name, xs) in [("fermi_normal_coordinate", &fermi), ("exact_normal_coordinate", &exact)] {
                let st: RunningStats = xs.iter().copied().collect();
                t.push(vec![text(name), Cell::Real(s)], st.mean, st.stderr(), xs.len(), Some(mean_ref));
            }
            let ks = ks_two_sample(&fermi, &exact);
            t.push(vec![text("ks_statistic"), Cell::Real(s)], ks.statistic, 0.0, ks.n, None);
            t.push(vec![text("ks_p_value"), Cell::Real(s)], ks.p_value, 0.0, ks.n, None);
            t.passed = ks.p_value > 0.01;
            Ok(t)
        }
        Experiment::VerifyBounds => {
            let pair = cfg.pair.build()?;
            let (ts, ds) = cfg.verify_grids()?;
            let kappas = if cfg.kappas.is_empty() { vec![-0.5, -1.0, -2.0] } else { cfg.kappas.clone() };
            let r = verify_bounds(&pair, &ts, &ds, cfg.sigma2.unwrap_or(4.0), &kappas).map_err(err)?;
            let mut t = Table::new(&["check", "t", "d", "side", "lower", "upper"]);
            let side = |s: Side| text(if s == Side::Exterior { "exterior" } else { "interior" });
            for row in &r.rows {
                let check = if row.lower_ok() && row.upper_ok() { "ok" } else { "violation" };
                t.push(
                    vec![
                        text(check),
                        Cell::Real(row.t),
                        Cell::Real(row.d),
                        side(row.side),
                        Cell::Real(row.lower),
                        Cell::Real(row.upper),
                    ],
                    row.value,
                    0.0,
                    0,
                    None,
                );
            }
            for &(tt, d, ka, kb) in &r.comparison_violations {
                t.push(
                    vec![
                        text("ordering_violation"),
                        Cell::Real(tt),
                        Cell::Real(d),
                        text(format!("{ka}>{kb}")),
                        Cell::Empty,
                        Cell::Empty,
                    ],
                    0.0,
                    0.0,
                    0,
                    None,
                );
            }
            for &(kappa, gap) in &r.scaling_check {
                t.push(
                    vec![
                        text("scaling_vs_quadrature"),
                        Cell::Empty,
                        Cell::Empty,
                        text(format!("kappa={kappa}")),
                        Cell::Empty,
                        Cell::Empty,
                    ],
                    gap,
                    0.0,
                    0,
                    None,
                );
            }
            t.push(
                vec![text("upper_constant"), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty],
                r.upper.c,
                0.0,
                0,
                None,
            );
            t.passed = r.passed();
            Ok(t)
        }
        Experiment::VerifyVaradhan => {
            let pair = cfg.pair.build()?;
            let (ts, ds) = cfg.verify_grids()?;
            let ds: Vec<f64> = if cfg.d_grid.is_empty() { vec![0.5, 1.0] } else { ds };
            let r = verify_varadhan(&pair, &ds, &ts).map_err(err)?;
            let mut t = Table::new(&["row", "t", "d"]);
            for row in &r.rows {
                t.push(vec![text("value"), Cell::Real(row.t), Cell::Real(row.d)], row.value, 0.0, 0, Some(0.0));
            }
            for &(d, limit) in &r.limits {
                t.push(vec![text("limit"), Cell::Real(0.0), Cell::Real(d)], limit, 0.0, 0, Some(0.0));
            }
            t.passed = r.max_abs_limit() <= 0.01;
            Ok(t)
        }
        Experiment::VerifyDerivatives => {
            let pair = cfg.pair.build()?;
            let (ts, ds) = cfg.verify_grids()?;
            let r = verify_gradient_hessian(&pair, &ts, &ds).map_err(err)?;
            let mut t = Table::new(&["quantity", "t", "d", "shape"]);
            for row in &r.rows {
                let k = |name: &str| vec![text(name), Cell::Real(row.t), Cell::Real(row.d), Cell::Real(row.shape)];
                t.push(k("grad_sq"), row.grad_sq, 0.0, 0, None);
                t.push(k("hess_norm"), row.hess_norm, 0.0, 0, None);
            }
            t.push(vec![text("c_grad"), Cell::Empty, Cell::Empty, Cell::Empty], r.c_grad, 0.0, 0, None);
            t.push(vec![text("c_hess"), Cell::Empty, Cell::Empty, Cell::Empty], r.c_hess, 0.0, 0, None);
            t.passed = r.passed();
            Ok(t)
        }
    }
}
