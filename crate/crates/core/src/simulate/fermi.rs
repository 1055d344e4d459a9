//! Euler-Maruyama steps of the Fermi bridge and its weight functionals.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use super::local_time::{band_increment, BandRule};
use crate::error::{config, Error, Result};
use crate::geometry::{wrap_angle, GeometryPoint, ModelPair, SubmanifoldModel};

/// `-1/2 (D+ r_N - D- r_N)` at the antipode of a circle basepoint.
pub const CIRCLE_JUMP_FACTOR: f64 = 1.0;

/// Per-path running state.
#[derive(Debug, Clone, PartialEq)]
pub struct PathAccumulator {
    pub position: GeometryPoint,
    /// Current `r_N`.
    pub r: f64,
    /// `int r_N/(T - s) dA_s`.
    pub a_int: f64,
    /// `int r_N/(T - s) dL_s` with the primary band.
    pub l_int: f64,
    /// The same functional for each additional band width.
    pub l_extra: Vec<f64>,
    pub alive: bool,
    pub exited_at: Option<f64>,
    /// Largest drift displacement over `sqrt(h)` seen so far.
    pub max_drift_ratio: f64,
    prev_position: Vec<f64>,
    prev_r: f64,
    radial: Vec<f64>,
    noise: Vec<f64>,
    next: Vec<f64>,
}

impl PathAccumulator {
    pub fn new(pair: &ModelPair, x0: &GeometryPoint, extra_bands: usize) -> Self {
        let len = pair.space().ambient_len();
        let r = pair.distance(x0.coords());
        Self {
            position: x0.clone(),
            r,
            a_int: 0.0,
            l_int: 0.0,
            l_extra: vec![0.0; extra_bands],
            alive: true,
            exited_at: None,
            max_drift_ratio: 0.0,
            prev_position: x0.0.clone(),
            prev_r: r,
            radial: vec![0.0; len],
            noise: vec![0.0; len],
            next: vec![0.0; len],
        }
    }

    /// Resets to a fresh path from `x0`, keeping buffers.
    pub fn reset(&mut self, pair: &ModelPair, x0: &GeometryPoint) {
        self.position.0.copy_from_slice(x0.coords());
        self.prev_position.copy_from_slice(x0.coords());
        self.r = pair.distance(x0.coords());
        self.prev_r = self.r;
        self.a_int = 0.0;
        self.l_int = 0.0;
        self.l_extra.iter_mut().for_each(|v| *v = 0.0);
        self.alive = true;
        self.exited_at = None;
        self.max_drift_ratio = 0.0;
    }

    /// Position before the most recent step.
    pub fn previous_position(&self) -> &[f64] {
        &self.prev_position
    }

    /// `exp(A + L)`, or 0 once the path has left the domain.
    pub fn weight(&self) -> f64 {
        if self.alive {
            (self.a_int + self.l_int).exp()
        } else {
            0.0
        }
    }
}

/// Fixed parameters of the stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    pub t_total: f64,
    /// Last simulated time `T - cutoff`.
    pub horizon: f64,
    /// Radius of the tube `B_R(N)`; paths are killed when `r_N` exceeds it.
    pub domain_radius: f64,
    /// Use the reflected crossing step next to the antipode on the circle.
    pub exact_cut_crossing: bool,
}

/// Band parameters for the cut-locus local time.
#[derive(Debug, Clone, PartialEq)]
pub struct CutLocalTime {
    pub rule: BandRule,
    pub eps: f64,
    pub extra: Vec<f64>,
}

fn circle_basepoint(pair: &ModelPair) -> Option<f64> {
    match pair.submanifold() {
        SubmanifoldModel::CirclePoint { theta0 } => Some(*theta0),
        _ => None,
    }
}

/// Advances `acc` by one step `[s, s + h]` of the Fermi bridge.
///
/// The drift is `-(r_N / (T - s)) d/dr_N`. The A-functional is accumulated at
/// the left endpoint. Paths whose `r_N` exceeds the domain radius are killed.
pub fn sample_fermi_bridge_step<R: Rng + ?Sized>(
    pair: &ModelPair,
    params: &StepParams,
    acc: &mut PathAccumulator,
    s: f64,
    h: f64,
    rng: &mut R,
) -> Result<()> {
    if s + h > params.horizon * (1.0 + 1e-12) + 1e-300 {
        return Err(Error::Scheduling { start: s, end: s + h, horizon: params.horizon });
    }
    if !acc.alive {
        return Ok(());
    }
    let tau = params.t_total - s;
    let space = pair.space();
    acc.prev_position.copy_from_slice(acc.position.coords());
    acc.prev_r = acc.r;
    let mu = acc.r / tau;

    let theta0 = circle_basepoint(pair);
    let near_cut = theta0.is_some() && params.exact_cut_crossing && PI - acc.r < 10.0 * h.sqrt();
    if let (true, Some(theta0)) = (near_cut, theta0) {
        // reflected step of |offset from the antipode|, drift mu away from it
        let y = pair.cut_offset(acc.position.coords()).expect("circle pair");
        let big_r = y.abs();
        let z: f64 = rng.sample(StandardNormal);
        let b = mu * h + h.sqrt() * z;
        let u: f64 = 1.0 - rng.random::<f64>();
        let bridge_min = 0.5 * (b - (b * b - 2.0 * h * u.ln()).sqrt());
        let (new_r, side) = if big_r + bridge_min <= 0.0 {
            let side = if rng.random::<bool>() { 1.0 } else { -1.0 };
            (b - bridge_min, side)
        } else {
            (big_r + b, y.signum())
        };
        acc.position.0[0] = wrap_angle(theta0 + PI + side * new_r);
        acc.max_drift_ratio = acc.max_drift_ratio.max(mu * h.sqrt());
    } else {
        let x = acc.position.coords();
        pair.radial_direction_into(x, &mut acc.radial);
        acc.a_int -= 0.5 * pair.r_log_theta(x) / tau * h;
        space.sample_tangent_into(x, h, rng, &mut acc.noise);
        for (v, e) in acc.noise.iter_mut().zip(&acc.radial) {
            *v -= mu * h * e;
        }
        space.exp_into(x, &acc.noise, &mut acc.next);
        std::mem::swap(&mut acc.position.0, &mut acc.next);
        acc.max_drift_ratio = acc.max_drift_ratio.max(mu * h.sqrt());
    }
    acc.r = pair.distance(acc.position.coords());
    if acc.r > params.domain_radius {
        acc.alive = false;
        acc.exited_at = Some(s + h);
    }
    Ok(())
}

/// Adds the cut-locus local-time contribution of the most recent step `[s, s + h]`.
pub fn accumulate_cut_local_time(
    pair: &ModelPair,
    acc: &mut PathAccumulator,
    s: f64,
    h: f64,
    t_total: f64,
    band: &CutLocalTime,
) -> Result<()> {
    if !pair.has_charged_cut_locus() {
        return Err(config("the cut locus of this pair is empty or polar and carries no local time"));
    }
    if !acc.alive {
        return Ok(());
    }
    let a = pair.cut_offset(&acc.prev_position).expect("circle pair");
    let b = pair.cut_offset(acc.position.coords()).expect("circle pair");
    let scale = acc.prev_r / (t_total - s) * CIRCLE_JUMP_FACTOR;
    acc.l_int += scale * band_increment(band.rule, a, b, h, band.eps);
    for (l, &eps) in acc.l_extra.iter_mut().zip(&band.extra) {
        *l += scale * band_increment(band.rule, a, b, h, eps);
    }
    Ok(())
}
