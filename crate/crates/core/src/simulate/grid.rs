//! Time discretisation of `[0, T - cutoff]` with refinement towards `T`.

use serde::{Deserialize, Serialize};

use crate::error::{config, Result};

/// Step-size rule `h(s) = clamp(h_factor (T - s), h_min, h_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridPolicy {
    pub h_max: f64,
    #[serde(default = "default_h_factor")]
    pub h_factor: f64,
    #[serde(default = "default_h_min")]
    pub h_min: f64,
}

fn default_h_factor() -> f64 {
    0.05
}

fn default_h_min() -> f64 {
    1e-7
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self { h_max: 1e-3, h_factor: default_h_factor(), h_min: default_h_min() }
    }
}

impl GridPolicy {
    pub fn with_h_max(h_max: f64) -> Self {
        Self { h_max, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h_max > 0.0 && self.h_max.is_finite()) {
            return Err(config(format!("h_max must be positive, got {}", self.h_max)));
        }
        if !(self.h_factor > 0.0 && self.h_factor < 1.0) {
            return Err(config(format!("h_factor must lie in (0, 1), got {}", self.h_factor)));
        }
        if !(self.h_min > 0.0 && self.h_min <= self.h_max) {
            return Err(config(format!("h_min must lie in (0, h_max], got {}", self.h_min)));
        }
        Ok(())
    }
}

/// Grid `0 = t_0 < ... < t_K = T - cutoff` with named checkpoint indices.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_total: f64,
    cutoff: f64,
    times: Vec<f64>,
    checkpoints: Vec<(f64, usize)>,
}

impl TimeGrid {
    /// Builds the grid stopping at `T - min(cutoffs)`.
    ///
    /// Every `T - c` for `c` in `cutoffs` and every time in `observe` lands
    /// exactly on a grid point.
    pub fn build(t_total: f64, policy: &GridPolicy, cutoffs: &[f64], observe: &[f64]) -> Result<Self> {
        policy.validate()?;
        if !(t_total > 0.0 && t_total.is_finite()) {
            return Err(config(format!("T must be positive, got {t_total}")));
        }
        if cutoffs.is_empty() {
            return Err(config("at least one cutoff is required"));
        }
        let cutoff = cutoffs.iter().copied().fold(f64::INFINITY, f64::min);
        if cutoffs.iter().any(|&c| !(c > 0.0 && c < t_total)) {
            return Err(config(format!("cutoffs must lie in (0, T), got {cutoffs:?}")));
        }
        let end = t_total - cutoff;
        if observe.iter().any(|&t| !(t > 0.0 && t <= end)) {
            return Err(config(format!("observation times must lie in (0, T - cutoff], got {observe:?}")));
        }
        let mut marks: Vec<f64> = cutoffs.iter().map(|c| t_total - c).chain(observe.iter().copied()).collect();
        marks.sort_by(f64::total_cmp);
        marks.dedup();

        let mut times = vec![0.0];
        let mut s = 0.0;
        let mut next_mark = 0;
        while s < end {
            while next_mark < marks.len() && marks[next_mark] <= s {
                next_mark += 1;
            }
            let h = (policy.h_factor * (t_total - s)).clamp(policy.h_min, policy.h_max);
            let mut next = s + h;
            if next_mark < marks.len() && next >= marks[next_mark] {
                next = marks[next_mark];
            }
            if next > end || (end - next) < 1e-12 * t_total {
                next = end;
            }
            times.push(next);
            s = next;
        }
        let checkpoints = marks
            .iter()
            .map(|&m| {
                let idx = times.iter().position(|&t| t == m).expect("checkpoint on grid");
                (m, idx)
            })
            .collect();
        Ok(Self { t_total, cutoff, times, checkpoints })
    }

    pub fn t_total(&self) -> f64 {
        self.t_total
    }

    /// The smallest cutoff; the grid ends at `T - cutoff`.
    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn n_steps(&self) -> usize {
        self.times.len() - 1
    }

    /// Grid index of a checkpoint time.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.checkpoints.iter().find(|(m, _)| *m == t).map(|&(_, i)| i)
    }

    /// Grid index of `T - cutoff`.
    pub fn index_of_cutoff(&self, cutoff: f64) -> Option<usize> {
        self.index_of(self.t_total - cutoff)
    }

    pub fn max_step(&self) -> f64 {
        self.times.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }
}
