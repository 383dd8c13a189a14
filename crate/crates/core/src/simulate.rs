//! Unidirectionally coupled AR(1) benchmark.
//!
//! ```text
//! Y(t) = b·Y(t−1) + v·N_Y(t)
//! X(t) = a·X(t−1) + φ·Y(t−1) + v·N_X(t)
//! ```
//!
//! with `X(0) = Y(0) = 0` and no burn-in. Y drives X, so the ground truth of
//! every generated pair (x = X, y = Y) is y→x.

use alloc::vec::Vec;

use crate::causal::{evaluate_many, CausalConfig, CausalVerdict, Direction, Model};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded, PolarNormal};
use crate::sequence::{discretize_equiwidth, RealSeries};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArConfig {
    /// Self-coefficient of X.
    pub a: f64,
    /// Self-coefficient of Y.
    pub b: f64,
    /// Coupling from Y(t−1) into X(t).
    pub phi: f64,
    pub n: usize,
    pub noise_intensity: f64,
    pub seed: u64,
}

impl Default for ArConfig {
    fn default() -> Self {
        Self { a: 0.8, b: 0.8, phi: 0.0, n: 1000, noise_intensity: 0.01, seed: 0 }
    }
}

impl ArConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.a.abs() < 1.0 && self.b.abs() < 1.0) {
            return Err(Error::InvalidParameter("|a| and |b| must be below 1"));
        }
        if !(self.phi >= 0.0 && self.phi.is_finite()) {
            return Err(Error::InvalidParameter("phi must be finite and non-negative"));
        }
        if self.n < 2 {
            return Err(Error::InvalidParameter("n must be at least 2"));
        }
        if !(self.noise_intensity > 0.0 && self.noise_intensity.is_finite()) {
            return Err(Error::InvalidParameter("noise intensity must be positive"));
        }
        Ok(())
    }
}

/// Simulates `(X, Y)`. Normal draws come in the order `N_Y(t), N_X(t)` for
/// `t = 1, 2, ...` from a ChaCha8 stream seeded with `cfg.seed`.
pub fn ar1_coupled(cfg: &ArConfig) -> Result<(RealSeries, RealSeries)> {
    cfg.validate()?;
    let mut rng = seeded(cfg.seed);
    let mut normal = PolarNormal::new();
    let mut x = Vec::with_capacity(cfg.n);
    let mut y = Vec::with_capacity(cfg.n);
    x.push(0.0);
    y.push(0.0);
    for t in 1..cfg.n {
        let ny = normal.sample(&mut rng);
        let nx = normal.sample(&mut rng);
        y.push(cfg.b * y[t - 1] + cfg.noise_intensity * ny);
        x.push(cfg.a * x[t - 1] + cfg.phi * y[t - 1] + cfg.noise_intensity * nx);
    }
    Ok((RealSeries::new(x)?, RealSeries::new(y)?))
}

/// φ from 0 to 0.95 in steps of 0.05.
pub fn default_phi_grid() -> Vec<f64> {
    (0..20).map(|i| i as f64 / 20.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkPlan {
    pub phis: Vec<f64>,
    pub trials_per_phi: u32,
    pub bins: u32,
    pub models: Vec<Model>,
    pub master_seed: u64,
    /// Dynamics shared by every trial; `phi` and `seed` are overwritten.
    pub template: ArConfig,
    pub causal: CausalConfig,
}

impl BenchmarkPlan {
    pub fn new(phis: Vec<f64>, trials_per_phi: u32, bins: u32, models: Vec<Model>, master_seed: u64) -> Self {
        Self {
            phis,
            trials_per_phi,
            bins,
            models,
            master_seed,
            template: ArConfig::default(),
            causal: CausalConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials_per_phi == 0 {
            return Err(Error::InvalidParameter("trials per phi must be at least 1"));
        }
        if self.models.is_empty() {
            return Err(Error::InvalidParameter("no models selected"));
        }
        if self.bins < 2 {
            return Err(Error::InvalidParameter("bins must be at least 2"));
        }
        if self.phis.len() > u32::MAX as usize {
            return Err(Error::InvalidParameter("too many phi values"));
        }
        self.template.validate()
    }

    pub fn trial_count(&self) -> usize {
        self.phis.len() * self.trials_per_phi as usize
    }

    /// `(phi index, trial index)` of the k-th trial in canonical order.
    pub fn cell(&self, k: usize) -> (u32, u32) {
        let t = self.trials_per_phi as usize;
        ((k / t) as u32, (k % t) as u32)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRecord {
    pub phi: f64,
    pub phi_index: u32,
    pub trial: u32,
    pub truth: Direction,
    pub verdicts: Vec<CausalVerdict>,
}

/// Runs one trial. The noise seed is [`derive_seed`]`(master, phi_index,
/// trial)`, so trials never share a stream and can run in any order.
///
/// If both binned series come out identical the models cannot be applied;
/// such a trial records undecided verdicts with zero scores.
pub fn run_trial(plan: &BenchmarkPlan, phi_index: u32, trial: u32) -> Result<BenchmarkRecord> {
    let phi = *plan.phis.get(phi_index as usize).ok_or(Error::InvalidParameter("phi index out of range"))?;
    let cfg = ArConfig { phi, seed: derive_seed(plan.master_seed, phi_index, trial), ..plan.template };
    let (xs, ys) = ar1_coupled(&cfg)?;
    let x = discretize_equiwidth(&xs, plan.bins)?;
    let y = discretize_equiwidth(&ys, plan.bins)?;
    let verdicts = match evaluate_many(&plan.models, &x, &y, &plan.causal) {
        Ok(v) => v,
        Err(Error::IdenticalSequences) => plan
            .models
            .iter()
            .map(|&model| CausalVerdict {
                model,
                direction: Direction::Undecided,
                score_xy: 0.0,
                score_yx: 0.0,
                strength: 0.0,
            })
            .collect(),
        Err(e) => return Err(e),
    };
    Ok(BenchmarkRecord { phi, phi_index, trial, truth: Direction::YtoX, verdicts })
}

/// Every trial of the plan, sequentially, in `(phi, trial)` order.
pub fn run_benchmark(plan: &BenchmarkPlan) -> Result<Vec<BenchmarkRecord>> {
    plan.validate()?;
    (0..plan.trial_count())
        .map(|k| {
            let (p, t) = plan.cell(k);
            run_trial(plan, p, t)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn same_seed_same_series() {
        let cfg = ArConfig { phi: 0.5, seed: 99, ..ArConfig::default() };
        assert_eq!(ar1_coupled(&cfg).unwrap(), ar1_coupled(&cfg).unwrap());
        let other = ArConfig { seed: 100, ..cfg };
        assert_ne!(ar1_coupled(&cfg).unwrap(), ar1_coupled(&other).unwrap());
    }

    #[test]
    fn starts_at_zero_and_has_length_n() {
        let (x, y) = ar1_coupled(&ArConfig { n: 17, ..ArConfig::default() }).unwrap();
        assert_eq!((x.len(), y.len()), (17, 17));
        assert_eq!((x.values()[0], y.values()[0]), (0.0, 0.0));
    }

    #[test]
    fn vanishing_noise_without_coupling_stays_at_zero() {
        let cfg = ArConfig { noise_intensity: f64::MIN_POSITIVE, n: 50, ..ArConfig::default() };
        let (x, y) = ar1_coupled(&cfg).unwrap();
        assert!(x.values().iter().chain(y.values()).all(|v| v.abs() < 1e-300));
    }

    #[test]
    fn config_validation() {
        assert!(ar1_coupled(&ArConfig { a: 1.0, ..ArConfig::default() }).is_err());
        assert!(ar1_coupled(&ArConfig { n: 1, ..ArConfig::default() }).is_err());
        assert!(ar1_coupled(&ArConfig { noise_intensity: 0.0, ..ArConfig::default() }).is_err());
        assert!(ar1_coupled(&ArConfig { phi: -0.1, ..ArConfig::default() }).is_err());
    }

    #[test]
    fn coupling_inflates_x_variance() {
        // stationary variances: Y 0.0001/0.36, X gains φ²-weighted Y power
        let mut wins = 0;
        for seed in 0..50 {
            let cfg = ArConfig { phi: 0.8, seed, ..ArConfig::default() };
            let (x, y) = ar1_coupled(&cfg).unwrap();
            if x.variance() > y.variance() {
                wins += 1;
            }
        }
        assert_eq!(wins, 50);
    }

    #[test]
    fn grid_has_twenty_values() {
        let g = default_phi_grid();
        assert_eq!(g.len(), 20);
        assert_eq!((g[0], g[7], g[19]), (0.0, 0.35, 0.95));
    }

    #[test]
    fn single_trial_shape() {
        let plan = BenchmarkPlan::new(vec![0.0], 1, 2, Model::ALL.to_vec(), 5);
        let recs = run_benchmark(&plan).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].truth, Direction::YtoX);
        assert_eq!(recs[0].verdicts.len(), 3);
        assert_eq!(recs, run_benchmark(&plan).unwrap());
    }

    #[test]
    fn trials_are_order_independent() {
        let plan = BenchmarkPlan::new(vec![0.2, 0.6], 3, 2, vec![Model::LzPenalty], 8);
        let all = run_benchmark(&plan).unwrap();
        for rec in all.iter().rev() {
            assert_eq!(*rec, run_trial(&plan, rec.phi_index, rec.trial).unwrap());
        }
    }

    #[test]
    fn full_grid_size() {
        let plan = BenchmarkPlan::new(default_phi_grid(), 1000, 2, Model::ALL.to_vec(), 0);
        assert_eq!(plan.trial_count(), 20_000);
        assert_eq!(plan.cell(19_999), (19, 999));
    }
}
