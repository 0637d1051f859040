//! Simulated annealing with geometric cooling.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{require_single, BaselineConfig, Incumbent};
use crate::engine::Outcome;
use crate::problem::Problem;
use crate::rng::stream;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnnealingParams {
    pub initial_temperature: f64,
    /// Temperature multiplier applied after every proposal.
    pub cooling: f64,
    /// Standard deviation of the gaussian proposal, in genotype units.
    pub step: f64,
}

impl Default for AnnealingParams {
    fn default() -> Self {
        AnnealingParams {
            initial_temperature: 1.0,
            cooling: 0.95,
            step: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AnnealingStats {
    pub proposals: usize,
    pub accepted: usize,
    /// Accepted proposals that made the current point worse.
    pub accepted_uphill: usize,
}

pub fn simulated_annealing(problem: &Problem, config: &BaselineConfig) -> Result<Outcome> {
    anneal(problem, config).map(|(o, _)| o)
}

/// [`simulated_annealing`] plus acceptance counts.
pub fn anneal(problem: &Problem, config: &BaselineConfig) -> Result<(Outcome, AnnealingStats)> {
    require_single(problem, "sa")?;
    let params = config.annealing;
    let mut eval = config.evaluator(problem)?;
    let mut rng = stream(config.seed);
    let normal = Normal::new(0.0, params.step)
        .map_err(|e| crate::Error::Config(format!("annealing step: {e}")))?;
    let mut best = Incumbent::new(problem, "sa", config.seed);
    let mut stats = AnnealingStats::default();

    let mut x: Vec<f64> = (0..problem.n_variables()).map(|_| rng.random()).collect();
    let mut fx = eval.evaluate_scalar(&x)?;
    best.offer(&x, fx, 0, eval.used());
    let mut t = params.initial_temperature;
    while eval.remaining() > 0 {
        let y: Vec<f64> = x
            .iter()
            .map(|v| (v + normal.sample(&mut rng)).clamp(0.0, 1.0))
            .collect();
        let fy = eval.evaluate_scalar(&y)?;
        stats.proposals += 1;
        let delta = fy - fx;
        let u: f64 = rng.random();
        if delta <= 0.0 || u < (-delta / t).exp() {
            stats.accepted += 1;
            if delta > 0.0 {
                stats.accepted_uphill += 1;
            }
            x = y;
            fx = fy;
            best.offer(&x, fx, stats.proposals, eval.used());
        }
        t *= params.cooling;
    }
    Ok((best.finish(stats.proposals, &eval)?, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{single_objective_problem, BenchmarkId};
    use crate::problem::Bounds;

    fn cfg(budget: usize, seed: u64) -> BaselineConfig {
        BaselineConfig { budget, seed, ..BaselineConfig::default() }
    }

    #[test]
    fn frozen_run_never_goes_uphill() {
        let p = single_objective_problem(BenchmarkId::Rastrigin);
        let mut c = cfg(3000, 2);
        c.annealing.initial_temperature = 1e-12;
        let (_, stats) = anneal(&p, &c).unwrap();
        assert_eq!(stats.accepted_uphill, 0);
        assert!(stats.accepted > 0);
    }

    #[test]
    fn constant_objective_accepts_everything() {
        let p = Problem::new("flat", vec![Bounds::symmetric(1.0); 3], 1, |_| vec![4.0]);
        let (_, stats) = anneal(&p, &cfg(500, 1)).unwrap();
        assert_eq!(stats.proposals, 499);
        assert_eq!(stats.accepted, stats.proposals);
    }

    #[test]
    fn sphere_within_reference_level() {
        let p = single_objective_problem(BenchmarkId::Sphere);
        let mut values: Vec<f64> = (0..20)
            .map(|s| simulated_annealing(&p, &cfg(10_000, s)).unwrap().best_value.unwrap())
            .collect();
        values.sort_by(f64::total_cmp);
        assert!(values[18] <= 1e-2, "{values:?}");
    }
}
