//! Nelder-Mead from uniform random starts until the budget runs out.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{require_single, BaselineConfig, Incumbent};
use crate::engine::{nelder_mead, NelderMeadOptions, Outcome};
use crate::problem::Problem;
use crate::rng::stream;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimplexParams {
    /// Iteration cap per restart is this times the number of variables.
    pub iterations_per_variable: usize,
    pub initial_edge: f64,
    /// Convergence tolerance on simplex size and value spread.
    pub tolerance: f64,
}

impl Default for SimplexParams {
    fn default() -> Self {
        SimplexParams {
            iterations_per_variable: 200,
            initial_edge: 0.1,
            tolerance: 1e-10,
        }
    }
}

/// Restart `r` starts from the `r`-th uniform draw of the seed's stream.
pub fn nelder_mead_restarts(problem: &Problem, config: &BaselineConfig) -> Result<Outcome> {
    require_single(problem, "nelder_mead")?;
    let params = config.simplex;
    let n = problem.n_variables();
    let mut eval = config.evaluator(problem)?;
    let mut rng = stream(config.seed);
    let mut best = Incumbent::new(problem, "nelder_mead", config.seed);
    let mut restarts = 0;
    while eval.remaining() > 0 {
        let x0: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        let options = NelderMeadOptions {
            max_iterations: params.iterations_per_variable * n,
            initial_edge: params.initial_edge,
            xatol: params.tolerance,
            fatol: params.tolerance,
            max_evaluations: Some(eval.remaining()),
        };
        let result = nelder_mead(|x| eval.evaluate_scalar(x), &x0, &options)?;
        let x: Vec<f64> = result.x.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        best.offer(&x, result.fx, restarts, eval.used());
        restarts += 1;
    }
    best.finish(restarts, &eval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{single_objective_problem, BenchmarkId};

    fn cfg(budget: usize, seed: u64) -> BaselineConfig {
        BaselineConfig { budget, seed, ..BaselineConfig::default() }
    }

    #[test]
    fn unimodal_quadratic_first_restart() {
        let p = single_objective_problem(BenchmarkId::Booth);
        let out = nelder_mead_restarts(&p, &cfg(5000, 1)).unwrap();
        let first = &out.record.trajectory[0];
        assert_eq!(first.iteration, 0);
        assert!(first.fitness[0] <= 1e-3, "{:?}", first.fitness);
    }

    #[test]
    fn truncated_run_returns_best_vertex() {
        let p = single_objective_problem(BenchmarkId::Rosenbrock);
        let out = nelder_mead_restarts(&p, &cfg(5, 3)).unwrap();
        assert_eq!(out.record.evaluations, 5);
        assert_eq!(out.record.iterations_run, 1);
        let x = out.best_solution.unwrap();
        assert_eq!(p.evaluate_genotype(&x).unwrap()[0], out.best_value.unwrap());
    }

    #[test]
    fn never_worse_than_the_best_start() {
        let p = single_objective_problem(BenchmarkId::Griewank);
        let out = nelder_mead_restarts(&p, &cfg(4000, 8)).unwrap();
        let mut rng = stream(8);
        let best_start = (0..out.record.iterations_run)
            .map(|_| {
                let x0: Vec<f64> = (0..2).map(|_| rng.random()).collect();
                p.evaluate_genotype(&x0).unwrap()[0]
            })
            .fold(f64::INFINITY, f64::min);
        assert!(out.best_value.unwrap() <= best_start);
    }
}
