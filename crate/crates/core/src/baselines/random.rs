//! Uniform random sampling of the genotype cube.

use rand::Rng;

use super::{BaselineConfig, Incumbent};
use crate::engine::Outcome;
use crate::pareto::{pareto_front, ParetoArchive};
use crate::problem::Problem;
use crate::record::{RunRecord, Termination};
use crate::rng::stream;
use crate::Result;

/// Best of `budget` uniform samples; the non-dominated samples for
/// multi-objective problems.
///
/// Samples are drawn in the same order for every budget, so a larger budget
/// sees a superset of a smaller one's samples.
pub fn random_search(problem: &Problem, config: &BaselineConfig) -> Result<Outcome> {
    let mut eval = config.evaluator(problem)?;
    let mut rng = stream(config.seed);
    let n = problem.n_variables();
    if problem.n_objectives() > 1 {
        let started = std::time::Instant::now();
        let mut archive = ParetoArchive::default();
        let mut batch_x = Vec::new();
        let mut batch_f = Vec::new();
        while eval.remaining() > 0 {
            let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
            batch_f.push(eval.evaluate(&x)?);
            batch_x.push(x);
            if batch_x.len() == 1000 || eval.remaining() == 0 {
                batch_x.extend(archive.solutions);
                batch_f.extend(archive.fitness);
                archive = pareto_front(&batch_x, &batch_f)?;
                batch_x = Vec::new();
                batch_f = Vec::new();
            }
        }
        let mut record = RunRecord::new(problem.name(), "random", config.seed, problem.n_objectives());
        record.final_front = archive.fitness.clone();
        record.wall_clock_seconds = started.elapsed().as_secs_f64();
        record.evaluations = eval.used();
        record.iterations_run = eval.used();
        record.termination = Termination::BudgetExhausted;
        return Ok(Outcome {
            best_solution: None,
            best_value: None,
            archive: Some(archive),
            record,
        });
    }
    let mut best = Incumbent::new(problem, "random", config.seed);
    let mut i = 0;
    while eval.remaining() > 0 {
        let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        let fx = eval.evaluate_scalar(&x)?;
        best.offer(&x, fx, i, eval.used());
        i += 1;
    }
    best.finish(i, &eval)
}
