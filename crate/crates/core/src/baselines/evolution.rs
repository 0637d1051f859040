//! Differential evolution, rand/1/bin.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{require_single, BaselineConfig, Incumbent};
use crate::engine::Outcome;
use crate::problem::Problem;
use crate::rng::stream;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvolutionParams {
    /// Differential weight.
    pub f: f64,
    /// Crossover rate.
    pub cr: f64,
    pub population: usize,
}

impl Default for EvolutionParams {
    fn default() -> Self {
        EvolutionParams {
            f: 0.8,
            cr: 0.9,
            population: 50,
        }
    }
}

/// Mutant components outside the cube are clamped. With `cr == 0` no
/// component is forced from the mutant, so the trial equals the target.
pub fn differential_evolution(problem: &Problem, config: &BaselineConfig) -> Result<Outcome> {
    require_single(problem, "de")?;
    let params = config.evolution;
    let np = config.population.unwrap_or(params.population);
    if np < 4 {
        return Err(Error::Config(format!("differential evolution needs a population of at least 4, got {np}")));
    }
    let n = problem.n_variables();
    let mut eval = config.evaluator(problem)?;
    let mut rng = stream(config.seed);
    let mut best = Incumbent::new(problem, "de", config.seed);

    let mut pop: Vec<Vec<f64>> = Vec::with_capacity(np);
    let mut fit = Vec::with_capacity(np);
    for _ in 0..np {
        let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        if eval.remaining() == 0 {
            break;
        }
        let fx = eval.evaluate_scalar(&x)?;
        best.offer(&x, fx, 0, eval.used());
        pop.push(x);
        fit.push(fx);
    }

    let mut generation = 0;
    'search: while eval.remaining() > 0 {
        generation += 1;
        for i in 0..np {
            if eval.remaining() == 0 {
                break 'search;
            }
            let picks: Vec<usize> = sample(&mut rng, np - 1, 3)
                .into_iter()
                .map(|r| if r >= i { r + 1 } else { r })
                .collect();
            let (a, b, c) = (&pop[picks[0]], &pop[picks[1]], &pop[picks[2]]);
            let forced = rng.random_range(0..n);
            let trial: Vec<f64> = (0..n)
                .map(|j| {
                    let take = rng.random::<f64>() < params.cr || (params.cr > 0.0 && j == forced);
                    if take {
                        (a[j] + params.f * (b[j] - c[j])).clamp(0.0, 1.0)
                    } else {
                        pop[i][j]
                    }
                })
                .collect();
            let ft = eval.evaluate_scalar(&trial)?;
            if ft <= fit[i] {
                best.offer(&trial, ft, generation, eval.used());
                pop[i] = trial;
                fit[i] = ft;
            }
        }
    }
    best.finish(generation, &eval)
}
