//! NSGA-II with simulated-binary crossover and polynomial mutation.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::BaselineConfig;
use crate::engine::Outcome;
use crate::pareto::{crowding_distance, dominates_unchecked, pareto_front};
use crate::problem::Problem;
use crate::record::{ProgressPoint, RunRecord, Termination};
use crate::rng::{stream, Stream};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Nsga2Params {
    pub population: usize,
    pub crossover_probability: f64,
    pub crossover_eta: f64,
    /// Per-variable mutation probability; `1 / n_variables` when unset.
    pub mutation_probability: Option<f64>,
    pub mutation_eta: f64,
}

impl Default for Nsga2Params {
    fn default() -> Self {
        Nsga2Params {
            population: 100,
            crossover_probability: 0.9,
            crossover_eta: 15.0,
            mutation_probability: None,
            mutation_eta: 20.0,
        }
    }
}

/// Splits `fitness` into successive non-dominated fronts of indices.
pub fn fast_non_dominated_sort(fitness: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = fitness.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominating: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut fronts = vec![Vec::new()];
    for p in 0..n {
        for q in p + 1..n {
            if dominates_unchecked(&fitness[p], &fitness[q]) {
                dominating[p].push(q);
                dominated_by[q] += 1;
            } else if dominates_unchecked(&fitness[q], &fitness[p]) {
                dominating[q].push(p);
                dominated_by[p] += 1;
            }
        }
    }
    fronts[0].extend((0..n).filter(|&p| dominated_by[p] == 0));
    let mut k = 0;
    while !fronts[k].is_empty() {
        let mut next = Vec::new();
        for &p in &fronts[k] {
            for &q in &dominating[p] {
                dominated_by[q] -= 1;
                if dominated_by[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(next);
        k += 1;
    }
    fronts.pop();
    fronts
}

/// Rank and crowding distance of every member.
fn rank_and_crowd(fitness: &[Vec<f64>]) -> (Vec<usize>, Vec<f64>) {
    let mut rank = vec![0; fitness.len()];
    let mut crowd = vec![0.0; fitness.len()];
    for (r, front) in fast_non_dominated_sort(fitness).iter().enumerate() {
        let f: Vec<Vec<f64>> = front.iter().map(|&i| fitness[i].clone()).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&f)) {
            rank[i] = r;
            crowd[i] = d;
        }
    }
    (rank, crowd)
}

/// Indices of the `n` survivors: whole fronts first, then the most
/// crowding-distant members of the front that does not fit.
pub fn environmental_selection(fitness: &[Vec<f64>], n: usize) -> Vec<usize> {
    let mut chosen = Vec::with_capacity(n);
    for front in fast_non_dominated_sort(fitness) {
        if chosen.len() + front.len() <= n {
            chosen.extend(front);
            continue;
        }
        let f: Vec<Vec<f64>> = front.iter().map(|&i| fitness[i].clone()).collect();
        let d = crowding_distance(&f);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| d[b].total_cmp(&d[a]));
        chosen.extend(order.into_iter().take(n - chosen.len()).map(|k| front[k]));
        break;
    }
    chosen
}

fn tournament(rank: &[usize], crowd: &[f64], rng: &mut Stream) -> usize {
    let a = rng.random_range(0..rank.len());
    let b = rng.random_range(0..rank.len());
    if rank[b] < rank[a] || (rank[b] == rank[a] && crowd[b] > crowd[a]) {
        b
    } else {
        a
    }
}

fn sbx_spread(u: f64, beta: f64, eta: f64) -> f64 {
    let alpha = 2.0 - beta.powf(-(eta + 1.0));
    if u <= 1.0 / alpha {
        (u * alpha).powf(1.0 / (eta + 1.0))
    } else {
        (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
    }
}

/// Bounded simulated-binary crossover on the unit cube.
fn sbx(p1: &[f64], p2: &[f64], eta: f64, rng: &mut Stream) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    for j in 0..p1.len() {
        if rng.random::<f64>() > 0.5 || (p1[j] - p2[j]).abs() <= 1e-14 {
            continue;
        }
        let (y1, y2) = (p1[j].min(p2[j]), p1[j].max(p2[j]));
        let u: f64 = rng.random();
        let bq = sbx_spread(u, 1.0 + 2.0 * y1 / (y2 - y1), eta);
        let a = (0.5 * ((y1 + y2) - bq * (y2 - y1))).clamp(0.0, 1.0);
        let bq = sbx_spread(u, 1.0 + 2.0 * (1.0 - y2) / (y2 - y1), eta);
        let b = (0.5 * ((y1 + y2) + bq * (y2 - y1))).clamp(0.0, 1.0);
        if rng.random::<f64>() <= 0.5 {
            c1[j] = b;
            c2[j] = a;
        } else {
            c1[j] = a;
            c2[j] = b;
        }
    }
    (c1, c2)
}

/// Bounded polynomial mutation on the unit cube.
fn polynomial_mutation(x: &mut [f64], probability: f64, eta: f64, rng: &mut Stream) {
    let power = 1.0 / (eta + 1.0);
    for v in x.iter_mut() {
        if rng.random::<f64>() >= probability {
            continue;
        }
        let u: f64 = rng.random();
        let dq = if u < 0.5 {
            let xy = 1.0 - *v;
            (2.0 * u + (1.0 - 2.0 * u) * xy.powf(eta + 1.0)).powf(power) - 1.0
        } else {
            let xy = *v;
            1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(eta + 1.0)).powf(power)
        };
        *v = (*v + dq).clamp(0.0, 1.0);
    }
}

/// Returns the first front of the final population.
pub fn nsga2(problem: &Problem, config: &BaselineConfig) -> Result<Outcome> {
    if problem.n_objectives() < 2 {
        return Err(Error::Argument(format!("nsga2 needs at least two objectives, `{}` has one", problem.name())));
    }
    let params = config.nsga2;
    let np = config.population.unwrap_or(params.population);
    if np < 2 {
        return Err(Error::Config(format!("nsga2 needs a population of at least 2, got {np}")));
    }
    let n = problem.n_variables();
    let pm = params.mutation_probability.unwrap_or(1.0 / n as f64);
    let started = Instant::now();
    let mut eval = config.evaluator(problem)?;
    let mut rng = stream(config.seed);
    let mut record = RunRecord::new(problem.name(), "nsga2", config.seed, problem.n_objectives());

    let mut pop: Vec<Vec<f64>> = Vec::with_capacity(np);
    let mut fit: Vec<Vec<f64>> = Vec::with_capacity(np);
    while pop.len() < np && eval.remaining() > 0 {
        let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        fit.push(eval.evaluate(&x)?);
        pop.push(x);
    }
    let (mut rank, mut crowd) = rank_and_crowd(&fit);

    let mut generation = 0;
    while eval.remaining() > 0 {
        generation += 1;
        let mut children = Vec::with_capacity(np);
        while children.len() < np {
            let a = &pop[tournament(&rank, &crowd, &mut rng)];
            let b = &pop[tournament(&rank, &crowd, &mut rng)];
            let (mut c1, mut c2) = if rng.random::<f64>() < params.crossover_probability {
                sbx(a, b, params.crossover_eta, &mut rng)
            } else {
                (a.clone(), b.clone())
            };
            polynomial_mutation(&mut c1, pm, params.mutation_eta, &mut rng);
            polynomial_mutation(&mut c2, pm, params.mutation_eta, &mut rng);
            children.push(c1);
            children.push(c2);
        }
        children.truncate(np.min(eval.remaining()));
        for c in children {
            fit.push(eval.evaluate(&c)?);
            pop.push(c);
        }
        let keep = environmental_selection(&fit, np);
        pop = keep.iter().map(|&i| pop[i].clone()).collect();
        fit = keep.iter().map(|&i| fit[i].clone()).collect();
        (rank, crowd) = rank_and_crowd(&fit);

        let first: Vec<&Vec<f64>> = fit.iter().zip(&rank).filter(|(_, r)| **r == 0).map(|(f, _)| f).collect();
        let ideal = (0..problem.n_objectives())
            .map(|k| first.iter().map(|f| f[k]).fold(f64::INFINITY, f64::min))
            .collect();
        record.progress.push(ProgressPoint {
            iteration: generation,
            evaluations: eval.used(),
            best: ideal,
            archive_size: first.len(),
            step_size: 0.0,
        });
    }

    let archive = pareto_front(&pop, &fit)?;
    record.final_front = archive.fitness.clone();
    record.wall_clock_seconds = started.elapsed().as_secs_f64();
    record.evaluations = eval.used();
    record.iterations_run = generation;
    record.termination = Termination::BudgetExhausted;
    Ok(Outcome {
        best_solution: None,
        best_value: None,
        archive: Some(archive),
        record,
    })
}
