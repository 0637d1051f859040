//! Stagnation responses: restart, escape, step-size and population control,
//! and similarity-method weighting.

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::population::{argsort, init_solution_space};
use crate::config::{EngineState, OptimizerConfig};
use crate::pareto::non_dominated_indices;
use crate::par::Mode;
use crate::rng::Stream;
use crate::{FitnessMatrix, SolutionMatrix};

pub const ESCAPE_LADDER: [f64; 4] = [0.1, 0.3, 0.6, 1.0];
pub const MIN_POPULATION: usize = 50;
pub const MAX_POPULATION: usize = 1000;

fn std_dev(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = values.clone().count();
    if n == 0 {
        return 0.0;
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    (values.map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt()
}

/// Population standard deviation of the fitness; the mean over objectives
/// of the per-objective deviation when there is more than one column.
pub fn diversity(fitness: &FitnessMatrix) -> f64 {
    let m = fitness.ncols();
    if m == 0 {
        return 0.0;
    }
    (0..m).map(|k| std_dev(fitness.column(k).iter().copied())).sum::<f64>() / m as f64
}

/// Stagnation count above which a restart fires.
pub fn restart_threshold(iteration: usize, last_improvement_iteration: usize, max_iterations: usize) -> f64 {
    let rate = iteration.saturating_sub(last_improvement_iteration) as f64 / max_iterations.max(1) as f64;
    30.0 * (1.0 + rate)
}

/// Rows to carry over on restart: the best by fitness, or the first
/// non-dominated rows in archive mode.
fn elite_rows(fitness: &FitnessMatrix, keep: usize, multi: bool) -> Vec<usize> {
    if multi {
        let rows: Vec<Vec<f64>> = fitness.row_iter().map(|r| r.iter().copied().collect()).collect();
        let mut front = non_dominated_indices(&rows, Mode::Sequential);
        front.truncate(keep);
        front
    } else {
        let col: Vec<f64> = fitness.column(0).iter().copied().collect();
        let mut order = argsort(&col);
        order.truncate(keep);
        order
    }
}

/// Partial reinitialization after prolonged stagnation.
///
/// Returns `None` (population untouched) below the threshold. Otherwise the
/// stagnation counters are reset and a fresh uniform population is returned
/// whose head holds the top 10% of `space` and of whose remaining rows 20%
/// of the population size are drawn uniformly again.
pub fn adaptive_restart(
    space: &SolutionMatrix,
    fitness: &FitnessMatrix,
    state: &mut EngineState,
    multi: bool,
    rng: &mut Stream,
) -> Option<SolutionMatrix> {
    let threshold = restart_threshold(state.iteration, state.last_improvement_iteration, state.max_iterations);
    if (state.no_improvement_count as f64) <= threshold {
        return None;
    }
    log::debug!("restart at iteration {}", state.iteration);
    state.no_improvement_count = 0;
    state.last_improvement_iteration = state.iteration;
    let pop = space.nrows();
    let keep = (state.population_size / 10).min(pop).min(fitness.nrows());
    let elite = elite_rows(fitness, keep, multi);
    let mut fresh = init_solution_space(pop, space.ncols(), rng);
    for (dst, &src) in elite.iter().enumerate() {
        fresh.set_row(dst, &space.row(src));
    }
    let pool = pop - elite.len();
    let amount = (state.population_size / 5).min(pool);
    for offset in index::sample(rng, pool, amount).into_iter() {
        let row = elite.len() + offset;
        for j in 0..space.ncols() {
            fresh[(row, j)] = rng.random::<f64>();
        }
    }
    Some(fresh)
}

/// Escape noise level for a stagnation count.
pub fn escape_intensity(no_improvement_count: usize, step_size: f64, diversity: f64, diversity_threshold: f64) -> f64 {
    let severity = (no_improvement_count / 10).min(3);
    let intensity = ESCAPE_LADDER[severity] * step_size;
    if diversity < diversity_threshold {
        intensity * 2.0
    } else {
        intensity
    }
}

/// Perturbs each row with probability 0.5 and clips to the unit cube.
pub fn adaptive_escape(
    space: &mut SolutionMatrix,
    fitness: &FitnessMatrix,
    state: &EngineState,
    diversity_threshold: f64,
    rng: &mut Stream,
) {
    let sigma = escape_intensity(state.no_improvement_count, state.step_size, diversity(fitness), diversity_threshold);
    let mask: Vec<bool> = (0..space.nrows()).map(|_| rng.random::<bool>()).collect();
    let normal = (sigma > 0.0).then(|| Normal::new(0.0, sigma).expect("finite sigma"));
    for (i, &hit) in mask.iter().enumerate() {
        for j in 0..space.ncols() {
            let noise = normal.as_ref().map_or(0.0, |n| n.sample(rng));
            if hit {
                space[(i, j)] += noise;
            }
        }
    }
    space.apply(|v| *v = v.clamp(0.0, 1.0));
}

/// Two-stage multiplicative step-size update, clamped after each stage.
pub fn adaptive_parameters(state: &mut EngineState, diversity: f64, config: &OptimizerConfig) {
    let clamp = |s: f64| s.clamp(config.step_size_min, config.step_size_max);
    let first = if diversity < config.diversity_threshold { 1.1 } else { 0.9 };
    state.step_size = clamp(state.step_size * first);
    let second = if state.no_improvement_count > 10 { 0.9 } else { 1.1 };
    state.step_size = clamp(state.step_size * second);
}

/// Population size after one resize decision.
pub fn resize_target(
    population_size: usize,
    diversity: f64,
    diversity_threshold: f64,
    no_improvement_count: usize,
    allow_growth: bool,
) -> usize {
    if diversity < diversity_threshold {
        if allow_growth {
            return (population_size * 3 / 2).min(MAX_POPULATION);
        }
        population_size
    } else if no_improvement_count > 20 {
        (population_size * 4 / 5).max(MIN_POPULATION)
    } else {
        population_size
    }
}

/// Resizes the population, keeping its best rows and filling new rows
/// uniformly. Returns `None` when the size does not change.
pub fn adjust_population_size(
    space: &SolutionMatrix,
    fitness: &FitnessMatrix,
    state: &mut EngineState,
    config: &OptimizerConfig,
    rng: &mut Stream,
) -> Option<SolutionMatrix> {
    let target = resize_target(
        state.population_size,
        diversity(fitness),
        config.diversity_threshold,
        state.no_improvement_count,
        config.allow_population_growth,
    );
    if target == state.population_size {
        return None;
    }
    log::debug!("population size {} -> {}", state.population_size, target);
    state.population_size = target;
    let rank: Vec<f64> = fitness.row_iter().map(|r| r.sum()).collect();
    let order = argsort(&rank);
    let keep = order.len().min(target).min(space.nrows());
    let mut out = init_solution_space(target, space.ncols(), rng);
    for (dst, &src) in order.iter().take(keep).enumerate() {
        out.set_row(dst, &space.row(src));
    }
    Some(out)
}

/// Blends the similarity-method weights toward `softmax(-mean improvement)`.
pub fn adjust_weights(weights: &[f64], fitness: &[f64], best_fitness: f64) -> Vec<f64> {
    let improvements: Vec<f64> = if best_fitness == 0.0 {
        vec![1.0; fitness.len()]
    } else {
        fitness.iter().map(|f| f / best_fitness).collect()
    };
    let contribution = if improvements.is_empty() {
        1.0
    } else {
        improvements.iter().sum::<f64>() / improvements.len() as f64
    };
    let n = weights.len();
    let raw = vec![(-contribution).exp(); n];
    let total: f64 = raw.iter().sum();
    let fresh: Vec<f64> = if total > 1e-10 && total.is_finite() {
        raw.iter().map(|r| r / total).collect()
    } else {
        vec![1.0 / n as f64; n]
    };
    weights.iter().zip(&fresh).map(|(w, f)| 0.9 * w + 0.1 * f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn state() -> EngineState {
        EngineState::new(&OptimizerConfig::default())
    }

    #[test]
    fn restart_threshold_examples() {
        assert_eq!(restart_threshold(40, 40, 1000), 30.0);
        assert_relative_eq!(restart_threshold(500, 0, 1000), 45.0);
    }

    #[test]
    fn restart_keeps_elite_head() {
        let space = init_solution_space(100, 2, &mut stream(1));
        let fit = FitnessMatrix::from_fn(100, 1, |i, _| ((i * 37) % 100) as f64);
        let mut s = state();
        assert!(adaptive_restart(&space, &fit, &mut s, false, &mut stream(2)).is_none());
        s.no_improvement_count = 31;
        let out = adaptive_restart(&space, &fit, &mut s, false, &mut stream(2)).unwrap();
        assert_eq!(s.no_improvement_count, 0);
        let col: Vec<f64> = fit.column(0).iter().copied().collect();
        for (dst, src) in argsort(&col).into_iter().take(10).enumerate() {
            assert_eq!(out.row(dst), space.row(src));
        }
    }

    #[test]
    fn escape_examples() {
        assert_relative_eq!(escape_intensity(0, 0.2, 1.0, 1e-3), 0.02);
        assert_relative_eq!(escape_intensity(25, 0.2, 1.0, 1e-3), 0.12);
        assert_relative_eq!(escape_intensity(300, 0.2, 1.0, 1e-3), 0.2);
        assert_relative_eq!(escape_intensity(0, 0.2, 0.0, 1e-3), 0.04);
    }

    #[test]
    fn step_size_examples() {
        let c = OptimizerConfig::default();
        let mut s = state();
        adaptive_parameters(&mut s, 0.0, &c);
        assert_relative_eq!(s.step_size, 0.121, epsilon = 1e-12);
        let mut s = state();
        s.no_improvement_count = 20;
        adaptive_parameters(&mut s, 10.0, &c);
        assert_relative_eq!(s.step_size, 0.081, epsilon = 1e-12);
        let mut s = state();
        s.step_size = 1.0;
        adaptive_parameters(&mut s, 0.0, &c);
        assert_eq!(s.step_size, 1.0);
    }

    #[test]
    fn resize_examples() {
        assert_eq!(resize_target(100, 0.0, 1e-3, 0, true), 150);
        assert_eq!(resize_target(800, 0.0, 1e-3, 0, true), 1000);
        assert_eq!(resize_target(100, 0.0, 1e-3, 0, false), 100);
        assert_eq!(resize_target(100, 1.0, 1e-3, 21, false), 80);
        assert_eq!(resize_target(50, 1.0, 1e-3, 21, false), 50);
    }

    #[test]
    fn weight_examples() {
        let w = adjust_weights(&[0.25; 4], &[1.0, 2.0], 0.0);
        assert!(w.iter().all(|v| (v - 0.25).abs() < 1e-15));
        let w = adjust_weights(&[1.0, 0.0, 0.0, 0.0], &[3.0, 5.0], 2.0);
        assert_relative_eq!(w[0], 0.925, epsilon = 1e-12);
        assert_relative_eq!(w[3], 0.025, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn escape_stays_in_cube(seed in 0u64..1000, count in 0usize..60, step in 0.0f64..1.0) {
            let mut rng = stream(seed);
            let mut space = init_solution_space(12, 3, &mut rng);
            let fit = FitnessMatrix::from_fn(12, 1, |i, _| i as f64);
            let mut s = state();
            s.no_improvement_count = count;
            s.step_size = step;
            adaptive_escape(&mut space, &fit, &s, 1e-3, &mut rng);
            prop_assert!(space.iter().all(|v| (0.0..=1.0).contains(v)));
        }

        #[test]
        fn weights_stay_on_simplex(f in proptest::collection::vec(-10.0f64..10.0, 1..20), best in -5.0f64..5.0) {
            let w = adjust_weights(&[0.4, 0.3, 0.2, 0.1], &f, best);
            prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(w.iter().all(|v| *v >= 0.0));
        }
    }
}
