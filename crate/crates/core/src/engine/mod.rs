//! The optimizer loop and its building blocks.
//!
//! One iteration evaluates the population, builds the combined similarity
//! matrix, updates the incumbent (refined by Nelder-Mead) or the Pareto
//! archive, moves the population through a similarity-derived linear map
//! plus decaying noise, and then applies the stagnation responses in order:
//! intensification, restart, escape, optional resizing and step-size update.

mod adaptive;
mod local_search;
mod population;
mod transform;

use std::time::Instant;

pub use adaptive::{
    adaptive_escape, adaptive_parameters, adaptive_restart, adjust_population_size, adjust_weights,
    diversity, escape_intensity, resize_target, restart_threshold, ESCAPE_LADDER, MAX_POPULATION,
    MIN_POPULATION,
};
pub use local_search::{nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use population::{
    argsort, dimensional_shift, init_solution_space, intensify_search_around_best, project_expanded,
};
pub use transform::{
    apply_transformation, cross_similarity_transformation, diagonal_transformation, noise_intensity,
};

use crate::config::{EngineState, OptimizerConfig, TransformFrame, TransformStrategy};
use crate::explain::{ExplainabilitySnapshot, DEFAULT_NEIGHBORS};
use crate::pareto::{pareto_front_with, update_pareto_front, ParetoArchive};
use crate::problem::{Evaluator, Problem};
use crate::record::{ProgressPoint, RunRecord, Termination, TrajectoryEntry};
use crate::rng::{stream, Stream};
use crate::similarity::{combined_similarity_with, SimilarityOptions};
use crate::{Error, FitnessMatrix, Result, SolutionMatrix};

/// Result of one optimizer run.
#[derive(Debug, Clone)]
pub struct Outcome {
    /// Incumbent genotype (single-objective runs).
    pub best_solution: Option<Vec<f64>>,
    pub best_value: Option<f64>,
    /// Final non-dominated archive (archive-mode runs).
    pub archive: Option<ParetoArchive>,
    pub record: RunRecord,
}

impl Outcome {
    pub fn best_fitness(&self) -> Option<f64> {
        self.best_value
    }

    pub fn record(&self) -> &RunRecord {
        &self.record
    }
}

/// Per-row displacement records for one transformation step.
pub fn track_solution_trajectory(
    iteration: usize,
    original: &SolutionMatrix,
    transformed: &SolutionMatrix,
    fitness: &FitnessMatrix,
) -> Vec<TrajectoryEntry> {
    let rows = original.nrows().min(transformed.nrows()).min(fitness.nrows());
    (0..rows)
        .map(|i| {
            let o: Vec<f64> = original.row(i).iter().copied().collect();
            let t: Vec<f64> = transformed.row(i).iter().copied().collect();
            TrajectoryEntry::shift(iteration, &o, &t, fitness.row(i).iter().copied().collect())
        })
        .collect()
}

enum Flow {
    Continue,
    Stop(Termination),
}

struct Run<'a> {
    config: &'a OptimizerConfig,
    multi: bool,
    rng: Stream,
    eval: Evaluator<'a>,
    state: EngineState,
    space: SolutionMatrix,
    archive: ParetoArchive,
    record: RunRecord,
    anchor: Vec<f64>,
}

impl Run<'_> {
    fn similarity_options(&self) -> SimilarityOptions {
        SimilarityOptions {
            methods: self.config.similarity_methods.clone(),
            consistent_shapes: self.config.consistent_shapes,
            weights: self.config.adaptive_weights.then(|| self.state.weights.clone()),
            mode: self.config.mode,
        }
    }

    fn rows(m: &SolutionMatrix) -> Vec<Vec<f64>> {
        m.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    fn step(&mut self) -> Result<Flow> {
        let n_vars = self.space.ncols();
        let iteration = self.state.iteration;

        let stagnant = self
            .space
            .column_iter()
            .all(|c| c.variance().sqrt() < 1e-8);
        if stagnant {
            population::add_gaussian(&mut self.space, 1e-5, &mut self.rng);
            self.space.apply(|v| *v = v.clamp(0.0, 1.0));
        }
        let first = self.space.row(0).into_owned();
        let varying = (0..n_vars)
            .filter(|&j| self.space.column(j).iter().any(|v| *v != first[j]))
            .count();
        if varying < n_vars.min(2) {
            log::debug!("too few varying columns at iteration {iteration}, reinitializing");
            self.space = init_solution_space(self.state.population_size, n_vars, &mut self.rng);
            return Ok(Flow::Continue);
        }

        if self.space.nrows() > self.eval.remaining() {
            return Ok(Flow::Stop(Termination::BudgetExhausted));
        }
        let fitness = self.eval.evaluate_population(&self.space)?;
        let similarities = combined_similarity_with(&self.space, &self.similarity_options());

        if self.config.verbose_explainability && iteration.is_multiple_of(self.config.snapshot_every) {
            let snap = ExplainabilitySnapshot::capture(iteration, &self.space, &similarities, &fitness, DEFAULT_NEIGHBORS);
            log::debug!("{}", snap.explanation);
            self.record.explainability_snapshots.push(snap);
        }

        if self.multi {
            if let Some(stop) = self.update_archive(&fitness)? {
                return Ok(Flow::Stop(stop));
            }
        } else if let Some(stop) = self.update_incumbent(&fitness)? {
            return Ok(Flow::Stop(stop));
        }

        let transformation = match self.config.transform {
            TransformStrategy::Diagonal => diagonal_transformation(&similarities, n_vars),
            TransformStrategy::CrossSimilarity => cross_similarity_transformation(&similarities, n_vars),
        };
        self.shift_frame(-1.0);
        self.space = apply_transformation(&self.space, &transformation, self.state.step_size, iteration, &mut self.rng);
        self.space = dimensional_shift(&self.space, &mut self.rng);
        self.shift_frame(1.0);

        if !self.multi {
            let column: Vec<f64> = fitness.column(0).iter().copied().collect();
            let best = intensify_search_around_best(
                &self.space,
                &column,
                self.state.population_size,
                self.state.step_size,
                &mut self.rng,
            );
            for i in 0..best.nrows() {
                self.space.set_row(i, &best.row(i));
            }
        }

        if let Some(fresh) = adaptive_restart(&self.space, &fitness, &mut self.state, self.multi, &mut self.rng) {
            self.space = fresh;
        }
        adaptive_escape(&mut self.space, &fitness, &self.state, self.config.diversity_threshold, &mut self.rng);
        if self.config.allow_population_growth {
            if let Some(resized) = adjust_population_size(&self.space, &fitness, &mut self.state, self.config, &mut self.rng) {
                self.space = resized;
            }
        }
        adaptive_parameters(&mut self.state, diversity(&fitness), self.config);
        self.push_progress();
        Ok(Flow::Continue)
    }

    /// Moves the population into (`-1`) or out of (`+1`) the frame the
    /// linear map acts in.
    fn shift_frame(&mut self, sign: f64) {
        for mut row in self.space.row_iter_mut() {
            for (v, a) in row.iter_mut().zip(&self.anchor) {
                *v += sign * a;
            }
        }
    }

    fn update_incumbent(&mut self, fitness: &FitnessMatrix) -> Result<Option<Termination>> {
        let column: Vec<f64> = fitness.column(0).iter().copied().collect();
        let current = argsort(&column)[0];
        if column[current] < self.state.best_fitness {
            let start: Vec<f64> = self.space.row(current).iter().copied().collect();
            let options = NelderMeadOptions {
                max_iterations: self.config.local_search_iterations,
                max_evaluations: self.eval.budget().map(|_| self.eval.remaining()),
                ..NelderMeadOptions::default()
            };
            let eval = &mut self.eval;
            let refined = nelder_mead(|x| eval.evaluate_scalar(x), &start, &options)?;
            let (solution, value) = if refined.fx < column[current] {
                (refined.x, refined.fx)
            } else {
                (start, column[current])
            };
            let solution: Vec<f64> = solution.iter().map(|v| v.clamp(0.0, 1.0)).collect();
            self.record.trajectory.push(TrajectoryEntry {
                iteration: self.state.iteration,
                solution: solution.clone(),
                fitness: vec![value],
                shift_vector: None,
            });
            self.state.best_solution = Some(solution);
            self.state.best_fitness = value;
            self.state.no_improvement_count = 0;
            self.state.last_improvement_iteration = self.state.iteration;
            if (value - self.config.tolerance_target).abs() <= self.config.tolerance {
                self.push_progress();
                return Ok(Some(Termination::ToleranceReached));
            }
        } else {
            self.state.no_improvement_count += 1;
        }
        if self.config.adaptive_weights {
            self.state.weights = adjust_weights(&self.state.weights, &column, self.state.best_fitness);
        }
        Ok(None)
    }

    fn update_archive(&mut self, fitness: &FitnessMatrix) -> Result<Option<Termination>> {
        let old_size = self.archive.len();
        let rows = Self::rows(fitness);
        let front = pareto_front_with(&Self::rows(&self.space), &rows, self.config.mode)?;
        if self.archive.len() + front.len() > self.eval.remaining() {
            return Ok(Some(Termination::BudgetExhausted));
        }
        let eval = &mut self.eval;
        self.archive = if self.archive.is_empty() {
            front
        } else {
            update_pareto_front(&self.archive, &front.solutions, |x| eval.evaluate(x))?
        };
        if let Some(cap) = self.config.archive_cap {
            self.archive.truncate_by_crowding(cap);
        }
        if let (Some(s), Some(f)) = (self.archive.solutions.last(), self.archive.fitness.last()) {
            self.record.trajectory.push(TrajectoryEntry {
                iteration: self.state.iteration,
                solution: s.clone(),
                fitness: f.clone(),
                shift_vector: None,
            });
        }
        if self.archive.len() > old_size {
            self.state.no_improvement_count = 0;
        } else {
            self.state.no_improvement_count += 1;
        }
        Ok(None)
    }

    fn push_progress(&mut self) {
        let best = if self.multi {
            self.archive.ideal_point().unwrap_or_default()
        } else {
            vec![self.state.best_fitness]
        };
        self.record.progress.push(ProgressPoint {
            iteration: self.state.iteration,
            evaluations: self.eval.used(),
            best,
            archive_size: self.archive.len(),
            step_size: self.state.step_size,
        });
    }
}

/// Genotype the transformation is applied about.
pub fn frame_anchor(problem: &Problem, frame: TransformFrame) -> Vec<f64> {
    match frame {
        TransformFrame::Genotype => vec![0.0; problem.n_variables()],
        TransformFrame::Phenotype => problem
            .bounds()
            .iter()
            .map(|b| (-b.lower / b.width()).clamp(0.0, 1.0))
            .collect(),
    }
}

/// Runs the optimizer on `problem`.
///
/// Problems with more than one objective, or configs that ask for it, run in
/// archive mode and return the non-dominated set. A failure inside an
/// iteration stops the loop and returns what was found so far with
/// [`Termination::Failed`]; it is an error only if nothing was found.
pub fn optimize(problem: &Problem, config: &OptimizerConfig) -> Result<Outcome> {
    config.validate()?;
    let multi = config.is_multi_objective || problem.n_objectives() > 1;
    let mut rng = stream(config.seed);
    let space = init_solution_space(config.population_size, problem.n_variables(), &mut rng);
    let algorithm = "spinex";
    let mut record = RunRecord::new(problem.name(), algorithm, config.seed, problem.n_objectives());
    record.config = Some(config.clone());
    let mut run = Run {
        config,
        multi,
        rng,
        eval: Evaluator::new(problem, config.max_evaluations).with_mode(config.mode),
        state: EngineState::new(config),
        space,
        archive: ParetoArchive::default(),
        record,
        anchor: frame_anchor(problem, config.transform_frame),
    };

    let started = Instant::now();
    let mut termination = Termination::MaxIterations;
    let mut failure = None;
    let mut iterations = 0;
    for iteration in 0..config.max_iterations {
        run.state.iteration = iteration;
        match run.step() {
            Ok(Flow::Continue) => iterations += 1,
            Ok(Flow::Stop(t)) => {
                if t != Termination::BudgetExhausted {
                    iterations += 1;
                }
                termination = t;
                break;
            }
            Err(Error::BudgetExhausted { .. }) => {
                termination = Termination::BudgetExhausted;
                break;
            }
            Err(e) => {
                log::warn!("iteration {iteration} failed: {e}");
                failure = Some(e);
                break;
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();

    let found = if multi {
        !run.archive.is_empty()
    } else {
        run.state.best_solution.is_some()
    };
    if let Some(e) = failure {
        if !found {
            return Err(e);
        }
        termination = Termination::Failed(e.to_string());
    }

    let mut record = run.record;
    record.wall_clock_seconds = elapsed;
    record.evaluations = run.eval.used();
    record.iterations_run = iterations;
    record.termination = termination;
    if multi {
        record.final_front = run.archive.fitness.clone();
        Ok(Outcome {
            best_solution: None,
            best_value: None,
            archive: Some(run.archive),
            record,
        })
    } else {
        Ok(Outcome {
            best_value: run.state.best_solution.as_ref().map(|_| run.state.best_fitness),
            best_solution: run.state.best_solution,
            archive: None,
            record,
        })
    }
}
