//! Comparison algorithms behind a shared registry.
//!
//! Every algorithm searches the genotype unit cube, evaluates through an
//! [`Evaluator`] charged against [`BaselineConfig::budget`] and returns the
//! same [`Outcome`] as the optimizer, so runs can be compared at equal
//! evaluation cost.

mod annealing;
mod evolution;
mod nsga2;
mod random;
mod simplex;

use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use annealing::{anneal, simulated_annealing, AnnealingParams, AnnealingStats};
pub use evolution::{differential_evolution, EvolutionParams};
pub use nsga2::{environmental_selection, fast_non_dominated_sort, nsga2, Nsga2Params};
pub use random::random_search;
pub use simplex::{nelder_mead_restarts, SimplexParams};

use crate::config::OptimizerConfig;
use crate::engine::{optimize, Outcome};
use crate::problem::{Evaluator, Problem};
use crate::record::{ProgressPoint, RunRecord, Termination, TrajectoryEntry};
use crate::{Error, Result};

/// Settings for one baseline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BaselineConfig {
    /// Maximum objective evaluations.
    pub budget: usize,
    pub seed: u64,
    /// Population size for population-based methods; each algorithm's own
    /// default when unset.
    pub population: Option<usize>,
    /// Ask algorithms that support it to record explainability snapshots.
    pub explain: bool,
    pub annealing: AnnealingParams,
    pub evolution: EvolutionParams,
    pub simplex: SimplexParams,
    pub nsga2: Nsga2Params,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            budget: 10_000,
            seed: 0,
            population: None,
            explain: false,
            annealing: AnnealingParams::default(),
            evolution: EvolutionParams::default(),
            simplex: SimplexParams::default(),
            nsga2: Nsga2Params::default(),
        }
    }
}

impl BaselineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::Config("budget must be positive".into()));
        }
        if self.population == Some(0) {
            return Err(Error::Config("population must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn evaluator<'p>(&self, problem: &'p Problem) -> Result<Evaluator<'p>> {
        self.validate()?;
        Ok(Evaluator::new(problem, Some(self.budget)).with_mode(crate::par::Mode::Sequential))
    }
}

fn require_single(problem: &Problem, algorithm: &str) -> Result<()> {
    if problem.n_objectives() != 1 {
        return Err(Error::Argument(format!(
            "{algorithm} is single-objective but `{}` has {} objectives",
            problem.name(),
            problem.n_objectives()
        )));
    }
    Ok(())
}

/// Best-so-far bookkeeping for single-objective baselines.
pub(crate) struct Incumbent {
    started: Instant,
    record: RunRecord,
    best: Option<(Vec<f64>, f64)>,
}

impl Incumbent {
    pub(crate) fn new(problem: &Problem, algorithm: &str, seed: u64) -> Self {
        Incumbent {
            started: Instant::now(),
            record: RunRecord::new(problem.name(), algorithm, seed, 1),
            best: None,
        }
    }

    pub(crate) fn best_value(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.1)
    }

    /// Offers a candidate; improvements are logged with the evaluation count.
    pub(crate) fn offer(&mut self, x: &[f64], fx: f64, iteration: usize, evaluations: usize) {
        if fx < self.best_value() {
            self.best = Some((x.to_vec(), fx));
            self.record.trajectory.push(TrajectoryEntry {
                iteration,
                solution: x.to_vec(),
                fitness: vec![fx],
                shift_vector: None,
            });
            self.record.progress.push(ProgressPoint {
                iteration,
                evaluations,
                best: vec![fx],
                archive_size: 0,
                step_size: 0.0,
            });
        }
    }

    pub(crate) fn finish(mut self, iterations: usize, eval: &Evaluator<'_>) -> Result<Outcome> {
        let (x, fx) = self.best.ok_or_else(|| Error::Objective {
            problem: self.record.problem_name.clone(),
            reason: "no candidate was evaluated".into(),
        })?;
        self.record.wall_clock_seconds = self.started.elapsed().as_secs_f64();
        self.record.evaluations = eval.used();
        self.record.iterations_run = iterations;
        self.record.termination = if eval.remaining() == 0 {
            Termination::BudgetExhausted
        } else {
            Termination::MaxIterations
        };
        Ok(Outcome {
            best_solution: Some(x),
            best_value: Some(fx),
            archive: None,
            record: self.record,
        })
    }
}

/// Which problems an algorithm accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    SingleObjective,
    MultiObjective,
    Both,
}

impl Support {
    pub fn accepts(self, n_objectives: usize) -> bool {
        match self {
            Support::SingleObjective => n_objectives == 1,
            Support::MultiObjective => n_objectives > 1,
            Support::Both => true,
        }
    }
}

pub type Runner = Arc<dyn Fn(&Problem, &BaselineConfig) -> Result<Outcome> + Send + Sync>;

#[derive(Clone)]
pub struct AlgorithmEntry {
    pub id: String,
    pub description: String,
    pub support: Support,
    runner: Runner,
}

impl std::fmt::Debug for AlgorithmEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AlgorithmEntry")
            .field("id", &self.id)
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

/// Algorithms keyed by id.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    entries: Vec<AlgorithmEntry>,
}

/// The optimizer under the registry interface: the budget becomes the
/// evaluation cap and a known single-objective optimum the tolerance target.
pub fn spinex_runner(problem: &Problem, config: &BaselineConfig) -> Result<Outcome> {
    config.validate()?;
    let mut c = OptimizerConfig {
        seed: config.seed,
        max_evaluations: Some(config.budget),
        verbose_explainability: config.explain,
        ..OptimizerConfig::default()
    };
    if let Some(p) = config.population {
        c.population_size = p;
    }
    if let (1, Some(opt)) = (problem.n_objectives(), problem.known_optimum()) {
        c.tolerance_target = opt[0];
    }
    optimize(problem, &c)
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    /// The optimizer plus the five built-in baselines.
    pub fn standard() -> Self {
        let mut r = Registry::empty();
        let builtin: [(&str, &str, Support, Runner); 6] = [
            ("spinex", "similarity-driven population search", Support::Both, Arc::new(spinex_runner)),
            ("sa", "simulated annealing", Support::SingleObjective, Arc::new(simulated_annealing)),
            ("de", "differential evolution rand/1/bin", Support::SingleObjective, Arc::new(differential_evolution)),
            ("nelder_mead", "Nelder-Mead with random restarts", Support::SingleObjective, Arc::new(nelder_mead_restarts)),
            ("random", "uniform random search", Support::Both, Arc::new(random_search)),
            ("nsga2", "NSGA-II", Support::MultiObjective, Arc::new(|p: &Problem, c: &BaselineConfig| nsga2(p, c))),
        ];
        for (id, description, support, runner) in builtin {
            r.register(id, description, support, runner).expect("built-in ids are unique");
        }
        r
    }

    pub fn register(&mut self, id: &str, description: &str, support: Support, runner: Runner) -> Result<()> {
        if self.entries.iter().any(|e| e.id == id) {
            return Err(Error::Argument(format!("algorithm `{id}` is already registered")));
        }
        self.entries.push(AlgorithmEntry {
            id: id.to_string(),
            description: description.to_string(),
            support,
            runner,
        });
        Ok(())
    }

    pub fn ids(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.id.as_str()).collect()
    }

    pub fn entries(&self) -> &[AlgorithmEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Result<&AlgorithmEntry> {
        self.entries.iter().find(|e| e.id == id).ok_or_else(|| Error::Unknown {
            kind: "algorithm",
            id: id.to_string(),
        })
    }

    pub fn run(&self, id: &str, problem: &Problem, config: &BaselineConfig) -> Result<Outcome> {
        let entry = self.get(id)?;
        if !entry.support.accepts(problem.n_objectives()) {
            return Err(Error::Argument(format!(
                "algorithm `{id}` does not accept {}-objective problem `{}`",
                problem.n_objectives(),
                problem.name()
            )));
        }
        (entry.runner)(problem, config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{multi_objective_problem, single_objective_problem, BenchmarkId, MultiBase};

    #[test]
    fn registry_contents_and_support() {
        let r = Registry::standard();
        assert_eq!(r.ids(), ["spinex", "sa", "de", "nelder_mead", "random", "nsga2"]);
        let single = single_objective_problem(BenchmarkId::Sphere);
        let multi = multi_objective_problem(MultiBase::Sphere, 2, 2).unwrap();
        let c = BaselineConfig { budget: 500, ..BaselineConfig::default() };
        assert!(r.run("nsga2", &single, &c).is_err());
        assert!(r.run("de", &multi, &c).is_err());
        assert!(matches!(r.run("tabu", &single, &c), Err(Error::Unknown { .. })));
    }

    #[test]
    fn external_registration() {
        let mut r = Registry::standard();
        r.register("constant", "returns the origin", Support::SingleObjective, Arc::new(random_search))
            .unwrap();
        assert!(r.register("sa", "dup", Support::Both, Arc::new(random_search)).is_err());
        assert!(r.ids().contains(&"constant"));
    }

    #[test]
    fn every_algorithm_respects_the_budget_exactly() {
        let r = Registry::standard();
        let single = single_objective_problem(BenchmarkId::Rastrigin);
        let multi = multi_objective_problem(MultiBase::Sphere, 2, 3).unwrap();
        for budget in [1, 7, 333, 1000] {
            let c = BaselineConfig { budget, seed: 3, ..BaselineConfig::default() };
            for e in r.entries() {
                let p = if e.support == Support::MultiObjective { &multi } else { &single };
                let Ok(out) = r.run(&e.id, p, &c) else {
                    // the optimizer needs at least one population's worth
                    assert_eq!(e.id, "spinex");
                    assert!(budget < 100);
                    continue;
                };
                assert!(out.record.evaluations <= budget, "{} used {}", e.id, out.record.evaluations);
                if e.id != "spinex" {
                    assert_eq!(out.record.evaluations, budget, "{}", e.id);
                }
            }
        }
    }

    #[test]
    fn every_algorithm_is_seed_deterministic() {
        let r = Registry::standard();
        let single = single_objective_problem(BenchmarkId::Ackley);
        let multi = multi_objective_problem(MultiBase::Sphere, 2, 2).unwrap();
        let c = BaselineConfig { budget: 2000, seed: 11, ..BaselineConfig::default() };
        for e in r.entries() {
            let p = if e.support == Support::MultiObjective { &multi } else { &single };
            let a = r.run(&e.id, p, &c).unwrap();
            let b = r.run(&e.id, p, &c).unwrap();
            assert_eq!(a.best_value, b.best_value, "{}", e.id);
            assert_eq!(a.best_solution, b.best_solution, "{}", e.id);
            assert_eq!(a.archive, b.archive, "{}", e.id);
        }
    }

    #[test]
    fn zero_budget_rejected() {
        let p = single_objective_problem(BenchmarkId::Sphere);
        let c = BaselineConfig { budget: 0, ..BaselineConfig::default() };
        assert!(matches!(random_search(&p, &c), Err(Error::Config(_))));
    }
}
