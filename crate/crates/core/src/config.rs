//! Optimizer configuration and mutable engine state.

use serde::{Deserialize, Serialize};

use crate::par::Mode;
use crate::similarity::SimilarityMethod;
use crate::{Error, Result};

/// How the per-iteration transformation matrix is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformStrategy {
    /// Diagonal of the similarity column means.
    #[default]
    Diagonal,
    /// Normalized cross-similarity matrix between variables.
    CrossSimilarity,
}

/// Point the linear map is applied about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformFrame {
    /// The genotype of the phenotype origin (clamped into the box), so the
    /// map acts on the values the objective sees.
    #[default]
    Phenotype,
    /// The genotype origin, i.e. the lower corner of the box.
    Genotype,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub population_size: usize,
    pub max_iterations: usize,
    pub similarity_methods: Vec<SimilarityMethod>,
    pub allow_population_growth: bool,
    /// Forces archive mode even for a single objective. Problems with more
    /// than one objective always run in archive mode.
    pub is_multi_objective: bool,
    pub verbose_explainability: bool,
    /// Early stop when `|best - tolerance_target| <= tolerance`.
    pub tolerance: f64,
    pub tolerance_target: f64,
    pub diversity_threshold: f64,
    pub step_size_init: f64,
    pub step_size_min: f64,
    pub step_size_max: f64,
    pub seed: u64,
    pub transform: TransformStrategy,
    pub transform_frame: TransformFrame,
    /// Re-weight similarity methods every iteration and use the weights in
    /// the combined matrix.
    pub adaptive_weights: bool,
    /// Use sample-wise row correlation so every method yields a
    /// population-sized matrix.
    pub consistent_shapes: bool,
    /// Explainability snapshot cadence in iterations.
    pub snapshot_every: usize,
    /// Iteration cap handed to the Nelder-Mead refinement.
    pub local_search_iterations: usize,
    /// Hard cap on objective evaluations; the loop stops before exceeding it.
    pub max_evaluations: Option<usize>,
    /// Crowding-distance cap on the Pareto archive.
    pub archive_cap: Option<usize>,
    pub mode: Mode,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            population_size: 100,
            max_iterations: 1000,
            similarity_methods: SimilarityMethod::ALL.to_vec(),
            allow_population_growth: false,
            is_multi_objective: false,
            verbose_explainability: false,
            tolerance: 1e-6,
            tolerance_target: 0.0,
            diversity_threshold: 1e-3,
            step_size_init: 0.1,
            step_size_min: 1e-6,
            step_size_max: 1.0,
            seed: 0,
            transform: TransformStrategy::Diagonal,
            transform_frame: TransformFrame::Phenotype,
            adaptive_weights: false,
            consistent_shapes: false,
            snapshot_every: 10,
            local_search_iterations: 100,
            max_evaluations: None,
            archive_cap: None,
            mode: Mode::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 {
            return Err(Error::Config("population_size must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }
        if self.similarity_methods.is_empty() {
            return Err(Error::Config("similarity_methods must not be empty".into()));
        }
        if !(0.0 < self.step_size_min
            && self.step_size_min <= self.step_size_init
            && self.step_size_init <= self.step_size_max)
        {
            return Err(Error::Config(format!(
                "need 0 < step_size_min <= step_size_init <= step_size_max, got {} / {} / {}",
                self.step_size_min, self.step_size_init, self.step_size_max
            )));
        }
        if self.snapshot_every == 0 {
            return Err(Error::Config("snapshot_every must be positive".into()));
        }
        if self.max_evaluations == Some(0) {
            return Err(Error::Config("max_evaluations must be positive".into()));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::Config("tolerance must be non-negative".into()));
        }
        Ok(())
    }
}

/// Mutable bookkeeping carried across iterations of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineState {
    pub iteration: usize,
    pub max_iterations: usize,
    pub step_size: f64,
    pub weights: Vec<f64>,
    pub best_solution: Option<Vec<f64>>,
    pub best_fitness: f64,
    pub no_improvement_count: usize,
    pub last_improvement_iteration: usize,
    pub population_size: usize,
}

impl EngineState {
    pub fn new(config: &OptimizerConfig) -> Self {
        let m = config.similarity_methods.len();
        EngineState {
            iteration: 0,
            max_iterations: config.max_iterations,
            step_size: config.step_size_init,
            weights: vec![1.0 / m as f64; m],
            best_solution: None,
            best_fitness: f64::INFINITY,
            no_improvement_count: 0,
            last_improvement_iteration: 0,
            population_size: config.population_size,
        }
    }
}
