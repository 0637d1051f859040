//! Problems defined on a box and the genotype wrapper every algorithm uses.
//!
//! Algorithms search the unit cube. A genotype is clamped to `[0, 1]` and
//! mapped affinely onto the problem's bounds before the objective sees it, so
//! the stored genotype may drift outside the cube while the phenotype never
//! leaves the box.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::par::{self, Mode};
use crate::{Error, FitnessMatrix, Result, SolutionMatrix};

/// Closed interval of one decision variable in phenotype units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    pub const UNIT: Bounds = Bounds {
        lower: 0.0,
        upper: 1.0,
    };

    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower >= upper || !lower.is_finite() || !upper.is_finite() {
            return Err(Error::Argument(format!(
                "bounds require finite lower < upper, got ({lower}, {upper})"
            )));
        }
        Ok(Bounds { lower, upper })
    }

    /// Symmetric interval `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64) -> Self {
        Bounds {
            lower: -half_width,
            upper: half_width,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }
}

/// Maps a unit-cube genotype onto the phenotype box.
pub fn scale_to_domain(genotype: &[f64], bounds: &[Bounds]) -> Result<Vec<f64>> {
    if genotype.len() != bounds.len() {
        return Err(Error::Dimension {
            expected: bounds.len(),
            actual: genotype.len(),
        });
    }
    Ok(genotype
        .iter()
        .zip(bounds)
        .map(|(g, b)| b.lower + g * (b.upper - b.lower))
        .collect())
}

/// Min-max normalization; a degenerate range maps everything to one.
pub fn normalize_fitness(values: &[f64]) -> Vec<f64> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // same closeness test as numpy.isclose with default tolerances
    if (max - min).abs() <= 1e-8 + 1e-5 * min.abs() {
        return vec![1.0; values.len()];
    }
    values.iter().map(|v| (v - min) / (max - min)).collect()
}

type ObjectiveFn = dyn Fn(&[f64]) -> std::result::Result<Vec<f64>, String> + Send + Sync;

/// A box-bounded minimization problem with one or more objectives.
#[derive(Clone)]
pub struct Problem {
    name: String,
    bounds: Vec<Bounds>,
    n_objectives: usize,
    known_optimum: Option<Vec<f64>>,
    objective: Arc<ObjectiveFn>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("n_variables", &self.bounds.len())
            .field("n_objectives", &self.n_objectives)
            .field("known_optimum", &self.known_optimum)
            .finish()
    }
}

impl Problem {
    pub fn new<F>(name: impl Into<String>, bounds: Vec<Bounds>, n_objectives: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self::fallible(name, bounds, n_objectives, move |x| Ok(f(x)))
    }

    /// Problem whose objective can report a failure instead of a value.
    pub fn fallible<F>(
        name: impl Into<String>,
        bounds: Vec<Bounds>,
        n_objectives: usize,
        f: F,
    ) -> Self
    where
        F: Fn(&[f64]) -> std::result::Result<Vec<f64>, String> + Send + Sync + 'static,
    {
        assert!(!bounds.is_empty(), "a problem needs at least one variable");
        assert!(n_objectives > 0, "a problem needs at least one objective");
        Problem {
            name: name.into(),
            bounds,
            n_objectives,
            known_optimum: None,
            objective: Arc::new(f),
        }
    }

    pub fn with_known_optimum(mut self, optimum: Vec<f64>) -> Self {
        self.known_optimum = Some(optimum);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_variables(&self) -> usize {
        self.bounds.len()
    }

    pub fn n_objectives(&self) -> usize {
        self.n_objectives
    }

    pub fn bounds(&self) -> &[Bounds] {
        &self.bounds
    }

    pub fn known_optimum(&self) -> Option<&[f64]> {
        self.known_optimum.as_deref()
    }

    /// Evaluates a phenotype vector, checking arity and finiteness.
    pub fn evaluate(&self, phenotype: &[f64]) -> Result<Vec<f64>> {
        if phenotype.len() != self.n_variables() {
            return Err(Error::Dimension {
                expected: self.n_variables(),
                actual: phenotype.len(),
            });
        }
        let values = (self.objective)(phenotype).map_err(|reason| Error::Objective {
            problem: self.name.clone(),
            reason,
        })?;
        if values.len() != self.n_objectives {
            return Err(Error::Objective {
                problem: self.name.clone(),
                reason: format!(
                    "returned {} values, expected {}",
                    values.len(),
                    self.n_objectives
                ),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Objective {
                problem: self.name.clone(),
                reason: format!("non-finite objective value {bad}"),
            });
        }
        Ok(values)
    }

    /// Clamps the genotype to the unit cube, scales it and evaluates it.
    pub fn evaluate_genotype(&self, genotype: &[f64]) -> Result<Vec<f64>> {
        let phenotype = self.phenotype(genotype)?;
        self.evaluate(&phenotype)
    }

    /// Phenotype of a (possibly out-of-cube) genotype.
    pub fn phenotype(&self, genotype: &[f64]) -> Result<Vec<f64>> {
        let clamped: Vec<f64> = genotype.iter().map(|g| g.clamp(0.0, 1.0)).collect();
        scale_to_domain(&clamped, &self.bounds)
    }
}

/// Counts objective evaluations against an optional budget.
///
/// Every algorithm in the crate evaluates through one of these so that
/// comparisons can be made at equal evaluation cost.
#[derive(Debug)]
pub struct Evaluator<'p> {
    problem: &'p Problem,
    used: usize,
    budget: Option<usize>,
    mode: Mode,
}

impl<'p> Evaluator<'p> {
    pub fn new(problem: &'p Problem, budget: Option<usize>) -> Self {
        Evaluator {
            problem,
            used: 0,
            budget,
            mode: Mode::default(),
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn problem(&self) -> &'p Problem {
        self.problem
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    /// Evaluations still available, `usize::MAX` when unbudgeted.
    pub fn remaining(&self) -> usize {
        self.budget
            .map_or(usize::MAX, |b| b.saturating_sub(self.used))
    }

    fn reserve(&mut self, count: usize) -> Result<()> {
        if count > self.remaining() {
            return Err(Error::BudgetExhausted {
                budget: self.budget.unwrap_or(usize::MAX),
            });
        }
        self.used += count;
        Ok(())
    }

    pub fn evaluate(&mut self, genotype: &[f64]) -> Result<Vec<f64>> {
        self.reserve(1)?;
        self.problem.evaluate_genotype(genotype)
    }

    /// Single-objective convenience wrapper.
    pub fn evaluate_scalar(&mut self, genotype: &[f64]) -> Result<f64> {
        Ok(self.evaluate(genotype)?[0])
    }

    /// Evaluates every row; the whole population is charged up front.
    ///
    /// Rows may be evaluated concurrently, but the output is always in row
    /// order. Returns the first failing row's error, if any.
    pub fn evaluate_population(&mut self, space: &SolutionMatrix) -> Result<FitnessMatrix> {
        let rows = space.nrows();
        self.reserve(rows)?;
        let problem = self.problem;
        let results = par::map_indices(self.mode, rows, |i| {
            let row: Vec<f64> = space.row(i).iter().copied().collect();
            problem.evaluate_genotype(&row)
        });
        let mut fitness = FitnessMatrix::zeros(rows, problem.n_objectives());
        for (i, result) in results.into_iter().enumerate() {
            let values = result?;
            for (k, v) in values.into_iter().enumerate() {
                fitness[(i, k)] = v;
            }
        }
        Ok(fitness)
    }
}
