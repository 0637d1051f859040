//! The `cells.csv` row format.

use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};
use spinex::analysis::ResultCell;

use crate::spec::{instance_key, CellPlan};

pub const COLUMNS: [&str; 10] = [
    "problem",
    "algorithm",
    "seed",
    "dims",
    "objectives",
    "population",
    "budget",
    "best_fitness",
    "wall_clock_s",
    "evaluations",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRow {
    pub problem: String,
    pub algorithm: String,
    pub seed: u64,
    pub dims: usize,
    pub objectives: usize,
    /// Empty when the algorithm ran at its default population.
    pub population: Option<usize>,
    pub budget: usize,
    /// Semicolon-joined for multi-objective runs.
    pub best_fitness: String,
    pub wall_clock_s: f64,
    pub evaluations: usize,
}

/// Shortest round-tripping text, in exponent form for very small or large
/// magnitudes.
fn number(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

impl CellRow {
    pub fn new(plan: &CellPlan, best: &[f64], wall_clock_s: f64, evaluations: usize) -> Self {
        CellRow {
            problem: plan.problem.clone(),
            algorithm: plan.algorithm.clone(),
            seed: plan.seed,
            dims: plan.dims,
            objectives: plan.objectives,
            population: plan.population,
            budget: plan.budget,
            best_fitness: best.iter().map(|&v| number(v)).collect::<Vec<_>>().join(";"),
            wall_clock_s,
            evaluations,
        }
    }

    pub fn fitness(&self) -> Result<Vec<f64>, String> {
        self.best_fitness
            .split(';')
            .map(|s| s.trim().parse::<f64>().map_err(|e| format!("bad fitness `{s}`: {e}")))
            .collect()
    }

    pub fn key(&self) -> String {
        instance_key(&self.problem, self.dims, self.objectives, self.population)
    }

    /// Analysis view: the problem becomes the full instance key.
    pub fn to_result(&self) -> Result<ResultCell, String> {
        Ok(ResultCell {
            algorithm: self.algorithm.clone(),
            problem: self.key(),
            seed: self.seed,
            best_fitness: self.fitness()?,
            wall_clock_s: self.wall_clock_s,
            evaluations: self.evaluations,
            budget: self.budget,
        })
    }
}

/// Appends rows and flushes after each one, so the file is parseable at any
/// interruption point.
pub struct CellWriter {
    inner: csv::Writer<File>,
}

impl CellWriter {
    pub fn create(path: &Path) -> csv::Result<Self> {
        let mut inner = csv::WriterBuilder::new()
            .has_headers(false)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)?;
        inner.write_record(COLUMNS)?;
        inner.flush()?;
        Ok(CellWriter { inner })
    }

    pub fn append(&mut self, row: &CellRow) -> csv::Result<()> {
        self.inner.serialize(row)?;
        self.inner.flush()?;
        Ok(())
    }
}

pub fn read(path: &Path) -> Result<Vec<CellRow>, String> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut rows = Vec::new();
    for (i, rec) in reader.deserialize().enumerate() {
        // header is line 1
        rows.push(rec.map_err(|e| format!("{}:{}: {e}", path.display(), i + 2))?);
    }
    Ok(rows)
}
