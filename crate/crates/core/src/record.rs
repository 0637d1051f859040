//! Run bookkeeping shared by the optimizer and the baselines.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::OptimizerConfig;
use crate::explain::ExplainabilitySnapshot;
use crate::{Error, Result};

/// One recorded best solution (single objective) or archive sample (multi).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEntry {
    pub iteration: usize,
    pub solution: Vec<f64>,
    pub fitness: Vec<f64>,
    /// `transformed - original` when the entry records a transformation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift_vector: Option<Vec<f64>>,
}

impl TrajectoryEntry {
    /// Entry describing how one solution moved under a transformation.
    pub fn shift(iteration: usize, original: &[f64], transformed: &[f64], fitness: Vec<f64>) -> Self {
        TrajectoryEntry {
            iteration,
            solution: transformed.to_vec(),
            fitness,
            shift_vector: Some(
                transformed
                    .iter()
                    .zip(original)
                    .map(|(t, o)| t - o)
                    .collect(),
            ),
        }
    }
}

/// Per-iteration progress sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgressPoint {
    pub iteration: usize,
    pub evaluations: usize,
    /// Best fitness so far (single objective) or the archive's ideal point.
    pub best: Vec<f64>,
    pub archive_size: usize,
    pub step_size: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Termination {
    MaxIterations,
    ToleranceReached,
    BudgetExhausted,
    /// An iteration failed; the record holds the partial result.
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem_name: String,
    pub algorithm: String,
    pub seed: u64,
    #[serde(default)]
    pub config: Option<OptimizerConfig>,
    pub n_objectives: usize,
    pub trajectory: Vec<TrajectoryEntry>,
    #[serde(default)]
    pub progress: Vec<ProgressPoint>,
    #[serde(default)]
    pub explainability_snapshots: Vec<ExplainabilitySnapshot>,
    /// Objective vectors of the final archive (multi-objective runs).
    #[serde(default)]
    pub final_front: Vec<Vec<f64>>,
    pub wall_clock_seconds: f64,
    pub evaluations: usize,
    pub iterations_run: usize,
    pub termination: Termination,
}

impl RunRecord {
    pub fn new(problem_name: &str, algorithm: &str, seed: u64, n_objectives: usize) -> Self {
        RunRecord {
            problem_name: problem_name.to_string(),
            algorithm: algorithm.to_string(),
            seed,
            config: None,
            n_objectives,
            trajectory: Vec::new(),
            progress: Vec::new(),
            explainability_snapshots: Vec::new(),
            final_front: Vec::new(),
            wall_clock_seconds: 0.0,
            evaluations: 0,
            iterations_run: 0,
            termination: Termination::MaxIterations,
        }
    }

    pub fn is_multi_objective(&self) -> bool {
        self.n_objectives > 1 || !self.final_front.is_empty()
    }

    pub fn to_json_file(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_vector_is_exact_difference() {
        let e = TrajectoryEntry::shift(3, &[0.25, 0.5], &[0.5, 0.125], vec![1.0]);
        assert_eq!(e.shift_vector, Some(vec![0.25, -0.375]));
        assert_eq!(e.solution, vec![0.5, 0.125]);
    }

    #[test]
    fn json_round_trip() {
        let mut r = RunRecord::new("sphere", "spinex", 4, 1);
        r.trajectory.push(TrajectoryEntry {
            iteration: 0,
            solution: vec![0.1, 0.2],
            fitness: vec![0.3],
            shift_vector: None,
        });
        r.termination = Termination::Failed("x".into());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        r.to_json_file(&path).unwrap();
        assert_eq!(RunRecord::from_json_file(&path).unwrap(), r);
    }
}
