//! Rank-sum tables and performance profiles over collections of results.
//!
//! Seeds are aggregated per (algorithm, problem) before anything is ranked,
//! by default with the median.

mod profile;
mod ranking;
mod report;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use profile::{performance_profile, performance_profile_with, AlgorithmProfile, PerformanceProfile, ProfileMetric, ProfileOptions, GAP_FLOOR};
pub use ranking::{competition_ranks, rank_cells, rank_cells_with, ProblemRanks, RankRow, RankTable};
pub use report::{write_report, ReportManifest};

use crate::{Error, Result};

/// Outcome of one (algorithm, problem, seed) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultCell {
    pub algorithm: String,
    pub problem: String,
    pub seed: u64,
    /// One value per objective.
    pub best_fitness: Vec<f64>,
    pub wall_clock_s: f64,
    pub evaluations: usize,
    pub budget: usize,
}

impl ResultCell {
    pub fn validate(&self) -> Result<()> {
        let here = || format!("{} on {} (seed {})", self.algorithm, self.problem, self.seed);
        if self.best_fitness.is_empty() {
            return Err(Error::Argument(format!("{}: no fitness values", here())));
        }
        if !(self.wall_clock_s > 0.0 && self.wall_clock_s.is_finite()) {
            return Err(Error::Argument(format!("{}: wall clock {} is not positive", here(), self.wall_clock_s)));
        }
        if self.evaluations > self.budget {
            return Err(Error::Argument(format!(
                "{}: {} evaluations exceed the budget of {}",
                here(),
                self.evaluations,
                self.budget
            )));
        }
        Ok(())
    }
}

/// How seeds are combined per (algorithm, problem).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    #[default]
    Median,
    Mean,
    Best,
}

impl Aggregation {
    /// NaN sorts above every number, so it only wins when nothing else is
    /// present.
    pub fn apply(self, values: &[f64]) -> f64 {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        match self {
            Aggregation::Best => v.first().copied().unwrap_or(f64::NAN),
            Aggregation::Mean => v.iter().sum::<f64>() / v.len() as f64,
            Aggregation::Median => {
                let n = v.len();
                if n == 0 {
                    f64::NAN
                } else if n % 2 == 1 {
                    v[n / 2]
                } else {
                    0.5 * (v[n / 2 - 1] + v[n / 2])
                }
            }
        }
    }
}

/// Aggregated (problem x algorithm) grid, both axes sorted.
#[derive(Debug, Clone)]
pub(crate) struct Grid {
    pub algorithms: Vec<String>,
    pub problems: Vec<String>,
    /// `fitness[p][a]`, one value per objective.
    pub fitness: Vec<Vec<Vec<f64>>>,
    pub time: Vec<Vec<f64>>,
}

impl Grid {
    pub fn build(cells: &[ResultCell], aggregation: Aggregation) -> Result<Grid> {
        if cells.is_empty() {
            return Err(Error::IncompleteGrid("no result cells".into()));
        }
        let mut groups: BTreeMap<(&str, &str), Vec<&ResultCell>> = BTreeMap::new();
        for c in cells {
            c.validate()?;
            groups.entry((c.problem.as_str(), c.algorithm.as_str())).or_default().push(c);
        }
        let mut algorithms: Vec<String> = cells.iter().map(|c| c.algorithm.clone()).collect();
        algorithms.sort();
        algorithms.dedup();
        let mut problems: Vec<String> = cells.iter().map(|c| c.problem.clone()).collect();
        problems.sort();
        problems.dedup();

        let mut missing = Vec::new();
        for p in &problems {
            for a in &algorithms {
                if !groups.contains_key(&(p.as_str(), a.as_str())) {
                    missing.push(format!("{a} on {p}"));
                }
            }
        }
        if !missing.is_empty() {
            return Err(Error::IncompleteGrid(format!("missing cells: {}", missing.join(", "))));
        }

        let mut fitness = Vec::with_capacity(problems.len());
        let mut time = Vec::with_capacity(problems.len());
        for p in &problems {
            let m = groups[&(p.as_str(), algorithms[0].as_str())][0].best_fitness.len();
            let mut row_f = Vec::with_capacity(algorithms.len());
            let mut row_t = Vec::with_capacity(algorithms.len());
            for a in &algorithms {
                let group = &groups[&(p.as_str(), a.as_str())];
                if let Some(bad) = group.iter().find(|c| c.best_fitness.len() != m) {
                    return Err(Error::Argument(format!(
                        "{p}: {a} seed {} has {} objectives, expected {m}",
                        bad.seed,
                        bad.best_fitness.len()
                    )));
                }
                row_f.push(
                    (0..m)
                        .map(|k| aggregation.apply(&group.iter().map(|c| c.best_fitness[k]).collect::<Vec<_>>()))
                        .collect(),
                );
                row_t.push(aggregation.apply(&group.iter().map(|c| c.wall_clock_s).collect::<Vec<_>>()));
            }
            fitness.push(row_f);
            time.push(row_t);
        }
        Ok(Grid {
            algorithms,
            problems,
            fitness,
            time,
        })
    }
}

#[cfg(test)]
pub(crate) fn cell(algorithm: &str, problem: &str, seed: u64, fitness: f64, time: f64) -> ResultCell {
    ResultCell {
        algorithm: algorithm.into(),
        problem: problem.into(),
        seed,
        best_fitness: vec![fitness],
        wall_clock_s: time,
        evaluations: 10,
        budget: 10,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregation_rules() {
        let v = [3.0, 1.0, 2.0, 10.0];
        assert_eq!(Aggregation::Median.apply(&v), 2.5);
        assert_eq!(Aggregation::Median.apply(&v[..3]), 2.0);
        assert_eq!(Aggregation::Mean.apply(&v), 4.0);
        assert_eq!(Aggregation::Best.apply(&v), 1.0);
        assert_eq!(Aggregation::Best.apply(&[f64::NAN, 5.0]), 5.0);
    }

    #[test]
    fn cell_validation() {
        assert!(cell("a", "p", 0, 1.0, 0.5).validate().is_ok());
        assert!(cell("a", "p", 0, 1.0, 0.0).validate().is_err());
        let mut c = cell("a", "p", 0, 1.0, 0.5);
        c.evaluations = 11;
        assert!(c.validate().is_err());
    }

    #[test]
    fn median_over_seeds() {
        let cells = vec![
            cell("a", "p", 0, 5.0, 1.0),
            cell("a", "p", 1, 1.0, 3.0),
            cell("a", "p", 2, 2.0, 2.0),
        ];
        let g = Grid::build(&cells, Aggregation::Median).unwrap();
        assert_eq!(g.fitness[0][0], vec![2.0]);
        assert_eq!(g.time[0][0], 2.0);
    }
}
