//! Performance profiles: the fraction of problems on which an algorithm is
//! within a factor `tau` of the best.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Aggregation, Grid, ResultCell};
use crate::{Error, Result};

/// Lower bound on fitness gaps and times, so ratios stay finite.
pub const GAP_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMetric {
    /// Distance above the known optimum, or above the best result on the
    /// problem when no optimum is known.
    FitnessGap,
    Time,
}

impl ProfileMetric {
    pub fn name(self) -> &'static str {
        match self {
            ProfileMetric::FitnessGap => "fitness_gap",
            ProfileMetric::Time => "time",
        }
    }
}

impl fmt::Display for ProfileMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProfileMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "fitness_gap" | "fitness" => Ok(ProfileMetric::FitnessGap),
            "time" => Ok(ProfileMetric::Time),
            _ => Err(Error::Unknown {
                kind: "profile metric",
                id: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProfileOptions {
    pub aggregation: Aggregation,
    /// Known optimum per single-objective problem id.
    pub known_optima: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmProfile {
    pub algorithm: String,
    /// Performance ratio per problem, in [`PerformanceProfile::problems`]
    /// order. Infinite when the metric is not finite.
    pub ratios: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerformanceProfile {
    pub metric: ProfileMetric,
    pub problems: Vec<String>,
    pub algorithms: Vec<AlgorithmProfile>,
}

impl PerformanceProfile {
    /// Fraction of problems with ratio at most `tau`.
    pub fn rho(&self, algorithm: usize, tau: f64) -> f64 {
        let r = &self.algorithms[algorithm].ratios;
        r.iter().filter(|&&x| x <= tau).count() as f64 / r.len() as f64
    }

    /// Sorted distinct finite ratios, where the step functions jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self
            .algorithms
            .iter()
            .flat_map(|a| a.ratios.iter().copied())
            .filter(|r| r.is_finite())
            .collect();
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    }

    /// `(algorithm, tau, rho)` at every breakpoint.
    pub fn steps(&self) -> Vec<(String, f64, f64)> {
        let taus = self.breakpoints();
        let mut out = Vec::with_capacity(taus.len() * self.algorithms.len());
        for (a, profile) in self.algorithms.iter().enumerate() {
            for &tau in &taus {
                out.push((profile.algorithm.clone(), tau, self.rho(a, tau)));
            }
        }
        out
    }
}

pub fn performance_profile(cells: &[ResultCell], metric: ProfileMetric) -> Result<PerformanceProfile> {
    performance_profile_with(cells, metric, &ProfileOptions::default())
}

/// For multi-objective problems the fitness gap is the summed per-objective
/// distance above the best value any algorithm reached.
pub fn performance_profile_with(
    cells: &[ResultCell],
    metric: ProfileMetric,
    options: &ProfileOptions,
) -> Result<PerformanceProfile> {
    let grid = Grid::build(cells, options.aggregation)?;
    let n = grid.algorithms.len();
    let mut ratios = vec![Vec::with_capacity(grid.problems.len()); n];
    for (p, problem) in grid.problems.iter().enumerate() {
        let values: Vec<f64> = match metric {
            ProfileMetric::Time => grid.time[p].iter().map(|t| t.max(GAP_FLOOR)).collect(),
            ProfileMetric::FitnessGap => {
                let f = &grid.fitness[p];
                let known = options.known_optima.get(problem).filter(|_| f[0].len() == 1);
                match known {
                    Some(&opt) => f.iter().map(|v| (v[0] - opt).max(GAP_FLOOR)).collect(),
                    None => {
                        let best: Vec<f64> = (0..f[0].len())
                            .map(|k| f.iter().map(|v| v[k]).filter(|x| !x.is_nan()).fold(f64::INFINITY, f64::min))
                            .collect();
                        f.iter()
                            .map(|v| v.iter().zip(&best).map(|(x, b)| x - b).sum::<f64>() + GAP_FLOOR)
                            .collect()
                    }
                }
            }
        };
        let min = values
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(f64::INFINITY, f64::min);
        for (a, v) in values.iter().enumerate() {
            let r = v / min;
            ratios[a].push(if r.is_finite() { r } else { f64::INFINITY });
        }
    }
    Ok(PerformanceProfile {
        metric,
        problems: grid.problems,
        algorithms: grid
            .algorithms
            .into_iter()
            .zip(ratios)
            .map(|(algorithm, ratios)| AlgorithmProfile { algorithm, ratios })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::cell;
    use proptest::prelude::*;

    #[test]
    fn two_by_two_times() {
        let cells = vec![
            cell("a1", "p1", 0, 0.0, 1.0),
            cell("a1", "p2", 0, 0.0, 2.0),
            cell("a2", "p1", 0, 0.0, 2.0),
            cell("a2", "p2", 0, 0.0, 2.0),
        ];
        let prof = performance_profile(&cells, ProfileMetric::Time).unwrap();
        assert_eq!(prof.algorithms[0].ratios, vec![1.0, 1.0]);
        assert_eq!(prof.algorithms[1].ratios, vec![2.0, 1.0]);
        assert_eq!(prof.rho(0, 1.0), 1.0);
        assert_eq!(prof.rho(1, 1.0), 0.5);
        assert_eq!(prof.rho(1, 2.0), 1.0);
        assert_eq!(prof.breakpoints(), vec![1.0, 2.0]);
    }

    #[test]
    fn single_algorithm_is_its_own_best() {
        let cells: Vec<_> = (0..3).map(|p| cell("a", &format!("p{p}"), 0, p as f64 + 0.5, 1.0)).collect();
        let prof = performance_profile(&cells, ProfileMetric::FitnessGap).unwrap();
        assert_eq!(prof.rho(0, 1.0), 1.0);
    }

    #[test]
    fn gap_uses_known_optimum_with_floor() {
        let cells = vec![cell("a", "p", 0, -1.0, 1.0), cell("b", "p", 0, -0.5, 1.0)];
        let options = ProfileOptions {
            known_optima: [("p".to_string(), -1.0)].into(),
            ..ProfileOptions::default()
        };
        let prof = performance_profile_with(&cells, ProfileMetric::FitnessGap, &options).unwrap();
        assert_eq!(prof.algorithms[0].ratios, vec![1.0]);
        assert_eq!(prof.algorithms[1].ratios, vec![0.5 / GAP_FLOOR]);
    }

    #[test]
    fn metric_names() {
        assert_eq!("fitness-gap".parse::<ProfileMetric>().unwrap(), ProfileMetric::FitnessGap);
        assert_eq!("time".parse::<ProfileMetric>().unwrap().to_string(), "time");
        assert!("speed".parse::<ProfileMetric>().is_err());
    }

    proptest! {
        #[test]
        fn profile_properties(
            table in prop::collection::vec(prop::collection::vec(1e-6f64..1e3, 3), 1..10),
            time in any::<bool>(),
        ) {
            let mut cells = Vec::new();
            for (p, row) in table.iter().enumerate() {
                for (a, v) in row.iter().enumerate() {
                    let (f, t) = if time { (0.0, *v) } else { (*v, 1.0) };
                    cells.push(cell(&format!("a{a}"), &format!("p{p}"), 0, f, t));
                }
            }
            let metric = if time { ProfileMetric::Time } else { ProfileMetric::FitnessGap };
            let prof = performance_profile(&cells, metric).unwrap();
            let taus = prof.breakpoints();
            let tau_max = *taus.last().unwrap();
            for a in 0..3 {
                let rho: Vec<f64> = taus.iter().map(|&t| prof.rho(a, t)).collect();
                prop_assert!(rho.windows(2).all(|w| w[0] <= w[1]));
                prop_assert_eq!(prof.rho(a, tau_max), 1.0);
            }
            for p in 0..table.len() {
                let best: Vec<usize> = (0..3).filter(|&a| prof.algorithms[a].ratios[p] == 1.0).collect();
                let min = prof.algorithms.iter().map(|x| x.ratios[p]).fold(f64::INFINITY, f64::min);
                prop_assert!(!best.is_empty());
                prop_assert_eq!(min, 1.0);
            }
        }
    }
}
