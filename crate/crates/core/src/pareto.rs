//! Domination tests and non-dominated archives (minimization).

use serde::{Deserialize, Serialize};

use crate::par::{self, Mode};
use crate::{Error, Result};

/// `a` dominates `b`: no worse everywhere and strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(dominates_unchecked(a, b))
}

#[inline]
pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Indices of the members no other member dominates, ascending.
pub fn non_dominated_indices(fitness: &[Vec<f64>], mode: Mode) -> Vec<usize> {
    let keep = par::map_indices(mode, fitness.len(), |i| {
        !fitness
            .iter()
            .enumerate()
            .any(|(j, f)| j != i && dominates_unchecked(f, &fitness[i]))
    });
    keep.iter()
        .enumerate()
        .filter_map(|(i, k)| k.then_some(i))
        .collect()
}

/// Set of mutually non-dominated solutions with their objective vectors.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParetoArchive {
    pub solutions: Vec<Vec<f64>>,
    pub fitness: Vec<Vec<f64>>,
}

impl ParetoArchive {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// Componentwise minimum of the archive's objective vectors.
    pub fn ideal_point(&self) -> Option<Vec<f64>> {
        let first = self.fitness.first()?;
        Some(
            (0..first.len())
                .map(|k| {
                    self.fitness
                        .iter()
                        .map(|f| f[k])
                        .fold(f64::INFINITY, f64::min)
                })
                .collect(),
        )
    }

    /// Drops the most crowded members until at most `cap` remain.
    pub fn truncate_by_crowding(&mut self, cap: usize) {
        while self.len() > cap.max(1) {
            let distance = crowding_distance(&self.fitness);
            let worst = distance
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .unwrap_or(0);
            self.solutions.remove(worst);
            self.fitness.remove(worst);
        }
    }
}

/// Members not dominated by any other member; duplicates are all kept.
pub fn pareto_front(solutions: &[Vec<f64>], fitness: &[Vec<f64>]) -> Result<ParetoArchive> {
    pareto_front_with(solutions, fitness, Mode::default())
}

pub fn pareto_front_with(
    solutions: &[Vec<f64>],
    fitness: &[Vec<f64>],
    mode: Mode,
) -> Result<ParetoArchive> {
    if solutions.len() != fitness.len() {
        return Err(Error::Dimension {
            expected: solutions.len(),
            actual: fitness.len(),
        });
    }
    if let Some(first) = fitness.first() {
        if let Some(bad) = fitness.iter().find(|f| f.len() != first.len()) {
            return Err(Error::Dimension {
                expected: first.len(),
                actual: bad.len(),
            });
        }
    }
    let keep = non_dominated_indices(fitness, mode);
    Ok(ParetoArchive {
        solutions: keep.iter().map(|&i| solutions[i].clone()).collect(),
        fitness: keep.iter().map(|&i| fitness[i].clone()).collect(),
    })
}

/// Merges `new_solutions` into `archive`, re-evaluating the union.
///
/// Exact duplicate genotypes are merged before evaluation. An empty archive
/// yields the front of the new solutions.
pub fn update_pareto_front<F>(
    archive: &ParetoArchive,
    new_solutions: &[Vec<f64>],
    mut evaluate: F,
) -> Result<ParetoArchive>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let mut combined: Vec<Vec<f64>> = Vec::with_capacity(archive.len() + new_solutions.len());
    for s in archive.solutions.iter().chain(new_solutions) {
        if !combined.contains(s) {
            combined.push(s.clone());
        }
    }
    let fitness = combined
        .iter()
        .map(|s| evaluate(s))
        .collect::<Result<Vec<_>>>()?;
    pareto_front(&combined, &fitness)
}

/// NSGA-II crowding distance; boundary members get `f64::INFINITY`.
#[allow(clippy::needless_range_loop)]
pub fn crowding_distance(fitness: &[Vec<f64>]) -> Vec<f64> {
    let n = fitness.len();
    let mut distance = vec![0.0; n];
    if n == 0 {
        return distance;
    }
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = fitness[0].len();
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        order.sort_by(|&a, &b| fitness[a][k].total_cmp(&fitness[b][k]));
        let lo = fitness[order[0]][k];
        let hi = fitness[order[n - 1]][k];
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        let span = hi - lo;
        if span <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let i = order[w];
            if distance[i].is_finite() {
                distance[i] += (fitness[order[w + 1]][k] - fitness[order[w - 1]][k]) / span;
            }
        }
    }
    distance
}
