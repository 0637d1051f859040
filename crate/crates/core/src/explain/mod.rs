//! Neighbor-based explainability.
//!
//! Neighbors are the most similar population members under the combined
//! similarity matrix. A member's *influence* is its mean fitness difference
//! to those neighbors (negative means it is locally better under
//! minimization) and its *diversity* is one minus the mean neighbor
//! similarity.

mod export;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use export::{export_visualizations, Artifact, ExportFormat, ExportOptions, Manifest};

use crate::{FitnessMatrix, SimilarityMatrix, SolutionMatrix};

/// Neighbor count used by the optimizer's snapshots.
pub const DEFAULT_NEIGHBORS: usize = 5;

/// Indices of the `k` most similar other members of each row, most similar
/// first; ties go to the lower index.
pub fn identify_neighbors(similarities: &SimilarityMatrix, k: usize) -> Vec<Vec<usize>> {
    let n = similarities.nrows();
    let k = k.min(n.saturating_sub(1));
    (0..n)
        .map(|i| {
            let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            others.sort_by(|&a, &b| {
                similarities[(i, b)]
                    .total_cmp(&similarities[(i, a)])
                    .then(a.cmp(&b))
            });
            others.truncate(k);
            others
        })
        .collect()
}

/// Mean fitness difference to the neighbors, averaged over objectives.
pub fn neighbor_influence(fitness: &FitnessMatrix, neighbors: &[Vec<usize>]) -> Vec<f64> {
    let m = fitness.ncols() as f64;
    neighbors
        .iter()
        .enumerate()
        .map(|(i, nb)| {
            if nb.is_empty() {
                return 0.0;
            }
            let total: f64 = nb
                .iter()
                .map(|&j| {
                    (0..fitness.ncols())
                        .map(|k| fitness[(i, k)] - fitness[(j, k)])
                        .sum::<f64>()
                        / m
                })
                .sum();
            total / nb.len() as f64
        })
        .collect()
}

/// `1 - mean(similarity to neighbors)`; members without neighbors score 1.
pub fn neighbor_diversity(similarities: &SimilarityMatrix, neighbors: &[Vec<usize>]) -> Vec<f64> {
    neighbors
        .iter()
        .enumerate()
        .map(|(i, nb)| {
            if nb.is_empty() {
                return 1.0;
            }
            let mean = nb.iter().map(|&j| similarities[(i, j)]).sum::<f64>() / nb.len() as f64;
            1.0 - mean
        })
        .collect()
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

/// Similarity matrix restricted to the population (drops zero padding).
fn population_block(similarities: &SimilarityMatrix, n: usize) -> SimilarityMatrix {
    let n = n.min(similarities.nrows());
    similarities.view((0, 0), (n, n)).into_owned()
}

/// Human-readable summary of one iteration's neighbor structure.
pub fn explain_iteration(
    space: &SolutionMatrix,
    similarities: &SimilarityMatrix,
    fitness: &FitnessMatrix,
    iteration: usize,
) -> String {
    let sim = population_block(similarities, space.nrows());
    let neighbors = identify_neighbors(&sim, DEFAULT_NEIGHBORS);
    let influence = neighbor_influence(fitness, &neighbors);
    let diversity = neighbor_diversity(&sim, &neighbors);
    let mut text = String::new();
    let _ = writeln!(text, "Iteration {iteration} Explanation:");
    let _ = writeln!(text, "Average neighbor influence: {:.4}", mean(&influence));
    let _ = writeln!(text, "Average neighbor diversity: {:.4}", mean(&diversity));
    for i in 0..space.nrows().min(3) {
        let _ = writeln!(text, "\nSolution {i}:");
        let row: Vec<String> = fitness.row(i).iter().map(|v| format!("{v:.4}")).collect();
        if row.len() == 1 {
            let _ = writeln!(text, " Fitness: {}", row[0]);
        } else {
            let _ = writeln!(text, " Fitness: [{}]", row.join(", "));
        }
        let _ = writeln!(text, " Neighbor influence: {:.4}", influence[i]);
        let _ = writeln!(text, " Neighbor diversity: {:.4}", diversity[i]);
        let top: Vec<usize> = neighbors[i].iter().take(3).copied().collect();
        let _ = writeln!(text, " Top 3 similar neighbors: {top:?}");
    }
    text
}

/// Explainability data captured at one iteration.
///
/// All per-solution arrays are truncated to a common length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainabilitySnapshot {
    pub iteration: usize,
    pub influence: Vec<f64>,
    pub diversity: Vec<f64>,
    pub fitness_values: Vec<Vec<f64>>,
    pub similarities: Vec<Vec<f64>>,
    pub solution_space: Vec<Vec<f64>>,
    #[serde(default)]
    pub explanation: String,
}

impl ExplainabilitySnapshot {
    pub fn capture(
        iteration: usize,
        space: &SolutionMatrix,
        similarities: &SimilarityMatrix,
        fitness: &FitnessMatrix,
        k: usize,
    ) -> Self {
        let sim = population_block(similarities, space.nrows());
        let neighbors = identify_neighbors(&sim, k);
        let influence = neighbor_influence(fitness, &neighbors);
        let diversity = neighbor_diversity(&sim, &neighbors);
        let len = influence
            .len()
            .min(diversity.len())
            .min(fitness.nrows())
            .min(space.nrows());
        let rows = |m: &nalgebra::DMatrix<f64>, cols: usize| -> Vec<Vec<f64>> {
            (0..len)
                .map(|i| (0..cols).map(|j| m[(i, j)]).collect())
                .collect()
        };
        ExplainabilitySnapshot {
            iteration,
            influence: influence[..len].to_vec(),
            diversity: diversity[..len].to_vec(),
            fitness_values: rows(fitness, fitness.ncols()),
            similarities: rows(&sim, len),
            solution_space: rows(space, space.ncols()),
            explanation: explain_iteration(space, similarities, fitness, iteration),
        }
    }

    pub fn len(&self) -> usize {
        self.influence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.influence.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::similarity::{combined_similarity, SimilarityMethod};

    fn fit(values: &[f64]) -> FitnessMatrix {
        FitnessMatrix::from_column_slice(values.len(), 1, values)
    }

    #[test]
    fn neighbors_follow_similarity_then_index() {
        let mut s = SimilarityMatrix::identity(3, 3);
        s[(0, 1)] = 0.9;
        s[(1, 0)] = 0.9;
        s[(0, 2)] = 0.1;
        s[(2, 0)] = 0.1;
        assert_eq!(identify_neighbors(&s, 1)[0], vec![1]);
        let id = SimilarityMatrix::identity(3, 3);
        assert_eq!(identify_neighbors(&id, 2)[0], vec![1, 2]);
        let nb = identify_neighbors(&SimilarityMatrix::identity(4, 4), 10);
        assert!(nb.iter().all(|n| n.len() == 3));
        assert!(identify_neighbors(&SimilarityMatrix::identity(1, 1), 5)[0].is_empty());
    }

    #[test]
    fn influence_examples() {
        assert_eq!(neighbor_influence(&fit(&[1.0, 2.0]), &[vec![1], vec![0]])[0], -1.0);
        assert_eq!(
            neighbor_influence(&fit(&[4.0, 4.0, 4.0]), &[vec![1, 2], vec![0], vec![0]]),
            vec![0.0; 3]
        );
        assert_eq!(
            neighbor_influence(&fit(&[3.0, 1.0, 2.0]), &[vec![1, 2], vec![], vec![]]),
            vec![1.5, 0.0, 0.0]
        );
    }

    #[test]
    fn influence_averages_objectives() {
        let f = FitnessMatrix::from_row_slice(2, 2, &[1.0, 3.0, 2.0, 2.0]);
        // differences (−1, +1) average to 0
        assert_eq!(neighbor_influence(&f, &[vec![1], vec![0]]), vec![0.0, 0.0]);
    }

    #[test]
    fn diversity_examples() {
        let ones = SimilarityMatrix::from_element(3, 3, 1.0);
        assert_eq!(neighbor_diversity(&ones, &[vec![1, 2]])[0], 0.0);
        let zeros = SimilarityMatrix::zeros(3, 3);
        assert_eq!(neighbor_diversity(&zeros, &[vec![1, 2]])[0], 1.0);
        let mut s = SimilarityMatrix::zeros(3, 3);
        s[(0, 1)] = 0.5;
        s[(0, 2)] = 0.7;
        assert!((neighbor_diversity(&s, &[vec![1, 2]])[0] - 0.4).abs() < 1e-12);
        assert_eq!(neighbor_diversity(&s, &[vec![]])[0], 1.0);
    }

    #[test]
    fn explanation_covers_at_most_three_solutions() {
        let space = SolutionMatrix::from_row_slice(2, 2, &[0.1, 0.2, 0.3, 0.9]);
        let sim = combined_similarity(&space, &SimilarityMethod::ALL);
        let text = explain_iteration(&space, &sim, &fit(&[1.0, 2.0]), 7);
        assert!(text.contains("Iteration 7"));
        assert!(text.contains("Solution 1:"));
        assert!(!text.contains("Solution 2:"));
    }

    #[test]
    fn uniform_population_has_zero_diversity() {
        let space = SolutionMatrix::from_element(4, 3, 0.4);
        let sim = combined_similarity(&space, &[SimilarityMethod::Cosine]);
        let text = explain_iteration(&space, &sim, &fit(&[1.0; 4]), 0);
        assert!(text.contains("Average neighbor diversity: 0.0000"), "{text}");
    }

    #[test]
    fn snapshot_truncates_padding() {
        // more variables than members: the combined matrix is 3x3, population 2
        let space = SolutionMatrix::from_row_slice(2, 3, &[0.1, 0.5, 0.2, 0.7, 0.3, 0.9]);
        let sim = combined_similarity(&space, &SimilarityMethod::ALL);
        assert_eq!(sim.nrows(), 3);
        let snap = ExplainabilitySnapshot::capture(0, &space, &sim, &fit(&[1.0, 2.0]), 5);
        assert_eq!(snap.len(), 2);
        assert_eq!(snap.similarities.len(), 2);
        assert!(snap.similarities.iter().all(|r| r.len() == 2));
    }
}
