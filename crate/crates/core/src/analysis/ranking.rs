//! Competition ranking and rank sums.

use serde::{Deserialize, Serialize};

use super::{Aggregation, Grid, ResultCell};
use crate::Result;

/// `1 + #{j : v_j < v_i}`; ties share the lowest rank. NaN ranks last.
pub fn competition_ranks(values: &[f64]) -> Vec<usize> {
    let key = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
    let nan_last = |a: f64, b: f64| key(a) < key(b) || (!a.is_nan() && b.is_nan() && key(a) == key(b));
    values
        .iter()
        .map(|&v| 1 + values.iter().filter(|&&w| nan_last(w, v)).count())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRow {
    pub algorithm: String,
    pub fitness_rank_sum: usize,
    pub overall_rank: usize,
    pub time_rank_sum: usize,
    pub time_rank: usize,
}

/// Ranks on one problem, indexed like [`RankTable::algorithms`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemRanks {
    pub problem: String,
    /// Summed over objectives for multi-objective problems.
    pub fitness_ranks: Vec<usize>,
    pub time_ranks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    /// Alphabetical.
    pub algorithms: Vec<String>,
    pub problems: Vec<String>,
    pub per_problem: Vec<ProblemRanks>,
    /// Ascending fitness rank sum, ties by name.
    pub rows: Vec<RankRow>,
    pub aggregation: Aggregation,
}

pub fn rank_cells(cells: &[ResultCell]) -> Result<RankTable> {
    rank_cells_with(cells, Aggregation::default())
}

/// Each objective of a multi-objective problem is ranked on its own and
/// the per-objective ranks are added.
pub fn rank_cells_with(cells: &[ResultCell], aggregation: Aggregation) -> Result<RankTable> {
    let grid = Grid::build(cells, aggregation)?;
    let n = grid.algorithms.len();
    let mut per_problem = Vec::with_capacity(grid.problems.len());
    for (p, problem) in grid.problems.iter().enumerate() {
        let m = grid.fitness[p][0].len();
        let mut fitness_ranks = vec![0; n];
        for k in 0..m {
            let column: Vec<f64> = grid.fitness[p].iter().map(|f| f[k]).collect();
            for (acc, r) in fitness_ranks.iter_mut().zip(competition_ranks(&column)) {
                *acc += r;
            }
        }
        per_problem.push(ProblemRanks {
            problem: problem.clone(),
            fitness_ranks,
            time_ranks: competition_ranks(&grid.time[p]),
        });
    }
    let sum = |f: fn(&ProblemRanks) -> &Vec<usize>, a: usize| per_problem.iter().map(|p| f(p)[a]).sum::<usize>();
    let fitness_sums: Vec<usize> = (0..n).map(|a| sum(|p| &p.fitness_ranks, a)).collect();
    let time_sums: Vec<usize> = (0..n).map(|a| sum(|p| &p.time_ranks, a)).collect();
    let as_f64 = |v: &[usize]| v.iter().map(|&x| x as f64).collect::<Vec<_>>();
    let overall = competition_ranks(&as_f64(&fitness_sums));
    let time_rank = competition_ranks(&as_f64(&time_sums));

    let mut rows: Vec<RankRow> = (0..n)
        .map(|a| RankRow {
            algorithm: grid.algorithms[a].clone(),
            fitness_rank_sum: fitness_sums[a],
            overall_rank: overall[a],
            time_rank_sum: time_sums[a],
            time_rank: time_rank[a],
        })
        .collect();
    rows.sort_by(|x, y| x.fitness_rank_sum.cmp(&y.fitness_rank_sum).then_with(|| x.algorithm.cmp(&y.algorithm)));
    Ok(RankTable {
        algorithms: grid.algorithms,
        problems: grid.problems,
        per_problem,
        rows,
        aggregation,
    })
}
