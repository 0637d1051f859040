//! Population initialization, intensification and dimensional shift.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::rng::Stream;
use crate::{Error, Result, SolutionMatrix};

/// `rows × cols` matrix of i.i.d. uniform `[0, 1)` draws, filled row by row.
pub fn init_solution_space(rows: usize, cols: usize, rng: &mut Stream) -> SolutionMatrix {
    let mut m = SolutionMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = rng.random::<f64>();
        }
    }
    m
}

/// Adds i.i.d. gaussian noise (row-major draw order) in place.
pub(crate) fn add_gaussian(m: &mut SolutionMatrix, std: f64, rng: &mut Stream) {
    if std <= 0.0 {
        return;
    }
    let normal = Normal::new(0.0, std).expect("finite std");
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            m[(i, j)] += normal.sample(rng);
        }
    }
}

/// Row indices sorted by ascending fitness; ties keep index order.
pub fn argsort(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}

/// Perturbed copies of the `floor(0.1 · population_size)` best rows.
pub fn intensify_search_around_best(
    space: &SolutionMatrix,
    fitness: &[f64],
    population_size: usize,
    step_size: f64,
    rng: &mut Stream,
) -> SolutionMatrix {
    let k = (population_size / 10).min(space.nrows()).min(fitness.len());
    let order = argsort(fitness);
    let mut best = space.select_rows(order[..k].iter());
    add_gaussian(&mut best, step_size, rng);
    best
}

/// Projects `expanded` onto the eigenvectors of its covariance matrix that
/// belong to the `n_variables` largest eigenvalues.
///
/// Each eigenvector's sign is fixed so its largest-magnitude component is
/// positive, which makes the projection independent of the eigen-solver.
pub fn project_expanded(expanded: &SolutionMatrix, n_variables: usize) -> Result<SolutionMatrix> {
    let n = expanded.nrows();
    if n < 2 {
        return Err(Error::Argument("dimensional shift needs at least two rows".into()));
    }
    let means = expanded.row_mean();
    let mut centered = expanded.clone();
    for mut row in centered.row_iter_mut() {
        row -= &means;
    }
    let cov = centered.transpose() * &centered / (n as f64 - 1.0);
    let eig = cov
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Argument("covariance eigen-decomposition did not converge".into()))?;
    let order = {
        let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        idx
    };
    let mut basis = SolutionMatrix::zeros(expanded.ncols(), n_variables);
    for (k, &j) in order.iter().take(n_variables).enumerate() {
        let mut v = eig.eigenvectors.column(j).into_owned();
        let pivot = v.iamax();
        if v[pivot] < 0.0 {
            v.neg_mut();
        }
        basis.set_column(k, &v);
    }
    Ok(expanded * basis)
}

/// With probability 0.1, appends a uniform column and projects back onto
/// the leading principal directions; otherwise returns `space` unchanged.
pub fn dimensional_shift(space: &SolutionMatrix, rng: &mut Stream) -> SolutionMatrix {
    if rng.random::<f64>() >= 0.1 {
        return space.clone();
    }
    let extra: Vec<f64> = (0..space.nrows()).map(|_| rng.random::<f64>()).collect();
    let d = space.ncols();
    let expanded = SolutionMatrix::from_fn(space.nrows(), d + 1, |i, j| {
        if j < d {
            space[(i, j)]
        } else {
            extra[i]
        }
    });
    match project_expanded(&expanded, space.ncols()) {
        Ok(projected) => projected,
        Err(e) => {
            log::warn!("dimensional shift skipped: {e}");
            space.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn init_is_deterministic_and_in_range() {
        let a = init_solution_space(2, 3, &mut stream(5));
        let b = init_solution_space(2, 3, &mut stream(5));
        assert_eq!(a, b);
        assert!(a.iter().all(|v| (0.0..1.0).contains(v)));
        let m = init_solution_space(100, 2, &mut stream(42));
        for j in 0..2 {
            let mean = m.column(j).mean();
            assert!((0.35..=0.65).contains(&mean), "{mean}");
        }
    }

    #[test]
    fn intensify_sizes() {
        let space = init_solution_space(100, 2, &mut stream(1));
        let fit: Vec<f64> = (0..100).map(|i| (100 - i) as f64).collect();
        let best = intensify_search_around_best(&space, &fit, 100, 0.0, &mut stream(2));
        assert_eq!(best.nrows(), 10);
        assert_eq!(best.row(0), space.row(99));
        let small = init_solution_space(9, 2, &mut stream(1));
        let none = intensify_search_around_best(&small, &[0.0; 9], 9, 0.1, &mut stream(2));
        assert_eq!(none.nrows(), 0);
    }

    #[test]
    fn shift_keeps_shape() {
        let space = init_solution_space(20, 3, &mut stream(3));
        let mut rng = stream(4);
        for _ in 0..50 {
            let out = dimensional_shift(&space, &mut rng);
            assert_eq!(out.shape(), (20, 3));
        }
    }

    #[test]
    fn projection_preserves_rank_directions() {
        // points along one axis project onto one dominant component
        let x = SolutionMatrix::from_row_slice(4, 2, &[0.0, 0.0, 1.0, 0.0, 2.0, 0.0, 3.0, 0.0]);
        let p = project_expanded(&x, 1).unwrap();
        assert_eq!(p.column(0).iter().copied().collect::<Vec<_>>(), vec![0.0, 1.0, 2.0, 3.0]);
    }
}
