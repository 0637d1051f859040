//! Transformation matrices and the noisy linear map applied each iteration.

use rand_distr::{Distribution, Normal};

use crate::rng::Stream;
use crate::{SimilarityMatrix, SolutionMatrix};

/// Diagonal matrix of the first `n_variables` similarity column means.
///
/// Missing columns (a similarity matrix smaller than the variable count)
/// contribute a mean of 1.
pub fn diagonal_transformation(similarities: &SimilarityMatrix, n_variables: usize) -> SolutionMatrix {
    let n = similarities.nrows().max(1) as f64;
    let mut t = SolutionMatrix::zeros(n_variables, n_variables);
    for j in 0..n_variables {
        t[(j, j)] = if j < similarities.ncols() {
            similarities.column(j).sum() / n
        } else {
            1.0
        };
    }
    t
}

/// Symmetric, unit-Frobenius-norm map built from column cross-similarities.
pub fn cross_similarity_transformation(similarities: &SimilarityMatrix, n_variables: usize) -> SolutionMatrix {
    let rows = similarities.nrows().max(1) as f64;
    let col = |j: usize| -> Option<nalgebra::DVectorView<'_, f64>> {
        (j < similarities.ncols()).then(|| similarities.column(j))
    };
    let mut t = SolutionMatrix::identity(n_variables, n_variables);
    for i in 0..n_variables {
        for j in 0..n_variables {
            if i != j {
                t[(i, j)] = match (col(i), col(j)) {
                    (Some(a), Some(b)) => a.component_mul(&b).sum() / rows,
                    _ => 0.0,
                };
            }
        }
    }
    let mut t = (&t + t.transpose()) / 2.0;
    t += SolutionMatrix::identity(n_variables, n_variables);
    let norm = t.norm();
    t / norm
}

/// Standard deviation of the transformation noise at `iteration`.
pub fn noise_intensity(step_size: f64, iteration: usize) -> f64 {
    step_size * (-0.05 * iteration as f64).exp()
}

/// `space · T` plus i.i.d. gaussian noise of [`noise_intensity`].
pub fn apply_transformation(
    space: &SolutionMatrix,
    transformation: &SolutionMatrix,
    step_size: f64,
    iteration: usize,
    rng: &mut Stream,
) -> SolutionMatrix {
    let mut out = space * transformation;
    let sigma = noise_intensity(step_size, iteration);
    if sigma > 0.0 {
        let normal = Normal::new(0.0, sigma).expect("finite sigma");
        // row-major draw order so results do not depend on storage layout
        for i in 0..out.nrows() {
            for j in 0..out.ncols() {
                out[(i, j)] += normal.sample(rng);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn diagonal_examples() {
        let t = diagonal_transformation(&SimilarityMatrix::from_element(3, 3, 1.0), 2);
        assert_eq!(t, SolutionMatrix::identity(2, 2));
        let t = diagonal_transformation(&SimilarityMatrix::identity(3, 3), 2);
        assert_relative_eq!(t[(0, 0)], 1.0 / 3.0);
        assert_relative_eq!(t[(1, 1)], 1.0 / 3.0);
        assert_eq!(t[(0, 1)], 0.0);
        let t = diagonal_transformation(&SimilarityMatrix::zeros(3, 3), 2);
        assert_eq!(t, SolutionMatrix::zeros(2, 2));
        let t = diagonal_transformation(&SimilarityMatrix::zeros(2, 2), 3);
        assert_eq!(t[(2, 2)], 1.0);
    }

    #[test]
    fn cross_similarity_examples() {
        // orthogonal columns: only the doubled identity survives
        let t = cross_similarity_transformation(&SimilarityMatrix::identity(2, 2), 2);
        assert_relative_eq!(t[(0, 0)], 1.0 / 2f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(t[(0, 1)], 0.0);
        let t = cross_similarity_transformation(&SimilarityMatrix::from_element(2, 2, 1.0), 2);
        let s = 10f64.sqrt();
        assert_relative_eq!(t[(0, 0)], 2.0 / s, epsilon = 1e-12);
        assert_relative_eq!(t[(0, 1)], 1.0 / s, epsilon = 1e-12);
    }

    #[test]
    fn noise_decay() {
        assert_eq!(noise_intensity(0.3, 0), 0.3);
        assert_relative_eq!(noise_intensity(0.1, 20), 0.1 * (-1f64).exp());
        assert_relative_eq!(noise_intensity(0.1, 20), 0.036788, epsilon = 1e-6);
    }

    #[test]
    fn identity_without_noise_is_identity() {
        let x = SolutionMatrix::from_row_slice(2, 2, &[0.1, 0.7, 0.4, 0.2]);
        let y = apply_transformation(&x, &SolutionMatrix::identity(2, 2), 0.0, 3, &mut stream(1));
        assert_eq!(x, y);
    }

    proptest! {
        #[test]
        fn cross_similarity_is_symmetric_unit_norm(v in proptest::collection::vec(-1.0f64..1.0, 16)) {
            let s = SimilarityMatrix::from_row_slice(4, 4, &v);
            let t = cross_similarity_transformation(&s, 3);
            prop_assert!((t.norm() - 1.0).abs() < 1e-9);
            prop_assert!((&t - t.transpose()).amax() < 1e-12);
        }
    }
}
