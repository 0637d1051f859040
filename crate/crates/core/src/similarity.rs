//! Pairwise similarity matrices.
//!
//! Four metrics are supported. Cosine and Euclidean compare population
//! members (rows) and return a population-sized matrix. Correlation and
//! Spearman compare decision variables (columns) and return a
//! variable-sized matrix; [`combined_similarity`] zero-pads the smaller
//! matrices to the largest size before averaging. Set
//! [`SimilarityOptions::consistent_shapes`] to compute correlation and
//! Spearman between rows instead, so every metric yields a population-sized
//! matrix.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::par::{self, Mode};
use crate::{Error, Result, SimilarityMatrix, SolutionMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityMethod {
    Correlation,
    Cosine,
    Spearman,
    Euclidean,
}

impl SimilarityMethod {
    pub const ALL: [SimilarityMethod; 4] = [
        SimilarityMethod::Correlation,
        SimilarityMethod::Cosine,
        SimilarityMethod::Spearman,
        SimilarityMethod::Euclidean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SimilarityMethod::Correlation => "correlation",
            SimilarityMethod::Cosine => "cosine",
            SimilarityMethod::Spearman => "spearman",
            SimilarityMethod::Euclidean => "euclidean",
        }
    }

    fn matrix(self, x: &SolutionMatrix, consistent_shapes: bool) -> Result<SimilarityMatrix> {
        match (self, consistent_shapes) {
            (SimilarityMethod::Correlation, false) => correlation_similarity(x),
            (SimilarityMethod::Correlation, true) => row_correlation(x),
            (SimilarityMethod::Spearman, false) => spearman_similarity(x),
            (SimilarityMethod::Spearman, true) => row_spearman(x),
            (SimilarityMethod::Cosine, _) => Ok(cosine_similarity(x)),
            (SimilarityMethod::Euclidean, _) => Ok(euclidean_similarity(x)),
        }
    }
}

impl fmt::Display for SimilarityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SimilarityMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SimilarityMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "similarity method",
                id: s.to_string(),
            })
    }
}

/// Ordinal 1-based ranks; ties keep their original order.
pub fn rank_data(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    for (position, &index) in order.iter().enumerate() {
        ranks[index] = (position + 1) as f64;
    }
    ranks
}

/// Pearson correlation between every pair of `series`.
///
/// A constant series correlates 0 with everything else and 1 with itself.
fn pearson_matrix(series: &[Vec<f64>]) -> SimilarityMatrix {
    let k = series.len();
    let centered: Vec<(Vec<f64>, f64)> = series
        .iter()
        .map(|s| {
            let mean = s.iter().sum::<f64>() / s.len() as f64;
            let c: Vec<f64> = s.iter().map(|v| v - mean).collect();
            let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            (c, norm)
        })
        .collect();
    let mut out = SimilarityMatrix::identity(k, k);
    for i in 0..k {
        for j in (i + 1)..k {
            let (ci, ni) = &centered[i];
            let (cj, nj) = &centered[j];
            let r = if *ni > 0.0 && *nj > 0.0 {
                let dot: f64 = ci.iter().zip(cj).map(|(a, b)| a * b).sum();
                (dot / (ni * nj)).clamp(-1.0, 1.0)
            } else {
                0.0
            };
            out[(i, j)] = r;
            out[(j, i)] = r;
        }
    }
    out
}

fn columns(x: &SolutionMatrix) -> Vec<Vec<f64>> {
    x.column_iter().map(|c| c.iter().copied().collect()).collect()
}

fn rows(x: &SolutionMatrix) -> Vec<Vec<f64>> {
    x.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn require_shape(x: &SolutionMatrix, method: &str) -> Result<()> {
    if x.nrows() < 2 || x.ncols() < 2 {
        return Err(Error::Argument(format!(
            "{method} similarity needs at least 2 rows and 2 columns, got {}x{}",
            x.nrows(),
            x.ncols()
        )));
    }
    Ok(())
}

/// Variable-by-variable Pearson correlation of the columns of `x`.
pub fn correlation_similarity(x: &SolutionMatrix) -> Result<SimilarityMatrix> {
    require_shape(x, "correlation")?;
    Ok(pearson_matrix(&columns(x)))
}

/// Pearson correlation of column-wise ordinal ranks (variable-by-variable).
pub fn spearman_similarity(x: &SolutionMatrix) -> Result<SimilarityMatrix> {
    require_shape(x, "spearman")?;
    let ranked: Vec<Vec<f64>> = columns(x).iter().map(|c| rank_data(c)).collect();
    Ok(pearson_matrix(&ranked))
}

fn row_correlation(x: &SolutionMatrix) -> Result<SimilarityMatrix> {
    require_shape(x, "correlation")?;
    Ok(pearson_matrix(&rows(x)))
}

fn row_spearman(x: &SolutionMatrix) -> Result<SimilarityMatrix> {
    require_shape(x, "spearman")?;
    let ranked: Vec<Vec<f64>> = rows(x).iter().map(|r| rank_data(r)).collect();
    Ok(pearson_matrix(&ranked))
}

fn cosine_pair(a: &[f64], b: &[f64], na: f64, nb: f64) -> f64 {
    let norm = na * nb;
    if norm == 0.0 {
        return 0.0;
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (dot / norm).clamp(-1.0, 1.0)
}

fn euclidean_pair(a: &[f64], b: &[f64]) -> f64 {
    let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    1.0 / (1.0 + sq.max(1e-8).sqrt())
}

fn norms(rows: &[Vec<f64>]) -> Vec<f64> {
    rows.iter()
        .map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect()
}

fn symmetric_from_pairs(n: usize, pair: impl Fn(usize, usize) -> f64) -> SimilarityMatrix {
    let mut out = SimilarityMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = pair(i, j);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

/// Cosine similarity between rows; pairs involving a zero row score 0.
pub fn cosine_similarity(x: &SolutionMatrix) -> SimilarityMatrix {
    let r = rows(x);
    let n = norms(&r);
    symmetric_from_pairs(r.len(), |i, j| cosine_pair(&r[i], &r[j], n[i], n[j]))
}

/// `1 / (1 + d)` with the squared row distance floored at `1e-8`.
pub fn euclidean_similarity(x: &SolutionMatrix) -> SimilarityMatrix {
    let r = rows(x);
    symmetric_from_pairs(r.len(), |i, j| euclidean_pair(&r[i], &r[j]))
}

/// Replaces NaN with 0 and infinities with ±1, in place.
pub fn sanitize(m: &mut SimilarityMatrix) {
    for v in m.iter_mut() {
        if v.is_nan() {
            *v = 0.0;
        } else if *v == f64::INFINITY {
            *v = 1.0;
        } else if *v == f64::NEG_INFINITY {
            *v = -1.0;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityOptions {
    pub methods: Vec<SimilarityMethod>,
    pub consistent_shapes: bool,
    /// Per-method weights; `None` means a plain mean.
    pub weights: Option<Vec<f64>>,
    pub mode: Mode,
}

impl SimilarityOptions {
    pub fn new(methods: &[SimilarityMethod]) -> Self {
        SimilarityOptions {
            methods: methods.to_vec(),
            consistent_shapes: false,
            weights: None,
            mode: Mode::default(),
        }
    }
}

/// Unweighted mean of the per-method matrices, zero-padded to a common size.
pub fn combined_similarity(x: &SolutionMatrix, methods: &[SimilarityMethod]) -> SimilarityMatrix {
    combined_similarity_with(x, &SimilarityOptions::new(methods))
}

pub fn combined_similarity_with(x: &SolutionMatrix, opts: &SimilarityOptions) -> SimilarityMatrix {
    let n = x.nrows();
    if n < 2 || x.ncols() < 2 {
        return SimilarityMatrix::identity(n, n);
    }
    let computed = par::map_slice(opts.mode, &opts.methods, |m| {
        m.matrix(x, opts.consistent_shapes)
    });
    let mut parts = Vec::with_capacity(computed.len());
    for (i, (method, result)) in opts.methods.iter().zip(computed).enumerate() {
        match result {
            Ok(m) => parts.push((i, m)),
            Err(e) => log::warn!("skipping {method} similarity: {e}"),
        }
    }
    if parts.is_empty() {
        return SimilarityMatrix::identity(n, n);
    }
    let size = parts.iter().map(|(_, m)| m.nrows()).max().unwrap_or(n);
    let mut acc = SimilarityMatrix::zeros(size, size);
    let mut total_weight = 0.0;
    for (i, m) in &parts {
        let w = opts.weights.as_ref().map_or(1.0, |w| w[*i]);
        total_weight += w;
        let mut view = acc.view_mut((0, 0), (m.nrows(), m.ncols()));
        if opts.weights.is_some() {
            view += m * w;
        } else {
            view += m;
        }
    }
    if opts.weights.is_some() && total_weight > 0.0 {
        acc /= total_weight;
    } else {
        acc /= parts.len() as f64;
    }
    sanitize(&mut acc);
    acc
}

/// Refreshes the rows and columns of `old` whose solutions changed.
///
/// Changed rows and columns are filled with the values a full
/// [`combined_similarity_with`] on `new_space` would give; every other entry
/// of `old` is kept as is. Row-pairwise metrics are only evaluated for the
/// changed pairs.
pub fn update_similarity_matrix(
    old: &SimilarityMatrix,
    old_space: &SolutionMatrix,
    new_space: &SolutionMatrix,
    opts: &SimilarityOptions,
) -> Result<SimilarityMatrix> {
    if old_space.shape() != new_space.shape() {
        return Err(Error::Argument(format!(
            "solution spaces differ in shape: {:?} vs {:?}",
            old_space.shape(),
            new_space.shape()
        )));
    }
    let changed: Vec<usize> = (0..new_space.nrows())
        .filter(|&i| old_space.row(i) != new_space.row(i))
        .collect();
    if changed.is_empty() {
        return Ok(old.clone());
    }
    let n = new_space.nrows();
    let degenerate = n < 2 || new_space.ncols() < 2;
    let padded_size = if opts.consistent_shapes { n } else { n.max(new_space.ncols()) };
    if degenerate || padded_size != n || old.shape() != (n, n) {
        // size changed or degenerate input: nothing to preserve
        return Ok(combined_similarity_with(new_space, opts));
    }

    let r = rows(new_space);
    let row_norms = norms(&r);
    // variable-space metrics are global statistics, recompute them whole
    let mut globals: Vec<(usize, SimilarityMatrix)> = Vec::new();
    let mut pairwise: Vec<(usize, SimilarityMethod)> = Vec::new();
    for (i, &m) in opts.methods.iter().enumerate() {
        if matches!(m, SimilarityMethod::Cosine | SimilarityMethod::Euclidean) {
            pairwise.push((i, m));
        } else {
            match m.matrix(new_space, opts.consistent_shapes) {
                Ok(mat) => globals.push((i, mat)),
                Err(e) => log::warn!("skipping {m} similarity: {e}"),
            }
        }
    }
    let used = globals.len() + pairwise.len();
    if used == 0 {
        return Ok(SimilarityMatrix::identity(n, n));
    }
    let weight_of = |i: usize| opts.weights.as_ref().map_or(1.0, |w| w[i]);
    let total_weight: f64 = globals
        .iter()
        .map(|(i, _)| weight_of(*i))
        .chain(pairwise.iter().map(|(i, _)| weight_of(*i)))
        .sum();
    let entry = |a: usize, b: usize| -> f64 {
        let mut acc = 0.0;
        for (i, mat) in &globals {
            let v = if a < mat.nrows() && b < mat.ncols() {
                mat[(a, b)]
            } else {
                0.0
            };
            acc += if opts.weights.is_some() { v * weight_of(*i) } else { v };
        }
        for (i, m) in &pairwise {
            let v = match m {
                SimilarityMethod::Cosine => cosine_pair(&r[a], &r[b], row_norms[a], row_norms[b]),
                _ => euclidean_pair(&r[a], &r[b]),
            };
            acc += if opts.weights.is_some() { v * weight_of(*i) } else { v };
        }
        let v = if opts.weights.is_some() && total_weight > 0.0 {
            acc / total_weight
        } else {
            acc / used as f64
        };
        if v.is_nan() {
            0.0
        } else {
            v.clamp(-1.0, 1.0)
        }
    };
    let mut out = old.clone();
    for &k in &changed {
        for j in 0..n {
            let v = entry(k, j);
            out[(k, j)] = v;
            out[(j, k)] = v;
        }
    }
    Ok(out)
}
