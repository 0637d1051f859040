//! Multi- and many-objective extensions of single-objective functions.
//!
//! Objective `k` of an `m`-objective instance evaluates the base function at
//! the genotype shifted by `k / (2m)` on every coordinate before scaling, so
//! each objective keeps the base landscape but has its optimum elsewhere.
//! Shifted genotypes may leave the unit cube; the affine scaling is
//! extrapolated there and the closed form evaluated as is.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::functions::BenchmarkId;
use crate::problem::{Bounds, Problem};
use crate::{Error, Result};

/// Objective and variable counts used by the multi-objective grid.
pub const GRID: [usize; 5] = [2, 5, 10, 25, 50];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiBase {
    Ackley,
    /// Alpine N.1.
    Alpine,
    /// Bohachevsky N.1 summed over consecutive variable pairs.
    Bohachevsky,
    DixonPrice,
    Griewank,
    Levy,
    /// Michalewicz with steepness 10.
    Michalewicz,
    Qing,
    Rosenbrock,
    Salomon,
    /// Schaffer N.2 summed over consecutive variable pairs.
    Schaffer,
    Sphere,
    StyblinskiTang,
    Zakharov,
    Rastrigin,
}

impl MultiBase {
    pub const ALL: [MultiBase; 15] = [
        MultiBase::Ackley,
        MultiBase::Alpine,
        MultiBase::Bohachevsky,
        MultiBase::DixonPrice,
        MultiBase::Griewank,
        MultiBase::Levy,
        MultiBase::Michalewicz,
        MultiBase::Qing,
        MultiBase::Rosenbrock,
        MultiBase::Salomon,
        MultiBase::Schaffer,
        MultiBase::Sphere,
        MultiBase::StyblinskiTang,
        MultiBase::Zakharov,
        MultiBase::Rastrigin,
    ];

    pub fn name(self) -> &'static str {
        use MultiBase::*;
        match self {
            Ackley => "ackley",
            Alpine => "alpine",
            Bohachevsky => "bohachevsky",
            DixonPrice => "dixon_price",
            Griewank => "griewank",
            Levy => "levy",
            Michalewicz => "michalewicz",
            Qing => "qing",
            Rosenbrock => "rosenbrock",
            Salomon => "salomon",
            Schaffer => "schaffer",
            Sphere => "sphere",
            StyblinskiTang => "styblinski_tang",
            Zakharov => "zakharov",
            Rastrigin => "rastrigin",
        }
    }

    fn shared(self) -> Option<BenchmarkId> {
        use MultiBase::*;
        Some(match self {
            Ackley => BenchmarkId::Ackley,
            DixonPrice => BenchmarkId::DixonPrice,
            Griewank => BenchmarkId::Griewank,
            Levy => BenchmarkId::Levy,
            Rosenbrock => BenchmarkId::Rosenbrock,
            Salomon => BenchmarkId::Salomon,
            Sphere => BenchmarkId::Sphere,
            Zakharov => BenchmarkId::Zakharov,
            Rastrigin => BenchmarkId::Rastrigin,
            _ => return None,
        })
    }

    pub fn bounds(self, n: usize) -> Vec<Bounds> {
        use MultiBase::*;
        match self {
            Alpine => vec![Bounds::symmetric(10.0); n],
            Bohachevsky => vec![Bounds::symmetric(100.0); n],
            Michalewicz => vec![Bounds { lower: 0.0, upper: PI }; n],
            Qing => vec![Bounds::symmetric(500.0); n],
            Schaffer => vec![Bounds::symmetric(100.0); n],
            StyblinskiTang => vec![Bounds::symmetric(5.0); n],
            other => other.shared().expect("shared base").bounds(n),
        }
    }

    pub fn value(self, x: &[f64]) -> f64 {
        use MultiBase::*;
        match self {
            Alpine => x.iter().map(|v| (v * v.sin() + 0.1 * v).abs()).sum(),
            Bohachevsky => x
                .windows(2)
                .map(|w| {
                    w[0] * w[0] + 2.0 * w[1] * w[1] - 0.3 * (3.0 * PI * w[0]).cos() - 0.4 * (4.0 * PI * w[1]).cos() + 0.7
                })
                .sum(),
            Michalewicz => -x
                .iter()
                .enumerate()
                .map(|(i, v)| v.sin() * ((i + 1) as f64 * v * v / PI).sin().powi(20))
                .sum::<f64>(),
            Qing => x
                .iter()
                .enumerate()
                .map(|(i, v)| (v * v - (i + 1) as f64).powi(2))
                .sum(),
            Schaffer => x.windows(2).map(|w| BenchmarkId::SchafferN2.value(w)).sum(),
            StyblinskiTang => 0.5 * x.iter().map(|v| v.powi(4) - 16.0 * v * v + 5.0 * v).sum::<f64>(),
            other => other.shared().expect("shared base").value(x),
        }
    }
}

impl fmt::Display for MultiBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MultiBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        MultiBase::ALL
            .into_iter()
            .find(|b| b.name() == key)
            .ok_or_else(|| Error::Unknown {
                kind: "multi-objective base",
                id: s.to_string(),
            })
    }
}

/// Per-objective genotype offset.
pub fn objective_shift(k: usize, n_objectives: usize) -> f64 {
    k as f64 / (2.0 * n_objectives as f64)
}

/// `n_objectives`-objective instance of `base` over `n_variables` variables.
pub fn multi_objective_problem(base: MultiBase, n_objectives: usize, n_variables: usize) -> Result<Problem> {
    if n_objectives == 0 {
        return Err(Error::Argument("need at least one objective".into()));
    }
    if n_variables < 2 {
        return Err(Error::Argument("multi-objective instances need at least two variables".into()));
    }
    let bounds = base.bounds(n_variables);
    let b = bounds.clone();
    let name = format!("{}_m{}_d{}", base.name(), n_objectives, n_variables);
    Ok(Problem::new(name, bounds, n_objectives, move |x| {
        // recover the genotype, then shift it per objective
        let g: Vec<f64> = x.iter().zip(&b).map(|(v, bd)| (v - bd.lower) / bd.width()).collect();
        (0..n_objectives)
            .map(|k| {
                let delta = objective_shift(k, n_objectives);
                let shifted: Vec<f64> = g
                    .iter()
                    .zip(&b)
                    .map(|(gi, bd)| bd.lower + (gi - delta) * bd.width())
                    .collect();
                base.value(&shifted)
            })
            .collect()
    }))
}

/// All fifteen bases at one grid point.
pub fn multi_objective_suite(n_objectives: usize, n_variables: usize) -> Result<Vec<Problem>> {
    for (what, v) in [("n_objectives", n_objectives), ("n_variables", n_variables)] {
        if !GRID.contains(&v) {
            return Err(Error::Argument(format!("{what} must be one of {GRID:?}, got {v}")));
        }
    }
    MultiBase::ALL
        .iter()
        .map(|&b| multi_objective_problem(b, n_objectives, n_variables))
        .collect()
}
