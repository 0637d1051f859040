//! Similarity-driven population search for black-box minimization.
//!
//! The crate is organised around one optimizer and the harness used to
//! compare it against other methods:
//!
//! * [`problem`], [`config`], [`record`] and [`rng`] hold the shared data
//!   model: problems defined on a box, the genotype unit cube every algorithm
//!   searches, run configuration and run bookkeeping.
//! * [`similarity`] computes the pairwise similarity matrices that drive the
//!   search and the explainability metrics.
//! * [`engine`] is the optimizer itself: transformations, adaptive restart,
//!   escape and step-size control, dimensional shift and Nelder-Mead
//!   refinement, tied together by [`engine::optimize`].
//! * [`pareto`] handles domination and non-dominated archives.
//! * [`explain`] derives neighbor influence/diversity and exports plots.
//! * [`benchmarks`] contains the test functions and the scenario problems.
//! * [`baselines`] provides comparison algorithms behind a shared registry.
//! * [`analysis`] turns result cells into rank tables and performance
//!   profiles.
//!
//! Data-parallel inner loops (population evaluation, per-method similarity
//! matrices, domination scans) run on rayon when the `parallel` feature is
//! enabled and fall back to plain iterators otherwise. Results never depend
//! on the mode.
//!
//! ```no_run
//! use spinex::benchmarks::{single_objective_problem, BenchmarkId};
//! use spinex::config::OptimizerConfig;
//! use spinex::engine::optimize;
//!
//! let problem = single_objective_problem(BenchmarkId::Sphere);
//! let config = OptimizerConfig { seed: 7, ..OptimizerConfig::default() };
//! let outcome = optimize(&problem, &config).unwrap();
//! println!("best fitness {:?}", outcome.best_fitness());
//! ```

pub mod analysis;
pub mod baselines;
pub mod benchmarks;
pub mod config;
pub mod engine;
mod error;
pub mod explain;
pub mod par;
pub mod pareto;
pub mod problem;
pub mod record;
pub mod rng;
pub mod similarity;
pub(crate) mod svg;

pub use error::{Error, Result};

/// Population of genotype vectors, one row per candidate.
pub type SolutionMatrix = nalgebra::DMatrix<f64>;
/// Objective values, one row per candidate and one column per objective.
pub type FitnessMatrix = nalgebra::DMatrix<f64>;
/// Square pairwise similarity scores.
pub type SimilarityMatrix = nalgebra::DMatrix<f64>;
