//! Test problems: single-objective functions, their shifted multi-objective
//! extensions, and the scenario problems, plus a catalog for discovery.
//!
//! Catalog ids are the function name for single-objective functions
//! (`sphere`), `mo_` + base name for multi-objective bases (`mo_sphere`)
//! and `<scenario>_<variant>` for scenarios (`truss_multi`).

mod functions;
mod multi;
mod scenarios;

use serde::Serialize;

pub use functions::{
    benchmark_problem, evaluate_benchmark, single_objective_problem, single_objective_suite, BenchmarkId,
    KnownOptimum,
};
pub use multi::{multi_objective_problem, multi_objective_suite, objective_shift, MultiBase, GRID};
pub use scenarios::{scenario, scenario_suite, ScenarioId, Variant};

use crate::problem::{Bounds, Problem};
use crate::{Error, Result};

const MULTI_PREFIX: &str = "mo_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    SingleMath,
    MultiMath,
    ScenarioSingle,
    ScenarioMulti,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    pub kind: ProblemKind,
    pub n_variables: usize,
    pub n_objectives: usize,
    pub bounds: Vec<Bounds>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub known_optimum: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Catalog {
    pub problems: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn count(&self, kind: ProblemKind) -> usize {
        self.problems.iter().filter(|p| p.kind == kind).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }
}

fn entry(id: String, kind: ProblemKind, p: &Problem) -> CatalogEntry {
    CatalogEntry {
        id,
        kind,
        n_variables: p.n_variables(),
        n_objectives: p.n_objectives(),
        bounds: p.bounds().to_vec(),
        known_optimum: p.known_optimum().map(<[f64]>::to_vec),
    }
}

/// Every problem at its default size: functions at two variables,
/// multi-objective bases at two objectives and two variables.
pub fn suite_manifest() -> Catalog {
    let mut problems = Vec::new();
    for id in BenchmarkId::ALL {
        problems.push(entry(id.name().into(), ProblemKind::SingleMath, &single_objective_problem(id)));
    }
    for base in MultiBase::ALL {
        let p = multi_objective_problem(base, 2, 2).expect("default multi size");
        problems.push(entry(format!("{MULTI_PREFIX}{}", base.name()), ProblemKind::MultiMath, &p));
    }
    for (id, variant, p) in scenario_suite() {
        let kind = match variant {
            Variant::Single => ProblemKind::ScenarioSingle,
            Variant::Multi => ProblemKind::ScenarioMulti,
        };
        problems.push(entry(format!("{}_{}", id.name(), variant.name()), kind, &p));
    }
    Catalog { problems }
}

/// Kind of a catalog id, without building the problem.
pub fn classify(id: &str) -> Result<ProblemKind> {
    let key = id.trim().to_ascii_lowercase().replace('-', "_");
    if let Some(base) = key.strip_prefix(MULTI_PREFIX) {
        base.parse::<MultiBase>()?;
        return Ok(ProblemKind::MultiMath);
    }
    if let Some((name, variant)) = key.rsplit_once('_') {
        if let (Ok(_), Ok(v)) = (name.parse::<ScenarioId>(), variant.parse::<Variant>()) {
            return Ok(match v {
                Variant::Single => ProblemKind::ScenarioSingle,
                Variant::Multi => ProblemKind::ScenarioMulti,
            });
        }
    }
    key.parse::<BenchmarkId>().map_err(|_| Error::Unknown {
        kind: "problem",
        id: id.to_string(),
    })?;
    Ok(ProblemKind::SingleMath)
}

/// Builds a catalog problem. `dims` and `objectives` default to two and are
/// ignored by scenarios.
pub fn resolve_problem(id: &str, dims: Option<usize>, objectives: Option<usize>) -> Result<Problem> {
    let key = id.trim().to_ascii_lowercase().replace('-', "_");
    if let Some(base) = key.strip_prefix(MULTI_PREFIX) {
        let base: MultiBase = base.parse()?;
        return multi_objective_problem(base, objectives.unwrap_or(2), dims.unwrap_or(2));
    }
    if let Some((name, variant)) = key.rsplit_once('_') {
        if let (Ok(s), Ok(v)) = (name.parse::<ScenarioId>(), variant.parse::<Variant>()) {
            return Ok(scenario(s, v));
        }
    }
    let f: BenchmarkId = key.parse().map_err(|_| Error::Unknown {
        kind: "problem",
        id: id.to_string(),
    })?;
    if objectives.is_some_and(|m| m != 1) {
        return Err(Error::Argument(format!("{f} is single-objective")));
    }
    benchmark_problem(f, dims.unwrap_or_else(|| f.fixed_dimension().unwrap_or(2)))
}
