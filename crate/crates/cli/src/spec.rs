//! Experiment specifications: JSON file and/or flags, expanded into cells.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use spinex::baselines::Registry;
use spinex::benchmarks::{classify, resolve_problem, BenchmarkId, MultiBase, ProblemKind};

pub const ALL_SINGLE: &str = "all-single";
pub const ALL_MULTI: &str = "all-multi";
pub const DEFAULT_BUDGET: usize = 20_000;

/// Spec validation failure, with the file line it points at when known.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecError {
    pub file: Option<PathBuf>,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{}:", file.display())?;
            if let Some(line) = self.line {
                write!(f, "{line}:")?;
                if let Some(col) = self.column {
                    write!(f, "{col}:")?;
                }
            }
            f.write_str(" ")?;
        }
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
enum ProblemList {
    Group(String),
    Ids(Vec<String>),
}

/// Fields accepted in a spec file; all optional so flags can fill gaps.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    problems: Option<ProblemList>,
    pub algorithms: Option<Vec<String>>,
    pub seeds: Option<Vec<u64>>,
    pub dims: Option<Vec<usize>>,
    pub objectives: Option<Vec<usize>>,
    pub populations: Option<Vec<usize>>,
    pub budget: Option<usize>,
    pub out: Option<PathBuf>,
    pub master_seed: Option<u64>,
}

/// Flag values; anything set here overrides the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub problems: Vec<String>,
    pub algorithms: Vec<String>,
    pub seeds: Vec<u64>,
    pub dims: Vec<usize>,
    pub objectives: Vec<usize>,
    pub populations: Vec<usize>,
    pub budget: Option<usize>,
    pub out: Option<PathBuf>,
    pub master_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problems: Vec<String>,
    pub algorithms: Vec<String>,
    pub seeds: Vec<u64>,
    pub dims: Vec<usize>,
    pub objectives: Vec<usize>,
    /// `None` runs each algorithm at its own default population.
    pub populations: Vec<Option<usize>>,
    pub budget: usize,
    pub out: PathBuf,
    pub master_seed: u64,
}

/// One (problem instance, algorithm, seed) run.
#[derive(Debug, Clone, PartialEq)]
pub struct CellPlan {
    pub problem: String,
    pub algorithm: String,
    pub seed: u64,
    pub dims: usize,
    pub objectives: usize,
    pub population: Option<usize>,
    pub budget: usize,
}

/// Identifies a problem instance across algorithms and seeds.
pub fn instance_key(problem: &str, dims: usize, objectives: usize, population: Option<usize>) -> String {
    match population {
        Some(p) => format!("{problem}_d{dims}_m{objectives}_p{p}"),
        None => format!("{problem}_d{dims}_m{objectives}"),
    }
}

impl CellPlan {
    pub fn key(&self) -> String {
        instance_key(&self.problem, self.dims, self.objectives, self.population)
    }
}

struct Locator<'a> {
    file: Option<&'a Path>,
    text: Option<&'a str>,
}

impl Locator<'_> {
    fn error(&self, field: &str, message: String) -> SpecError {
        let line = self.text.and_then(|t| {
            let needle = format!("\"{field}\"");
            t.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
        });
        SpecError {
            file: self.file.map(Path::to_path_buf),
            line,
            column: None,
            message,
        }
    }
}

pub fn parse_file(path: &Path) -> Result<(SpecFile, String), SpecError> {
    let text = std::fs::read_to_string(path).map_err(|e| SpecError {
        file: Some(path.to_path_buf()),
        line: None,
        column: None,
        message: format!("cannot read spec: {e}"),
    })?;
    let file = parse_text(&text).map_err(|mut e| {
        e.file = Some(path.to_path_buf());
        e
    })?;
    Ok((file, text))
}

pub fn parse_text(text: &str) -> Result<SpecFile, SpecError> {
    serde_json::from_str(text).map_err(|e| SpecError {
        file: None,
        line: Some(e.line()),
        column: Some(e.column()),
        message: format!("invalid spec: {e}"),
    })
}

fn expand_problems(ids: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for id in ids {
        match id.as_str() {
            ALL_SINGLE => out.extend(BenchmarkId::ALL.iter().map(|b| b.name().to_string())),
            ALL_MULTI => out.extend(MultiBase::ALL.iter().map(|b| format!("mo_{}", b.name()))),
            other => out.push(other.trim().to_ascii_lowercase().replace('-', "_")),
        }
    }
    out
}

pub fn default_out() -> PathBuf {
    std::env::var_os("SPINEX_OUT").map_or_else(|| PathBuf::from("spinex_out"), PathBuf::from)
}

/// Merges file and flags and checks the result against the registry.
pub fn build(
    file: Option<(&Path, &SpecFile, &str)>,
    flags: &Overrides,
    registry: &Registry,
) -> Result<ExperimentSpec, SpecError> {
    let empty = SpecFile::default();
    let (path, base, text) = match file {
        Some((p, f, t)) => (Some(p), f, Some(t)),
        None => (None, &empty, None),
    };
    let loc = Locator { file: path, text };
    let pick = |flag: &Vec<String>, from: Option<Vec<String>>| if flag.is_empty() { from.unwrap_or_default() } else { flag.clone() };
    let or_file = |flag: &Vec<usize>, from: &Option<Vec<usize>>| if flag.is_empty() { from.clone() } else { Some(flag.clone()) };

    let problems = pick(
        &flags.problems,
        base.problems.clone().map(|p| match p {
            ProblemList::Group(g) => vec![g],
            ProblemList::Ids(v) => v,
        }),
    );
    let problems = expand_problems(&problems);
    let algorithms = pick(&flags.algorithms, base.algorithms.clone());
    let seeds = if flags.seeds.is_empty() { base.seeds.clone().unwrap_or_default() } else { flags.seeds.clone() };

    if problems.is_empty() {
        return Err(loc.error("problems", "no problems given".into()));
    }
    if algorithms.is_empty() {
        return Err(loc.error("algorithms", "no algorithms given".into()));
    }
    if seeds.is_empty() {
        return Err(loc.error("seeds", "no seeds given".into()));
    }
    for a in &algorithms {
        registry
            .get(a)
            .map_err(|_| loc.error("algorithms", format!("unknown algorithm `{a}` (known: {})", registry.ids().join(", "))))?;
    }
    for p in &problems {
        classify(p).map_err(|_| loc.error("problems", format!("unknown problem `{p}` (see `spinex list`)")))?;
    }
    let dims = or_file(&flags.dims, &base.dims).unwrap_or_else(|| vec![2]);
    let objectives = or_file(&flags.objectives, &base.objectives).unwrap_or_else(|| vec![2]);
    let populations: Vec<Option<usize>> = match or_file(&flags.populations, &base.populations) {
        Some(v) if !v.is_empty() => v.into_iter().map(Some).collect(),
        _ => vec![None],
    };
    for (field, v) in [("dims", &dims), ("objectives", &objectives)] {
        if v.is_empty() || v.contains(&0) {
            return Err(loc.error(field, format!("{field} must be a non-empty list of positive integers")));
        }
    }
    if populations.contains(&Some(0)) {
        return Err(loc.error("populations", "populations must be positive".into()));
    }
    let budget = flags.budget.or(base.budget).unwrap_or(DEFAULT_BUDGET);
    if budget == 0 {
        return Err(loc.error("budget", "budget must be positive".into()));
    }
    let spec = ExperimentSpec {
        problems,
        algorithms,
        seeds,
        dims,
        objectives,
        populations,
        budget,
        out: flags.out.clone().or_else(|| base.out.clone()).unwrap_or_else(default_out),
        master_seed: flags.master_seed.or(base.master_seed).unwrap_or(0),
    };
    // surface instance and support errors before anything runs
    for cell in cells(&spec) {
        let objectives = (cell.objectives > 1).then_some(cell.objectives);
        let dims = Some(cell.dims);
        let field = if cell.objectives > 1 { "objectives" } else { "dims" };
        let problem = resolve_problem(&cell.problem, dims, objectives).map_err(|e| loc.error(field, format!("{}: {e}", cell.key())))?;
        let entry = registry.get(&cell.algorithm).expect("checked above");
        if !entry.support.accepts(problem.n_objectives()) {
            return Err(loc.error(
                "algorithms",
                format!(
                    "algorithm `{}` does not accept {}-objective problem `{}`",
                    cell.algorithm,
                    problem.n_objectives(),
                    cell.problem
                ),
            ));
        }
    }
    Ok(spec)
}

/// Every cell, ordered by problem, dimension, objectives, algorithm,
/// population and seed.
pub fn cells(spec: &ExperimentSpec) -> Vec<CellPlan> {
    let mut out = Vec::new();
    for problem in &spec.problems {
        let instances: Vec<(usize, usize)> = match classify(problem) {
            Ok(ProblemKind::MultiMath) => spec
                .dims
                .iter()
                .flat_map(|&d| spec.objectives.iter().map(move |&m| (d, m)))
                .collect(),
            Ok(ProblemKind::SingleMath) => match problem.parse::<BenchmarkId>().ok().and_then(BenchmarkId::fixed_dimension) {
                Some(d) => vec![(d, 1)],
                None => spec.dims.iter().map(|&d| (d, 1)).collect(),
            },
            Ok(ProblemKind::ScenarioSingle | ProblemKind::ScenarioMulti) => {
                let p = resolve_problem(problem, None, None).expect("classified scenario resolves");
                vec![(p.n_variables(), p.n_objectives())]
            }
            Err(_) => Vec::new(),
        };
        for (dims, objectives) in instances {
            for algorithm in &spec.algorithms {
                for &population in &spec.populations {
                    for &seed in &spec.seeds {
                        out.push(CellPlan {
                            problem: problem.clone(),
                            algorithm: algorithm.clone(),
                            seed,
                            dims,
                            objectives,
                            population,
                            budget: spec.budget,
                        });
                    }
                }
            }
        }
    }
    out
}
