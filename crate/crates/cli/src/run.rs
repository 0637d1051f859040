//! Grid execution with a bounded worker pool and one CSV writer.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use spinex::baselines::{BaselineConfig, Registry};
use spinex::benchmarks::resolve_problem;
use spinex::rng::cell_seed;

use crate::cells::{CellRow, CellWriter};
use crate::spec::{cells, CellPlan, ExperimentSpec};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    pub completed: usize,
    pub failed: usize,
}

pub struct Options {
    pub jobs: usize,
    pub record_dir: Option<PathBuf>,
}

fn run_cell(plan: &CellPlan, master_seed: u64, registry: &Registry, record_dir: Option<&Path>) -> Result<CellRow, String> {
    let objectives = (plan.objectives > 1).then_some(plan.objectives);
    let problem = resolve_problem(&plan.problem, Some(plan.dims), objectives).map_err(|e| e.to_string())?;
    let config = BaselineConfig {
        budget: plan.budget,
        seed: cell_seed(master_seed, &plan.key(), &plan.algorithm, plan.seed),
        population: plan.population,
        explain: record_dir.is_some(),
        ..BaselineConfig::default()
    };
    let started = Instant::now();
    let outcome = registry.run(&plan.algorithm, &problem, &config).map_err(|e| e.to_string())?;
    let wall = started.elapsed().as_secs_f64().max(f64::MIN_POSITIVE);
    let best = match (&outcome.best_value, &outcome.archive) {
        (Some(v), _) => vec![*v],
        (None, Some(a)) => a.ideal_point().ok_or("empty archive")?,
        (None, None) => return Err("run produced no result".into()),
    };
    if let Some(dir) = record_dir {
        let path = dir.join(format!("{}__{}__seed{}.json", plan.key(), plan.algorithm, plan.seed));
        outcome.record.to_json_file(&path).map_err(|e| e.to_string())?;
    }
    Ok(CellRow::new(plan, &best, wall, outcome.record.evaluations))
}

/// Runs every cell of `spec`, appending to `<out>/cells.csv` as cells finish.
pub fn execute(spec: &ExperimentSpec, registry: &Registry, options: &Options) -> Result<Summary, String> {
    std::fs::create_dir_all(&spec.out).map_err(|e| format!("{}: {e}", spec.out.display()))?;
    if let Some(dir) = &options.record_dir {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    let path = spec.out.join("cells.csv");
    let mut writer = CellWriter::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let plans = cells(spec);
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();
    let mut summary = Summary::default();
    let mut write_error = None;
    std::thread::scope(|s| {
        for _ in 0..options.jobs.clamp(1, plans.len().max(1)) {
            let tx = tx.clone();
            let (plans, next) = (&plans, &next);
            let record_dir = options.record_dir.as_deref();
            s.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(plan) = plans.get(i) else { break };
                let result = run_cell(plan, spec.master_seed, registry, record_dir);
                if tx.send((plan, result)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (plan, result) in rx {
            match result {
                Ok(row) => {
                    log::info!("{} {} seed {}: {}", plan.key(), plan.algorithm, plan.seed, row.best_fitness);
                    if let Err(e) = writer.append(&row) {
                        write_error.get_or_insert(format!("{}: {e}", path.display()));
                    }
                    summary.completed += 1;
                }
                Err(e) => {
                    log::error!("cell {} {} seed {} failed: {e}", plan.key(), plan.algorithm, plan.seed);
                    summary.failed += 1;
                }
            }
        }
    });
    match write_error {
        Some(e) => Err(e),
        None => Ok(summary),
    }
}
