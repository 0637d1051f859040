//! `report`, `explain` and `list`.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::json;
use spinex::analysis::{performance_profile_with, rank_cells_with, write_report, Aggregation, ProfileMetric, ProfileOptions};
use spinex::baselines::Registry;
use spinex::benchmarks::{resolve_problem, suite_manifest};
use spinex::explain::{export_visualizations, ExportOptions};
use spinex::record::RunRecord;

use crate::cells;

pub fn report(cells_path: &Path, out: &Path, metrics: &[ProfileMetric], aggregation: Aggregation) -> Result<Vec<String>, String> {
    let rows = cells::read(cells_path)?;
    if rows.is_empty() {
        return Err(format!("{}: no result cells", cells_path.display()));
    }
    let results = rows.iter().map(|r| r.to_result()).collect::<Result<Vec<_>, _>>()?;
    let mut known_optima = BTreeMap::new();
    for r in &rows {
        if r.objectives == 1 {
            if let Some(opt) = resolve_problem(&r.problem, Some(r.dims), None).ok().and_then(|p| p.known_optimum().map(|o| o[0])) {
                known_optima.insert(r.key(), opt);
            }
        }
    }
    let table = rank_cells_with(&results, aggregation).map_err(|e| e.to_string())?;
    let options = ProfileOptions { aggregation, known_optima };
    let profiles = metrics
        .iter()
        .map(|&m| performance_profile_with(&results, m, &options))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let manifest = write_report(&table, &profiles, out).map_err(|e| e.to_string())?;
    Ok(manifest.files.iter().map(|p| p.display().to_string()).collect())
}

pub fn explain(record_path: &Path, out: &Path, options: &ExportOptions) -> Result<Vec<String>, String> {
    let record = RunRecord::from_json_file(record_path).map_err(|e| e.to_string())?;
    std::fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;
    let manifest = export_visualizations(&record, out, options).map_err(|e| e.to_string())?;
    for note in &manifest.notes {
        log::warn!("{note}");
    }
    Ok(manifest.files().map(str::to_string).collect())
}

pub fn list(json_output: bool) -> String {
    let catalog = suite_manifest();
    let registry = Registry::standard();
    if json_output {
        let algorithms: Vec<_> = registry
            .entries()
            .iter()
            .map(|e| json!({"id": e.id, "description": e.description, "support": e.support}))
            .collect();
        let doc = json!({"problems": catalog.problems, "algorithms": algorithms});
        return serde_json::to_string_pretty(&doc).expect("catalog serializes");
    }
    let mut out = String::from("problems:\n");
    for p in &catalog.problems {
        let kind = serde_json::to_value(p.kind).expect("kind serializes");
        out.push_str(&format!(
            "  {:<24} {:<16} vars {:>2}  objectives {:>2}\n",
            p.id,
            kind.as_str().unwrap_or_default(),
            p.n_variables,
            p.n_objectives
        ));
    }
    out.push_str("algorithms:\n");
    for e in registry.entries() {
        out.push_str(&format!("  {:<12} {}\n", e.id, e.description));
    }
    out
}
