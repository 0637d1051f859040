//! Report files for a rank table and its performance profiles.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::{PerformanceProfile, RankTable, GAP_FLOOR};
use crate::svg::{Chart, Scale};
use crate::{Error, Result};

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

#[derive(Debug, Clone, PartialEq)]
pub struct ReportManifest {
    pub files: Vec<PathBuf>,
}

fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| Error::csv_at(path, e))?;
    w.write_record(header).map_err(|e| Error::csv_at(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| Error::csv_at(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn profile_chart(profile: &PerformanceProfile) -> Chart {
    let taus = profile.breakpoints();
    let tau_max = taus.last().copied().unwrap_or(1.0).max(1.0);
    let log = tau_max > 10.0;
    let x = if log { Scale::log([1.0, tau_max]) } else { Scale::fixed(1.0, tau_max.max(1.0 + 1e-9)) };
    let label = if log { "tau (log scale)" } else { "tau" };
    let mut chart = Chart::new(
        &format!("Performance profile ({})", profile.metric),
        label,
        "fraction of problems",
        x,
        Scale::fixed(0.0, 1.0),
    );
    let mut legend = Vec::new();
    for (a, alg) in profile.algorithms.iter().enumerate() {
        let color = PALETTE[a % PALETTE.len()];
        let mut points = vec![(1.0, profile.rho(a, 1.0))];
        let mut last = points[0].1;
        for &t in &taus {
            let r = profile.rho(a, t);
            points.push((t, last));
            points.push((t, r));
            last = r;
        }
        points.push((tau_max, last));
        chart.polyline(&points, color);
        legend.push((color, alg.algorithm.as_str()));
    }
    chart.legend(&legend);
    chart
}

/// Writes `rank_table.csv`, `profile_<metric>.csv`/`.svg` per profile and
/// `summary.json` into `out_dir`, creating it if needed.
pub fn write_report(table: &RankTable, profiles: &[PerformanceProfile], out_dir: &Path) -> Result<ReportManifest> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut files = Vec::new();

    let path = out_dir.join("rank_table.csv");
    write_csv(
        &path,
        &["algorithm", "fitness_rank_sum", "overall_rank", "time_rank_sum", "time_rank"],
        table.rows.iter().map(|r| {
            vec![
                r.algorithm.clone(),
                r.fitness_rank_sum.to_string(),
                r.overall_rank.to_string(),
                r.time_rank_sum.to_string(),
                r.time_rank.to_string(),
            ]
        }),
    )?;
    files.push(path);

    for profile in profiles {
        let path = out_dir.join(format!("profile_{}.csv", profile.metric));
        write_csv(
            &path,
            &["algorithm", "tau", "rho"],
            profile.steps().into_iter().map(|(a, t, r)| vec![a, format!("{t}"), format!("{r}")]),
        )?;
        files.push(path);
        let path = out_dir.join(format!("profile_{}.svg", profile.metric));
        fs::write(&path, profile_chart(profile).finish()).map_err(|e| Error::io(&path, e))?;
        files.push(path);
    }

    let summary = json!({
        "metric_config": {
            "aggregation": table.aggregation,
            "ranking": "competition ranks per problem, summed over problems",
            "multi_objective_ranking": "rank each objective separately, then sum",
            "profile_metrics": profiles.iter().map(|p| p.metric.name()).collect::<Vec<_>>(),
            "fitness_gap_floor": GAP_FLOOR,
            "problems": table.problems,
        },
        "algorithms": table.rows,
    });
    let path = out_dir.join("summary.json");
    let text = serde_json::to_string_pretty(&summary)?;
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    files.push(path);
    Ok(ReportManifest { files })
}
