use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::par::Mode;
use crate::pareto::non_dominated_indices;
use crate::record::RunRecord;
use crate::svg::{viridis, Chart, Scale};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExportFormat {
    #[default]
    SvgAndCsv,
    CsvOnly,
}

#[derive(Debug, Clone, Default)]
pub struct ExportOptions {
    pub format: ExportFormat,
    /// Also write the 2-D principal-component projection of the last
    /// snapshot's population with its fitness (CSV only).
    pub include_landscape: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub plot: String,
    pub file: String,
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_iteration: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub problem: String,
    pub algorithm: String,
    pub artifacts: Vec<Artifact>,
    pub notes: Vec<String>,
}

impl Manifest {
    pub fn files(&self) -> impl Iterator<Item = &str> {
        self.artifacts.iter().map(|a| a.file.as_str())
    }

    pub fn count_format(&self, format: &str) -> usize {
        self.artifacts.iter().filter(|a| a.format == format).count()
    }
}

struct Writer<'a> {
    dir: &'a Path,
    options: &'a ExportOptions,
    manifest: Manifest,
}

impl Writer<'_> {
    fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    fn csv(&mut self, plot: &str, stem: &str, header: &[&str], rows: &[Vec<String>], it: Option<usize>) -> Result<()> {
        let path = self.dir.join(format!("{stem}.csv"));
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(&path)
            .map_err(|e| Error::csv_at(&path, e))?;
        w.write_record(header).map_err(|e| Error::csv_at(&path, e))?;
        for row in rows {
            w.write_record(row).map_err(|e| Error::csv_at(&path, e))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        self.push(plot, stem, "csv", it);
        Ok(())
    }

    fn svg(&mut self, plot: &str, stem: &str, chart: Chart, it: Option<usize>) -> Result<()> {
        if self.options.format == ExportFormat::CsvOnly {
            return Ok(());
        }
        self.write(&format!("{stem}.svg"), &chart.finish())?;
        self.push(plot, stem, "svg", it);
        Ok(())
    }

    fn push(&mut self, plot: &str, stem: &str, format: &str, it: Option<usize>) {
        self.manifest.artifacts.push(Artifact {
            plot: plot.to_string(),
            file: format!("{stem}.{format}"),
            format: format.to_string(),
            snapshot_iteration: it,
        });
    }
}

fn num(v: f64) -> String {
    // Display prints the shortest string that parses back to the same f64
    format!("{v}")
}

/// Writes the explainability plot set for `record` into `out_dir`.
///
/// Influence/diversity scatter and similarity heatmap come from the last
/// snapshot; the convergence curve comes from the trajectory; multi-objective
/// records also get a Pareto scatter of the first two objectives. Each plot
/// is an SVG plus a CSV of the plotted values, listed in `manifest.json`.
pub fn export_visualizations(record: &RunRecord, out_dir: &Path, options: &ExportOptions) -> Result<Manifest> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut w = Writer {
        dir: out_dir,
        options,
        manifest: Manifest {
            problem: record.problem_name.clone(),
            algorithm: record.algorithm.clone(),
            ..Manifest::default()
        },
    };
    let multi = record.is_multi_objective();

    match record.explainability_snapshots.last() {
        Some(snap) if !snap.is_empty() => {
            influence_diversity(&mut w, snap, multi)?;
            heatmap(&mut w, snap)?;
            if options.include_landscape {
                landscape(&mut w, snap)?;
            }
        }
        _ => w.manifest.notes.push(
            "no snapshots: influence/diversity and similarity plots skipped (enable verbose explainability)".into(),
        ),
    }
    convergence(&mut w, record, multi)?;
    if multi {
        pareto_scatter(&mut w, record)?;
    }

    let manifest_path = out_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&w.manifest)?;
    fs::write(&manifest_path, text).map_err(|e| Error::io(&manifest_path, e))?;
    Ok(w.manifest)
}

fn influence_diversity(w: &mut Writer<'_>, snap: &crate::explain::ExplainabilitySnapshot, multi: bool) -> Result<()> {
    let n = snap.len();
    let color: Vec<f64> = snap.fitness_values[..n].iter().map(|f| f.iter().sum()).collect();
    let mut marker = vec![""; n];
    if multi {
        for i in non_dominated_indices(&snap.fitness_values[..n], Mode::Sequential) {
            marker[i] = "pareto";
        }
    } else {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| color[a].total_cmp(&color[b]));
        for (rank, &i) in order.iter().take(5).enumerate() {
            marker[i] = if rank == 0 { "best" } else { "top5" };
        }
    }
    let rows: Vec<Vec<String>> = (0..n)
        .map(|i| {
            vec![
                i.to_string(),
                num(snap.influence[i]),
                num(snap.diversity[i]),
                num(color[i]),
                marker[i].to_string(),
            ]
        })
        .collect();
    let it = Some(snap.iteration);
    w.csv("influence_diversity", "influence_diversity", &["index", "influence", "diversity", "fitness", "marker"], &rows, it)?;

    let mut chart = Chart::new(
        &format!("Neighbor Influence vs Diversity (iteration {})", snap.iteration),
        "Neighbor Influence",
        "Neighbor Diversity",
        Scale::linear(snap.influence.iter().copied().chain([0.0])),
        Scale::linear(snap.diversity.iter().copied()),
    );
    let (lo, hi) = color
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    for (i, c) in color.iter().enumerate() {
        let t = if hi > lo { (c - lo) / (hi - lo) } else { 0.5 };
        chart.point(snap.influence[i], snap.diversity[i], 4.0, &viridis(t), None);
    }
    let mut labelled = 0;
    for (i, kind) in marker.iter().enumerate() {
        match *kind {
            "best" => chart.star(snap.influence[i], snap.diversity[i], 12.0, "red"),
            "top5" => chart.point(snap.influence[i], snap.diversity[i], 6.0, "orange", Some("black")),
            "pareto" => chart.star(snap.influence[i], snap.diversity[i], 8.0, "red"),
            _ => continue,
        }
        labelled += 1;
        let tag = if multi { format!("P{labelled}") } else { format!("S{labelled}") };
        chart.label(snap.influence[i], snap.diversity[i], &tag);
    }
    let mean_div = snap.diversity.iter().sum::<f64>() / n as f64;
    chart.vline(0.0);
    chart.hline(mean_div);
    chart.corner_note(true, true, "High Diversity / High Influence");
    chart.corner_note(false, true, "High Diversity / Low Influence");
    chart.corner_note(true, false, "Low Diversity / High Influence");
    chart.corner_note(false, false, "Low Diversity / Low Influence");
    let legend: Vec<(&str, &str)> = if multi {
        vec![("red", "Pareto front")]
    } else {
        vec![("red", "Best solution"), ("orange", "Top 5 solutions")]
    };
    chart.legend(&legend);
    w.svg("influence_diversity", "influence_diversity", chart, it)
}

fn heatmap(w: &mut Writer<'_>, snap: &crate::explain::ExplainabilitySnapshot) -> Result<()> {
    let s = &snap.similarities;
    let mut rows = Vec::with_capacity(s.len() * s.len());
    for (i, row) in s.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            rows.push(vec![i.to_string(), j.to_string(), num(*v)]);
        }
    }
    let it = Some(snap.iteration);
    w.csv("similarity_heatmap", "similarity_heatmap", &["row", "col", "similarity"], &rows, it)?;
    let (lo, hi) = s
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let mut chart = Chart::new(
        &format!("Solution Similarity Matrix (iteration {})", snap.iteration),
        "solution",
        "solution",
        Scale::fixed(0.0, 1.0),
        Scale::fixed(0.0, 1.0),
    )
    .without_axes();
    chart.heatmap(s, lo, hi);
    w.svg("similarity_heatmap", "similarity_heatmap", chart, it)
}

fn convergence(w: &mut Writer<'_>, record: &RunRecord, multi: bool) -> Result<()> {
    let m = record.trajectory.first().map_or(1, |e| e.fitness.len());
    let header: Vec<String> = if multi || m > 1 {
        std::iter::once("iteration".to_string())
            .chain((1..=m).map(|k| format!("objective_{k}")))
            .collect()
    } else {
        vec!["iteration".into(), "best_fitness".into()]
    };
    let rows: Vec<Vec<String>> = record
        .trajectory
        .iter()
        .map(|e| {
            std::iter::once(e.iteration.to_string())
                .chain(e.fitness.iter().map(|v| num(*v)))
                .collect()
        })
        .collect();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    w.csv("convergence", "convergence", &header_refs, &rows, None)?;

    let values: Vec<(f64, f64)> = record
        .trajectory
        .iter()
        .map(|e| (e.iteration as f64, e.fitness.first().copied().unwrap_or(f64::NAN)))
        .collect();
    // log axis needs positive values; shift when the curve reaches zero or below
    let min = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let (shift, label) = if min > 0.0 {
        (0.0, "Best Fitness (log)".to_string())
    } else {
        (1e-12 - min, format!("Best Fitness - ({min:.6}) + 1e-12 (log)"))
    };
    let shifted: Vec<(f64, f64)> = values.iter().map(|&(x, y)| (x, y + shift)).collect();
    let mut chart = Chart::new(
        "Convergence Plot",
        "Iteration",
        &label,
        Scale::linear(shifted.iter().map(|p| p.0)),
        Scale::log(shifted.iter().map(|p| p.1)),
    );
    chart.polyline(&shifted, "steelblue");
    for &(x, y) in &shifted {
        chart.point(x, y, 2.5, "steelblue", None);
    }
    w.svg("convergence", "convergence", chart, None)
}

fn pareto_scatter(w: &mut Writer<'_>, record: &RunRecord) -> Result<()> {
    let front = &record.final_front;
    let m = front.first().map_or(0, Vec::len);
    let header: Vec<String> = (1..=m).map(|k| format!("objective_{k}")).collect();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = front
        .iter()
        .map(|f| f.iter().map(|v| num(*v)).collect())
        .collect();
    w.csv("pareto_front", "pareto_front", &header_refs, &rows, None)?;
    if m < 2 {
        w.manifest
            .notes
            .push("pareto scatter needs two objectives; SVG skipped".into());
        return Ok(());
    }
    let mut chart = Chart::new(
        "Pareto Front (objectives 1 and 2)",
        "Objective 1",
        "Objective 2",
        Scale::linear(front.iter().map(|f| f[0])),
        Scale::linear(front.iter().map(|f| f[1])),
    );
    for f in front {
        chart.point(f[0], f[1], 4.0, "crimson", None);
    }
    w.svg("pareto_front", "pareto_front", chart, None)
}

fn landscape(w: &mut Writer<'_>, snap: &crate::explain::ExplainabilitySnapshot) -> Result<()> {
    let x = &snap.solution_space;
    let n = x.len();
    let d = x.first().map_or(0, Vec::len);
    let projected: Vec<(f64, f64)> = if d <= 2 || n < 2 {
        x.iter()
            .map(|r| (r.first().copied().unwrap_or(0.0), r.get(1).copied().unwrap_or(0.0)))
            .collect()
    } else {
        let data = nalgebra::DMatrix::from_fn(n, d, |i, j| x[i][j]);
        let means = data.row_mean();
        let centered = nalgebra::DMatrix::from_fn(n, d, |i, j| data[(i, j)] - means[j]);
        let cov = centered.transpose() * &centered / (n as f64 - 1.0);
        let eig = cov.symmetric_eigen();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let (a, b) = (eig.eigenvectors.column(order[0]), eig.eigenvectors.column(order[1]));
        (0..n)
            .map(|i| {
                let row = centered.row(i);
                (row.dot(&a.transpose()), row.dot(&b.transpose()))
            })
            .collect()
    };
    let rows: Vec<Vec<String>> = projected
        .iter()
        .zip(&snap.fitness_values)
        .map(|(p, f)| vec![num(p.0), num(p.1), num(f.iter().sum())])
        .collect();
    w.csv("landscape_projection", "landscape_projection", &["pc1", "pc2", "fitness"], &rows, Some(snap.iteration))
}
