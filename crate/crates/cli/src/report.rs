//! Run reports: the JSON schema shared by `discover` and `evaluate`, plus
//! text and markdown renderings of the subgroup table.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use sdlist::metrics::ListSummary;
use sdlist::model::TargetStatistics;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub params: ParamsEcho,
    pub subgroups: Vec<SubgroupRow>,
    pub default: DefaultRow,
    pub summary: ListSummary,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamsEcho {
    pub input: String,
    pub task: String,
    pub targets: Vec<String>,
    pub beam_width: usize,
    pub depth: usize,
    pub cutpoints: usize,
    pub beta: f64,
    pub top1: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubgroupRow {
    pub description: String,
    pub conditions: Value,
    pub n: usize,
    pub stats: Vec<TargetStatistics>,
    pub wkl: f64,
    pub gain_at_insertion: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DefaultRow {
    pub n: usize,
    pub stats: Vec<TargetStatistics>,
}

/// Column labels the table renderers need: per target, the class names of a
/// nominal target or nothing for a numeric one.
#[derive(Clone, Debug)]
pub struct TableLabels {
    pub target_names: Vec<String>,
    pub class_labels: Vec<Option<Vec<String>>>,
}

/// Six significant digits, plain decimal notation.
pub fn sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

fn stat_cells(stats: &[TargetStatistics]) -> Vec<String> {
    let mut cells = Vec::new();
    for stat in stats {
        match stat {
            TargetStatistics::Categorical { .. } => {
                cells.extend(stat.probs().iter().map(|&p| sig6(p)));
            }
            TargetStatistics::Normal { .. } => {
                cells.push(sig6(stat.mean()));
                cells.push(sig6(stat.std_dev()));
            }
        }
    }
    cells
}

fn stat_headers(labels: &TableLabels) -> Vec<String> {
    let mut headers = Vec::new();
    for (name, classes) in labels.target_names.iter().zip(&labels.class_labels) {
        match classes {
            Some(classes) => {
                for class in classes {
                    headers.push(format!("p({name}={class})"));
                }
            }
            None => {
                headers.push(format!("mean({name})"));
                headers.push(format!("sd({name})"));
            }
        }
    }
    headers
}

pub fn render_json(report: &Report) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serialises");
    out.push('\n');
    out
}

pub fn render_text(report: &Report, labels: &TableLabels) -> String {
    let headers: Vec<String> = ["s".to_owned(), "description".to_owned(), "n".to_owned(), "wkl".to_owned()]
        .into_iter()
        .chain(stat_headers(labels))
        .collect();
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (i, sub) in report.subgroups.iter().enumerate() {
        let mut row = vec![
            (i + 1).to_string(),
            sub.description.clone(),
            sub.n.to_string(),
            sig6(sub.wkl),
        ];
        row.extend(stat_cells(&sub.stats));
        rows.push(row);
    }
    let mut default_row = vec![
        "d".to_owned(),
        "dataset distribution".to_owned(),
        report.default.n.to_string(),
        String::new(),
    ];
    default_row.extend(stat_cells(&report.default.stats));
    rows.push(default_row);

    let widths: Vec<usize> = headers
        .iter()
        .enumerate()
        .map(|(c, h)| {
            rows.iter()
                .map(|r| r.get(c).map_or(0, String::len))
                .chain([h.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let fmt_row = |cells: &[String]| {
        cells
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                if c == 1 {
                    format!("{cell:<width$}", width = widths[c])
                } else {
                    format!("{cell:>width$}", width = widths[c])
                }
            })
            .collect::<Vec<_>>()
            .join("  ")
    };

    let mut out = String::new();
    out.push_str(&format!(
        "subgroup list ({} task, {} subgroups)\n\n",
        report.params.task, report.summary.n_subgroups
    ));
    out.push_str(&fmt_row(&headers));
    out.push('\n');
    for row in &rows {
        out.push_str(&fmt_row(row));
        out.push('\n');
    }
    out.push('\n');
    out.push_str(&summary_line(&report.summary));
    out.push('\n');
    out
}

pub fn render_markdown(report: &Report, labels: &TableLabels) -> String {
    let headers: Vec<String> = ["s".to_owned(), "description".to_owned(), "n".to_owned(), "wkl".to_owned()]
        .into_iter()
        .chain(stat_headers(labels))
        .collect();
    let mut out = String::new();
    out.push_str(&format!("| {} |\n", headers.join(" | ")));
    out.push_str(&format!("|{}\n", "---|".repeat(headers.len())));
    for (i, sub) in report.subgroups.iter().enumerate() {
        let mut row = vec![
            (i + 1).to_string(),
            sub.description.clone(),
            sub.n.to_string(),
            sig6(sub.wkl),
        ];
        row.extend(stat_cells(&sub.stats));
        out.push_str(&format!("| {} |\n", row.join(" | ")));
    }
    let mut default_row = vec![
        "d".to_owned(),
        "dataset distribution".to_owned(),
        report.default.n.to_string(),
        String::new(),
    ];
    default_row.extend(stat_cells(&report.default.stats));
    out.push_str(&format!("| {} |\n", default_row.join(" | ")));
    out.push('\n');
    out.push_str(&summary_line(&report.summary));
    out.push('\n');
    out
}

fn summary_line(summary: &ListSummary) -> String {
    let mut line = format!(
        "swkl={} n_subgroups={} avg_conditions={} compression_ratio={} total_bits={}",
        sig6(summary.swkl),
        summary.n_subgroups,
        sig6(summary.avg_conditions),
        sig6(summary.compression_ratio),
        sig6(summary.total_bits),
    );
    if let Some(ratio) = summary.normalized_std_first {
        line.push_str(&format!(" normalized_std_first={}", sig6(ratio)));
    }
    line
}
