use std::cmp::Ordering;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::area::AreaEstimate;
use crate::error::{LemniError, Result};
use crate::poly::RootConfiguration;

/// At most this many near-ties are kept in a report.
pub const MAX_TIES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SearchKind {
    Exhaustive,
    Local,
}

/// One evaluated candidate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub candidate_id: u64,
    /// Sorted root arguments in radians, repeated by multiplicity, space separated.
    pub angles: String,
    pub q: Option<u64>,
    pub s: Option<u64>,
    pub r: Option<u64>,
    pub area_mean: f64,
    pub area_std: f64,
}

impl TraceRow {
    pub fn parsed_angles(&self) -> Result<Vec<f64>> {
        self.angles
            .split_whitespace()
            .map(|a| {
                a.parse::<f64>()
                    .map_err(|e| LemniError::InvalidArgument(format!("bad angle {a:?} in trace: {e}")))
            })
            .collect()
    }
}

pub fn format_angles(angles: &[f64]) -> String {
    angles.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")
}

/// Lexicographic order on angle lists.
pub fn compare_angles(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Smaller mean wins; equal means fall back to the angle list.
pub(crate) fn better(mean: f64, angles: &[f64], best_mean: f64, best_angles: &[f64]) -> bool {
    match mean.total_cmp(&best_mean) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => compare_angles(angles, best_angles) == Ordering::Less,
    }
}

/// Index of the winning row under the search's ranking rule.
pub fn argmin_of_trace(rows: &[TraceRow]) -> Result<Option<usize>> {
    let mut best: Option<(usize, Vec<f64>)> = None;
    for (i, row) in rows.iter().enumerate() {
        let angles = row.parsed_angles()?;
        let wins = match &best {
            None => true,
            Some((j, b)) => better(row.area_mean, &angles, rows[*j].area_mean, b),
        };
        if wins {
            best = Some((i, angles));
        }
    }
    Ok(best.map(|(i, _)| i))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tie {
    pub angles: Vec<f64>,
    pub area_mean: f64,
    pub area_std: f64,
}

/// Rows other than the winner whose mean is within one combined standard
/// deviation `sqrt(σ_best² + σ_row²)` of the winner, closest first.
pub(crate) fn collect_ties(rows: &[TraceRow], best: usize) -> Result<(Vec<Tie>, bool)> {
    let b = &rows[best];
    let mut ties = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if i == best {
            continue;
        }
        let combined = (b.area_std.powi(2) + row.area_std.powi(2)).sqrt();
        if row.area_mean - b.area_mean <= combined {
            ties.push(Tie {
                angles: row.parsed_angles()?,
                area_mean: row.area_mean,
                area_std: row.area_std,
            });
        }
    }
    ties.sort_by(|x, y| {
        x.area_mean
            .total_cmp(&y.area_mean)
            .then_with(|| compare_angles(&x.angles, &y.angles))
    });
    let truncated = ties.len() > MAX_TIES;
    ties.truncate(MAX_TIES);
    Ok((ties, truncated))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub kind: SearchKind,
    pub n: u64,
    pub level: f64,
    pub seed: u64,
    pub best: RootConfiguration,
    /// Winner's estimate under the shared sample plan; the minimum over the trace.
    pub best_area: AreaEstimate,
    /// Winner re-estimated with ten times as many points.
    pub refined_area: Option<AreaEstimate>,
    pub evaluated: u64,
    pub ties: Vec<Tie>,
    pub ties_truncated: bool,
    /// Local search only.
    pub cycles: Option<u32>,
    pub converged: Option<bool>,
    /// Trace CSV file name, relative to the report's directory.
    pub trace_file: Option<String>,
    #[serde(skip)]
    pub trace: Vec<TraceRow>,
}

impl SearchReport {
    /// Writes the report JSON to `path` and the trace to `<stem>.trace.csv` next to it.
    pub fn save(&mut self, path: &Path) -> Result<PathBuf> {
        let trace_path = trace_path_for(path);
        self.trace_file = trace_path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned());
        write_trace(&trace_path, &self.trace)?;
        let json = serde_json::to_string_pretty(self)?;
        fs::write(path, json + "\n").map_err(|e| LemniError::io(path, e))?;
        Ok(trace_path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| LemniError::io(path, e))?;
        let mut report: SearchReport = serde_json::from_str(&text)?;
        if let Some(name) = &report.trace_file {
            let trace_path = path.parent().unwrap_or_else(|| Path::new(".")).join(name);
            report.trace = read_trace(&trace_path)?;
        }
        Ok(report)
    }
}

fn trace_path_for(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    path.with_file_name(format!("{stem}.trace.csv"))
}

pub fn write_trace(path: &Path, rows: &[TraceRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| LemniError::csv(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| LemniError::csv(path, e))?;
    }
    w.flush().map_err(|e| LemniError::io(path, e))?;
    Ok(())
}

pub fn read_trace(path: &Path) -> Result<Vec<TraceRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| LemniError::csv(path, e))?;
    r.deserialize()
        .collect::<std::result::Result<Vec<TraceRow>, _>>()
        .map_err(|e| LemniError::csv(path, e))
}
