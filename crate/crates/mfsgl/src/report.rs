//! Run report assembly and artifact serialization.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::Value;

use crate::dataset::format_value;
use crate::error::{Error, Result};
use crate::solver::{BlockTimings, FeatureRanking, RankedFeature, SolverConfig, SolverState};

/// How many ranking entries are inlined into the report; the full ranking
/// goes to its own file.
pub const RANKING_INLINE_LIMIT: usize = 100;

#[derive(Debug, Serialize)]
pub struct IterationRecord {
    pub objective: f64,
    pub lambda: f64,
    pub mu: f64,
    pub component_count: usize,
    pub alpha: Vec<f64>,
}

/// JSON report of one solver run. The `timings` subtree is the only part
/// that varies between identical runs.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub dataset: String,
    pub config: SolverConfig,
    pub converged: bool,
    pub iterations: usize,
    pub final_component_count: usize,
    pub final_lambda: f64,
    pub final_mu: f64,
    pub history: Vec<IterationRecord>,
    pub ranking_top: Vec<RankedFeature>,
    pub timings: BlockTimings,
}

impl RunReport {
    pub fn new(
        dataset: &str,
        config: &SolverConfig,
        state: &SolverState,
        ranking: &FeatureRanking,
    ) -> Self {
        let history = (0..state.objective_history.len())
            .map(|i| IterationRecord {
                objective: state.objective_history[i],
                lambda: state.lambda_history[i],
                mu: state.mu_history[i],
                component_count: state.component_count_history[i],
                alpha: state.alpha_history[i].clone(),
            })
            .collect();
        RunReport {
            dataset: dataset.to_string(),
            config: config.clone(),
            converged: state.converged,
            iterations: state.iterations,
            final_component_count: *state.component_count_history.last().unwrap_or(&0),
            final_lambda: state.lambda,
            final_mu: state.mu,
            history,
            ranking_top: ranking
                .entries
                .iter()
                .take(RANKING_INLINE_LIMIT)
                .cloned()
                .collect(),
            timings: state.timings.clone(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let body = serde_json::to_string_pretty(self)
            .map_err(|e| Error::InvalidConfig(format!("report serialization: {e}")))?;
        fs::write(path, body)?;
        Ok(())
    }
}

/// Strips the volatile `timings` subtree from a report JSON string, for
/// byte-level comparisons between runs.
pub fn without_timings(report_json: &str) -> Result<String> {
    let mut value: Value = serde_json::from_str(report_json)
        .map_err(|e| Error::InvalidConfig(format!("report parse: {e}")))?;
    if let Some(obj) = value.as_object_mut() {
        obj.remove("timings");
    }
    serde_json::to_string_pretty(&value).map_err(|e| Error::InvalidConfig(format!("report: {e}")))
}

/// Writes the full ranking, one `view feature score` line per feature.
pub fn write_ranking(ranking: &FeatureRanking, path: &Path) -> Result<()> {
    let mut out = String::new();
    for e in &ranking.entries {
        out.push_str(&format!("{} {} {}\n", e.view, e.feature, format_value(e.score)));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a ranking file written by [`write_ranking`].
pub fn read_ranking(path: &Path) -> Result<FeatureRanking> {
    if !path.exists() {
        return Err(Error::FileMissing(path.to_path_buf()));
    }
    let text = fs::read_to_string(path)?;
    let mut entries = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                row: line_no + 1,
                col: 1,
                msg: "expected 'view feature score'".into(),
            });
        }
        let parse_usize = |s: &str, col: usize| {
            s.parse::<usize>().map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                row: line_no + 1,
                col,
                msg: e.to_string(),
            })
        };
        let score = fields[2].parse::<f64>().map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            row: line_no + 1,
            col: 3,
            msg: e.to_string(),
        })?;
        entries.push(RankedFeature {
            view: parse_usize(fields[0], 1)?,
            feature: parse_usize(fields[1], 2)?,
            score,
        });
    }
    Ok(FeatureRanking { entries })
}

/// Writes a dense matrix with a `rows cols` header line, one matrix row per
/// following line.
pub fn write_dense(m: &DMatrix<f64>, path: &Path) -> Result<()> {
    let mut out = format!("{} {}\n", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(&format_value(m[(i, j)]));
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranking_round_trip() {
        let ranking = FeatureRanking {
            entries: vec![
                RankedFeature { view: 0, feature: 3, score: 0.75 },
                RankedFeature { view: 1, feature: 0, score: 0.5 },
            ],
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ranking.txt");
        write_ranking(&ranking, &path).unwrap();
        let back = read_ranking(&path).unwrap();
        assert_eq!(ranking, back);
    }

    #[test]
    fn without_timings_drops_only_timings() {
        let json = r#"{"dataset":"d","timings":{"init_ms":3.5},"iterations":2}"#;
        let cleaned = without_timings(json).unwrap();
        assert!(!cleaned.contains("timings"));
        assert!(cleaned.contains("iterations"));
    }
}
