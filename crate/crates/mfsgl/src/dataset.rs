//! Multi-view dataset loading, validation, normalization and persistence.
//!
//! In memory a view is stored features-by-samples (`d_v x n`). On disk each
//! view is a delimiter-separated text file with one sample per line; matrices
//! are transposed on load. A JSON manifest lists the view files in order
//! together with an optional labels file.

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One view of a multi-view dataset: a `d_v x n` matrix of finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewMatrix {
    values: DMatrix<f64>,
}

impl ViewMatrix {
    /// Wraps a features-by-samples matrix, rejecting non-finite entries and
    /// degenerate shapes (`d_v >= 1`, `n >= 2`).
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        Self::checked(values, 0)
    }

    fn checked(values: DMatrix<f64>, view: usize) -> Result<Self> {
        if values.nrows() < 1 || values.ncols() < 2 {
            return Err(Error::InvalidConfig(format!(
                "view {view}: need d_v >= 1 and n >= 2, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        for col in 0..values.ncols() {
            for row in 0..values.nrows() {
                if !values[(row, col)].is_finite() {
                    return Err(Error::NonFiniteValue { view, row, col });
                }
            }
        }
        Ok(Self { values })
    }

    /// Number of features `d_v`.
    pub fn dim(&self) -> usize {
        self.values.nrows()
    }

    /// Number of samples `n`.
    pub fn samples(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }
}

/// An ordered collection of views over the same samples, with optional
/// ground-truth labels.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiViewDataset {
    pub name: String,
    views: Vec<ViewMatrix>,
    labels: Option<Vec<usize>>,
}

impl MultiViewDataset {
    /// Validates that all views share the same sample count and that labels,
    /// if present, form a contiguous class range with no empty class.
    pub fn new(name: impl Into<String>, views: Vec<ViewMatrix>, labels: Option<Vec<usize>>) -> Result<Self> {
        if views.is_empty() {
            return Err(Error::InvalidConfig("dataset needs at least one view".into()));
        }
        let n = views[0].samples();
        for (v, view) in views.iter().enumerate() {
            if view.samples() != n {
                return Err(Error::DimensionMismatch {
                    view: v,
                    expected: n,
                    found: view.samples(),
                });
            }
        }
        if let Some(ref labels) = labels {
            if labels.len() != n {
                return Err(Error::InvalidLabels(format!(
                    "expected {n} labels, found {}",
                    labels.len()
                )));
            }
            let c = labels.iter().max().map(|m| m + 1).unwrap_or(0);
            let mut seen = vec![false; c];
            for &l in labels {
                seen[l] = true;
            }
            if let Some(missing) = seen.iter().position(|s| !s) {
                return Err(Error::InvalidLabels(format!("class {missing} is empty")));
            }
        }
        Ok(Self {
            name: name.into(),
            views,
            labels,
        })
    }

    pub fn views(&self) -> &[ViewMatrix] {
        &self.views
    }

    pub fn view_count(&self) -> usize {
        self.views.len()
    }

    pub fn samples(&self) -> usize {
        self.views[0].samples()
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Total number of features across all views.
    pub fn total_features(&self) -> usize {
        self.views.iter().map(|v| v.dim()).sum()
    }

    /// All views stacked along the feature axis into one matrix.
    pub fn stacked(&self) -> DMatrix<f64> {
        let n = self.samples();
        let d: usize = self.total_features();
        let mut out = DMatrix::zeros(d, n);
        let mut offset = 0;
        for view in &self.views {
            out.rows_mut(offset, view.dim()).copy_from(view.values());
            offset += view.dim();
        }
        out
    }

    /// Returns a copy with samples reordered by `perm` (column i of the output
    /// is column perm[i] of the input).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.samples();
        if perm.len() != n {
            return Err(Error::InvalidConfig("permutation length mismatch".into()));
        }
        let views = self
            .views
            .iter()
            .map(|view| {
                let src = view.values();
                let mut m = DMatrix::zeros(view.dim(), n);
                for (i, &p) in perm.iter().enumerate() {
                    m.set_column(i, &src.column(p));
                }
                ViewMatrix::new(m)
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = self
            .labels
            .as_ref()
            .map(|l| perm.iter().map(|&p| l[p]).collect());
        Self::new(self.name.clone(), views, labels)
    }
}

/// Manifest entry for a single view file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViewEntry {
    pub path: String,
    pub dim: usize,
    #[serde(default = "default_delimiter")]
    pub delimiter: char,
    #[serde(default)]
    pub header: bool,
}

fn default_delimiter() -> char {
    ','
}

/// JSON manifest describing a multi-view dataset on disk. View paths are
/// resolved relative to the manifest's directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    #[serde(default)]
    pub name: String,
    pub views: Vec<ViewEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels_path: Option<String>,
}

impl DatasetManifest {
    pub fn from_file(path: &Path) -> Result<(Self, PathBuf)> {
        if !path.exists() {
            return Err(Error::FileMissing(path.to_path_buf()));
        }
        let text = fs::read_to_string(path)?;
        let manifest: DatasetManifest = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
        Ok((manifest, base))
    }
}

/// How to normalize each feature row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum NormalizeMode {
    None,
    #[default]
    MinMax,
    ZScore,
}

impl std::str::FromStr for NormalizeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "minmax" => Ok(Self::MinMax),
            "zscore" => Ok(Self::ZScore),
            other => Err(Error::InvalidConfig(format!(
                "unknown normalization mode '{other}' (expected none|minmax|zscore)"
            ))),
        }
    }
}

/// Loads a dataset described by a manifest file.
pub fn load_dataset(manifest_path: &Path) -> Result<MultiViewDataset> {
    let (manifest, base) = DatasetManifest::from_file(manifest_path)?;
    load_from_manifest(&manifest, &base)
}

/// Loads a dataset from an already parsed manifest, resolving paths against
/// `base`.
pub fn load_from_manifest(manifest: &DatasetManifest, base: &Path) -> Result<MultiViewDataset> {
    let mut views = Vec::with_capacity(manifest.views.len());
    let mut n: Option<usize> = None;
    for (v, entry) in manifest.views.iter().enumerate() {
        let path = base.join(&entry.path);
        let rows = read_numeric_rows(&path, entry.delimiter, entry.header)?;
        let samples = rows.len();
        if rows.iter().any(|r| r.len() != entry.dim) {
            let found = rows.iter().map(|r| r.len()).find(|&l| l != entry.dim).unwrap();
            return Err(Error::DimensionMismatch {
                view: v,
                expected: entry.dim,
                found,
            });
        }
        match n {
            None => n = Some(samples),
            Some(expected) if expected != samples => {
                return Err(Error::DimensionMismatch {
                    view: v,
                    expected,
                    found: samples,
                });
            }
            _ => {}
        }
        // rows are samples; transpose into the d_v x n layout
        let mat = DMatrix::from_fn(entry.dim, samples, |f, s| rows[s][f]);
        views.push(ViewMatrix::checked(mat, v)?);
    }
    let labels = match &manifest.labels_path {
        Some(rel) => Some(read_labels(&base.join(rel))?),
        None => None,
    };
    MultiViewDataset::new(manifest.name.clone(), views, labels)
}

fn read_numeric_rows(path: &Path, delimiter: char, header: bool) -> Result<Vec<Vec<f64>>> {
    if !path.exists() {
        return Err(Error::FileMissing(path.to_path_buf()));
    }
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    let skip = usize::from(header);
    for (line_no, line) in text.lines().enumerate().skip(skip) {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (col_no, field) in line.split(delimiter).enumerate() {
            let value = field.trim().parse::<f64>().map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                row: line_no + 1,
                col: col_no + 1,
                msg: e.to_string(),
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            row: 1,
            col: 1,
            msg: "file contains no data rows".into(),
        });
    }
    Ok(rows)
}

fn read_labels(path: &Path) -> Result<Vec<usize>> {
    if !path.exists() {
        return Err(Error::FileMissing(path.to_path_buf()));
    }
    let text = fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.trim()
                .parse::<usize>()
                .map_err(|e| Error::InvalidLabels(format!("{}: {e}", path.display())))
        })
        .collect()
}

/// Writes a dataset into `dir` (one file per view, optional labels file, and
/// `manifest.json`), returning the manifest path. Values are written with 17
/// significant digits so that a reload reproduces them bit for bit.
pub fn save_dataset(ds: &MultiViewDataset, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(ds.view_count());
    for (v, view) in ds.views().iter().enumerate() {
        let file = format!("view_{}.csv", v + 1);
        write_matrix_samples_as_rows(&dir.join(&file), view.values(), ',')?;
        entries.push(ViewEntry {
            path: file,
            dim: view.dim(),
            delimiter: ',',
            header: false,
        });
    }
    let labels_path = match ds.labels() {
        Some(labels) => {
            let file = "labels.txt";
            let body: String = labels.iter().map(|l| format!("{l}\n")).collect();
            fs::write(dir.join(file), body)?;
            Some(file.to_string())
        }
        None => None,
    };
    let manifest = DatasetManifest {
        name: ds.name.clone(),
        views: entries,
        labels_path,
    };
    let manifest_path = dir.join("manifest.json");
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest).expect("manifest serializes"))?;
    Ok(manifest_path)
}

/// Writes a `d x n` matrix as n lines of d delimiter-separated values.
pub fn write_matrix_samples_as_rows(path: &Path, m: &DMatrix<f64>, delimiter: char) -> Result<()> {
    let mut out = String::new();
    for s in 0..m.ncols() {
        for f in 0..m.nrows() {
            if f > 0 {
                out.push(delimiter);
            }
            out.push_str(&format_value(m[(f, s)]));
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// 17 significant digits: enough for exact f64 round-trips through text.
pub(crate) fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// Applies per-feature normalization to every view.
pub fn normalize_views(ds: &MultiViewDataset, mode: NormalizeMode) -> MultiViewDataset {
    if mode == NormalizeMode::None {
        return ds.clone();
    }
    let views = ds
        .views()
        .iter()
        .map(|view| {
            let mut m = view.values().clone();
            for f in 0..m.nrows() {
                let mut row: Vec<f64> = m.row(f).iter().copied().collect();
                normalize_row(&mut row, mode);
                for (s, &x) in row.iter().enumerate() {
                    m[(f, s)] = x;
                }
            }
            ViewMatrix::new(m).expect("normalization preserves finiteness")
        })
        .collect();
    MultiViewDataset::new(ds.name.clone(), views, ds.labels().map(|l| l.to_vec()))
        .expect("normalization preserves shape")
}

fn normalize_row(row: &mut [f64], mode: NormalizeMode) {
    let n = row.len() as f64;
    match mode {
        NormalizeMode::None => {}
        NormalizeMode::MinMax => {
            let min = row.iter().copied().fold(f64::INFINITY, f64::min);
            let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let span = max - min;
            if span > 0.0 {
                for x in row.iter_mut() {
                    *x = (*x - min) / span;
                }
            } else {
                row.fill(0.0);
            }
        }
        NormalizeMode::ZScore => {
            let mean = row.iter().sum::<f64>() / n;
            let var = row.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
            if var > 0.0 {
                let sd = var.sqrt();
                for x in row.iter_mut() {
                    *x = (*x - mean) / sd;
                }
            } else {
                row.fill(0.0);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn two_view_dataset() -> MultiViewDataset {
        let v1 = ViewMatrix::new(dmatrix![1.0, 2.0, 3.0, 4.0;
                                          5.0, 6.0, 7.0, 8.0;
                                          9.0, 10.0, 11.0, 12.0])
        .unwrap();
        let v2 = ViewMatrix::new(dmatrix![0.5, 1.5, 2.5, 3.5;
                                          4.5, 5.5, 6.5, 7.5])
        .unwrap();
        MultiViewDataset::new("toy", vec![v1, v2], Some(vec![0, 0, 1, 1])).unwrap()
    }

    #[test]
    fn dataset_shape_passthrough() {
        let ds = two_view_dataset();
        assert_eq!(ds.view_count(), 2);
        assert_eq!(ds.samples(), 4);
        assert_eq!(ds.views()[0].dim(), 3);
        assert_eq!(ds.views()[1].dim(), 2);
    }

    #[test]
    fn mismatched_sample_counts_rejected() {
        let v1 = ViewMatrix::new(DMatrix::from_element(3, 4, 1.0)).unwrap();
        let v2 = ViewMatrix::new(DMatrix::from_element(2, 5, 1.0)).unwrap();
        let err = MultiViewDataset::new("bad", vec![v1, v2], None).unwrap_err();
        match err {
            Error::DimensionMismatch { view, expected, found } => {
                assert_eq!((view, expected, found), (1, 4, 5));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_finite_rejected() {
        let mut m = DMatrix::from_element(2, 3, 1.0);
        m[(1, 2)] = f64::NAN;
        assert!(matches!(
            ViewMatrix::new(m),
            Err(Error::NonFiniteValue { row: 1, col: 2, .. })
        ));
    }

    #[test]
    fn labels_with_empty_class_rejected() {
        let v = ViewMatrix::new(DMatrix::from_element(1, 3, 0.0)).unwrap();
        let err = MultiViewDataset::new("bad", vec![v], Some(vec![0, 2, 2])).unwrap_err();
        assert!(matches!(err, Error::InvalidLabels(_)));
    }

    #[test]
    fn normalize_none_is_identity() {
        let ds = two_view_dataset();
        let out = normalize_views(&ds, NormalizeMode::None);
        assert_eq!(out, ds);
    }

    #[test]
    fn minmax_maps_to_unit_interval() {
        let v = ViewMatrix::new(dmatrix![1.0, 2.0, 3.0]).unwrap();
        let ds = MultiViewDataset::new("row", vec![v], None).unwrap();
        let out = normalize_views(&ds, NormalizeMode::MinMax);
        let row = out.views()[0].values();
        assert_eq!(row[(0, 0)], 0.0);
        assert_eq!(row[(0, 1)], 0.5);
        assert_eq!(row[(0, 2)], 1.0);
    }

    #[test]
    fn constant_feature_zscore_becomes_zero_row() {
        let v = ViewMatrix::new(dmatrix![5.0, 5.0, 5.0; 1.0, 2.0, 3.0]).unwrap();
        let ds = MultiViewDataset::new("c", vec![v], None).unwrap();
        let out = normalize_views(&ds, NormalizeMode::ZScore);
        let m = out.views()[0].values();
        assert!(m.row(0).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn zscore_moments() {
        use rand::Rng;
        let mut rng = crate::synth::seeded_rng(11, 0);
        let m = DMatrix::from_fn(5, 20, |_, _| rng.random_range(-3.0..3.0));
        let ds = MultiViewDataset::new("z", vec![ViewMatrix::new(m).unwrap()], None).unwrap();
        let out = normalize_views(&ds, NormalizeMode::ZScore);
        let m = out.views()[0].values();
        for f in 0..5 {
            let vals: Vec<f64> = m.row(f).iter().copied().collect();
            let mean = vals.iter().sum::<f64>() / 20.0;
            let var = vals.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 20.0;
            assert!(mean.abs() < 1e-12, "mean {mean}");
            assert!((var - 1.0).abs() < 1e-12, "var {var}");
        }
    }

    #[test]
    fn permuted_reorders_columns_and_labels() {
        let ds = two_view_dataset();
        let out = ds.permuted(&[3, 2, 1, 0]).unwrap();
        assert_eq!(out.labels().unwrap(), &[1, 1, 0, 0]);
        assert_eq!(out.views()[0].values()[(0, 0)], 4.0);
    }
}
