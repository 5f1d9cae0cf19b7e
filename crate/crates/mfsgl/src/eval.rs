//! Clustering-based evaluation: seeded k-means plus ACC and NMI against
//! ground truth.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::synth::seeded_rng;

/// A hard partition of `n` samples into clusters `0..c`, canonicalized by
/// first-appearance relabeling so equivalent labelings compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    c: usize,
}

impl Partition {
    pub fn new(raw: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let mut assignment = Vec::with_capacity(raw.len());
        for &id in raw {
            let next = map.len();
            let canon = *map.entry(id).or_insert(next);
            assignment.push(canon);
        }
        Partition {
            assignment,
            c: map.len(),
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn cluster_count(&self) -> usize {
        self.c
    }
}

const LLOYD_MAX_ITERS: usize = 300;
const EMPTY_CLUSTER_RETRIES: usize = 5;

/// Lloyd's algorithm on the columns of `data`, best of `restarts` runs by
/// within-cluster sum of squares (ties keep the earliest restart).
///
/// Each restart seeds deterministically: the first center is drawn from the
/// restart's own RNG stream and the rest follow greedy farthest-point
/// selection, so a fixed `seed` reproduces the partition exactly.
pub fn kmeans(data: &DMatrix<f64>, c: usize, restarts: usize, seed: u64) -> Result<Partition> {
    let n = data.ncols();
    if c == 0 || c > n {
        return Err(Error::InvalidConfig(format!(
            "k-means needs 1 <= c <= n, got c={c}, n={n}"
        )));
    }
    if restarts == 0 {
        return Err(Error::InvalidConfig("k-means needs restarts >= 1".into()));
    }
    let runs: Vec<Result<(Vec<usize>, f64)>> = (0..restarts)
        .into_par_iter()
        .map(|r| lloyd_run(data, c, seed, r as u64))
        .collect();
    let mut best: Option<(Vec<usize>, f64)> = None;
    for run in runs {
        let (assign, sse) = run?;
        match &best {
            Some((_, best_sse)) if sse >= *best_sse => {}
            _ => best = Some((assign, sse)),
        }
    }
    let (assignment, _) = best.expect("restarts >= 1");
    Ok(Partition::new(&assignment))
}

fn lloyd_run(data: &DMatrix<f64>, c: usize, seed: u64, restart: u64) -> Result<(Vec<usize>, f64)> {
    let n = data.ncols();
    let mut rng = seeded_rng(seed, restart.wrapping_add(1));
    let mut centers = farthest_point_seeds(data, c, rng.random_range(0..n));
    let mut assignment = vec![0usize; n];
    let mut retries = 0;
    for _ in 0..LLOYD_MAX_ITERS {
        let mut changed = false;
        for i in 0..n {
            let nearest = nearest_center(&data.column(i).into_owned(), &centers);
            if assignment[i] != nearest {
                assignment[i] = nearest;
                changed = true;
            }
        }
        let mut counts = vec![0usize; c];
        for &a in &assignment {
            counts[a] += 1;
        }
        if let Some(empty) = counts.iter().position(|&cnt| cnt == 0) {
            if retries == EMPTY_CLUSTER_RETRIES {
                return Err(Error::EmptyClusterUnrecoverable);
            }
            retries += 1;
            // reseed the empty cluster at the point farthest from its center
            let far = (0..n)
                .max_by(|&a, &b| {
                    let da = (data.column(a) - &centers[assignment[a]]).norm_squared();
                    let db = (data.column(b) - &centers[assignment[b]]).norm_squared();
                    da.total_cmp(&db)
                })
                .expect("n >= 1");
            centers[empty] = data.column(far).into_owned();
            continue;
        }
        for (k, center) in centers.iter_mut().enumerate() {
            center.fill(0.0);
            for i in 0..n {
                if assignment[i] == k {
                    *center += data.column(i);
                }
            }
            *center /= counts[k] as f64;
        }
        if !changed {
            break;
        }
    }
    let sse: f64 = (0..n)
        .map(|i| (data.column(i) - &centers[assignment[i]]).norm_squared())
        .sum();
    Ok((assignment, sse))
}

fn farthest_point_seeds(data: &DMatrix<f64>, c: usize, first: usize) -> Vec<nalgebra::DVector<f64>> {
    let n = data.ncols();
    let mut chosen = vec![first];
    let mut min_dist: Vec<f64> = (0..n)
        .map(|i| (data.column(i) - data.column(first)).norm_squared())
        .collect();
    while chosen.len() < c {
        let next = (0..n)
            .max_by(|&a, &b| min_dist[a].total_cmp(&min_dist[b]))
            .expect("n >= 1");
        chosen.push(next);
        for i in 0..n {
            let d = (data.column(i) - data.column(next)).norm_squared();
            if d < min_dist[i] {
                min_dist[i] = d;
            }
        }
    }
    chosen
        .into_iter()
        .map(|i| data.column(i).into_owned())
        .collect()
}

fn nearest_center(x: &nalgebra::DVector<f64>, centers: &[nalgebra::DVector<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (k, center) in centers.iter().enumerate() {
        let d = (x - center).norm_squared();
        if d < best_d {
            best_d = d;
            best = k;
        }
    }
    best
}

fn contingency(pred: &Partition, truth: &Partition) -> Result<DMatrix<f64>> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: pred.len(),
            right: truth.len(),
        });
    }
    let mut table = DMatrix::zeros(pred.cluster_count(), truth.cluster_count());
    for (&p, &t) in pred.assignment().iter().zip(truth.assignment()) {
        table[(p, t)] += 1.0;
    }
    Ok(table)
}

/// Clustering accuracy: the fraction of samples matched under the best
/// one-to-one mapping between predicted and true clusters, found by optimal
/// assignment on the contingency table.
pub fn acc(pred: &Partition, truth: &Partition) -> Result<f64> {
    let table = contingency(pred, truth)?;
    let size = table.nrows().max(table.ncols());
    // pad to square; assignment ignores the zero rows/columns
    let cost = DMatrix::from_fn(size, size, |i, j| {
        if i < table.nrows() && j < table.ncols() {
            -table[(i, j)]
        } else {
            0.0
        }
    });
    let matched: f64 = hungarian_min(&cost)
        .into_iter()
        .enumerate()
        .map(|(row, col)| -cost[(row, col)])
        .sum();
    Ok(matched / pred.len() as f64)
}

/// Normalized mutual information with geometric-mean normalization and the
/// `0 log 0 = 0` convention. Undefined (error) when either partition has a
/// single cluster.
pub fn nmi(pred: &Partition, truth: &Partition) -> Result<f64> {
    let table = contingency(pred, truth)?;
    if pred.cluster_count() < 2 || truth.cluster_count() < 2 {
        return Err(Error::DegenerateSingleCluster);
    }
    let n = pred.len() as f64;
    let row_sums: Vec<f64> = (0..table.nrows()).map(|i| table.row(i).sum()).collect();
    let col_sums: Vec<f64> = (0..table.ncols()).map(|j| table.column(j).sum()).collect();
    let mut numerator = 0.0;
    for i in 0..table.nrows() {
        for j in 0..table.ncols() {
            let nij = table[(i, j)];
            if nij > 0.0 {
                numerator += nij * (n * nij / (row_sums[i] * col_sums[j])).ln();
            }
        }
    }
    let h_pred: f64 = row_sums.iter().map(|&ni| ni * (ni / n).ln()).sum();
    let h_truth: f64 = col_sums.iter().map(|&nj| nj * (nj / n).ln()).sum();
    let denom = (h_pred * h_truth).sqrt();
    if denom == 0.0 {
        return Err(Error::DegenerateSingleCluster);
    }
    Ok((numerator / denom).clamp(0.0, 1.0))
}

/// Minimum-cost perfect assignment on a square cost matrix (Kuhn-Munkres with
/// potentials). Returns the column assigned to each row.
fn hungarian_min(cost: &DMatrix<f64>) -> Vec<usize> {
    let n = cost.nrows();
    debug_assert_eq!(n, cost.ncols());
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut col_row = vec![0usize; n + 1]; // row matched to each column (1-based, 0 = none)
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        col_row[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = col_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[(i0 - 1, j - 1)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[col_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if col_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_row[j0] = col_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_col = vec![0usize; n];
    for j in 1..=n {
        if col_row[j] > 0 {
            row_col[col_row[j] - 1] = j - 1;
        }
    }
    row_col
}
