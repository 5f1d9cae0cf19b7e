//! Consensus similarity graph machinery.
//!
//! The graph is an `n x n` nonnegative matrix `S` whose rows live on the
//! probability simplex. Each row is learned independently by minimizing
//! `||s_i + t_i/(2 mu_i)||^2` over the simplex, where `t_i` combines weighted
//! projected distances and spectral-embedding distances. The per-row
//! regularizer `mu_i` is picked so that exactly `k` entries stay nonzero.
//!
//! Self-similarity is pinned to zero: the self index is excluded from the
//! neighbor candidate set, otherwise the simplex constraint alone would put
//! all mass on it.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::dataset::MultiViewDataset;
use crate::error::{Error, Result};

/// Lower clamp for per-row `mu_i`; degenerate cost ties drive the closed-form
/// bound to zero and the row solve needs `mu_i > 0`.
pub const MU_MIN: f64 = 1e-10;

/// Default edge threshold for connected-component counting: below the row-sum
/// tolerance, above eigensolver noise.
pub const EDGE_EPS: f64 = 1e-8;

/// Row-stochastic similarity matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGraph {
    s: DMatrix<f64>,
}

impl SimilarityGraph {
    /// Validates entries in `[0, 1]` and unit row sums (within 1e-9).
    pub fn new(s: DMatrix<f64>) -> Result<Self> {
        if s.nrows() != s.ncols() {
            return Err(Error::InvalidConfig(format!(
                "similarity matrix must be square, got {}x{}",
                s.nrows(),
                s.ncols()
            )));
        }
        for i in 0..s.nrows() {
            let mut sum = 0.0;
            for j in 0..s.ncols() {
                let v = s[(i, j)];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidConfig(format!(
                        "similarity s[{i},{j}] = {v} outside [0, 1]"
                    )));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidConfig(format!(
                    "similarity row {i} sums to {sum}, expected 1"
                )));
            }
        }
        Ok(Self { s })
    }

    pub fn n(&self) -> usize {
        self.s.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    /// Symmetrized edge weight `(s_ij + s_ji) / 2`.
    pub fn edge(&self, i: usize, j: usize) -> f64 {
        0.5 * (self.s[(i, j)] + self.s[(j, i)])
    }
}

/// Degree diagonal and Laplacian assembled from a similarity graph.
#[derive(Debug, Clone)]
pub struct LaplacianPair {
    degree: DVector<f64>,
    laplacian: DMatrix<f64>,
}

impl LaplacianPair {
    pub fn degree(&self) -> &DVector<f64> {
        &self.degree
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.laplacian
    }

    pub fn n(&self) -> usize {
        self.degree.len()
    }
}

/// `L = D - (S^T + S)/2` with `D_ii = sum_j (s_ij + s_ji)/2`.
pub fn build_laplacian(g: &SimilarityGraph) -> LaplacianPair {
    let n = g.n();
    let s = g.matrix();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = 0.5 * (s[(i, j)] + s[(j, i)]);
        }
    }
    let degree = DVector::from_fn(n, |i, _| a.row(i).sum());
    let mut laplacian = -a;
    for i in 0..n {
        laplacian[(i, i)] += degree[i];
    }
    LaplacianPair { degree, laplacian }
}

/// Squared Euclidean distances between the columns of `y`, computed through
/// the Gram matrix. Output is symmetric, nonnegative, zero on the diagonal.
pub fn pairwise_sq_dists(y: &DMatrix<f64>) -> DMatrix<f64> {
    let n = y.ncols();
    let gram = y.transpose() * y;
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (gram[(i, i)] + gram[(j, j)] - 2.0 * gram[(i, j)]).max(0.0);
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    d
}

/// One row of the similarity subproblem: combined costs `t_ij`, the neighbor
/// budget `k`, and the row's own index (excluded from candidacy).
#[derive(Debug, Clone)]
pub struct RowSubproblem {
    pub costs: Vec<f64>,
    pub k: usize,
    pub self_index: usize,
}

/// Admissible costs sorted ascending (stable in the original index order),
/// shifted so the smallest cost is zero, with prefix sums and the
/// closed-form `mu` thresholds that decide how many entries stay positive.
///
/// The row solve is invariant to adding a constant to every cost; anchoring
/// at the minimum keeps `t/(2 mu)` small and avoids catastrophic
/// cancellation when `mu` is clamped against near-tied costs.
struct SortedCosts {
    order: Vec<usize>,
    costs: Vec<f64>,
    /// prefix[j] = sum of the j smallest shifted costs
    prefix: Vec<f64>,
    /// bounds[j] = (j * costs[j] - prefix[j]) / 2; entry j joins the support
    /// exactly when bounds[j] < mu. Nondecreasing in j.
    bounds: Vec<f64>,
}

fn sort_admissible(costs: &[f64], self_index: usize) -> SortedCosts {
    let mut order: Vec<usize> = (0..costs.len()).filter(|&j| j != self_index).collect();
    order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]));
    let base = order.first().map(|&j| costs[j]).unwrap_or(0.0);
    let sorted: Vec<f64> = order.iter().map(|&j| costs[j] - base).collect();
    let mut prefix = Vec::with_capacity(sorted.len() + 1);
    let mut bounds = Vec::with_capacity(sorted.len());
    let mut acc = 0.0;
    prefix.push(0.0);
    for (j, &t) in sorted.iter().enumerate() {
        bounds.push(0.5 * (j as f64) * t - 0.5 * acc);
        acc += t;
        prefix.push(acc);
    }
    SortedCosts {
        order,
        costs: sorted,
        prefix,
        bounds,
    }
}

/// Exact minimizer of `||s + t/(2 mu)||^2` over the probability simplex with
/// the self entry pinned to zero. Support size follows from `mu`: when `mu`
/// is the per-row bound from [`row_mus`], exactly `k` entries are positive.
pub fn solve_row(sub: &RowSubproblem, mu: f64) -> Result<Vec<f64>> {
    if !(mu > 0.0) {
        return Err(Error::InvalidMu(mu));
    }
    let sorted = sort_admissible(&sub.costs, sub.self_index);
    solve_sorted(&sorted, mu, sub.costs.len())
}

fn solve_sorted(sorted: &SortedCosts, mu: f64, n: usize) -> Result<Vec<f64>> {
    let len = sorted.costs.len();
    if len == 0 {
        return Err(Error::KTooLarge { k: 0, n });
    }
    // bounds[0] = 0 < mu, so rho >= 1
    let mut rho = 1;
    while rho < len && sorted.bounds[rho] < mu {
        rho += 1;
    }
    let inv = 1.0 / (2.0 * mu);
    let theta = 1.0 / (rho as f64) + sorted.prefix[rho] * inv / (rho as f64);
    let mut s = vec![0.0; n];
    for r in 0..rho {
        s[sorted.order[r]] = (theta - sorted.costs[r] * inv).clamp(0.0, 1.0);
    }
    Ok(s)
}

/// Per-row regularizer with its clamp flag.
#[derive(Debug, Clone, Copy)]
pub struct RowMu {
    pub mu: f64,
    pub clamped: bool,
}

/// Closed-form per-row bound `mu_i = (k/2) t_{i,k+1} - (1/2) sum_{j<=k} t_ij`
/// over ascending admissible costs, clamped below by [`MU_MIN`].
pub fn row_mus(t: &DMatrix<f64>, k: usize) -> Result<Vec<RowMu>> {
    let n = t.nrows();
    if k == 0 || k + 1 > n.saturating_sub(1) {
        return Err(Error::KTooLarge { k, n });
    }
    Ok((0..n)
        .map(|i| {
            let costs: Vec<f64> = t.row(i).iter().copied().collect();
            let sorted = sort_admissible(&costs, i);
            let raw = sorted.bounds[k];
            if raw > MU_MIN {
                RowMu { mu: raw, clamped: false }
            } else {
                RowMu { mu: MU_MIN, clamped: true }
            }
        })
        .collect())
}

/// Shared regularizer reported for the whole graph: the mean of the per-row
/// bounds.
pub fn determine_mu(t: &DMatrix<f64>, k: usize) -> Result<f64> {
    let mus = row_mus(t, k)?;
    Ok(mus.iter().map(|m| m.mu).sum::<f64>() / mus.len() as f64)
}

/// Learns the similarity graph from combined costs `T = P + lambda Q`. Rows
/// are independent and solved with their own `mu_i`; the returned scalar is
/// the averaged `mu` used for reporting and the rank-penalty schedule.
pub fn update_similarity(
    p: &DMatrix<f64>,
    q: &DMatrix<f64>,
    lambda: f64,
    k: usize,
) -> Result<(SimilarityGraph, f64)> {
    debug_assert_eq!(p.nrows(), p.ncols());
    debug_assert_eq!(p.shape(), q.shape());
    let n = p.nrows();
    let t = if lambda == 0.0 { p.clone() } else { p + q * lambda };
    let mus = row_mus(&t, k)?;
    let mu_avg = mus.iter().map(|m| m.mu).sum::<f64>() / n as f64;
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let costs: Vec<f64> = t.row(i).iter().copied().collect();
            let sorted = sort_admissible(&costs, i);
            solve_sorted(&sorted, mus[i].mu, n)
        })
        .collect::<Result<Vec<_>>>()?;
    let s = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    Ok((SimilarityGraph::new(s)?, mu_avg))
}

/// Initial graph from raw (unprojected) feature distances with the rank
/// penalty off.
pub fn init_similarity(
    ds: &MultiViewDataset,
    alpha: &[f64],
    k: usize,
) -> Result<(SimilarityGraph, f64)> {
    let n = ds.samples();
    let mut p = DMatrix::zeros(n, n);
    for (view, &a) in ds.views().iter().zip(alpha) {
        p += pairwise_sq_dists(view.values()) * a;
    }
    let q = DMatrix::zeros(n, n);
    update_similarity(&p, &q, 0.0, k)
}

/// Connected-component labels of the undirected graph with an edge wherever
/// `(s_ij + s_ji)/2 > edge_eps`. Labels are assigned in discovery order.
pub fn component_labels(g: &SimilarityGraph, edge_eps: f64) -> Vec<usize> {
    let n = g.n();
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        labels[start] = next;
        stack.push(start);
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if labels[j] == usize::MAX && g.edge(i, j) > edge_eps {
                    labels[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    labels
}

/// Number of connected components, by traversal.
pub fn count_components(g: &SimilarityGraph, edge_eps: f64) -> usize {
    component_labels(g, edge_eps)
        .into_iter()
        .max()
        .map(|m| m + 1)
        .unwrap_or(0)
}

/// The `c` smallest eigenpairs of a symmetric matrix, values ascending,
/// vectors orthonormal with the largest-magnitude entry of each made
/// positive so repeated runs agree bit for bit.
pub fn smallest_eigs(m: &DMatrix<f64>, c: usize) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::InvalidConfig(format!(
            "eigensolver needs a square matrix, got {}x{}",
            n,
            m.ncols()
        )));
    }
    if c == 0 || c > n {
        return Err(Error::InvalidConfig(format!(
            "requested {c} eigenpairs of a {n}x{n} matrix"
        )));
    }
    let mut max_asym: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            max_asym = max_asym.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if max_asym > 1e-9 {
        return Err(Error::NotSymmetric { max_asym });
    }
    let sym = DMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 100_000)
        .ok_or_else(|| Error::ConvergenceFailure("symmetric eigensolver stalled".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_fn(c, |i, _| eig.eigenvalues[order[i]]);
    let mut vectors = DMatrix::zeros(n, c);
    for (out, &idx) in order.iter().take(c).enumerate() {
        vectors.set_column(out, &eig.eigenvectors.column(idx));
        fix_sign(&mut vectors, out);
    }
    Ok((values, vectors))
}

fn fix_sign(vectors: &mut DMatrix<f64>, col: usize) {
    let column = vectors.column(col);
    let mut arg = 0;
    let mut best = column[0].abs();
    for (i, &v) in column.iter().enumerate().skip(1) {
        if v.abs() > best {
            best = v.abs();
            arg = i;
        }
    }
    if vectors[(arg, col)] < 0.0 {
        for i in 0..vectors.nrows() {
            vectors[(i, col)] = -vectors[(i, col)];
        }
    }
}

/// Writes a graph as sparse triplets (`i j s_ij`, 0-based) under an `n`
/// header line.
pub fn write_graph(g: &SimilarityGraph, path: &std::path::Path) -> Result<()> {
    let mut out = format!("{}\n", g.n());
    let s = g.matrix();
    for i in 0..g.n() {
        for j in 0..g.n() {
            if s[(i, j)] != 0.0 {
                out.push_str(&format!(
                    "{i} {j} {}\n",
                    crate::dataset::format_value(s[(i, j)])
                ));
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads a graph written by [`write_graph`].
pub fn read_graph(path: &std::path::Path) -> Result<SimilarityGraph> {
    if !path.exists() {
        return Err(Error::FileMissing(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let parse_err = |row: usize, col: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        row,
        col,
        msg,
    };
    let (_, first) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "empty graph file".into()))?;
    let n: usize = first
        .trim()
        .parse()
        .map_err(|e: std::num::ParseIntError| parse_err(1, 1, e.to_string()))?;
    let mut s = DMatrix::zeros(n, n);
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(line_no + 1, 1, "expected 'i j value'".into()));
        }
        let i: usize = fields[0]
            .parse()
            .map_err(|e: std::num::ParseIntError| parse_err(line_no + 1, 1, e.to_string()))?;
        let j: usize = fields[1]
            .parse()
            .map_err(|e: std::num::ParseIntError| parse_err(line_no + 1, 2, e.to_string()))?;
        let v: f64 = fields[2]
            .parse()
            .map_err(|e: std::num::ParseFloatError| parse_err(line_no + 1, 3, e.to_string()))?;
        if i >= n || j >= n {
            return Err(parse_err(line_no + 1, 1, format!("index ({i},{j}) out of range for n={n}")));
        }
        s[(i, j)] = v;
    }
    SimilarityGraph::new(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn laplacian_of_identity_graph_is_zero() {
        let g = SimilarityGraph::new(DMatrix::identity(2, 2)).unwrap();
        let lap = build_laplacian(&g);
        assert_eq!(lap.degree(), &DVector::from_element(2, 1.0));
        assert!(lap.matrix().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn laplacian_of_two_node_path() {
        let g = SimilarityGraph::new(dmatrix![0.0, 1.0; 1.0, 0.0]).unwrap();
        let lap = build_laplacian(&g);
        assert_eq!(lap.matrix(), &dmatrix![1.0, -1.0; -1.0, 1.0]);
        // eigenvalues {0, 2}
        let (vals, _) = smallest_eigs(lap.matrix(), 2).unwrap();
        assert!(vals[0].abs() < 1e-12);
        assert!((vals[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn pairwise_identical_columns_give_zero() {
        let y = dmatrix![1.0, 1.0, 2.0; 3.0, 3.0, 4.0];
        let d = pairwise_sq_dists(&y);
        assert_eq!(d[(0, 1)], 0.0);
        assert_eq!(d[(0, 0)], 0.0);
    }

    #[test]
    fn pairwise_scalar_case() {
        let y = dmatrix![0.0, 3.0];
        let d = pairwise_sq_dists(&y);
        assert!((d[(0, 1)] - 9.0).abs() < 1e-12);
        assert!((d[(1, 0)] - 9.0).abs() < 1e-12);
    }

    #[test]
    fn solve_row_uniform_on_equal_costs() {
        let sub = RowSubproblem {
            costs: vec![7.0, 2.0, 2.0, 2.0, 2.0],
            k: 2,
            self_index: 0,
        };
        let s = solve_row(&sub, 1.0).unwrap();
        assert_eq!(s[0], 0.0);
        for j in 1..5 {
            assert!((s[j] - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn solve_row_hand_case() {
        // self excluded at the end; effective costs [1,2,3,4], mu = 1.5
        let sub = RowSubproblem {
            costs: vec![1.0, 2.0, 3.0, 4.0, 0.0],
            k: 2,
            self_index: 4,
        };
        let s = solve_row(&sub, 1.5).unwrap();
        assert!((s[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((s[1] - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(s[2], 0.0);
        assert_eq!(s[3], 0.0);
        assert_eq!(s[4], 0.0);
    }

    #[test]
    fn solve_row_rejects_bad_mu() {
        let sub = RowSubproblem {
            costs: vec![0.0, 1.0, 2.0],
            k: 1,
            self_index: 0,
        };
        assert!(matches!(solve_row(&sub, 0.0), Err(Error::InvalidMu(_))));
        assert!(matches!(solve_row(&sub, -1.0), Err(Error::InvalidMu(_))));
    }

    #[test]
    fn determine_mu_two_candidate_case() {
        // n = 3, row costs (excluding self) [1, 2], k = 1: mu_i = 1/2 * 2 - 1/2 * 1
        let t = dmatrix![0.0, 1.0, 2.0;
                         1.0, 0.0, 2.0;
                         1.0, 2.0, 0.0];
        let mus = row_mus(&t, 1).unwrap();
        for m in &mus {
            assert!((m.mu - 0.5).abs() < 1e-12);
            assert!(!m.clamped);
        }
        assert!((determine_mu(&t, 1).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn determine_mu_hand_case_and_exact_support() {
        let t = dmatrix![0.0, 1.0, 2.0, 3.0, 4.0;
                         1.0, 0.0, 2.0, 3.0, 4.0;
                         2.0, 1.0, 0.0, 3.0, 4.0;
                         3.0, 1.0, 2.0, 0.0, 4.0;
                         4.0, 1.0, 2.0, 3.0, 0.0];
        let mus = row_mus(&t, 2).unwrap();
        for m in &mus {
            assert!((m.mu - 1.5).abs() < 1e-12);
        }
        for i in 0..5 {
            let sub = RowSubproblem {
                costs: t.row(i).iter().copied().collect(),
                k: 2,
                self_index: i,
            };
            let s = solve_row(&sub, mus[i].mu).unwrap();
            assert_eq!(s.iter().filter(|&&x| x > 0.0).count(), 2);
        }
    }

    #[test]
    fn degenerate_tie_clamps_and_stays_valid() {
        // t_{k+1} == t_k: the bound collapses to 0 and must clamp
        let t = dmatrix![0.0, 1.0, 1.0, 5.0;
                         1.0, 0.0, 1.0, 5.0;
                         1.0, 1.0, 0.0, 5.0;
                         1.0, 1.0, 5.0, 0.0];
        let mus = row_mus(&t, 1).unwrap();
        assert!(mus[0].clamped);
        assert_eq!(mus[0].mu, MU_MIN);
        let sub = RowSubproblem {
            costs: t.row(0).iter().copied().collect(),
            k: 1,
            self_index: 0,
        };
        let s = solve_row(&sub, mus[0].mu).unwrap();
        let sum: f64 = s.iter().sum();
        assert!((sum - 1.0).abs() < 1e-10);
        assert!(s.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn k_too_large_rejected() {
        let t = DMatrix::zeros(4, 4);
        assert!(matches!(row_mus(&t, 3), Err(Error::KTooLarge { .. })));
        assert!(row_mus(&t, 2).is_ok());
    }

    #[test]
    fn update_with_zero_q_matches_lambda_zero() {
        let mut rng = crate::synth::seeded_rng(3, 0);
        let y = DMatrix::from_fn(3, 8, |_, _| rand::Rng::random_range(&mut rng, -1.0..1.0));
        let p = pairwise_sq_dists(&y);
        let q = DMatrix::zeros(8, 8);
        let (g0, mu0) = update_similarity(&p, &q, 0.0, 3).unwrap();
        let (g1, mu1) = update_similarity(&p, &q, 7.5, 3).unwrap();
        assert_eq!(g0.matrix(), g1.matrix());
        assert_eq!(mu0, mu1);
    }

    #[test]
    fn components_of_block_diagonal() {
        let mut s = DMatrix::zeros(6, 6);
        for block in 0..3 {
            let a = 2 * block;
            let b = a + 1;
            s[(a, b)] = 1.0;
            s[(b, a)] = 1.0;
        }
        let g = SimilarityGraph::new(s).unwrap();
        assert_eq!(count_components(&g, EDGE_EPS), 3);
    }

    #[test]
    fn components_of_dense_graph() {
        let n = 5;
        let s = DMatrix::from_element(n, n, 1.0 / n as f64);
        let g = SimilarityGraph::new(s).unwrap();
        assert_eq!(count_components(&g, EDGE_EPS), 1);
    }

    #[test]
    fn smallest_eigs_diagonal() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let (vals, vecs) = smallest_eigs(&m, 2).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 2.0).abs() < 1e-12);
        // signed coordinate axes
        assert!((vecs[(1, 0)] - 1.0).abs() < 1e-12);
        assert!((vecs[(2, 1)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn smallest_eigs_rejects_asymmetric() {
        let m = dmatrix![1.0, 0.5; 0.0, 1.0];
        assert!(matches!(
            smallest_eigs(&m, 1),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn two_component_laplacian_null_space() {
        let s = dmatrix![0.0, 1.0, 0.0, 0.0;
                         1.0, 0.0, 0.0, 0.0;
                         0.0, 0.0, 0.0, 1.0;
                         0.0, 0.0, 1.0, 0.0];
        let g = SimilarityGraph::new(s).unwrap();
        let lap = build_laplacian(&g);
        let (vals, vecs) = smallest_eigs(lap.matrix(), 2).unwrap();
        assert!(vals[0].abs() < 1e-9);
        assert!(vals[1].abs() < 1e-9);
        let gram = vecs.transpose() * &vecs;
        assert!((gram - DMatrix::identity(2, 2)).amax() < 1e-9);
    }

    #[test]
    fn graph_round_trip() {
        let s = dmatrix![0.0, 0.25, 0.75; 0.5, 0.0, 0.5; 1.0, 0.0, 0.0];
        let g = SimilarityGraph::new(s).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("graph.txt");
        write_graph(&g, &path).unwrap();
        let back = read_graph(&path).unwrap();
        assert_eq!(g.matrix(), back.matrix());
    }
}
