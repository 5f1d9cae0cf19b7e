//! Per-view projection learning.
//!
//! Each view gets an orthonormal-column projection `W` minimizing the graph
//! quadratic `Tr(W^T X L X^T W)` plus a row-sparsity penalty. The non-smooth
//! row-norm sum is handled by alternating a diagonal reweighting `G` with an
//! exact smallest-eigenvector solve, which descends the smoothed objective at
//! every step.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{smallest_eigs, LaplacianPair};

/// Smoothing constant added under the row-norm square roots.
pub const DEFAULT_EPS: f64 = 1e-8;
/// Inner-loop stopping tolerance on relative objective change.
pub const INNER_TOL: f64 = 1e-6;
/// Inner-loop iteration cap; in practice a handful of iterations suffice.
pub const MAX_INNER: usize = 30;

/// Orthonormal-column projection for one view.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    w: DMatrix<f64>,
}

impl ProjectionMatrix {
    /// Validates `W^T W = I` (within 1e-8) and `m_v < d_v`.
    pub fn new(w: DMatrix<f64>) -> Result<Self> {
        if w.ncols() >= w.nrows() {
            return Err(Error::InvalidConfig(format!(
                "projection must reduce dimension, got {}x{}",
                w.nrows(),
                w.ncols()
            )));
        }
        let gram = w.transpose() * &w;
        let dev = (gram - DMatrix::identity(w.ncols(), w.ncols())).amax();
        if dev > 1e-8 {
            return Err(Error::InvalidConfig(format!(
                "projection columns not orthonormal (max deviation {dev:.3e})"
            )));
        }
        Ok(Self { w })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.w
    }

    pub fn input_dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn output_dim(&self) -> usize {
        self.w.ncols()
    }

    /// Euclidean norm of row `i`; the feature importance score.
    pub fn row_norm(&self, i: usize) -> f64 {
        self.w.row(i).norm()
    }
}

/// Diagonal of the reweighting matrix `G`.
#[derive(Debug, Clone)]
pub struct ReweightDiag {
    g: DVector<f64>,
}

impl ReweightDiag {
    pub fn identity(d: usize) -> Self {
        Self {
            g: DVector::from_element(d, 1.0),
        }
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.g
    }
}

/// `g_i = 1 / (2 sqrt(||w_i||^2 + eps))` for each row of `W`.
pub fn compute_reweight(w: &ProjectionMatrix, eps: f64) -> ReweightDiag {
    debug_assert!(eps > 0.0);
    let g = DVector::from_fn(w.input_dim(), |i, _| {
        1.0 / (2.0 * (w.matrix().row(i).norm_squared() + eps).sqrt())
    });
    ReweightDiag { g }
}

/// Builds `X L X^T` once per outer step; it does not change across the inner
/// reweighting iterations.
pub fn graph_quadratic(x: &DMatrix<f64>, lap: &LaplacianPair) -> DMatrix<f64> {
    let xl = x * lap.matrix();
    let m = &xl * x.transpose();
    // the product is symmetric up to rounding; make it exact
    let d = m.nrows();
    DMatrix::from_fn(d, d, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

/// Smallest-eigenvector solve of `X L X^T + (gamma/alpha) diag(g)`: the
/// columns of the result span the `m_v` smallest eigenvalues.
pub fn solve_projection_step(
    x: &DMatrix<f64>,
    lap: &LaplacianPair,
    g: &ReweightDiag,
    gamma_over_alpha: f64,
    m_v: usize,
) -> Result<ProjectionMatrix> {
    let base = graph_quadratic(x, lap);
    solve_step_from_quadratic(&base, g, gamma_over_alpha, m_v)
}

fn solve_step_from_quadratic(
    base: &DMatrix<f64>,
    g: &ReweightDiag,
    gamma_over_alpha: f64,
    m_v: usize,
) -> Result<ProjectionMatrix> {
    let d = base.nrows();
    let mut m = base.clone();
    for i in 0..d {
        m[(i, i)] += gamma_over_alpha * g.values()[i];
    }
    let (_, vectors) = smallest_eigs(&m, m_v)?;
    ProjectionMatrix::new(vectors)
}

/// Smoothed objective `Tr(W^T X L X^T W) + gamma * sum_i sqrt(||w_i||^2 + eps)`.
pub fn objective_w(
    x: &DMatrix<f64>,
    lap: &LaplacianPair,
    w: &ProjectionMatrix,
    gamma: f64,
    eps: f64,
) -> f64 {
    let base = graph_quadratic(x, lap);
    objective_from_quadratic(&base, w, gamma, eps)
}

fn objective_from_quadratic(base: &DMatrix<f64>, w: &ProjectionMatrix, gamma: f64, eps: f64) -> f64 {
    let trace = (w.matrix().transpose() * base * w.matrix()).trace();
    let reg: f64 = (0..w.input_dim())
        .map(|i| (w.matrix().row(i).norm_squared() + eps).sqrt())
        .sum();
    trace + gamma * reg
}

/// Alternates the eigen solve with the reweighting until the smoothed
/// objective stops moving. The returned history is non-increasing.
///
/// A requested `m_v >= d_v` is clamped to `d_v - 1`: with a square `W` the
/// row-norm penalty is constant and selection carries no signal.
#[allow(clippy::too_many_arguments)]
pub fn fit_projection(
    x: &DMatrix<f64>,
    lap: &LaplacianPair,
    gamma: f64,
    alpha_v: f64,
    m_v: usize,
    eps: f64,
    tol: f64,
    max_inner: usize,
) -> Result<(ProjectionMatrix, Vec<f64>)> {
    debug_assert!(tol > 0.0 && max_inner >= 1);
    debug_assert!(alpha_v > 0.0);
    let d = x.nrows();
    let m_v = if m_v >= d {
        log::warn!("projection dim {m_v} >= feature dim {d}; clamping to {}", d - 1);
        d - 1
    } else {
        m_v
    };
    let gamma_over_alpha = gamma / alpha_v;
    let base = graph_quadratic(x, lap);
    let mut g = ReweightDiag::identity(d);
    let mut history = Vec::new();
    let mut w = solve_step_from_quadratic(&base, &g, gamma_over_alpha, m_v)?;
    history.push(objective_from_quadratic(&base, &w, gamma_over_alpha, eps));
    if gamma == 0.0 {
        // the reweighting never enters the problem; one eigen solve is exact
        return Ok((w, history));
    }
    for _ in 1..max_inner {
        g = compute_reweight(&w, eps);
        w = solve_step_from_quadratic(&base, &g, gamma_over_alpha, m_v)?;
        let obj = objective_from_quadratic(&base, &w, gamma_over_alpha, eps);
        let prev = *history.last().expect("history nonempty");
        history.push(obj);
        if (prev - obj).abs() <= tol * prev.abs().max(1e-300) {
            break;
        }
    }
    Ok((w, history))
}
