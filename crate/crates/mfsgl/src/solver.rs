//! Alternating solver: Laplacian assembly, per-view projection fits, the
//! indicator update, the similarity update with its adaptive regularizer,
//! rank-penalty adaptation, and auto view weighting, followed by feature
//! ranking by projection row norms.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{MultiViewDataset, ViewMatrix};
use crate::error::{Error, Result};
use crate::graph::{
    self, build_laplacian, count_components, pairwise_sq_dists, smallest_eigs, LaplacianPair,
    SimilarityGraph, EDGE_EPS,
};
use crate::projection::{fit_projection, ProjectionMatrix, INNER_TOL, MAX_INNER};

/// Floor for the per-view trace term; a perfectly graph-consistent view would
/// otherwise blow the weight formula up.
pub const H_MIN: f64 = 1e-12;

/// Automatically assigned per-view weights `alpha_v = (p/2) h_v^{(p-2)/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewWeights {
    pub alpha: Vec<f64>,
    pub p: f64,
}

impl ViewWeights {
    pub fn uniform(views: usize, p: f64) -> Self {
        Self {
            alpha: vec![1.0 / views as f64; views],
            p,
        }
    }

    /// Weights scaled to sum to one.
    pub fn normalized(&self) -> Vec<f64> {
        let total: f64 = self.alpha.iter().sum();
        self.alpha.iter().map(|a| a / total).collect()
    }
}

/// Solver parameters. `None` projection dims default to `round(d_v/2)`
/// clamped into `[ceil(d_v/3), floor(2 d_v/3)]`; missing JSON fields take
/// these defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub gamma: f64,
    pub p: f64,
    pub k: usize,
    pub c: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda0: Option<f64>,
    pub lambda_factor: f64,
    pub tol: f64,
    pub max_outer: usize,
    pub eps: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            p: 1.0,
            k: 10,
            c: 2,
            m: None,
            lambda0: None,
            lambda_factor: 2.0,
            tol: 1e-5,
            max_outer: 50,
            eps: 1e-8,
            seed: 0,
        }
    }
}

impl SolverConfig {
    /// Checks the configuration against a dataset's shape.
    pub fn validate(&self, ds: &MultiViewDataset) -> Result<()> {
        let n = ds.samples();
        if self.c < 2 {
            return Err(Error::InvalidConfig(format!("c must be >= 2, got {}", self.c)));
        }
        if self.c > n {
            return Err(Error::InvalidConfig(format!("c={} exceeds n={n}", self.c)));
        }
        if self.k == 0 || self.k > n.saturating_sub(2) {
            return Err(Error::InvalidConfig(format!(
                "k={} outside [1, n-2] for n={n}",
                self.k
            )));
        }
        if !(self.p > 0.0 && self.p <= 2.0) {
            return Err(Error::InvalidConfig(format!("p={} outside (0, 2]", self.p)));
        }
        if self.gamma < 0.0 || !self.gamma.is_finite() {
            return Err(Error::InvalidConfig(format!("gamma={} must be >= 0", self.gamma)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tol={} must be > 0", self.tol)));
        }
        if self.max_outer == 0 {
            return Err(Error::InvalidConfig("max_outer must be >= 1".into()));
        }
        if !(self.lambda_factor > 1.0) {
            return Err(Error::InvalidConfig(format!(
                "lambda_factor={} must be > 1",
                self.lambda_factor
            )));
        }
        if !(self.eps > 0.0) {
            return Err(Error::InvalidConfig(format!("eps={} must be > 0", self.eps)));
        }
        if let Some(lambda0) = self.lambda0 {
            if !(lambda0 > 0.0) {
                return Err(Error::InvalidConfig(format!("lambda0={lambda0} must be > 0")));
            }
        }
        for (v, view) in ds.views().iter().enumerate() {
            if view.dim() < 2 {
                return Err(Error::InvalidConfig(format!(
                    "view {v} has a single feature; projection needs d_v >= 2"
                )));
            }
        }
        if let Some(ref m) = self.m {
            if m.len() != ds.view_count() {
                return Err(Error::InvalidConfig(format!(
                    "m has {} entries for {} views",
                    m.len(),
                    ds.view_count()
                )));
            }
            for (v, (&m_v, view)) in m.iter().zip(ds.views()).enumerate() {
                if m_v == 0 || m_v >= view.dim() {
                    return Err(Error::InvalidConfig(format!(
                        "m[{v}]={m_v} outside [1, d_v-1] for d_v={}",
                        view.dim()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Projection dimensions, filling defaults where unspecified.
    pub fn projection_dims(&self, ds: &MultiViewDataset) -> Vec<usize> {
        match &self.m {
            Some(m) => m.clone(),
            None => ds.views().iter().map(|v| default_projection_dim(v.dim())).collect(),
        }
    }
}

/// `round(d/2)` clamped into `[ceil(d/3), floor(2d/3)]` and `[1, d-1]`.
pub fn default_projection_dim(d: usize) -> usize {
    let d_f = d as f64;
    let lo = (d_f / 3.0).ceil() as usize;
    let hi = (2.0 * d_f / 3.0).floor() as usize;
    ((d_f / 2.0).round() as usize).clamp(lo.max(1), hi.max(1)).min(d - 1).max(1)
}

/// Wall-clock time spent in each block of the outer loop.
#[derive(Debug, Clone, Default, Serialize)]
pub struct BlockTimings {
    pub init_ms: f64,
    pub laplacian_ms: f64,
    pub projection_ms: f64,
    pub indicator_ms: f64,
    pub similarity_ms: f64,
    pub weights_ms: f64,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Full state of a solver run.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub graph: SimilarityGraph,
    pub laplacian: LaplacianPair,
    pub projections: Vec<ProjectionMatrix>,
    /// Orthonormal `n x c` matrix spanning the smallest eigenvectors of the
    /// final Laplacian.
    pub indicator: DMatrix<f64>,
    pub weights: ViewWeights,
    pub lambda: f64,
    pub mu: f64,
    pub objective_history: Vec<f64>,
    pub component_count_history: Vec<usize>,
    pub lambda_history: Vec<f64>,
    pub mu_history: Vec<f64>,
    /// Normalized view weights per outer iteration.
    pub alpha_history: Vec<Vec<f64>>,
    pub converged: bool,
    pub iterations: usize,
    pub timings: BlockTimings,
}

/// Trace terms `h_v = Tr(W_v^T X_v L X_v^T W_v)`, floored at [`H_MIN`].
fn trace_terms(
    projections: &[ProjectionMatrix],
    views: &[ViewMatrix],
    lap: &LaplacianPair,
) -> Vec<f64> {
    projections
        .iter()
        .zip(views)
        .map(|(w, x)| {
            let y = w.matrix().transpose() * x.values();
            let h = (&y * lap.matrix() * y.transpose()).trace();
            h.max(H_MIN)
        })
        .collect()
}

/// `alpha_v = (p/2) h_v^{(p-2)/2}`: with `p < 2` a smaller trace term earns a
/// larger weight, and `p = 2` makes every weight exactly one.
pub fn update_view_weights(
    projections: &[ProjectionMatrix],
    views: &[ViewMatrix],
    lap: &LaplacianPair,
    p: f64,
) -> ViewWeights {
    let alpha = trace_terms(projections, views, lap)
        .into_iter()
        .map(|h| {
            if h == H_MIN {
                log::warn!("trace term clamped at {H_MIN}; view weight saturated");
            }
            0.5 * p * h.powf(0.5 * (p - 2.0))
        })
        .collect();
    ViewWeights { alpha, p }
}

/// The indicator matrix: eigenvectors of the `c` smallest eigenvalues of the
/// Laplacian.
pub fn update_indicator(lap: &LaplacianPair, c: usize) -> Result<DMatrix<f64>> {
    let (_, vectors) = smallest_eigs(lap.matrix(), c)?;
    Ok(vectors)
}

/// Default rank penalty: the ratio of mean off-diagonal distance costs, so
/// that `lambda * Q` starts on the same footing as `P` and the adaptation
/// schedule takes it from there.
fn scale_matched_lambda(p: &DMatrix<f64>, q: &DMatrix<f64>) -> f64 {
    let n = p.nrows();
    let pairs = (n * (n - 1)) as f64;
    let p_mean = p.sum() / pairs;
    let q_mean = q.sum() / pairs;
    if q_mean > 0.0 && p_mean > 0.0 {
        p_mean / q_mean
    } else {
        1.0
    }
}

/// Rank-penalty schedule: too many components means the penalty overshot, too
/// few means it must push harder.
pub fn adapt_lambda(component_count: usize, c: usize, lambda: f64, factor: f64) -> f64 {
    match component_count.cmp(&c) {
        std::cmp::Ordering::Greater => lambda / factor,
        std::cmp::Ordering::Less => lambda * factor,
        std::cmp::Ordering::Equal => lambda,
    }
}


/// Evaluates the full objective
/// `sum_v [h_v^{p/2} + gamma sum_i sqrt(||w_vi||^2 + eps)] + mu ||S||_F^2 + 2 lambda Tr(F^T L F)`.
pub fn objective_total(state: &SolverState, views: &[ViewMatrix], config: &SolverConfig) -> f64 {
    objective_parts(
        &state.projections,
        views,
        &state.laplacian,
        &state.indicator,
        state.graph.matrix(),
        state.mu,
        state.lambda,
        config,
    )
}

#[allow(clippy::too_many_arguments)]
fn objective_parts(
    projections: &[ProjectionMatrix],
    views: &[ViewMatrix],
    lap: &LaplacianPair,
    indicator: &DMatrix<f64>,
    s: &DMatrix<f64>,
    mu: f64,
    lambda: f64,
    config: &SolverConfig,
) -> f64 {
    let view_term: f64 = trace_terms(projections, views, lap)
        .iter()
        .zip(projections)
        .map(|(&h, w)| {
            let reg: f64 = (0..w.input_dim())
                .map(|i| (w.matrix().row(i).norm_squared() + config.eps).sqrt())
                .sum();
            h.powf(0.5 * config.p) + config.gamma * reg
        })
        .sum();
    let frobenius: f64 = s.iter().map(|&x| x * x).sum();
    let rank_term = (indicator.transpose() * lap.matrix() * indicator).trace();
    view_term + mu * frobenius + 2.0 * lambda * rank_term
}

/// Runs the alternating loop until the graph settles on `c` components and
/// the objective flattens, or `max_outer` is hit. Non-convergence is reported
/// in the returned state, not as an error.
pub fn fit(ds: &MultiViewDataset, config: &SolverConfig) -> Result<SolverState> {
    config.validate(ds)?;
    let views = ds.views();
    let dims = config.projection_dims(ds);

    let t0 = Instant::now();
    let mut weights = ViewWeights::uniform(views.len(), config.p);
    let (mut graph, mut mu) = graph::init_similarity(ds, &weights.alpha, config.k)?;
    // With no explicit lambda0 the penalty is scale-matched to the distance
    // term at the first similarity update (P and Q are not known yet here).
    let mut lambda = config.lambda0.unwrap_or(f64::NAN);
    let mut timings = BlockTimings {
        init_ms: ms(t0.elapsed()),
        ..Default::default()
    };

    let mut laplacian;
    let mut projections: Vec<ProjectionMatrix> = Vec::new();
    let mut indicator;
    let mut objective_history = Vec::new();
    let mut component_count_history = Vec::new();
    let mut lambda_history = Vec::new();
    let mut mu_history = Vec::new();
    let mut alpha_history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for _ in 0..config.max_outer {
        iterations += 1;

        let t = Instant::now();
        laplacian = build_laplacian(&graph);
        timings.laplacian_ms += ms(t.elapsed());

        let t = Instant::now();
        projections = views
            .par_iter()
            .zip(&dims)
            .zip(&weights.alpha)
            .map(|((x, &m_v), &alpha_v)| {
                fit_projection(
                    x.values(),
                    &laplacian,
                    config.gamma,
                    alpha_v,
                    m_v,
                    config.eps,
                    INNER_TOL,
                    MAX_INNER,
                )
                .map(|(w, _)| w)
            })
            .collect::<Result<Vec<_>>>()?;
        timings.projection_ms += ms(t.elapsed());

        let t = Instant::now();
        indicator = update_indicator(&laplacian, config.c)?;
        timings.indicator_ms += ms(t.elapsed());

        let t = Instant::now();
        let mut p_costs = DMatrix::zeros(ds.samples(), ds.samples());
        for ((x, w), &alpha_v) in views.iter().zip(&projections).zip(&weights.alpha) {
            let projected = w.matrix().transpose() * x.values();
            p_costs += pairwise_sq_dists(&projected) * alpha_v;
        }
        let q_costs = pairwise_sq_dists(&indicator.transpose());
        if lambda.is_nan() {
            lambda = scale_matched_lambda(&p_costs, &q_costs);
        }
        let (new_graph, new_mu) = graph::update_similarity(&p_costs, &q_costs, lambda, config.k)?;
        graph = new_graph;
        mu = new_mu;
        timings.similarity_ms += ms(t.elapsed());

        let t = Instant::now();
        let post_lap = build_laplacian(&graph);
        weights = update_view_weights(&projections, views, &post_lap, config.p);
        timings.weights_ms += ms(t.elapsed());

        let objective = objective_parts(
            &projections,
            views,
            &post_lap,
            &indicator,
            graph.matrix(),
            mu,
            lambda,
            config,
        );
        let components = count_components(&graph, EDGE_EPS);
        objective_history.push(objective);
        component_count_history.push(components);
        lambda_history.push(lambda);
        mu_history.push(mu);
        alpha_history.push(weights.normalized());

        if components == config.c && objective_history.len() >= 2 {
            let prev = objective_history[objective_history.len() - 2];
            if (prev - objective).abs() <= config.tol * prev.abs().max(1e-300) {
                converged = true;
                break;
            }
        }
        lambda = adapt_lambda(components, config.c, lambda, config.lambda_factor);
    }

    if !converged {
        log::warn!("solver stopped after {iterations} iterations without meeting the convergence test");
    }
    // refresh the Laplacian and indicator so they describe the final graph
    laplacian = build_laplacian(&graph);
    indicator = update_indicator(&laplacian, config.c)?;

    Ok(SolverState {
        graph,
        laplacian,
        projections,
        indicator,
        weights,
        lambda,
        mu,
        objective_history,
        component_count_history,
        lambda_history,
        mu_history,
        alpha_history,
        converged,
        iterations,
        timings,
    })
}

/// One scored feature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedFeature {
    pub view: usize,
    pub feature: usize,
    pub score: f64,
}

/// All features sorted by descending projection row norm, ties broken by
/// (view, feature).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRanking {
    pub entries: Vec<RankedFeature>,
}

/// Scores every feature of every view by `||w_vi||_2`.
pub fn rank_features(state: &SolverState) -> FeatureRanking {
    let mut entries = Vec::new();
    for (view, w) in state.projections.iter().enumerate() {
        for feature in 0..w.input_dim() {
            entries.push(RankedFeature {
                view,
                feature,
                score: w.row_norm(feature),
            });
        }
    }
    entries.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| (a.view, a.feature).cmp(&(b.view, b.feature)))
    });
    FeatureRanking { entries }
}

/// Keeps the top `s` ranked features, dropping views that lose every feature.
/// Sample order is unchanged.
pub fn select_features(
    ds: &MultiViewDataset,
    ranking: &FeatureRanking,
    s: usize,
) -> Result<MultiViewDataset> {
    let total = ds.total_features();
    if s == 0 || s > total {
        return Err(Error::InvalidCount { s, total });
    }
    if ranking.entries.len() != total {
        return Err(Error::InvalidConfig(format!(
            "ranking covers {} features but the dataset has {total}",
            ranking.entries.len()
        )));
    }
    let mut keep: Vec<Vec<usize>> = vec![Vec::new(); ds.view_count()];
    for entry in ranking.entries.iter().take(s) {
        if entry.view >= ds.view_count() || entry.feature >= ds.views()[entry.view].dim() {
            return Err(Error::InvalidConfig(format!(
                "ranking entry (view {}, feature {}) out of bounds",
                entry.view, entry.feature
            )));
        }
        keep[entry.view].push(entry.feature);
    }
    let mut views = Vec::new();
    for (v, (view, rows)) in ds.views().iter().zip(&mut keep).enumerate() {
        rows.sort_unstable();
        if rows.is_empty() {
            log::warn!("view {v} lost all features in selection; dropping it");
            continue;
        }
        let src = view.values();
        let mut m = DMatrix::zeros(rows.len(), ds.samples());
        for (out, &f) in rows.iter().enumerate() {
            m.row_mut(out).copy_from(&src.row(f));
        }
        views.push(ViewMatrix::new(m)?);
    }
    MultiViewDataset::new(
        format!("{}-top{s}", ds.name),
        views,
        ds.labels().map(|l| l.to_vec()),
    )
}

/// Component labeling of the final graph as a partition, for comparing the
/// learned structure against ground truth.
pub fn component_partition(state: &SolverState) -> crate::eval::Partition {
    crate::eval::Partition::new(&graph::component_labels(&state.graph, EDGE_EPS))
}

/// Sum of the `c` smallest Laplacian eigenvalues and the indicator trace
/// `Tr(F^T L F)`; at convergence both vanish and agree.
pub fn rank_certificate(state: &SolverState, c: usize) -> Result<(f64, f64)> {
    let (values, _) = smallest_eigs(state.laplacian.matrix(), c)?;
    let eig_sum = values.iter().sum();
    let trace = (state.indicator.transpose() * state.laplacian.matrix() * &state.indicator).trace();
    Ok((eig_sum, trace))
}

/// Spectral component count: multiplicity of near-zero Laplacian eigenvalues.
pub fn spectral_component_count(lap: &LaplacianPair, zero_eps: f64) -> Result<usize> {
    let n = lap.n();
    let (values, _) = smallest_eigs(lap.matrix(), n)?;
    Ok(values.iter().filter(|&&v| v < zero_eps).count())
}
