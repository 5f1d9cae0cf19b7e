#![allow(dead_code)] // each test binary uses its own subset of the oracles

//! Independent oracles shared by the integration and acceptance suites.
//!
//! Everything here deliberately avoids the library's own numerical paths:
//! the eigensolver is a hand-rolled Jacobi sweep, distances are naive double
//! loops, the simplex solve is support enumeration, and ACC is factorial
//! brute force.

use mfsgl::synth::seeded_rng;
use nalgebra::DMatrix;
use rand::Rng;

/// Full symmetric eigendecomposition by cyclic Jacobi rotations; returns
/// eigenvalues ascending with matching eigenvector columns.
pub fn jacobi_eig(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let mut d = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _ in 0..200 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(d[(i, j)].abs());
            }
        }
        if off < 1e-13 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = d[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = d[(p, p)];
                let aqq = d[(q, q)];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    let dip = d[(i, p)];
                    let diq = d[(i, q)];
                    d[(i, p)] = c * dip - s * diq;
                    d[(i, q)] = s * dip + c * diq;
                }
                for j in 0..n {
                    let dpj = d[(p, j)];
                    let dqj = d[(q, j)];
                    d[(p, j)] = c * dpj - s * dqj;
                    d[(q, j)] = s * dpj + c * dqj;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = c * vip - s * viq;
                    v[(i, q)] = s * vip + c * viq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[(i, i)].total_cmp(&d[(j, j)]));
    let values: Vec<f64> = order.iter().map(|&i| d[(i, i)]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (out, &idx) in order.iter().enumerate() {
        vectors.set_column(out, &v.column(idx));
    }
    (values, vectors)
}

/// Squared column distances by explicit double loop.
pub fn naive_sq_dists(y: &DMatrix<f64>) -> DMatrix<f64> {
    let n = y.ncols();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for f in 0..y.nrows() {
                let diff = y[(f, i)] - y[(f, j)];
                acc += diff * diff;
            }
            d[(i, j)] = acc;
        }
    }
    d
}

/// Exact minimizer of `||s + t/(2 mu)||^2` over the simplex (self entry
/// excluded) by enumerating every support pattern and checking feasibility.
/// Exponential in n; keep n <= 14.
pub fn qp_oracle_row(costs: &[f64], self_index: usize, mu: f64) -> Vec<f64> {
    let admissible: Vec<usize> = (0..costs.len()).filter(|&j| j != self_index).collect();
    let m = admissible.len();
    assert!(m <= 14, "support enumeration blows up past n=15");
    let mut best: Option<(f64, Vec<f64>)> = None;
    for pattern in 1u32..(1 << m) {
        let support: Vec<usize> = (0..m)
            .filter(|&b| pattern & (1 << b) != 0)
            .map(|b| admissible[b])
            .collect();
        let size = support.len() as f64;
        let cost_sum: f64 = support.iter().map(|&j| costs[j]).sum();
        // stationarity on the support: s_j = theta - t_j/(2 mu)
        let theta = (1.0 + cost_sum / (2.0 * mu)) / size;
        let s_vals: Vec<f64> = support.iter().map(|&j| theta - costs[j] / (2.0 * mu)).collect();
        if s_vals.iter().any(|&s| s < -1e-12) {
            continue;
        }
        let mut s = vec![0.0; costs.len()];
        for (&j, &val) in support.iter().zip(&s_vals) {
            s[j] = val.max(0.0);
        }
        // self entry is pinned to zero and contributes a constant; skip it
        let objective: f64 = s
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != self_index)
            .map(|(j, &sj)| {
                let z = sj + costs[j] / (2.0 * mu);
                z * z
            })
            .sum();
        match &best {
            Some((obj, _)) if *obj <= objective => {}
            _ => best = Some((objective, s)),
        }
    }
    best.expect("at least the full support is feasible").1
}

/// Best mapping accuracy by trying every permutation of predicted cluster
/// ids; c <= 6 keeps 6! = 720 cheap.
pub fn brute_force_acc(pred: &[usize], truth: &[usize]) -> f64 {
    let c_pred = pred.iter().max().map(|m| m + 1).unwrap_or(0);
    let c_truth = truth.iter().max().map(|m| m + 1).unwrap_or(0);
    let c = c_pred.max(c_truth);
    assert!(c <= 6, "factorial oracle too slow past c=6");
    let mut perm: Vec<usize> = (0..c).collect();
    let mut best = 0usize;
    permute(&mut perm, 0, &mut |p| {
        let matched = pred
            .iter()
            .zip(truth)
            .filter(|&(&a, &b)| p[a] == b)
            .count();
        best = best.max(matched);
    });
    best as f64 / pred.len() as f64
}

fn permute(perm: &mut Vec<usize>, start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == perm.len() {
        visit(perm);
        return;
    }
    for i in start..perm.len() {
        perm.swap(start, i);
        permute(perm, start + 1, visit);
        perm.swap(start, i);
    }
}

/// Random orthonormal n x c matrix from a seeded Gaussian via Gram-Schmidt.
pub fn random_orthonormal(n: usize, c: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = seeded_rng(seed, 9_000);
    loop {
        let raw = DMatrix::from_fn(n, c, |_, _| gauss(&mut rng));
        if let Some(q) = gram_schmidt(&raw) {
            return q;
        }
    }
}

fn gauss(rng: &mut impl Rng) -> f64 {
    // Box-Muller is plenty for test inputs
    let u1: f64 = rng.random_range(1e-12..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn gram_schmidt(raw: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let mut q = raw.clone();
    for j in 0..q.ncols() {
        for i in 0..j {
            let proj = q.column(i).dot(&q.column(j));
            let col_i = q.column(i).into_owned();
            let mut col_j = q.column_mut(j);
            col_j.axpy(-proj, &col_i, 1.0);
        }
        let norm = q.column(j).norm();
        if norm < 1e-8 {
            return None;
        }
        q.column_mut(j).scale_mut(1.0 / norm);
    }
    Some(q)
}

/// Random row-stochastic similarity matrix with zero diagonal.
pub fn random_similarity(n: usize, seed: u64) -> mfsgl::graph::SimilarityGraph {
    let mut rng = seeded_rng(seed, 77);
    let mut s = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            rng.random_range(0.0..1.0)
        }
    });
    for i in 0..n {
        let sum = s.row(i).sum();
        for j in 0..n {
            s[(i, j)] /= sum;
        }
    }
    mfsgl::graph::SimilarityGraph::new(s).expect("row-normalized matrix is valid")
}

/// Random sparse row-stochastic similarity: each row spreads mass over a few
/// random neighbors, giving graphs with interesting component structure.
pub fn random_sparse_similarity(n: usize, per_row: usize, seed: u64) -> mfsgl::graph::SimilarityGraph {
    let mut rng = seeded_rng(seed, 78);
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut picked = std::collections::BTreeSet::new();
        while picked.len() < per_row {
            let j = rng.random_range(0..n);
            if j != i {
                picked.insert(j);
            }
        }
        let w = 1.0 / per_row as f64;
        for j in picked {
            s[(i, j)] = w;
        }
    }
    mfsgl::graph::SimilarityGraph::new(s).expect("row-normalized matrix is valid")
}
