//! Synthetic dataset generators.
//!
//! All generators draw from ChaCha8, a counter-based generator with 2^64
//! independent streams; each view gets its own stream so per-view generation
//! can run in parallel without changing the output.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::{MultiViewDataset, ViewMatrix};
use crate::error::Result;

/// ChaCha8 stream `stream` of the generator seeded with `seed`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Which views the two-moon dataset carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoMoonVariant {
    /// Two jittered renderings of the moons.
    Pure,
    /// The pure views plus one view of pure Gaussian noise.
    Noisy,
}

/// Parameters of the interleaving half-circle dataset.
#[derive(Debug, Clone)]
pub struct TwoMoonSpec {
    pub n_per_cluster: usize,
    pub variant: TwoMoonVariant,
    pub moon_noise_sd: f64,
    pub noise_view_dim: usize,
    pub seed: u64,
}

impl Default for TwoMoonSpec {
    fn default() -> Self {
        Self {
            n_per_cluster: 100,
            variant: TwoMoonVariant::Pure,
            moon_noise_sd: 0.1,
            noise_view_dim: 2,
            seed: 0,
        }
    }
}

/// Standard deviation of the class-independent noise view.
const NOISE_VIEW_SD: f64 = 1.0;

/// Two interleaving unit half-circles, the second offset by (1, 0.5). Views
/// render the same underlying points with independent Gaussian jitter; the
/// noisy variant appends an isotropic Gaussian view carrying no class signal.
pub fn make_two_moon(spec: &TwoMoonSpec) -> Result<MultiViewDataset> {
    let m = spec.n_per_cluster;
    let n = 2 * m;
    let mut base = DMatrix::zeros(2, n);
    for i in 0..m {
        let theta = std::f64::consts::PI * (i as f64) / ((m - 1).max(1) as f64);
        base[(0, i)] = theta.cos();
        base[(1, i)] = theta.sin();
        base[(0, m + i)] = 1.0 - theta.cos();
        base[(1, m + i)] = 0.5 - theta.sin();
    }
    let labels: Vec<usize> = (0..n).map(|i| usize::from(i >= m)).collect();

    let mut views = Vec::new();
    for view_idx in 0..2u64 {
        let mut rng = seeded_rng(spec.seed, view_idx + 1);
        let mut m = base.clone();
        if spec.moon_noise_sd > 0.0 {
            let jitter = Normal::new(0.0, spec.moon_noise_sd).expect("positive sd");
            for x in m.iter_mut() {
                *x += jitter.sample(&mut rng);
            }
        }
        views.push(ViewMatrix::new(m)?);
    }
    if spec.variant == TwoMoonVariant::Noisy {
        let mut rng = seeded_rng(spec.seed, 3);
        let noise = Normal::new(0.0, NOISE_VIEW_SD).expect("positive sd");
        let m = DMatrix::from_fn(spec.noise_view_dim, n, |_, _| noise.sample(&mut rng));
        views.push(ViewMatrix::new(m)?);
    }
    let name = match spec.variant {
        TwoMoonVariant::Pure => format!("two-moon-pure-n{}-sd{}-seed{}", m, spec.moon_noise_sd, spec.seed),
        TwoMoonVariant::Noisy => format!(
            "two-moon-noisy-n{}-sd{}-noiseview-gauss-sd{}-dim{}-seed{}",
            m, spec.moon_noise_sd, NOISE_VIEW_SD, spec.noise_view_dim, spec.seed
        ),
    };
    MultiViewDataset::new(name, views, Some(labels))
}

/// Parameters of the planted-feature dataset: per view, the first
/// `informative_per_view` features carry class structure and the rest are
/// class-independent noise.
#[derive(Debug, Clone)]
pub struct PlantedSpec {
    pub n: usize,
    pub c: usize,
    pub views: usize,
    pub informative_per_view: usize,
    pub noise_per_view: usize,
    /// Minimum pairwise distance between class centers in the informative
    /// block of each view.
    pub separation: f64,
    pub seed: u64,
}

/// Boolean mask over (view, feature) marking the planted informative rows.
pub type PlantedMask = Vec<Vec<bool>>;

/// Gaussian class blobs on the informative features, unit Gaussian noise on
/// the rest. Class centers are rescaled so their minimum pairwise distance is
/// exactly `separation`.
pub fn make_planted(spec: &PlantedSpec) -> Result<(MultiViewDataset, PlantedMask)> {
    let labels: Vec<usize> = (0..spec.n).map(|i| i * spec.c / spec.n).collect();
    let mut views = Vec::with_capacity(spec.views);
    let mut mask = Vec::with_capacity(spec.views);
    for v in 0..spec.views {
        let mut rng = seeded_rng(spec.seed, v as u64 + 1);
        let inf = spec.informative_per_view;
        let d = inf + spec.noise_per_view;
        let std_normal = Normal::new(0.0, 1.0).expect("unit sd");

        // Each informative coordinate assigns the classes a random permutation
        // of equally spaced offsets, so every planted feature separates every
        // class somewhere; the block is then rescaled so the closest pair of
        // class centers sits exactly `separation` apart.
        let mut centers = DMatrix::zeros(inf, spec.c);
        if spec.separation > 0.0 && spec.c > 1 && inf > 0 {
            let offsets: Vec<f64> = (0..spec.c)
                .map(|j| 2.0 * j as f64 / (spec.c - 1) as f64 - 1.0)
                .collect();
            for f in 0..inf {
                let mut perm: Vec<usize> = (0..spec.c).collect();
                for j in (1..spec.c).rev() {
                    perm.swap(j, rng.random_range(0..=j));
                }
                for (class, &slot) in perm.iter().enumerate() {
                    centers[(f, class)] = offsets[slot];
                }
            }
            let mut min_dist = f64::INFINITY;
            for a in 0..spec.c {
                for b in (a + 1)..spec.c {
                    let dist = (centers.column(a) - centers.column(b)).norm();
                    min_dist = min_dist.min(dist);
                }
            }
            if min_dist > 0.0 {
                centers *= spec.separation / min_dist;
            }
        }

        let mut m = DMatrix::zeros(d, spec.n);
        for (i, &label) in labels.iter().enumerate() {
            for f in 0..inf {
                m[(f, i)] = centers[(f, label)] + std_normal.sample(&mut rng);
            }
            for f in inf..d {
                m[(f, i)] = std_normal.sample(&mut rng);
            }
        }
        views.push(ViewMatrix::new(m)?);
        // with zero separation nothing carries class signal
        let informative = spec.separation > 0.0 && spec.c > 1;
        let mut view_mask = vec![informative; inf];
        view_mask.extend(std::iter::repeat_n(false, spec.noise_per_view));
        mask.push(view_mask);
    }
    let name = format!(
        "planted-n{}-c{}-v{}-inf{}-noise{}-sep{}-seed{}",
        spec.n, spec.c, spec.views, spec.informative_per_view, spec.noise_per_view, spec.separation, spec.seed
    );
    let ds = MultiViewDataset::new(name, views, Some(labels))?;
    Ok((ds, mask))
}
