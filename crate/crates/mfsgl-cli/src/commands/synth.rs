use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use mfsgl::dataset::save_dataset;
use mfsgl::synth::{make_planted, make_two_moon, PlantedSpec, TwoMoonSpec, TwoMoonVariant};
use mfsgl::Result;

#[derive(Args)]
pub struct SynthArgs {
    #[command(subcommand)]
    kind: SynthKind,
}

#[derive(Subcommand)]
enum SynthKind {
    /// Two interleaving half circles rendered into two views, optionally
    /// plus a pure-noise view
    TwoMoon {
        #[arg(long, value_enum, default_value_t = Variant::Pure)]
        variant: Variant,
        /// Points per cluster
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Gaussian jitter applied to the moon coordinates
        #[arg(long, default_value_t = 0.1)]
        noise_sd: f64,
        /// Dimension of the noise view (noisy variant)
        #[arg(long, default_value_t = 2)]
        noise_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Gaussian class blobs on planted informative features plus pure-noise
    /// features
    Planted {
        /// Total samples
        #[arg(long, default_value_t = 300)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        classes: usize,
        #[arg(long, default_value_t = 3)]
        views: usize,
        /// Informative features per view
        #[arg(long, default_value_t = 10)]
        informative: usize,
        /// Noise features per view
        #[arg(long, default_value_t = 40)]
        noise: usize,
        /// Minimum pairwise distance between class centers
        #[arg(long, default_value_t = 6.0)]
        separation: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Pure,
    Noisy,
}

pub fn run(args: SynthArgs) -> Result<()> {
    match args.kind {
        SynthKind::TwoMoon {
            variant,
            n,
            noise_sd,
            noise_dim,
            seed,
            out,
        } => {
            let spec = TwoMoonSpec {
                n_per_cluster: n,
                variant: match variant {
                    Variant::Pure => TwoMoonVariant::Pure,
                    Variant::Noisy => TwoMoonVariant::Noisy,
                },
                moon_noise_sd: noise_sd,
                noise_view_dim: noise_dim,
                seed,
            };
            let ds = make_two_moon(&spec)?;
            let manifest = save_dataset(&ds, &out)?;
            write_scatter_files(&ds, &out)?;
            println!("{}", manifest.display());
        }
        SynthKind::Planted {
            n,
            classes,
            views,
            informative,
            noise,
            separation,
            seed,
            out,
        } => {
            let spec = PlantedSpec {
                n,
                c: classes,
                views,
                informative_per_view: informative,
                noise_per_view: noise,
                separation,
                seed,
            };
            let (ds, mask) = make_planted(&spec)?;
            let manifest = save_dataset(&ds, &out)?;
            let mask_json = serde_json::to_string_pretty(&mask)
                .expect("mask serializes");
            std::fs::write(out.join("planted_mask.json"), mask_json)?;
            println!("{}", manifest.display());
        }
    }
    Ok(())
}

/// One space-separated text file per view with the sample label appended,
/// for external scatter plotting.
fn write_scatter_files(ds: &mfsgl::dataset::MultiViewDataset, out: &std::path::Path) -> Result<()> {
    let labels = ds.labels().expect("two-moon datasets carry labels");
    for (v, view) in ds.views().iter().enumerate() {
        let mut body = String::new();
        for i in 0..ds.samples() {
            for f in 0..view.dim() {
                body.push_str(&format!("{} ", view.values()[(f, i)]));
            }
            body.push_str(&format!("{}\n", labels[i]));
        }
        std::fs::write(out.join(format!("scatter_view_{}.txt", v + 1)), body)?;
    }
    Ok(())
}
