use std::path::PathBuf;

use clap::Args;
use mfsgl::dataset::{load_dataset, save_dataset};
use mfsgl::report::read_ranking;
use mfsgl::solver::select_features;
use mfsgl::Result;

#[derive(Args)]
pub struct SelectArgs {
    /// Ranking file produced by `fit`
    #[arg(long)]
    ranking: PathBuf,
    /// Manifest of the dataset the ranking refers to
    #[arg(long)]
    manifest: PathBuf,
    /// Number of top features to keep
    #[arg(long)]
    s: usize,
    /// Output directory for the reduced dataset
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: SelectArgs) -> Result<()> {
    let ds = load_dataset(&args.manifest)?;
    let ranking = read_ranking(&args.ranking)?;
    let reduced = select_features(&ds, &ranking, args.s)?;
    let manifest = save_dataset(&reduced, &args.out)?;
    println!("{}", manifest.display());
    Ok(())
}
