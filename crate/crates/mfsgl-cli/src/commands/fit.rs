use std::path::{Path, PathBuf};

use clap::Args;
use mfsgl::dataset::{load_dataset, normalize_views, MultiViewDataset};
use mfsgl::report::{write_dense, write_ranking, RunReport};
use mfsgl::solver::{fit, rank_features, FeatureRanking, SolverConfig, SolverState};
use mfsgl::Result;

use crate::config::RunConfigFile;

#[derive(Args)]
pub struct FitArgs {
    /// Run configuration (JSON)
    #[arg(long)]
    config: PathBuf,
}

pub fn run(args: FitArgs) -> Result<()> {
    let config = RunConfigFile::load(&args.config)?;
    let ds = load_dataset(&config.manifest)?;
    let ds = normalize_views(&ds, config.normalize);
    config.solver.validate(&ds)?;
    let (state, ranking) = fit_and_rank(&ds, &config.solver)?;
    std::fs::create_dir_all(&config.output_dir)?;
    write_artifacts(&ds, &config.solver, &state, &ranking, &config.output_dir)?;
    println!("{}", config.output_dir.join("report.json").display());
    Ok(())
}

pub fn fit_and_rank(ds: &MultiViewDataset, solver: &SolverConfig) -> Result<(SolverState, FeatureRanking)> {
    let state = fit(ds, solver)?;
    let ranking = rank_features(&state);
    Ok((state, ranking))
}

pub fn write_artifacts(
    ds: &MultiViewDataset,
    solver: &SolverConfig,
    state: &SolverState,
    ranking: &FeatureRanking,
    dir: &Path,
) -> Result<()> {
    RunReport::new(&ds.name, solver, state, ranking).write(&dir.join("report.json"))?;
    write_ranking(ranking, &dir.join("ranking.txt"))?;
    mfsgl::graph::write_graph(&state.graph, &dir.join("similarity.txt"))?;
    write_dense(&state.indicator, &dir.join("indicator.txt"))?;
    for (v, w) in state.projections.iter().enumerate() {
        write_dense(w.matrix(), &dir.join(format!("projection_v{}.txt", v + 1)))?;
    }
    Ok(())
}
