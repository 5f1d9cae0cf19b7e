use std::path::PathBuf;

use clap::Args;
use mfsgl::dataset::{load_dataset, normalize_views};
use mfsgl::solver::{select_features, SolverConfig};
use mfsgl::{Error, Result};
use rayon::prelude::*;

use crate::commands::eval::evaluate;
use crate::commands::fit::fit_and_rank;
use crate::config::RunConfigFile;

#[derive(Args)]
pub struct SweepArgs {
    /// Run configuration with `grid` axes and `selection_sizes`
    #[arg(long)]
    config: PathBuf,
}

struct Row {
    k: usize,
    gamma: f64,
    s: usize,
    acc: Option<f64>,
    nmi: Option<f64>,
    status: String,
}

pub fn run(args: SweepArgs) -> Result<()> {
    let config = RunConfigFile::load(&args.config)?;
    if config.grid.k.is_empty() || config.grid.gamma.is_empty() || config.selection_sizes.is_empty() {
        return Err(Error::InvalidConfig(
            "sweep needs non-empty grid.k, grid.gamma, and selection_sizes".into(),
        ));
    }
    let raw = load_dataset(&config.manifest)?;
    let ds = normalize_views(&raw, config.normalize);

    let cells: Vec<(usize, f64)> = config
        .grid
        .k
        .iter()
        .flat_map(|&k| config.grid.gamma.iter().map(move |&gamma| (k, gamma)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;

    let rows: Vec<Row> = pool.install(|| {
        cells
            .par_iter()
            .flat_map_iter(|&(k, gamma)| run_cell(&ds, &raw, &config, k, gamma))
            .collect()
    });

    std::fs::create_dir_all(&config.output_dir)?;
    let table_path = config.output_dir.join("results.csv");
    let mut table = String::from("k,gamma,s,acc,nmi,status\n");
    for row in &rows {
        let acc = row.acc.map(|v| format!("{v:.6}")).unwrap_or_default();
        let nmi = row.nmi.map(|v| format!("{v:.6}")).unwrap_or_default();
        table.push_str(&format!(
            "{},{},{},{acc},{nmi},{}\n",
            row.k, row.gamma, row.s, row.status
        ));
    }
    std::fs::write(&table_path, table)?;

    if let Some(best) = rows
        .iter()
        .filter(|r| r.acc.is_some())
        .max_by(|a, b| a.acc.unwrap().total_cmp(&b.acc.unwrap()))
    {
        println!(
            "best: k={} gamma={} s={} acc={:.6} nmi={:.6}",
            best.k,
            best.gamma,
            best.s,
            best.acc.unwrap(),
            best.nmi.unwrap()
        );
    }
    println!("{}", table_path.display());
    if rows.iter().all(|r| r.status != "ok") {
        return Err(Error::ConvergenceFailure("every sweep cell failed".into()));
    }
    Ok(())
}

// fitting runs on the normalized views; selection and evaluation run on the
// raw dataset, exactly like the fit/select/eval file pipeline
fn run_cell(
    ds: &mfsgl::dataset::MultiViewDataset,
    raw: &mfsgl::dataset::MultiViewDataset,
    config: &RunConfigFile,
    k: usize,
    gamma: f64,
) -> Vec<Row> {
    let solver = SolverConfig {
        k,
        gamma,
        ..config.solver.clone()
    };
    let fitted = solver.validate(ds).and_then(|()| fit_and_rank(ds, &solver));
    config
        .selection_sizes
        .iter()
        .map(|&s| match &fitted {
            Ok((_, ranking)) => {
                let outcome = select_features(raw, ranking, s).and_then(|reduced| {
                    evaluate(&reduced, solver.c, config.eval.restarts, config.eval.seed)
                });
                match outcome {
                    Ok((_, acc, nmi)) => Row {
                        k,
                        gamma,
                        s,
                        acc: Some(acc),
                        nmi: Some(nmi),
                        status: "ok".into(),
                    },
                    Err(err) => failed_row(k, gamma, s, &err),
                }
            }
            Err(err) => failed_row(k, gamma, s, err),
        })
        .collect()
}

fn failed_row(k: usize, gamma: f64, s: usize, err: &Error) -> Row {
    // commas would break the table format
    let status = format!("failed: {err}").replace(',', ";");
    Row {
        k,
        gamma,
        s,
        acc: None,
        nmi: None,
        status,
    }
}
