use std::path::PathBuf;

use clap::Args;
use mfsgl::dataset::{load_dataset, MultiViewDataset};
use mfsgl::eval::{acc, kmeans, nmi, Partition};
use mfsgl::{Error, Result};

#[derive(Args)]
pub struct EvalArgs {
    /// Manifest of the (labeled) dataset to evaluate
    #[arg(long)]
    manifest: PathBuf,
    /// Number of clusters for k-means
    #[arg(long)]
    c: usize,
    /// Independent k-means restarts; the best by within-cluster SSE wins
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Existing report JSON to append the metrics to
    #[arg(long)]
    report: Option<PathBuf>,
}

pub fn run(args: EvalArgs) -> Result<()> {
    let ds = load_dataset(&args.manifest)?;
    let (line, _, _) = evaluate(&ds, args.c, args.restarts, args.seed)?;
    println!("{line}");
    if let Some(report_path) = args.report {
        append_to_report(&report_path, &line, args.c)?;
    }
    Ok(())
}

/// Stacks all views, clusters, and scores; returns the output line plus the
/// raw metrics.
pub fn evaluate(ds: &MultiViewDataset, c: usize, restarts: usize, seed: u64) -> Result<(String, f64, f64)> {
    let labels = ds
        .labels()
        .ok_or_else(|| Error::InvalidConfig("evaluation requires labels".into()))?;
    let truth = Partition::new(labels);
    let stacked = ds.stacked();
    let pred = kmeans(&stacked, c, restarts, seed)?;
    let acc_value = acc(&pred, &truth)?;
    let nmi_value = nmi(&pred, &truth)?;
    Ok((
        format!("acc={acc_value:.6} nmi={nmi_value:.6} seed={seed} restarts={restarts}"),
        acc_value,
        nmi_value,
    ))
}

fn append_to_report(path: &PathBuf, line: &str, c: usize) -> Result<()> {
    if !path.exists() {
        return Err(Error::FileMissing(path.clone()));
    }
    let text = std::fs::read_to_string(path)?;
    let mut value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    let fields: Vec<(&str, &str)> = line
        .split_whitespace()
        .filter_map(|kv| kv.split_once('='))
        .collect();
    let mut eval_obj = serde_json::Map::new();
    for (key, val) in fields {
        let parsed = val
            .parse::<f64>()
            .map(serde_json::Value::from)
            .unwrap_or_else(|_| serde_json::Value::from(val));
        eval_obj.insert(key.to_string(), parsed);
    }
    eval_obj.insert("c".into(), serde_json::Value::from(c));
    if let Some(obj) = value.as_object_mut() {
        obj.insert("evaluation".into(), serde_json::Value::Object(eval_obj));
    }
    std::fs::write(path, serde_json::to_string_pretty(&value).expect("report serializes"))?;
    Ok(())
}
