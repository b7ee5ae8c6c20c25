use std::fs;
use std::path::Path;

use linkrel::mcsim::{self, McConfig};
use linkrel::metrics::{self, DeadlineFailure, DEFAULT_DEADLINES, DEFAULT_GRID_STEPS, DEFAULT_GRID_TMAX};
use linkrel::modelfile::{self, LoadedModel, ModelFile};
use linkrel::numerics::GridSpec;
use linkrel::{Grid, SystemModel};
use serde::Serialize;

use crate::output::{write_csv, write_json};
use crate::{CliError, GridArgs};

fn load(path: &Path) -> Result<LoadedModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    modelfile::load_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn resolve_grid(loaded: &LoadedModel, args: &GridArgs) -> Result<Grid, CliError> {
    let file = loaded.grid.as_ref().map(Grid::spec);
    let t_max = args.t_max.or(file.map(|g| g.t_max)).unwrap_or(DEFAULT_GRID_TMAX);
    let steps = args.steps.or(file.map(|g| g.steps)).unwrap_or(DEFAULT_GRID_STEPS);
    Ok(Grid::new(t_max, steps)?)
}

fn ensure_dir(out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))
}

#[derive(Serialize)]
struct SystemSummary {
    mean_tttf: f64,
    mean_tttf_error: f64,
    failure_before: Vec<DeadlineFailure>,
}

#[derive(Serialize)]
struct RetransmissionSummary {
    retransmissions: usize,
    copies: usize,
    #[serde(flatten)]
    summary: SystemSummary,
}

#[derive(Serialize)]
struct AnalyzeSummary {
    model: String,
    grid: GridSpec,
    baseline: SystemSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    retransmission: Option<RetransmissionSummary>,
}

fn summarize(model: &SystemModel, deadlines: &[f64]) -> Result<SystemSummary, CliError> {
    let q = metrics::mean_tttf(model)?;
    Ok(SystemSummary {
        mean_tttf: q.value,
        mean_tttf_error: q.est_error,
        failure_before: metrics::deadline_failures(model, deadlines)?,
    })
}

fn write_curves(path: &Path, model: &SystemModel, grid: &Grid) -> Result<(), CliError> {
    let curves = metrics::curves(model, grid)?;
    write_csv(path, &["t", "survival", "hazard", "pdf"], curves.rows())
}

fn print_summary(label: &str, s: &SystemSummary) {
    println!("{label}: mean TTTF {} ± {:.1e}", s.mean_tttf, s.mean_tttf_error);
    for d in &s.failure_before {
        println!("  P(fail before {}) = {}", d.deadline, d.probability);
    }
}

pub fn analyze(path: &Path, out: &Path, grid_args: &GridArgs, retx: Option<usize>) -> Result<(), CliError> {
    let loaded = load(path)?;
    let grid = resolve_grid(&loaded, grid_args)?;
    let deadlines = loaded.deadlines.clone().unwrap_or_else(|| DEFAULT_DEADLINES.to_vec());
    let k = retx.or(loaded.retransmissions).unwrap_or(0);
    let model = &loaded.model;

    let baseline = summarize(model, &deadlines)?;
    let retransmission = if k > 0 {
        let redundant = model.with_retransmission(k + 1)?;
        let summary = summarize(&redundant, &deadlines)?;
        Some((redundant, RetransmissionSummary { retransmissions: k, copies: k + 1, summary }))
    } else {
        None
    };

    ensure_dir(out)?;
    write_curves(&out.join("curves.csv"), model, &grid)?;
    if let Some((redundant, _)) = &retransmission {
        write_curves(&out.join("curves_retransmission.csv"), redundant, &grid)?;
    }

    print_summary("baseline", &baseline);
    if let Some((_, r)) = &retransmission {
        print_summary(&format!("with {} retransmission(s)", r.retransmissions), &r.summary);
    }
    let summary = AnalyzeSummary {
        model: path.display().to_string(),
        grid: grid.spec(),
        baseline,
        retransmission: retransmission.map(|(_, r)| r),
    };
    write_json(&out.join("summary.json"), &summary)
}

#[derive(Serialize)]
struct RankEntry {
    component: String,
    birnbaum: f64,
    improvement: f64,
}

#[derive(Serialize)]
struct RankedAt {
    t: f64,
    ranking: Vec<RankEntry>,
}

pub fn importance(path: &Path, out: &Path, grid_args: &GridArgs) -> Result<(), CliError> {
    let loaded = load(path)?;
    let grid = resolve_grid(&loaded, grid_args)?;
    let rows = metrics::importance_ranking(&loaded.model, &grid);
    ensure_dir(out)?;
    write_csv(
        &out.join("importance.csv"),
        &["t", "component", "birnbaum", "improvement"],
        rows.iter().map(|r| (r.t, &r.component_name, r.birnbaum, r.improvement)),
    )?;

    let ranked = metrics::importance_at(&loaded.model, &metrics::DEFAULT_REPORT_TIMES)?;
    let mut summary: Vec<RankedAt> = Vec::new();
    for r in ranked {
        if summary.last().map(|s| s.t) != Some(r.t) {
            summary.push(RankedAt { t: r.t, ranking: Vec::new() });
        }
        summary.last_mut().expect("pushed").ranking.push(RankEntry {
            component: r.component_name,
            birnbaum: r.birnbaum,
            improvement: r.improvement,
        });
    }
    for s in &summary {
        let names: Vec<&str> = s.ranking.iter().map(|e| e.component.as_str()).collect();
        println!("t = {}: {}", s.t, names.join(" > "));
    }
    write_json(&out.join("importance_summary.json"), &summary)
}

#[derive(Serialize)]
struct SimulationSummary {
    model: String,
    n_samples: usize,
    seed: u64,
    chunk_size: usize,
    retransmissions: usize,
    mean_tttf: f64,
    std_error: f64,
    degenerate: bool,
    analytic_mean_tttf: f64,
    max_abs_deviation: f64,
}

pub fn simulate(
    path: &Path,
    out: &Path,
    grid_args: &GridArgs,
    samples: usize,
    seed: u64,
    retx: Option<usize>,
) -> Result<(), CliError> {
    if samples == 0 {
        return Err(CliError::Invalid("--samples must be at least 1".into()));
    }
    let loaded = load(path)?;
    let grid = resolve_grid(&loaded, grid_args)?;
    let k = retx.or(loaded.retransmissions).unwrap_or(0);
    let model = if k > 0 { loaded.model.with_retransmission(k + 1)? } else { loaded.model.clone() };

    let cfg = McConfig::new(samples, seed);
    let result = mcsim::run(&model, &cfg, &grid)?;
    let analytic = metrics::mean_tttf(&model)?;

    let mut rows = Vec::with_capacity(grid.len());
    let mut max_dev = 0.0f64;
    for (t, emp) in result.empirical_survival.iter() {
        let exact = model.survival(t)?;
        let dev = (emp - exact).abs();
        max_dev = max_dev.max(dev);
        rows.push((t, emp, exact, dev));
    }
    ensure_dir(out)?;
    write_csv(
        &out.join("simulation.csv"),
        &["t", "empirical_survival", "analytic_survival", "abs_deviation"],
        rows,
    )?;

    if result.is_degenerate() {
        eprintln!("relcli: warning: {samples} sample(s); standard error is degenerate");
    }
    println!(
        "simulated mean TTTF {} ± {} (analytic {}), n = {}",
        result.mean_tttf, result.std_error, analytic.value, result.n_samples
    );
    write_json(
        &out.join("simulation.json"),
        &SimulationSummary {
            model: path.display().to_string(),
            n_samples: result.n_samples,
            seed,
            chunk_size: cfg.chunk_size,
            retransmissions: k,
            mean_tttf: result.mean_tttf,
            std_error: result.std_error,
            degenerate: result.is_degenerate(),
            analytic_mean_tttf: analytic.value,
            max_abs_deviation: max_dev,
        },
    )
}

pub fn export(path: &Path) -> Result<(), CliError> {
    let loaded = load(path)?;
    println!("{}", ModelFile::from_loaded(&loaded).to_json());
    Ok(())
}
