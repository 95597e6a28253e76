//! Batch front end: parses run configs, orchestrates single runs and
//! ε-convergence sequences, invokes the structure analysis, and emits
//! logs, snapshots, curve files and plot-ready data.

mod output;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use fronttrack::config::{build_initial_data, build_model, ModelHandle, RunConfig};
use fronttrack::riemann::CurveBuilder;
use fronttrack::structure::{limit_subcurves, measure_atoms};
use fronttrack::tracker::{self, l1_distance, sample_solution, FrontLog};

#[derive(Parser)]
#[command(name = "fronttrack", about = "Wave-front tracking for 1D conservation laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one ε-approximate front-tracking simulation.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run an ε-sequence and produce a convergence report.
    Converge {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads for independent runs.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Post-process logs produced by run/converge.
    Analyze {
        /// Directory containing config.toml and frontlog_*.txt.
        logdir: PathBuf,
        /// Extra curve requests "family,region,eps" (1-based family).
        #[arg(long, value_name = "F,K,EPS")]
        curves: Vec<String>,
        /// Extra jump points "t,x" to verify.
        #[arg(long, value_name = "T,X")]
        verify: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out } => cmd_run(&config, &out),
        Command::Converge {
            config,
            out,
            workers,
        } => cmd_converge(&config, &out, workers),
        Command::Analyze {
            logdir,
            curves,
            verify,
            out,
        } => cmd_analyze(&logdir, &curves, &verify, out.as_deref()),
    }
}

fn load(config_path: &std::path::Path) -> Result<(RunConfig, ModelHandle)> {
    let cfg = RunConfig::from_file(config_path)
        .with_context(|| format!("loading {}", config_path.display()))?;
    let model = build_model(&cfg).context("building model")?;
    Ok((cfg, model))
}

fn run_one(cfg: &RunConfig, model: &ModelHandle, eps: f64) -> Result<FrontLog> {
    let data = build_initial_data(cfg, model)?;
    let log = tracker::run(
        model.as_flux(),
        cfg.numerics.clone(),
        &data,
        eps,
        cfg.t_end,
        cfg.rho,
        cfg.seed.unwrap_or(0),
    )?;
    Ok(log)
}

fn cmd_run(config_path: &std::path::Path, out: &std::path::Path) -> Result<()> {
    let (cfg, model) = load(config_path)?;
    let eps = cfg
        .eps
        .ok_or_else(|| anyhow::anyhow!("run needs eps in the config"))?;
    std::fs::create_dir_all(out)?;
    std::fs::copy(config_path, out.join("config.toml"))?;
    let log = run_one(&cfg, &model, eps)?;
    output::write_run_artifacts(&cfg, &model, &log, out, None)?;
    for w in &log.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "run complete: {} fronts, {} nodes, artifacts in {}",
        log.fronts.len(),
        log.nodes.len(),
        out.display()
    );
    Ok(())
}

fn cmd_converge(config_path: &std::path::Path, out: &std::path::Path, workers: usize) -> Result<()> {
    let (cfg, model) = load(config_path)?;
    let eps_list = cfg.resolutions()?;
    if eps_list.len() < 2 {
        bail!("converge needs eps_sequence with ≥ 2 values");
    }
    std::fs::create_dir_all(out)?;
    std::fs::copy(config_path, out.join("config.toml"))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()?;
    let results: Vec<Result<FrontLog>> = pool.install(|| {
        use rayon::prelude::*;
        eps_list
            .par_iter()
            .map(|&eps| run_one(&cfg, &model, eps))
            .collect()
    });
    let mut logs = Vec::new();
    for (eps, r) in eps_list.iter().zip(results) {
        match r {
            Ok(log) => logs.push(log),
            Err(e) => {
                // Partial results are preserved; report and stop.
                for log in &logs {
                    output::write_run_artifacts(&cfg, &model, log, out, Some(log.params.eps))?;
                }
                bail!("run at eps = {eps} failed: {e}");
            }
        }
    }
    for log in &logs {
        output::write_run_artifacts(&cfg, &model, log, out, Some(log.params.eps))?;
    }

    // Pairwise L¹ distances of snapshots at shared times.
    let mut report = String::from("# convergence report\n");
    let times = cfg.snapshot_times.clone().unwrap_or_else(|| vec![cfg.t_end]);
    let span = output::domain_span(&logs[0]);
    for t in &times {
        report.push_str(&format!("t {t}\n"));
        for w in logs.windows(2) {
            let p1 = sample_solution(&w[0], *t);
            let p2 = sample_solution(&w[1], *t);
            let d = l1_distance(&p1, &p2, span.0, span.1);
            report.push_str(&format!(
                "  l1 eps {} vs {}: {:.6e}\n",
                w[0].params.eps, w[1].params.eps, d
            ));
        }
    }

    // Limit curves and measure atoms per analysis request.
    if let Some(analysis) = &cfg.analysis {
        let builder = CurveBuilder::new(model.as_flux(), cfg.numerics.clone());
        let refs: Vec<&FrontLog> = logs.iter().collect();
        for req in &analysis.curves {
            if logs.len() >= 3 {
                let lims = limit_subcurves(&refs, &builder, req.eps, req.family - 1, req.region)?;
                report.push_str(&format!(
                    "limit_curves family {} region {} eps {}: {}\n",
                    req.family,
                    req.region,
                    req.eps,
                    lims.len()
                ));
                output::write_limit_curves(&lims, req, out)?;
            }
        }
        let radius = 10.0 * eps_list.last().unwrap();
        let clusters = measure_atoms(&refs, radius);
        report.push_str(&format!("atom_clusters {}\n", clusters.len()));
        for c in clusters.iter().take(50) {
            report.push_str(&format!(
                "  atom t {:.6} x {:.6} mass_ic {:?}\n",
                c.t, c.x, c.mass_ic
            ));
        }
    }
    std::fs::write(out.join("convergence_report.txt"), &report)?;
    println!("convergence report in {}", out.display());
    Ok(())
}

fn cmd_analyze(
    logdir: &std::path::Path,
    curve_args: &[String],
    verify_args: &[String],
    out: Option<&std::path::Path>,
) -> Result<()> {
    let out = out.unwrap_or(logdir).to_path_buf();
    std::fs::create_dir_all(&out)?;
    let (mut cfg, model) = load(&logdir.join("config.toml"))?;

    // Gather every frontlog in the directory, coarsest to finest.
    let mut logs: Vec<FrontLog> = Vec::new();
    let mut entries: Vec<PathBuf> = std::fs::read_dir(logdir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .map(|n| n.starts_with("frontlog") && n.ends_with(".txt"))
                .unwrap_or(false)
        })
        .collect();
    entries.sort();
    for p in &entries {
        let text = std::fs::read_to_string(p)?;
        logs.push(FrontLog::from_text(&text)?);
    }
    if logs.is_empty() {
        bail!("no frontlog*.txt found in {}", logdir.display());
    }
    logs.sort_by(|a, b| b.params.eps.total_cmp(&a.params.eps));

    // Merge CLI requests into the config's analysis section.
    let analysis = cfg.analysis.get_or_insert_with(Default::default);
    for c in curve_args {
        let v: Vec<&str> = c.split(',').collect();
        if v.len() != 3 {
            bail!("--curves wants F,K,EPS");
        }
        analysis.curves.push(fronttrack::config::CurveRequest {
            family: v[0].parse()?,
            region: v[1].parse()?,
            eps: v[2].parse()?,
        });
    }
    for vq in verify_args {
        let v: Vec<&str> = vq.split(',').collect();
        if v.len() != 2 {
            bail!("--verify wants T,X");
        }
        analysis.verify.push(fronttrack::config::VerifyRequest {
            t: v[0].parse()?,
            x: v[1].parse()?,
            strength_floor: 0.05,
            atom_threshold: 1e-4,
        });
    }

    output::write_analysis(&cfg, &model, &logs, &out)?;
    println!("analysis written to {}", out.display());
    Ok(())
}
