use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use gaplab::experiment::{report, run_experiment, verify_kernels, ExperimentConfig};

#[derive(Parser)]
#[command(name = "gaplab", version, about = "Smallest eigenvalue gaps of random matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo experiment from a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `master_seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides `trials`.
        #[arg(long)]
        trials: Option<usize>,
        /// Output directory (default: `output_dir` from the config, else `run`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `parallelism`.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run the deterministic kernel and limit-law checks.
    VerifyKernels {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merge finished runs into summary tables and plot data.
    Report {
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

const EXIT_INVALID_CONFIG: u8 = 2;
const EXIT_INVALID_RUN: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            seed,
            trials,
            out,
            jobs,
        } => {
            let mut cfg = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: invalid config {}: {e}", config.display());
                    return ExitCode::from(EXIT_INVALID_CONFIG);
                }
            };
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(j) = jobs {
                cfg.parallelism = j;
            }
            if let Err(e) = cfg.plan() {
                eprintln!("error: invalid config {}: {e}", config.display());
                return ExitCode::from(EXIT_INVALID_CONFIG);
            }
            let dir = out
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("run"));
            match run_experiment(&cfg, Some(&dir)) {
                Ok(run) => {
                    let m = &run.meta;
                    println!(
                        "{} n={} trials={} failed={} -> {}",
                        m.ensemble,
                        m.n,
                        m.trials,
                        m.failed_trials.len(),
                        dir.display()
                    );
                    for r in m.summary.ks.iter().chain(&m.summary.ks_alternative) {
                        println!(
                            "  {} vs {}: D={:.4} p={:.3e} (N={})",
                            r.name,
                            r.target,
                            r.statistic,
                            r.p_value.unwrap_or(f64::NAN),
                            r.sample_size
                        );
                    }
                    for c in &m.summary.counts {
                        println!(
                            "  counts {}: mu={:.4} factorial moments {} dispersion {}",
                            c.region_id,
                            c.mu,
                            verdict(c.factorial_moments.passed),
                            verdict(c.dispersion.as_ref().and_then(|d| d.passed))
                        );
                    }
                    if run.is_valid() {
                        ExitCode::SUCCESS
                    } else {
                        eprintln!("run marked invalid: more than 1% of trials failed");
                        ExitCode::from(EXIT_INVALID_RUN)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::VerifyKernels { out } => exit(verify(out)),
        Command::Report { runs, out } => exit(run_report(&runs, &out)),
    }
}

fn verdict(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "n/a",
    }
}

fn exit(r: anyhow::Result<()>) -> ExitCode {
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn verify(out: Option<PathBuf>) -> anyhow::Result<()> {
    let bundle = verify_kernels();
    for v in &bundle.verdicts {
        println!(
            "{:<4} {:<34} value={:.6e} threshold={:.3e}  {}",
            if v.passed { "ok" } else { "FAIL" },
            v.name,
            v.value,
            v.threshold,
            v.detail
        );
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join("verify.json");
        std::fs::write(&path, serde_json::to_string_pretty(&bundle)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run_report(runs: &[PathBuf], out: &std::path::Path) -> anyhow::Result<()> {
    let r = report(runs, out)?;
    for (dir, why) in &r.skipped {
        eprintln!("skipped {}: {why}", dir.display());
    }
    for ((group, ell), n) in &r.sample_sizes {
        println!("{group} ell={ell}: {n} samples");
    }
    for f in &r.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
