//! Trial execution and persistence.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Plan, SCHEMA_VERSION};
use crate::error::{GapError, Result};
use crate::gaps::{consecutive_gaps, successor_gaps, GapMode, GapRecord, Scaling};
use crate::laws::kth_gap_cdf;
use crate::rng::split_seed;
use crate::sampler::sample_spectrum;
use crate::stats::{factorial_moment_test, ks_test, poisson_dispersion_test, SampleSet, TestReport};

/// Fraction of failed trials above which a run is invalid.
pub const MAX_FAILED_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub ell: usize,
    pub t_raw: f64,
    pub tau_scaled: f64,
    pub base: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub seed: u64,
    pub gaps: Vec<GapRow>,
    pub counts: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default)]
    pub acceptance_warning: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedTrial {
    pub trial: usize,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountSummary {
    pub region_id: String,
    pub mu: f64,
    pub factorial_moments: TestReport,
    pub dispersion: Option<TestReport>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    /// One KS report per gap order, against the limit law.
    pub ks: Vec<TestReport>,
    /// KS reports for the same gaps rescaled with the alternative Ginibre
    /// constant.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ks_alternative: Vec<TestReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counts: Vec<CountSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub schema_version: u32,
    pub complete: bool,
    pub valid: bool,
    pub config: ExperimentConfig,
    pub ensemble: String,
    pub n: usize,
    pub scaling: Scaling,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternative_scaling: Option<Scaling>,
    pub trials: usize,
    pub failed_trials: Vec<FailedTrial>,
    pub acceptance_warnings: usize,
    pub summary: Summary,
    pub wall_clock_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub meta: RunMeta,
    pub trials: Vec<TrialResult>,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentRun {
    pub fn is_valid(&self) -> bool {
        self.meta.valid
    }

    /// Scaled gaps of order `ell` over successful trials, in trial order.
    pub fn scaled_gaps(&self, ell: usize) -> Vec<f64> {
        self.trials
            .iter()
            .filter(|t| t.error.is_none())
            .filter_map(|t| t.gaps.iter().find(|g| g.ell == ell).map(|g| g.tau_scaled))
            .collect()
    }

    pub fn count_column(&self, index: usize) -> Vec<u64> {
        self.trials
            .iter()
            .filter(|t| t.error.is_none())
            .map(|t| t.counts[index])
            .collect()
    }
}

fn all_gaps(plan: &Plan, spectrum: &crate::eigensolver::Spectrum) -> Result<Vec<GapRecord>> {
    match plan.mode {
        GapMode::Successor => successor_gaps(spectrum),
        // Counts may use other intervals; keep every gap.
        GapMode::Consecutive => consecutive_gaps(spectrum, (f64::NEG_INFINITY, f64::INFINITY)),
        GapMode::UnorderedPair => unreachable!("experiments use successor or consecutive gaps"),
    }
}

/// One trial: sample, eigenvalues, gaps, rescaling, counts.
pub fn run_trial(plan: &Plan, k: usize, scaling: &Scaling, trial: usize, seed: u64) -> TrialResult {
    let mut out = TrialResult {
        trial,
        seed,
        gaps: Vec::new(),
        counts: Vec::new(),
        error: None,
        acceptance_warning: false,
    };
    let result = (|| -> Result<()> {
        let (spectrum, sample) = sample_spectrum(&plan.spec, seed)?;
        out.acceptance_warning = sample.acceptance_warning;
        let records = all_gaps(plan, &spectrum)?;
        let mut inside: Vec<&GapRecord> = records.iter().filter(|g| plan.region.contains(g.base)).collect();
        inside.sort_by(|a, b| a.length.total_cmp(&b.length));
        if inside.len() < k {
            return Err(GapError::InvalidArgument(format!(
                "only {} gaps with base in the region, need {k}",
                inside.len()
            )));
        }
        out.gaps = inside[..k]
            .iter()
            .enumerate()
            .map(|(i, g)| GapRow {
                ell: i + 1,
                t_raw: g.length,
                tau_scaled: scaling.apply(g.length),
                base: g.base,
            })
            .collect();
        let unit = (plan.spec.n as f64).powf(plan.exponent);
        out.counts = plan
            .counts
            .iter()
            .map(|(c, region)| {
                records
                    .iter()
                    .filter(|g| c.lengths.contains(g.length * unit) && region.contains(g.base))
                    .count() as u64
            })
            .collect();
        Ok(())
    })();
    if let Err(e) = result {
        out.error = Some(e.to_string());
        out.gaps.clear();
        out.counts.clear();
    }
    out
}

/// Runs every trial and, when `out_dir` is given, writes gaps.csv,
/// counts.csv and finally run.json.
pub fn run_experiment(config: &ExperimentConfig, out_dir: Option<&Path>) -> Result<ExperimentRun> {
    let started = Instant::now();
    let plan = config.plan()?;
    let scaling = plan.rule.scaling(plan.spec.n)?;
    let alternative = plan.alternative.as_ref().map(|r| r.scaling(plan.spec.n)).transpose()?;
    let k = config.k;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| GapError::InvalidArgument(format!("cannot build worker pool: {e}")))?;
    let trials: Vec<TrialResult> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|i| run_trial(&plan, k, &scaling, i, split_seed(config.master_seed, i as u64)))
            .collect()
    });

    let failed: Vec<FailedTrial> = trials
        .iter()
        .filter_map(|t| {
            t.error.as_ref().map(|e| FailedTrial {
                trial: t.trial,
                seed: t.seed,
                error: e.clone(),
            })
        })
        .collect();
    let valid = failed.len() as f64 <= MAX_FAILED_FRACTION * config.trials as f64;

    let mut run = ExperimentRun {
        meta: RunMeta {
            schema_version: SCHEMA_VERSION,
            complete: false,
            valid,
            config: config.clone(),
            ensemble: plan.spec.kind.name().to_string(),
            n: plan.spec.n,
            scaling,
            alternative_scaling: alternative,
            trials: config.trials,
            acceptance_warnings: trials.iter().filter(|t| t.acceptance_warning).count(),
            failed_trials: failed,
            summary: Summary::default(),
            wall_clock_seconds: 0.0,
        },
        trials,
        output_dir: out_dir.map(Path::to_path_buf),
    };
    run.meta.summary = summarize(&run, &plan, config)?;

    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        // A stale marker would make a partial rewrite look complete.
        let marker = dir.join("run.json");
        if marker.exists() {
            fs::remove_file(&marker)?;
        }
        write_gaps_csv(&dir.join("gaps.csv"), &run.trials)?;
        write_counts_csv(&dir.join("counts.csv"), &run.trials, &plan)?;
    }
    run.meta.complete = true;
    run.meta.wall_clock_seconds = started.elapsed().as_secs_f64();
    if let Some(dir) = out_dir {
        let tmp = dir.join("run.json.partial");
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string_pretty(&run.meta)?.as_bytes())?;
        f.write_all(b"\n")?;
        f.sync_all()?;
        fs::rename(&tmp, dir.join("run.json"))?;
    }
    Ok(run)
}

fn summarize(run: &ExperimentRun, plan: &Plan, config: &ExperimentConfig) -> Result<Summary> {
    let mut summary = Summary::default();
    let density = config.density(&plan.spec)?;
    for ell in 1..=config.k {
        let taus = run.scaled_gaps(ell);
        let law = plan.law(ell);
        if taus.len() < crate::stats::KS_MIN_SAMPLES {
            summary
                .notes
                .push(format!("tau_{ell}: {} samples, too few for a KS test", taus.len()));
            continue;
        }
        let target = format!("P({ell}, x^{})", law.q);
        let set = SampleSet::new(taus)?;
        summary.ks.push(ks_test(
            &set,
            |x| kth_gap_cdf(&law, x.max(0.0)).unwrap_or(0.0),
            &target,
        )?);
        if let (Some(alt), Some(_)) = (&run.meta.alternative_scaling, &plan.alternative) {
            let ratio = alt.factor() / run.meta.scaling.factor();
            let alt_set = SampleSet::new(set.values().iter().map(|t| t * ratio).collect())?;
            let mut r = ks_test(&alt_set, |x| kth_gap_cdf(&law, x.max(0.0)).unwrap_or(0.0), &target)?;
            r.name = format!("ks_constant_{:.6}", alt.constant);
            summary.ks_alternative.push(r);
        }
    }
    for (idx, (c, region)) in plan.counts.iter().enumerate() {
        let counts = run.count_column(idx);
        if counts.is_empty() {
            continue;
        }
        let mu = plan.intensity(c, region, density.as_ref())?;
        let factorial_moments = factorial_moment_test(&counts, mu, 3, 3.0)?;
        let dispersion = if counts.len() >= crate::stats::DISPERSION_MIN_COUNTS {
            Some(poisson_dispersion_test(&counts, 0.01)?)
        } else {
            None
        };
        summary.counts.push(CountSummary {
            region_id: c.id.clone(),
            mu,
            factorial_moments,
            dispersion,
        });
    }
    Ok(summary)
}

fn write_gaps_csv(path: &Path, trials: &[TrialResult]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["trial", "seed", "ell", "t_raw", "tau_scaled", "base_re", "base_im"])?;
    for t in trials {
        for g in &t.gaps {
            w.write_record([
                t.trial.to_string(),
                t.seed.to_string(),
                g.ell.to_string(),
                format!("{:e}", g.t_raw),
                format!("{:e}", g.tau_scaled),
                format!("{:e}", g.base.re),
                format!("{:e}", g.base.im),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_counts_csv(path: &Path, trials: &[TrialResult], plan: &Plan) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["trial", "region_id", "count"])?;
    for t in trials {
        for ((c, _), count) in plan.counts.iter().zip(&t.counts) {
            w.write_record([t.trial.to_string(), c.id.clone(), count.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `(trial, ell, tau_scaled)` as read back from gaps.csv.
pub type ScaledGapRow = (usize, usize, f64);

/// Reads a finished run directory; fails if run.json is missing, marked
/// incomplete, or has another schema version.
pub fn load_run(dir: &Path) -> Result<(RunMeta, Vec<ScaledGapRow>)> {
    let meta_path = dir.join("run.json");
    if !meta_path.exists() {
        return Err(GapError::InvalidArgument(format!(
            "{} has no run.json (incomplete run)",
            dir.display()
        )));
    }
    let raw: serde_json::Value = serde_json::from_str(&fs::read_to_string(&meta_path)?)?;
    let found = raw.get("schema_version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
    if found != SCHEMA_VERSION {
        return Err(GapError::SchemaMismatch {
            expected: SCHEMA_VERSION,
            found,
        });
    }
    let meta: RunMeta = serde_json::from_value(raw)?;
    if !meta.complete {
        return Err(GapError::InvalidArgument(format!(
            "{} is marked incomplete",
            dir.display()
        )));
    }
    let mut rows = Vec::new();
    let mut r = csv::Reader::from_path(dir.join("gaps.csv"))?;
    for rec in r.records() {
        let rec = rec?;
        let parse = |i: usize| -> Result<&str> {
            rec.get(i)
                .ok_or_else(|| GapError::InvalidArgument(format!("short row in {}", dir.display())))
        };
        let trial: usize = parse(0)?
            .parse()
            .map_err(|e| GapError::InvalidArgument(format!("{e}")))?;
        let ell: usize = parse(2)?
            .parse()
            .map_err(|e| GapError::InvalidArgument(format!("{e}")))?;
        let tau: f64 = parse(4)?
            .parse()
            .map_err(|e| GapError::InvalidArgument(format!("{e}")))?;
        rows.push((trial, ell, tau));
    }
    Ok((meta, rows))
}
