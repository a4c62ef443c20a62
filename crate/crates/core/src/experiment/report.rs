//! Merged summaries and plot-ready tables from finished runs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{GapError, Result};
use crate::laws::{kth_gap_cdf, LimitLaw};
use crate::stats::{kolmogorov_survival, ks_distance, SampleSet};

use super::run::{load_run, RunMeta};

const BINS: usize = 40;
const CDF_POINTS: usize = 101;

#[derive(Debug, Clone)]
pub struct ReportOutput {
    pub files: Vec<PathBuf>,
    /// Directories skipped because they hold no finished run.
    pub skipped: Vec<(PathBuf, String)>,
    /// `(group, ell) -> merged sample size`.
    pub sample_sizes: BTreeMap<(String, usize), usize>,
}

fn law_exponent(ensemble: &str) -> (u32, &'static str) {
    match ensemble {
        "Ginibre" => (4, "r^3"),
        "IidDisk" => (2, "r"),
        _ => (3, "u^2"),
    }
}

struct Group {
    ensemble: String,
    n: usize,
    runs: usize,
    samples: BTreeMap<usize, Vec<f64>>,
}

/// Merges runs by (ensemble, n) and writes summary.csv, histogram.csv,
/// cdf.csv and counts_summary.csv into `out`.
pub fn report(runs: &[PathBuf], out: &Path) -> Result<ReportOutput> {
    let mut groups: BTreeMap<String, Group> = BTreeMap::new();
    let mut skipped = Vec::new();
    let mut metas: Vec<(String, PathBuf, RunMeta)> = Vec::new();
    for dir in runs {
        let (meta, rows) = match load_run(dir) {
            Ok(v) => v,
            Err(e @ GapError::SchemaMismatch { .. }) => return Err(e),
            Err(GapError::InvalidArgument(msg)) => {
                skipped.push((dir.clone(), msg));
                continue;
            }
            Err(e) => return Err(e),
        };
        let key = format!("{}_n{}", meta.ensemble, meta.n);
        let g = groups.entry(key.clone()).or_insert_with(|| Group {
            ensemble: meta.ensemble.clone(),
            n: meta.n,
            runs: 0,
            samples: BTreeMap::new(),
        });
        g.runs += 1;
        for (_, ell, tau) in rows {
            g.samples.entry(ell).or_default().push(tau);
        }
        metas.push((key, dir.clone(), meta));
    }
    fs::create_dir_all(out)?;

    let summary_path = out.join("summary.csv");
    let hist_path = out.join("histogram.csv");
    let cdf_path = out.join("cdf.csv");
    let counts_path = out.join("counts_summary.csv");
    let mut summary = csv::Writer::from_path(&summary_path)?;
    summary.write_record([
        "group",
        "ensemble",
        "n",
        "ell",
        "runs",
        "samples",
        "mean_tau",
        "ks_distance",
        "ks_p_value",
        "target",
        "intensity_law",
    ])?;
    let mut hist = csv::Writer::from_path(&hist_path)?;
    hist.write_record([
        "group",
        "ell",
        "bin_lo",
        "bin_hi",
        "count",
        "empirical_density",
        "target_cdf_lo",
        "target_cdf_hi",
    ])?;
    let mut cdf = csv::Writer::from_path(&cdf_path)?;
    cdf.write_record(["group", "ell", "x", "empirical_cdf", "target_cdf"])?;

    let mut sizes = BTreeMap::new();
    for (key, g) in &groups {
        let (q, intensity) = law_exponent(&g.ensemble);
        for (&ell, values) in &g.samples {
            let law = LimitLaw { q, k: ell as u32 };
            let target = |x: f64| kth_gap_cdf(&law, x.max(0.0)).unwrap_or(0.0);
            let set = SampleSet::new(values.clone())?;
            let n = set.len();
            sizes.insert((key.clone(), ell), n);
            let d = ks_distance(&set, target);
            let p = kolmogorov_survival(d * (n as f64).sqrt());
            let mean = set.values().iter().sum::<f64>() / n.max(1) as f64;
            summary.write_record([
                key.clone(),
                g.ensemble.clone(),
                g.n.to_string(),
                ell.to_string(),
                g.runs.to_string(),
                n.to_string(),
                format!("{mean:e}"),
                format!("{d:e}"),
                format!("{p:e}"),
                format!("P({ell}, x^{q})"),
                intensity.to_string(),
            ])?;
            if n == 0 {
                continue;
            }
            let hi = set.values()[n - 1].max(1e-12);
            let width = hi / BINS as f64;
            let mut counts = [0usize; BINS];
            for &v in set.values() {
                counts[((v / width) as usize).min(BINS - 1)] += 1;
            }
            for (b, &c) in counts.iter().enumerate() {
                let (lo, up) = (b as f64 * width, (b + 1) as f64 * width);
                hist.write_record([
                    key.clone(),
                    ell.to_string(),
                    format!("{lo:e}"),
                    format!("{up:e}"),
                    c.to_string(),
                    format!("{:e}", c as f64 / (n as f64 * width)),
                    format!("{:e}", target(lo)),
                    format!("{:e}", target(up)),
                ])?;
            }
            let v = set.values();
            for i in 0..CDF_POINTS {
                let x = hi * i as f64 / (CDF_POINTS - 1) as f64;
                let emp = v.partition_point(|&s| s <= x) as f64 / n as f64;
                cdf.write_record([
                    key.clone(),
                    ell.to_string(),
                    format!("{x:e}"),
                    format!("{emp:e}"),
                    format!("{:e}", target(x)),
                ])?;
            }
        }
    }
    summary.flush()?;
    hist.flush()?;
    cdf.flush()?;

    let mut cw = csv::Writer::from_path(&counts_path)?;
    cw.write_record([
        "group",
        "run",
        "region_id",
        "mu",
        "k",
        "factorial_moment",
        "target",
        "std_error",
        "passed",
        "dispersion",
        "dispersion_p_value",
    ])?;
    for (key, dir, meta) in &metas {
        for c in &meta.summary.counts {
            let (disp, disp_p) = c
                .dispersion
                .as_ref()
                .map(|d| {
                    (
                        format!("{:e}", d.statistic),
                        d.p_value.map_or(String::new(), |p| format!("{p:e}")),
                    )
                })
                .unwrap_or_default();
            for m in &c.factorial_moments.details {
                cw.write_record([
                    key.clone(),
                    dir.display().to_string(),
                    c.region_id.clone(),
                    format!("{:e}", c.mu),
                    m.k.to_string(),
                    format!("{:e}", m.mean),
                    format!("{:e}", m.target),
                    format!("{:e}", m.std_error),
                    m.passed.to_string(),
                    disp.clone(),
                    disp_p.clone(),
                ])?;
            }
        }
    }
    cw.flush()?;

    Ok(ReportOutput {
        files: vec![summary_path, hist_path, cdf_path, counts_path],
        skipped,
        sample_sizes: sizes,
    })
}
