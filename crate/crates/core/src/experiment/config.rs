//! Experiment configuration and its JSON form.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::gaps::{GapMode, GinibreConstant, ScalingRule};
use crate::kernel::DensityFn;
use crate::laws::{IntensityQuery, LimitLaw};
use crate::region::{LengthSet, Region};
use crate::sampler::{EnsembleKind, EnsembleSpec, McmcParams, Potential};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub kind: EnsembleKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Wishart aspect ratio `m / n`; used when `m` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<Potential>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mcmc: Option<McmcParams>,
}

impl EnsembleConfig {
    pub fn spec(&self) -> Result<EnsembleSpec> {
        let m = match (self.kind, self.m, self.beta) {
            (EnsembleKind::Wishart, Some(m), Some(beta)) => {
                if (m as f64 / self.n as f64 - beta).abs() > 1e-12 * beta {
                    return invalid(format!("m={m} and beta={beta} disagree for n={}", self.n));
                }
                Some(m)
            }
            (EnsembleKind::Wishart, None, Some(beta)) => {
                let m = beta * self.n as f64;
                if !(beta >= 1.0) || (m - m.round()).abs() > 1e-9 {
                    return invalid(format!("beta={beta} does not give an integer m >= n for n={}", self.n));
                }
                Some(m.round() as usize)
            }
            (_, m, _) => m,
        };
        let potential = match self.kind {
            EnsembleKind::Uue => Some(self.potential.clone().unwrap_or_else(Potential::gaussian)),
            _ => None,
        };
        let spec = EnsembleSpec {
            kind: self.kind,
            n: self.n,
            m,
            potential,
            mcmc: self.mcmc,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Real-line window `(a + a_eps, b - b_eps)` inside the support `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub a_eps: f64,
    pub b_eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConfig {
    #[serde(default)]
    pub ginibre_constant: GinibreConstant,
}

/// Gap lengths `lengths` (in units of `n^gamma t`) counted over base points
/// in `region` (defaults to the experiment's region or window).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountSpec {
    pub id: String,
    pub lengths: LengthSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
}

fn default_parallelism() -> usize {
    1
}

fn default_k() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ensemble: EnsembleConfig,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
    #[serde(default)]
    pub scaling: ScalingConfig,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counts: Vec<CountSpec>,
    /// Equilibrium density for UUE; computed from the potential when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equilibrium: Option<DensityFn>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

/// Everything a trial needs, resolved from the config once.
#[derive(Debug, Clone)]
pub struct Plan {
    pub spec: EnsembleSpec,
    pub mode: GapMode,
    /// Base-point region for gaps.
    pub region: Region,
    pub rule: ScalingRule,
    /// Same rule with the alternative Ginibre constant.
    pub alternative: Option<ScalingRule>,
    pub exponent: f64,
    pub q: u32,
    pub counts: Vec<(CountSpec, Region)>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Equilibrium density of a real ensemble.
    pub fn density(&self, spec: &EnsembleSpec) -> Result<Option<DensityFn>> {
        Ok(match spec.kind {
            EnsembleKind::Ginibre | EnsembleKind::IidDisk => None,
            EnsembleKind::Wishart => Some(DensityFn::marchenko_pastur(spec.beta().expect("validated"))?),
            EnsembleKind::Gue => Some(DensityFn::semicircle()),
            EnsembleKind::Uue => {
                let v = spec.potential.as_ref().expect("validated");
                match (&self.equilibrium, v.quadratic_coefficient()) {
                    (Some(d), _) => {
                        d.validate()?;
                        Some(d.clone())
                    }
                    (None, Some(c)) => Some(DensityFn::quadratic_equilibrium(c)?),
                    (None, None) => Some(DensityFn::one_cut_equilibrium(&v.coeffs)?),
                }
            }
        })
    }

    pub fn plan(&self) -> Result<Plan> {
        let spec = self.ensemble.spec()?;
        if self.k == 0 {
            return invalid("k must be at least 1");
        }
        if self.parallelism == 0 {
            return invalid("parallelism must be at least 1");
        }
        if self.window.is_some() && self.region.is_some() {
            return invalid("give either `window` or `region`, not both");
        }
        if let Some(r) = &self.region {
            r.validate()?;
        }
        let density = self.density(&spec)?;
        let (mode, region, rule, alternative, exponent, q) = match spec.kind {
            EnsembleKind::Ginibre | EnsembleKind::IidDisk => {
                if self.window.is_some() {
                    return invalid("complex ensembles take a `region`, not a `window`");
                }
                let region = self.region.clone().unwrap_or(Region::Plane);
                if spec.kind == EnsembleKind::Ginibre {
                    let c = self.scaling.ginibre_constant;
                    let other = match c {
                        GinibreConstant::Quarter => GinibreConstant::PiQuarter,
                        GinibreConstant::PiQuarter => GinibreConstant::Quarter,
                    };
                    (
                        GapMode::Successor,
                        region,
                        ScalingRule::Ginibre(c),
                        Some(ScalingRule::Ginibre(other)),
                        0.75,
                        4,
                    )
                } else {
                    (GapMode::Successor, region, ScalingRule::IidDisk, None, 1.0, 2)
                }
            }
            _ => {
                let density = density.expect("real ensembles have a density");
                let (a, b) = density.support();
                let (lo, hi) = match (&self.window, &self.region) {
                    (Some(w), None) => {
                        if !(w.a_eps >= 0.0 && w.b_eps >= 0.0) {
                            return invalid("window offsets must be nonnegative");
                        }
                        (a + w.a_eps, b - w.b_eps)
                    }
                    (None, Some(Region::Interval { lo, hi })) => (*lo, *hi),
                    (None, Some(_)) => return invalid("real ensembles need an interval region"),
                    _ => return invalid("real ensembles need a `window` or an interval `region`"),
                };
                if !(lo < hi) || lo < a || hi > b {
                    return invalid(format!("window ({lo}, {hi}) is not inside the support [{a}, {b}]"));
                }
                let rule = match spec.kind {
                    EnsembleKind::Wishart => ScalingRule::Wishart {
                        beta: spec.beta().expect("validated"),
                        window: (lo, hi),
                    },
                    _ => ScalingRule::Unitary {
                        density,
                        window: (lo, hi),
                    },
                };
                (GapMode::Consecutive, Region::interval(lo, hi), rule, None, 4.0 / 3.0, 3)
            }
        };
        rule.scaling(spec.n)?;
        let mut counts = Vec::with_capacity(self.counts.len());
        for c in &self.counts {
            c.lengths.validate()?;
            let r = c.region.clone().unwrap_or_else(|| region.clone());
            r.validate()?;
            if counts.iter().any(|(o, _): &(CountSpec, Region)| o.id == c.id) {
                return invalid(format!("duplicate count id {:?}", c.id));
            }
            counts.push((c.clone(), r));
        }
        Ok(Plan {
            spec,
            mode,
            region,
            rule,
            alternative,
            exponent,
            q,
            counts,
        })
    }
}

impl Plan {
    pub fn law(&self, ell: usize) -> LimitLaw {
        LimitLaw {
            q: self.q,
            k: ell as u32,
        }
    }

    /// Limiting Poisson mean of a count region.
    pub fn intensity(&self, count: &CountSpec, region: &Region, density: Option<&DensityFn>) -> Result<f64> {
        let a = count.lengths.clone();
        let interval = |r: &Region| match *r {
            Region::Interval { lo, hi } => Ok((lo, hi)),
            _ => invalid("real ensembles count over interval regions"),
        };
        let q = match self.spec.kind {
            EnsembleKind::Ginibre => IntensityQuery::Ginibre {
                a,
                region: region.clone(),
            },
            EnsembleKind::IidDisk => IntensityQuery::IidDisk {
                a,
                region: region.clone(),
            },
            EnsembleKind::Wishart => IntensityQuery::Wishart {
                a,
                interval: interval(region)?,
                beta: self.spec.beta().expect("validated"),
                eps0: 0.0,
            },
            EnsembleKind::Gue | EnsembleKind::Uue => IntensityQuery::Unitary {
                a,
                interval: interval(region)?,
                density: density.cloned().expect("real ensembles have a density"),
                eps0: 0.0,
            },
        };
        crate::laws::poisson_intensity(&q)
    }
}
