//! Lexicographic order, successor / consecutive / pairwise gaps, scaling and
//! counting.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigensolver::{Spectrum, SpectrumKind};
use crate::error::{invalid, Result};
use crate::kernel::DensityFn;
use crate::region::{LengthSet, Region};

/// Compares imaginary parts first, then real parts.
#[inline]
pub fn lex_cmp(a: Complex64, b: Complex64) -> Ordering {
    a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re))
}

#[inline]
pub fn lex_less(a: Complex64, b: Complex64) -> bool {
    a.im < b.im || (a.im == b.im && a.re < b.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GapMode {
    Successor,
    Consecutive,
    UnorderedPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub length: f64,
    pub base: Complex64,
    pub partner: Complex64,
    pub mode: GapMode,
}

fn lex_sorted(values: &[Complex64]) -> Vec<Complex64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| lex_cmp(*a, *b));
    v
}

fn is_real(values: &[Complex64]) -> bool {
    values.iter().all(|z| z.im == 0.0)
}

/// One record per eigenvalue except the lexicographic maximum: the distance
/// to the nearest eigenvalue that follows it in lexicographic order.
pub fn successor_gaps(spectrum: &Spectrum) -> Result<Vec<GapRecord>> {
    successor_gaps_of(spectrum.values())
}

pub fn successor_gaps_of(values: &[Complex64]) -> Result<Vec<GapRecord>> {
    if values.len() < 2 {
        return invalid("successor gaps need at least two points");
    }
    let v = lex_sorted(values);
    let n = v.len();
    let real = is_real(&v);
    let mut out = Vec::with_capacity(n - 1);
    for p in 0..n - 1 {
        let base = v[p];
        let mut best = f64::INFINITY;
        let mut partner = v[p + 1];
        for &q in &v[p + 1..] {
            let bound = if real { q.re - base.re } else { q.im - base.im };
            if bound >= best {
                break;
            }
            let d = (q - base).norm();
            if d < best {
                best = d;
                partner = q;
            }
        }
        out.push(GapRecord {
            length: best,
            base,
            partner,
            mode: GapMode::Successor,
        });
    }
    Ok(out)
}

/// `(l_{i+1} - l_i, l_i)` for every `l_i` inside `window` (open interval).
pub fn consecutive_gaps(spectrum: &Spectrum, window: (f64, f64)) -> Result<Vec<GapRecord>> {
    if spectrum.kind() != SpectrumKind::RealLine {
        return invalid("consecutive gaps need a real spectrum");
    }
    let v = spectrum.reals();
    if v.windows(2).any(|w| w[1] < w[0]) {
        return invalid("real spectrum is not sorted");
    }
    let (lo, hi) = window;
    Ok(v.windows(2)
        .filter(|w| lo < w[0] && w[0] < hi)
        .map(|w| GapRecord {
            length: w[1] - w[0],
            base: Complex64::new(w[0], 0.0),
            partner: Complex64::new(w[1], 0.0),
            mode: GapMode::Consecutive,
        })
        .collect())
}

#[derive(PartialEq)]
struct HeapItem(f64, GapRecord);

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .total_cmp(&other.0)
            .then_with(|| lex_cmp(self.1.base, other.1.base))
            .then_with(|| lex_cmp(self.1.partner, other.1.partner))
    }
}

/// The `k` smallest distances over all unordered pairs whose lexicographically
/// smaller point lies in `window`, found by a sweep in lexicographic order.
pub fn smallest_pair_gaps(values: &[Complex64], k: usize, window: &Region) -> Vec<GapRecord> {
    let v = lex_sorted(values);
    let real = is_real(&v);
    let mut heap: BinaryHeap<HeapItem> = BinaryHeap::with_capacity(k + 1);
    for p in 0..v.len() {
        let base = v[p];
        if !window.contains(base) {
            continue;
        }
        for &q in &v[p + 1..] {
            let cut = if heap.len() == k {
                heap.peek().map_or(f64::INFINITY, |h| h.0)
            } else {
                f64::INFINITY
            };
            let bound = if real { q.re - base.re } else { q.im - base.im };
            if bound > cut {
                break;
            }
            let d = (q - base).norm();
            if heap.len() < k || d < cut {
                heap.push(HeapItem(
                    d,
                    GapRecord {
                        length: d,
                        base,
                        partner: q,
                        mode: GapMode::UnorderedPair,
                    },
                ));
                if heap.len() > k {
                    heap.pop();
                }
            }
        }
    }
    let mut out: Vec<GapRecord> = heap.into_iter().map(|h| h.1).collect();
    out.sort_by(|a, b| a.length.total_cmp(&b.length));
    out
}

/// Brute-force reference for [`smallest_pair_gaps`] (lengths only).
pub fn brute_force_pair_lengths(values: &[Complex64], window: &Region) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..values.len() {
        for j in 0..values.len() {
            if i == j {
                continue;
            }
            let (a, b) = (values[i], values[j]);
            // Each unordered pair once, from its lexicographically smaller end.
            let first = match lex_cmp(a, b) {
                Ordering::Less => true,
                Ordering::Equal => i < j,
                Ordering::Greater => false,
            };
            if first && window.contains(a) {
                out.push((a - b).norm());
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// `tau = c * n^gamma * t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub constant: f64,
    pub exponent: f64,
    pub n: usize,
}

impl Scaling {
    pub fn identity(n: usize) -> Self {
        Self {
            constant: 1.0,
            exponent: 0.0,
            n,
        }
    }

    pub fn factor(&self) -> f64 {
        self.constant * (self.n as f64).powf(self.exponent)
    }

    pub fn apply(&self, t: f64) -> f64 {
        t * self.factor()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapStatistics {
    pub records: Vec<GapRecord>,
    /// Ascending raw lengths.
    pub raw: Vec<f64>,
    pub scaled: Vec<f64>,
    pub scaling: Scaling,
    pub window: Option<Region>,
}

/// The k smallest gaps of the given mode with base in `window`.
pub fn k_smallest_gaps(spectrum: &Spectrum, k: usize, mode: GapMode, window: Option<&Region>) -> Result<GapStatistics> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    let region = window.cloned().unwrap_or(Region::Plane);
    let mut records = match mode {
        GapMode::Successor => {
            let mut r: Vec<GapRecord> = successor_gaps(spectrum)?
                .into_iter()
                .filter(|g| region.contains(g.base))
                .collect();
            r.sort_by(|a, b| a.length.total_cmp(&b.length));
            r
        }
        GapMode::Consecutive => {
            let (lo, hi) = match region {
                Region::Plane => (f64::NEG_INFINITY, f64::INFINITY),
                Region::Interval { lo, hi } => (lo, hi),
                _ => return invalid("consecutive gaps need an interval window"),
            };
            let mut r = consecutive_gaps(spectrum, (lo, hi))?;
            r.sort_by(|a, b| a.length.total_cmp(&b.length));
            r
        }
        GapMode::UnorderedPair => smallest_pair_gaps(spectrum.values(), k, &region),
    };
    if records.len() < k {
        return invalid(format!("requested k={k} gaps but only {} are available", records.len()));
    }
    records.truncate(k);
    let raw: Vec<f64> = records.iter().map(|g| g.length).collect();
    Ok(GapStatistics {
        scaled: raw.clone(),
        raw,
        records,
        scaling: Scaling::identity(spectrum.len()),
        window: window.cloned(),
    })
}

/// Which Ginibre constant to use: the one consistent with the `s^4 / 4`
/// intensity, or `(pi/4)^{1/4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GinibreConstant {
    #[default]
    Quarter,
    PiQuarter,
}

impl GinibreConstant {
    pub fn value(self) -> f64 {
        match self {
            Self::Quarter => 0.25f64.powf(0.25),
            Self::PiQuarter => (std::f64::consts::PI / 4.0).powf(0.25),
        }
    }
}

/// Parameters that determine `(c, gamma)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalingRule {
    /// `gamma = 3/4`.
    Ginibre(GinibreConstant),
    /// `gamma = 1`, `c = 2^{-1/2}`.
    IidDisk,
    /// `gamma = 4/3`, `c = (pi^2/9 int_I g^4)^{1/3}` with g the
    /// Marchenko–Pastur density.
    Wishart {
        beta: f64,
        window: (f64, f64),
    },
    /// `gamma = 4/3`, `c = (pi^2/9 int_I Psi^4)^{1/3}`.
    Unitary {
        density: DensityFn,
        window: (f64, f64),
    },
    Custom {
        constant: f64,
        exponent: f64,
    },
}

impl ScalingRule {
    pub fn scaling(&self, n: usize) -> Result<Scaling> {
        let (constant, exponent) = match self {
            Self::Ginibre(c) => (c.value(), 0.75),
            Self::IidDisk => (std::f64::consts::FRAC_1_SQRT_2, 1.0),
            Self::Wishart { beta, window } => {
                let d = DensityFn::marchenko_pastur(*beta)?;
                (bulk_constant(&d, *window)?, 4.0 / 3.0)
            }
            Self::Unitary { density, window } => {
                density.validate()?;
                (bulk_constant(density, *window)?, 4.0 / 3.0)
            }
            Self::Custom { constant, exponent } => (*constant, *exponent),
        };
        if !(constant > 0.0) || !constant.is_finite() {
            return invalid(format!("scaling constant must be positive, got {constant}"));
        }
        Ok(Scaling { constant, exponent, n })
    }
}

fn bulk_constant(d: &DensityFn, (lo, hi): (f64, f64)) -> Result<f64> {
    if !(lo < hi) {
        return invalid(format!("empty window ({lo}, {hi})"));
    }
    let i4 = d.fourth_power_integral(lo, hi);
    if !(i4 > 0.0) {
        return invalid("window misses the support of the density");
    }
    Ok((std::f64::consts::PI.powi(2) / 9.0 * i4).cbrt())
}

pub fn rescale_gaps(stats: &GapStatistics, rule: &ScalingRule, n: usize) -> Result<GapStatistics> {
    let scaling = rule.scaling(n)?;
    let mut out = stats.clone();
    out.scaled = stats.raw.iter().map(|&t| scaling.apply(t)).collect();
    out.scaling = scaling;
    Ok(out)
}

/// `#{records: scaled length in a, base in region}`.
pub fn count_in_region(records: &[GapRecord], scaling: &Scaling, a: &LengthSet, region: &Region) -> usize {
    let f = scaling.factor();
    records
        .iter()
        .filter(|g| a.contains(g.length * f) && region.contains(g.base))
        .count()
}

/// Which neighbors of `l1` count toward a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Neighborhood {
    /// `|z - l1| <= r`.
    Disk,
    /// `|z - l1| <= r` and `z` after `l1` in lexicographic order.
    HalfDisk,
}

impl Neighborhood {
    #[inline]
    pub fn contains(self, center: Complex64, z: Complex64, radius: f64) -> bool {
        (z - center).norm() <= radius && (self == Self::Disk || lex_cmp(z, center) != Ordering::Less)
    }
}

/// Ordered triples of distinct eigenvalues with the second and third within
/// `radius` of the first.
pub fn triple_cluster_count(spectrum: &Spectrum, radius: f64) -> Result<u64> {
    triple_cluster_count_in(spectrum.values(), radius, Neighborhood::Disk, &Region::Plane)
}

/// Generalized count: first point in `region`, the other two in its
/// `neighborhood`.
pub fn triple_cluster_count_in(
    values: &[Complex64],
    radius: f64,
    neighborhood: Neighborhood,
    region: &Region,
) -> Result<u64> {
    if !(radius > 0.0) {
        return invalid(format!("radius must be positive, got {radius}"));
    }
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].im.total_cmp(&values[b].im));
    let ims: Vec<f64> = idx.iter().map(|&i| values[i].im).collect();
    let mut total = 0u64;
    for (pos, &i) in idx.iter().enumerate() {
        let c = values[i];
        if !region.contains(c) {
            continue;
        }
        let lo = ims.partition_point(|&y| y < c.im - radius);
        let mut hits = 0u64;
        for (q, &j) in idx.iter().enumerate().skip(lo) {
            if ims[q] > c.im + radius {
                break;
            }
            if q != pos && neighborhood.contains(c, values[j], radius) {
                hits += 1;
            }
        }
        total += hits * hits.saturating_sub(1);
    }
    Ok(total)
}
