//! Seed derivation and the fixed random-variate transforms used by every
//! sampler.
//!
//! Trial streams are ChaCha8 generators keyed by a 64-bit seed. The trial
//! seed is `split_seed(master, index)`, a SplitMix64-style finalizer over the
//! pair, so every trial owns an independent stream and results never depend
//! on scheduling order.
//!
//! Uniforms are built from the top 53 bits of `next_u64` and Gaussians come
//! from the polar-free Box–Muller transform, both written out here so that a
//! given seed produces the same variates regardless of `rand` version.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of trial `index` from the run's master seed.
pub fn split_seed(master: u64, index: u64) -> u64 {
    let a = mix64(master.wrapping_add(GOLDEN_GAMMA));
    mix64(a ^ index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))
}

pub fn trial_rng(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on [0, 1) with 53 random bits.
#[inline]
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform on (0, 1].
#[inline]
pub fn uniform_open0<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    1.0 - uniform(rng)
}

/// Two independent standard normals from one Box–Muller step.
#[inline]
pub fn normal_pair<R: RngCore + ?Sized>(rng: &mut R) -> (f64, f64) {
    let u1 = uniform_open0(rng);
    let u2 = uniform(rng);
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    (r * c, r * s)
}

/// Single standard normal; consumes a full Box–Muller pair.
#[inline]
pub fn normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    normal_pair(rng).0
}
