//! Kernels and limiting densities.

pub mod density;
pub mod ginibre;
pub mod hermite;
pub mod laguerre;
pub mod logcomplex;

pub use density::{sine_kernel, spectral_density, DensityFn, MarchenkoPastur, Tabulated};
pub use ginibre::{
    check_remainder_regimes, complement_log, ginibre_kernel_scaled, ginibre_remainder, remainder_log,
    verify_remainder_regimes, Regime, RegimeCheck, RegimeReport, RemainderSummary,
};
pub use hermite::{gue_kernel, gue_kernel_direct, hermite_functions};
pub use laguerre::{
    laguerre_wave, laguerre_wave_derivative, laguerre_waves, wishart_kernel, wishart_kernel_asymptotic,
    wishart_kernel_direct, AngleParams, AsymptoticKernel,
};
pub use logcomplex::{KernelValue, LogComplex};
