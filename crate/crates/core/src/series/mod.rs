//! Truncated series algebra.
//!
//! [`FourierTaylorSeries`] carries `Σ c_{k,m} e^{ikθ} t^m` with a fixed box of
//! Fourier modes and Taylor orders; every expansion in `(θ, t)` of the slice
//! pipeline lives in this type. [`HermitianSeries`] holds real-valued
//! polynomials in `(z, z̄, s)` such as the `h` and `g` parts of a prepared
//! defining function, and [`PowerSeries`] is the univariate complex series
//! used for Segre graphs.

mod fourier_taylor;
mod hermitian;
mod power;

pub use fourier_taylor::{FourierTaylorSeries, DEFAULT_K_MAX, DEFAULT_M_MAX};
pub use hermitian::{HermitianSeries, Variable};
pub use power::PowerSeries;
