//! Quantum speed limit time of a relativistically boosted spin-1/2 Gaussian
//! wavepacket whose spin is exposed to Ohmic-like pure dephasing.
//!
//! The crate is `no_std` (it needs `alloc`) and is organized bottom-up:
//!
//! * [`numerics`]: adaptive Gauss-Kronrod quadrature in one and two
//!   dimensions, the Euler Gamma function and a seeded Gaussian Monte-Carlo
//!   integrator.
//! * [`dephasing`]: spectral density, accumulated dephasing, decoherence
//!   factor, Kraus channel and its generator.
//! * [`relativity`]: Wigner-rotation amplitudes, the boost factor `chi` and
//!   the boosted initial spin state.
//! * [`qslt`]: relative purity, singular values and the ML / MT / unified
//!   speed-limit bounds with their closed forms.
//! * [`sweep`]: single-variable parameter sweeps and figure presets.
//!
//! Units are natural (`hbar = c = 1`) with momenta and widths measured in
//! units of the particle mass.
#![no_std]
#![warn(missing_debug_implementations)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dephasing;
mod error;
pub mod numerics;
pub mod qslt;
pub mod relativity;
pub mod state;
pub mod sweep;

pub use error::{Error, Result};
pub use numerics::{QuadratureResult, Tolerance};
