//! Pure dephasing of a qubit by an Ohmic-like zero-temperature bath.
//!
//! The bath enters through its spectral density
//! `J(w) = eta * w^n / wc^(n-1) * exp(-w / wc)`. The accumulated dephasing
//! `gamma(t)` sets the decoherence factor `p_t = exp(-gamma(t))` that scales
//! the coherences; [`gamma_rate`] is its time derivative and drives the
//! generator.
//!
//! For `n = 1` the Ohmic closed form `eta * ln(1 + (wc t)^2)` is used. For
//! other exponents `gamma` is the integral
//! `eta wc Gamma(n) \int_0^t sin(n atan(wc s)) (1 + (wc s)^2)^(-n/2) ds`,
//! which for `n = 2` evaluates to `eta x^2 / (1 + x^2)` with `x = wc t`.

use crate::error::{Error, Result};
use crate::numerics::{euler_gamma, integrate_1d, QuadratureResult, Tolerance};

pub use crate::state::{Matrix2, QubitState};

/// Points in the grid used by [`is_markovian_window`].
pub const MARKOV_GRID_POINTS: usize = 1001;

/// Bath parameters: coupling `eta`, cutoff `omega_c` and Ohmicity `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingSpec {
    eta: f64,
    omega_c: f64,
    n: f64,
    gamma_n: f64,
}

impl DephasingSpec {
    pub fn new(eta: f64, omega_c: f64, n: f64) -> Result<Self> {
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::domain("eta", eta));
        }
        if !(omega_c > 0.0) || !omega_c.is_finite() {
            return Err(Error::domain("omega_c", omega_c));
        }
        let gamma_n = euler_gamma(n).map_err(|_| Error::domain("ohmicity", n))?;
        Ok(DephasingSpec {
            eta,
            omega_c,
            n,
            gamma_n,
        })
    }

    pub fn ohmic(eta: f64, omega_c: f64) -> Result<Self> {
        Self::new(eta, omega_c, 1.0)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn ohmicity(&self) -> f64 {
        self.n
    }

    /// Whether `n` lies in the validated range `[1, 2]`, where the rate is
    /// non-negative at all times.
    pub fn is_supported(&self) -> bool {
        (1.0..=2.0).contains(&self.n)
    }

    fn is_ohmic(&self) -> bool {
        self.n == 1.0
    }
}

/// `J(omega)` for `omega >= 0`.
pub fn spectral_density(spec: &DephasingSpec, omega: f64) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::domain("omega", omega));
    }
    let DephasingSpec { eta, omega_c, n, .. } = *spec;
    Ok(libm::pow(omega, n) / libm::pow(omega_c, n - 1.0) * eta * libm::exp(-omega / omega_c))
}

/// Instantaneous dephasing rate `d gamma / dt` at `t >= 0`.
pub fn gamma_rate(spec: &DephasingSpec, t: f64) -> f64 {
    let x = spec.omega_c * t;
    if spec.is_ohmic() {
        return spec.eta * 2.0 * spec.omega_c * x / (1.0 + x * x);
    }
    spec.eta
        * spec.omega_c
        * spec.gamma_n
        * libm::sin(spec.n * libm::atan(x))
        * libm::pow(1.0 + x * x, -0.5 * spec.n)
}

/// Accumulated dephasing by quadrature of [`gamma_rate`], for any Ohmicity
/// (including `n = 1`) and `t` up to `+inf`.
pub fn gamma_by_quadrature(spec: &DephasingSpec, t: f64, tol: Tolerance) -> Result<QuadratureResult> {
    if !(t >= 0.0) {
        return Err(Error::domain("t", t));
    }
    integrate_1d(|s| gamma_rate(spec, s), 0.0, t, tol)
}

/// Accumulated dephasing `gamma(t)`; `t = +inf` gives [`gamma_infinity`].
pub fn gamma_accumulated(spec: &DephasingSpec, t: f64, tol: Tolerance) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::domain("t", t));
    }
    if t == f64::INFINITY {
        return gamma_infinity(spec, tol);
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    if spec.is_ohmic() {
        let x = spec.omega_c * t;
        return Ok(spec.eta * libm::log1p(x * x));
    }
    gamma_by_quadrature(spec, t, tol).map(|r| r.value)
}

/// `lim_{t -> inf} gamma(t)`: infinite for `n <= 1`, finite above.
pub fn gamma_infinity(spec: &DephasingSpec, tol: Tolerance) -> Result<f64> {
    if spec.n <= 1.0 {
        return Ok(if spec.eta == 0.0 { 0.0 } else { f64::INFINITY });
    }
    gamma_by_quadrature(spec, f64::INFINITY, tol).map(|r| r.value)
}

/// `p_t = exp(-gamma(t))`.
pub fn decoherence_factor(spec: &DephasingSpec, t: f64, tol: Tolerance) -> Result<f64> {
    gamma_accumulated(spec, t, tol).map(|g| libm::exp(-g))
}

/// Applies the dephasing channel with Kraus operators
/// `E1 = diag(1, p)` and `E2 = diag(0, sqrt(1 - p^2))`.
pub fn kraus_evolve(rho: &QubitState, p_t: f64) -> Result<QubitState> {
    if !(0.0..=1.0).contains(&p_t) {
        return Err(Error::domain("p_t", p_t));
    }
    let e1 = Matrix2::diag(1.0, p_t);
    let e2 = Matrix2::diag(0.0, libm::sqrt(1.0 - p_t * p_t));
    let m = *rho.matrix();
    let mut out = e1 * m * e1.adjoint() + e2 * m * e2.adjoint();
    // Populations are untouched; copying them keeps rho_t - rho_tau exactly
    // diagonal-free instead of carrying p^2 + (1 - p^2) rounding.
    out.0[0][0] = m.0[0][0];
    out.0[1][1] = m.0[1][1];
    Ok(QubitState::from_trusted(out))
}

/// Generator `(rate / 2) (sz rho sz - rho)`: zero diagonal, coherences times
/// `-rate`.
pub fn dephasing_generator(rho: &QubitState, rate: f64) -> Matrix2 {
    let sz = Matrix2::pauli_z();
    let m = *rho.matrix();
    (sz * m * sz - m).scale(0.5 * rate)
}

/// True when the rate stays non-negative (to -1e-12) on a uniform grid over
/// `[t_start, t_end]`, i.e. `p_t` is monotone on the window.
pub fn is_markovian_window(spec: &DephasingSpec, t_start: f64, t_end: f64) -> Result<bool> {
    if !(t_start >= 0.0) || !t_start.is_finite() {
        return Err(Error::domain("t_start", t_start));
    }
    if !(t_end > t_start) || !t_end.is_finite() {
        return Err(Error::domain("t_end", t_end));
    }
    let steps = (MARKOV_GRID_POINTS - 1) as f64;
    Ok((0..MARKOV_GRID_POINTS).all(|i| {
        let t = t_start + (t_end - t_start) * (i as f64) / steps;
        gamma_rate(spec, t) >= -1e-12
    }))
}
