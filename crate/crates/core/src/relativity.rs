//! Spin of a Gaussian wavepacket seen from a boosted detector.
//!
//! The packet `f(q) = pi^(-3/4) W^(-3/2) exp(-|q - k|^2 / (2 W^2))` with mean
//! momentum `k = (K, 0, 0)` is observed by a detector moving along `+x` with
//! rapidity `alpha >= 0`. The Wigner rotation mixes spin and momentum and the
//! reduced spin state depends on the packet only through
//!
//! ```text
//! chi = \int q_z^2 sinh^2(alpha/2) / ((q0 + 1)(p0 + 1)) |f(q)|^2 d^3q,
//! p0  = q0 cosh(alpha) - q_x sinh(alpha),   q0 = sqrt(|q|^2 + 1).
//! ```
//!
//! The sign of the `q_x` term follows from the detector velocity pointing
//! along the mean momentum. After the azimuthal integration around `q_x`
//! the integral is two-dimensional over `(Q_x, Q_r)`.

use core::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{integrate_2d, mc_integrate_gaussian3d, Interval, Rectangle, Tolerance};
use crate::state::QubitState;

/// Half-width of the quadrature box in units of the packet width.
pub const TRUNCATION_WIDTHS: f64 = 10.0;

/// Above this rapidity the Monte-Carlo oracle switches to the overflow-free
/// weight.
pub const LOG_DOMAIN_RAPIDITY: f64 = 30.0;

/// Largest `chi` accepted by [`initial_state`].
pub const CHI_MAX: f64 = 0.5;

/// Rapidity magnitude, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rapidity {
    Finite(f64),
    Infinite,
}

impl Rapidity {
    /// Accepts any `alpha >= 0`; `f64::INFINITY` maps to [`Rapidity::Infinite`].
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha == f64::INFINITY {
            Ok(Rapidity::Infinite)
        } else if alpha >= 0.0 && alpha.is_finite() {
            Ok(Rapidity::Finite(alpha))
        } else {
            Err(Error::domain("alpha", alpha))
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Rapidity::Finite(a) => a,
            Rapidity::Infinite => f64::INFINITY,
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Rapidity::Finite(0.0)
    }
}

/// Wavepacket and boost parameters, momenta in units of the mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostedPacketSpec {
    /// Coherence angle in `[0, pi/4]`.
    pub theta: f64,
    /// Mean momentum `K >= 0`.
    pub momentum: f64,
    /// Momentum spread `W > 0`.
    pub width: f64,
    pub rapidity: Rapidity,
}

impl BoostedPacketSpec {
    pub fn new(theta: f64, momentum: f64, width: f64, alpha: f64) -> Result<Self> {
        let spec = BoostedPacketSpec {
            theta,
            momentum,
            width,
            rapidity: Rapidity::new(alpha)?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_theta(self.theta)?;
        if !(self.momentum >= 0.0) || !self.momentum.is_finite() {
            return Err(Error::domain("K", self.momentum));
        }
        if !(self.width > 0.0) || !self.width.is_finite() {
            return Err(Error::domain("W", self.width));
        }
        Rapidity::new(self.rapidity.value()).map(|_| ())
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=FRAC_PI_4).contains(&theta) {
        Ok(())
    } else {
        Err(Error::domain("theta", theta))
    }
}

/// How a [`ChiResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiMethod {
    Quadrature2d,
    McOracle,
    AnalyticZero,
    InfiniteLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiResult {
    pub value: f64,
    pub error_estimate: f64,
    pub method: ChiMethod,
}

impl ChiResult {
    fn zero(method: ChiMethod) -> Self {
        ChiResult {
            value: 0.0,
            error_estimate: 0.0,
            method,
        }
    }
}

/// Spin amplitudes of the boosted packet at momentum `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerAmplitudes {
    pub a1: Complex64,
    pub a2: Complex64,
    pub q: [f64; 3],
    pub q0: f64,
    pub p0: f64,
}

/// The normalized Gaussian momentum amplitude `f(q)`.
pub fn gaussian_amplitude(q: [f64; 3], momentum: f64, width: f64) -> f64 {
    let dx = q[0] - momentum;
    let d2 = dx * dx + q[1] * q[1] + q[2] * q[2];
    libm::pow(PI, -0.75) * libm::pow(width, -1.5) * libm::exp(-d2 / (2.0 * width * width))
}

/// `a1 = k f [C (q0 + 1) + S (q_x + i q_y)]`, `a2 = k f S q_z` with
/// `k = sqrt((q0/p0) / ((q0 + 1)(p0 + 1)))`, `C = cosh(-alpha/2)` and
/// `S = sinh(-alpha/2)`.
pub fn wigner_amplitudes(q: [f64; 3], spec: &BoostedPacketSpec) -> Result<WignerAmplitudes> {
    let alpha = match spec.rapidity {
        Rapidity::Finite(a) => a,
        Rapidity::Infinite => return Err(Error::domain("alpha", f64::INFINITY)),
    };
    if q.iter().any(|c| !c.is_finite()) {
        return Err(Error::domain("q", f64::NAN));
    }
    let signed = -alpha;
    let c = libm::cosh(0.5 * signed);
    let s = libm::sinh(0.5 * signed);
    let q0 = libm::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + 1.0);
    let p0 = q0 * libm::cosh(signed) + q[0] * libm::sinh(signed);
    let k = libm::sqrt((q0 / p0) / ((q0 + 1.0) * (p0 + 1.0)));
    let f = gaussian_amplitude(q, spec.momentum, spec.width);
    let a1 = Complex64::new(c * (q0 + 1.0) + s * q[0], s * q[1]) * (k * f);
    let a2 = Complex64::new(k * f * s * q[2], 0.0);
    Ok(WignerAmplitudes { a1, a2, q, q0, p0 })
}

/// `sinh^2(alpha/2) / (p0 + 1)` for a point with energy `q0`, axial momentum
/// `qx` and squared transverse momentum `qr2`. Evaluated without overflow or
/// cancellation for every rapidity, including the infinite limit
/// `1 / (2 (q0 - qx))`.
pub fn boost_weight(q0: f64, qx: f64, qr2: f64, rapidity: Rapidity) -> f64 {
    // q0 - qx and q0 + qx, each computed without cancellation.
    let (minus, plus) = if qx >= 0.0 {
        let plus = q0 + qx;
        ((1.0 + qr2) / plus, plus)
    } else {
        let minus = q0 - qx;
        (minus, (1.0 + qr2) / minus)
    };
    match rapidity {
        Rapidity::Infinite => 0.5 / minus,
        Rapidity::Finite(a) => {
            let e = libm::exp(-a);
            let num = 0.25 * (1.0 - e) * (1.0 - e);
            num / (0.5 * minus + 0.5 * e * e * plus + e)
        }
    }
}

fn chi_quadrature(momentum: f64, width: f64, rapidity: Rapidity, tol: Tolerance) -> Result<f64> {
    let w2 = width * width;
    let reach = TRUNCATION_WIDTHS * width;
    let domain = Rectangle {
        x: Interval::new(momentum - reach, momentum + reach),
        y: Interval::new(0.0, reach),
    };
    let r = integrate_2d(
        |qx, qr| {
            let qr2 = qr * qr;
            let q0 = libm::sqrt(qr2 + qx * qx + 1.0);
            let dx = qx - momentum;
            let envelope = libm::exp(-(dx * dx + qr2) / w2);
            qr2 * qr * envelope * boost_weight(q0, qx, qr2, rapidity) / (q0 + 1.0)
        },
        domain,
        tol,
    )?;
    let norm = 1.0 / (libm::sqrt(PI) * w2 * width);
    Ok(r.value * norm).map(|v| v.max(0.0))
}

/// `chi` by two-dimensional quadrature over the truncated `(Q_x, Q_r)` box.
pub fn chi(spec: &BoostedPacketSpec, tol: Tolerance) -> Result<ChiResult> {
    spec.validate()?;
    match spec.rapidity {
        _ if spec.rapidity.is_zero() => Ok(ChiResult::zero(ChiMethod::AnalyticZero)),
        Rapidity::Infinite => chi_infinite(spec.momentum, spec.width, tol),
        rapidity => {
            let value = chi_quadrature(spec.momentum, spec.width, rapidity, tol)?;
            Ok(ChiResult {
                value,
                error_estimate: tol.target(value),
                method: ChiMethod::Quadrature2d,
            })
        }
    }
}

/// The infinite-rapidity limit of [`chi`].
pub fn chi_infinite(momentum: f64, width: f64, tol: Tolerance) -> Result<ChiResult> {
    if !(momentum >= 0.0) || !momentum.is_finite() {
        return Err(Error::domain("K", momentum));
    }
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::domain("W", width));
    }
    let value = chi_quadrature(momentum, width, Rapidity::Infinite, tol)?;
    Ok(ChiResult {
        value,
        error_estimate: tol.target(value),
        method: ChiMethod::InfiniteLimit,
    })
}

/// Monte-Carlo estimate of `chi` as `\int |a2|^2 (p0/q0) d^3q`, sampling `q`
/// from `|f|^2` (mean `(K, 0, 0)`, per-axis spread `W / sqrt(2)`).
pub fn chi_mc_oracle(spec: &BoostedPacketSpec, samples: usize, seed: u64) -> Result<ChiResult> {
    spec.validate()?;
    if spec.rapidity.is_zero() {
        return Ok(ChiResult::zero(ChiMethod::McOracle));
    }
    let sigma = spec.width / core::f64::consts::SQRT_2;
    let mean = [spec.momentum, 0.0, 0.0];
    let amplitude_route = matches!(spec.rapidity, Rapidity::Finite(a) if a <= LOG_DOMAIN_RAPIDITY);
    let r = mc_integrate_gaussian3d(
        |q| {
            if amplitude_route {
                let amps = wigner_amplitudes(q, spec).expect("finite rapidity and momentum");
                let f = gaussian_amplitude(q, spec.momentum, spec.width);
                let density = f * f;
                if density == 0.0 {
                    return 0.0;
                }
                amps.a2.norm_sqr() * (amps.p0 / amps.q0) / density
            } else {
                let qr2 = q[1] * q[1] + q[2] * q[2];
                let q0 = libm::sqrt(q[0] * q[0] + qr2 + 1.0);
                q[2] * q[2] * boost_weight(q0, q[0], qr2, spec.rapidity) / (q0 + 1.0)
            }
        },
        mean,
        sigma,
        samples,
        seed,
    )?;
    Ok(ChiResult {
        value: r.value,
        error_estimate: r.error_estimate,
        method: ChiMethod::McOracle,
    })
}

/// Reduced spin state of the boosted packet,
/// `1/2 [[1 + (1-2chi) cos 2theta, (1-4chi) sin 2theta], [.., 1 - (1-2chi) cos 2theta]]`.
pub fn initial_state(chi_value: f64, theta: f64) -> Result<QubitState> {
    if !(0.0..=CHI_MAX).contains(&chi_value) {
        return Err(Error::domain("chi", chi_value));
    }
    check_theta(theta)?;
    let (s, c) = libm::sincos(2.0 * theta);
    let pop = (1.0 - 2.0 * chi_value) * c;
    let coh = (1.0 - 4.0 * chi_value) * s;
    QubitState::from_real([[0.5 * (1.0 + pop), 0.5 * coh], [0.5 * coh, 0.5 * (1.0 - pop)]])
}
