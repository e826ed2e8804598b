//! Quantum speed limit time of the dephasing qubit.
//!
//! The relative purity `f(t) = tr(rho(t) rho(tau)) / tr(rho(tau)^2)` measures
//! how far the state has moved over the driving window `[tau, tau + dtau]`.
//! Bounding `|df/dt|` by the singular values of the state (`lambda`) and of
//! the generator (`mu`) gives the Margolus-Levitin type bound
//! `|f - 1| tr(rho(tau)^2) / avg(sum lambda_j mu_j)` and the Mandelstam-Tamm
//! type bound `|f - 1| tr(rho(tau)^2) / avg(sqrt(sum mu_j^2))`; the speed
//! limit is the larger of the two.
//!
//! For the boosted dephasing qubit the generator singular values coincide,
//! so the MT bound is always the ML bound divided by `sqrt(2)` and the
//! unified bound reduces to
//! `|(1-4chi)(p_tau p_t - p_tau^2)| sin 2theta / avg|dp/dt|`, which becomes
//! `p_tau dtau |1-4chi| sin 2theta` whenever `p_t` is monotone.

use core::cell::Cell;
use core::f64::consts::FRAC_PI_4;

use crate::dephasing::{decoherence_factor, gamma_rate, kraus_evolve, DephasingSpec};
use crate::error::{Error, Result};
use crate::numerics::{integrate_1d, Tolerance};
use crate::relativity::{self, initial_state, BoostedPacketSpec, CHI_MAX};
use crate::state::QubitState;

/// Averaged denominators below this are treated as "no evolution".
pub const DENOMINATOR_FLOOR: f64 = 1e-300;

/// The critical boost factor at which the coherences vanish.
pub const CRITICAL_CHI: f64 = 0.25;

/// Initial time `tau` (possibly `+inf`) and driving time `delta_tau > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionWindow {
    pub tau: f64,
    pub delta_tau: f64,
}

impl EvolutionWindow {
    pub fn new(tau: f64, delta_tau: f64) -> Result<Self> {
        if !(tau >= 0.0) {
            return Err(Error::domain("tau", tau));
        }
        if !(delta_tau > 0.0) || !delta_tau.is_finite() {
            return Err(Error::domain("delta_tau", delta_tau));
        }
        Ok(EvolutionWindow { tau, delta_tau })
    }

    pub fn end(&self) -> f64 {
        self.tau + self.delta_tau
    }

    pub fn is_finite(&self) -> bool {
        self.tau.is_finite()
    }

    fn require_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::domain("tau", self.tau))
        }
    }
}

/// Which bound attains the unified speed limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActiveBound {
    Ml,
    Mt,
}

impl ActiveBound {
    pub fn as_str(&self) -> &'static str {
        match self {
            ActiveBound::Ml => "ML",
            ActiveBound::Mt => "MT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsltResult {
    pub value: f64,
    pub ml_term: f64,
    pub mt_term: f64,
    pub active_bound: ActiveBound,
    /// Relative purity at the end of the window.
    pub f_final: f64,
    /// `tr(rho(tau)^2)`.
    pub purity_initial: f64,
}

/// Everything a speed-limit evaluation needs: the bath, the boosted state
/// (summarized by `chi` and `theta`) and the window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsltProblem {
    pub dephasing: DephasingSpec,
    pub chi: f64,
    pub theta: f64,
    pub window: EvolutionWindow,
}

impl QsltProblem {
    pub fn with_chi(dephasing: DephasingSpec, chi: f64, theta: f64, window: EvolutionWindow) -> Result<Self> {
        if !(0.0..=CHI_MAX).contains(&chi) {
            return Err(Error::domain("chi", chi));
        }
        if !(0.0..=FRAC_PI_4).contains(&theta) {
            return Err(Error::domain("theta", theta));
        }
        Ok(QsltProblem {
            dephasing,
            chi,
            theta,
            window,
        })
    }

    /// Computes `chi` for `packet` by quadrature.
    pub fn from_packet(
        dephasing: DephasingSpec,
        packet: &BoostedPacketSpec,
        window: EvolutionWindow,
        tol: Tolerance,
    ) -> Result<Self> {
        let chi = relativity::chi(packet, tol)?.value;
        Self::with_chi(dephasing, chi, packet.theta, window)
    }

    pub fn p_tau(&self, tol: Tolerance) -> Result<f64> {
        decoherence_factor(&self.dephasing, self.window.tau, tol)
    }

    pub fn p_end(&self, tol: Tolerance) -> Result<f64> {
        decoherence_factor(&self.dephasing, self.window.end(), tol)
    }

    /// `rho(tau)` and `rho(tau + dtau)`.
    pub fn states(&self, tol: Tolerance) -> Result<(QubitState, QubitState)> {
        let rho0 = initial_state(self.chi, self.theta)?;
        let at_tau = kraus_evolve(&rho0, self.p_tau(tol)?)?;
        let at_end = kraus_evolve(&rho0, self.p_end(tol)?)?;
        Ok((at_tau, at_end))
    }

    /// The Markovian closed form, valid for infinite `tau` as well.
    pub fn markovian(&self, tol: Tolerance) -> Result<f64> {
        let p_tau = self.p_tau(tol)?;
        Ok(markovian_qslt(p_tau, self.window.delta_tau, self.chi, self.theta))
    }

    fn coherence_factor(&self) -> f64 {
        (1.0 - 4.0 * self.chi).abs() * libm::sin(2.0 * self.theta)
    }
}

/// `tr(rho_t rho_tau) / tr(rho_tau^2)`.
pub fn relative_purity(rho_t: &QubitState, rho_tau: &QubitState) -> f64 {
    rho_t.overlap(rho_tau) / rho_tau.purity()
}

/// Singular values `(lambda_+, lambda_-)` of the dephased boosted state.
pub fn state_singular_values(p_t: f64, chi_value: f64, theta: f64) -> (f64, f64) {
    let c = 1.0 - 4.0 * chi_value;
    let d = 1.0 - 2.0 * chi_value;
    let coh = p_t * p_t * c * c;
    let pop = d * d;
    let radicand = coh + pop - (coh - pop) * libm::cos(4.0 * theta);
    let half_gap = libm::sqrt(radicand.max(0.0)) / (2.0 * core::f64::consts::SQRT_2);
    (0.5 + half_gap, 0.5 - half_gap)
}

/// Singular values of the generator acting on the dephased boosted state;
/// the two are always equal.
pub fn generator_singular_values(p_t: f64, rate: f64, chi_value: f64, theta: f64) -> (f64, f64) {
    let mu = 0.5 * (rate * p_t * (1.0 - 4.0 * chi_value)).abs() * libm::sin(2.0 * theta);
    (mu, mu)
}

/// `(1 / dtau) \int_tau^{tau + dtau} g(t) dt` over a finite window.
pub fn time_average<G>(g: G, window: &EvolutionWindow, tol: Tolerance) -> Result<f64>
where
    G: FnMut(f64) -> f64,
{
    window.require_finite()?;
    let r = integrate_1d(g, window.tau, window.end(), tol)?;
    Ok(r.value / window.delta_tau)
}

// Time average of a fallible integrand; the first failure wins over the
// quadrature's own error.
fn average_fallible<G>(mut g: G, window: &EvolutionWindow, tol: Tolerance) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    let failure = Cell::new(None);
    let avg = time_average(
        |t| match g(t) {
            Ok(v) => v,
            Err(e) => {
                if failure.get().is_none() {
                    failure.set(Some(e));
                }
                f64::NAN
            }
        },
        window,
        tol,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => avg,
    }
}

struct Displacement {
    /// `|f - 1| tr(rho(tau)^2)`.
    numerator: f64,
    f_final: f64,
    purity_initial: f64,
}

// `|f - 1| tr(rho_tau^2)` is evaluated as `|tr(rho_tau (rho_t - rho_tau))|`
// so that short windows do not lose digits to `f - 1`.
fn displacement(problem: &QsltProblem, tol: Tolerance) -> Result<Displacement> {
    problem.window.require_finite()?;
    let (rho_tau, rho_t) = problem.states(tol)?;
    let diff = *rho_t.matrix() - *rho_tau.matrix();
    let numerator = (*rho_tau.matrix() * diff).trace().re.abs();
    Ok(Displacement {
        numerator,
        f_final: relative_purity(&rho_t, &rho_tau),
        purity_initial: rho_tau.purity(),
    })
}

fn ml_denominator(problem: &QsltProblem, tol: Tolerance) -> Result<f64> {
    let QsltProblem { chi, theta, .. } = *problem;
    average_fallible(
        |t| {
            let p = decoherence_factor(&problem.dephasing, t, tol)?;
            let (l1, l2) = state_singular_values(p, chi, theta);
            let (m1, m2) = generator_singular_values(p, gamma_rate(&problem.dephasing, t), chi, theta);
            Ok(l1 * m1 + l2 * m2)
        },
        &problem.window,
        tol,
    )
}

fn mt_denominator(problem: &QsltProblem, tol: Tolerance) -> Result<f64> {
    let QsltProblem { chi, theta, .. } = *problem;
    average_fallible(
        |t| {
            let p = decoherence_factor(&problem.dephasing, t, tol)?;
            let (m1, m2) = generator_singular_values(p, gamma_rate(&problem.dephasing, t), chi, theta);
            Ok(libm::hypot(m1, m2))
        },
        &problem.window,
        tol,
    )
}

// At the critical chi the speed limit is zero; any other vanishing generator
// means the state never moves.
fn ratio(problem: &QsltProblem, numerator: f64, denominator: f64) -> f64 {
    if denominator < DENOMINATOR_FLOOR {
        if problem.chi == CRITICAL_CHI {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        numerator / denominator
    }
}

/// Margolus-Levitin type bound for the open (nonunitary) dynamics.
pub fn ml_bound_open(problem: &QsltProblem, tol: Tolerance) -> Result<f64> {
    let d = displacement(problem, tol)?;
    Ok(ratio(problem, d.numerator, ml_denominator(problem, tol)?))
}

/// Mandelstam-Tamm type bound for the open dynamics.
pub fn mt_bound_open(problem: &QsltProblem, tol: Tolerance) -> Result<f64> {
    let d = displacement(problem, tol)?;
    Ok(ratio(problem, d.numerator, mt_denominator(problem, tol)?))
}

/// Closed-system ML bound `|f - 1| tr(rho(tau)^2) / (2 E)` for a given
/// time-averaged energy `E > 0`.
pub fn ml_bound_closed(problem: &QsltProblem, averaged_energy: f64, tol: Tolerance) -> Result<f64> {
    if !(averaged_energy > 0.0) {
        return Err(Error::domain("averaged_energy", averaged_energy));
    }
    let d = displacement(problem, tol)?;
    Ok(closed_bound(d.f_final, d.purity_initial, averaged_energy))
}

/// The closed-system bound from its raw ingredients.
pub fn closed_bound(f_final: f64, purity_initial: f64, averaged_energy: f64) -> f64 {
    (f_final - 1.0).abs() * purity_initial / (2.0 * averaged_energy)
}

/// `max(ML, MT)` with a shared numerator.
pub fn unified_qslt(problem: &QsltProblem, tol: Tolerance) -> Result<QsltResult> {
    let d = displacement(problem, tol)?;
    let ml_term = ratio(problem, d.numerator, ml_denominator(problem, tol)?);
    let mt_term = ratio(problem, d.numerator, mt_denominator(problem, tol)?);
    let (value, active_bound) = if ml_term >= mt_term {
        (ml_term, ActiveBound::Ml)
    } else {
        (mt_term, ActiveBound::Mt)
    };
    Ok(QsltResult {
        value,
        ml_term,
        mt_term,
        active_bound,
        f_final: d.f_final,
        purity_initial: d.purity_initial,
    })
}

/// Closed form `|(1-4chi)(p_tau p_t - p_tau^2)| sin 2theta / avg|dp/dt|`
/// with `|dp/dt| = |rate| p` integrated numerically over the window.
pub fn relativistic_qslt(problem: &QsltProblem, tol: Tolerance) -> Result<f64> {
    problem.window.require_finite()?;
    let p_tau = problem.p_tau(tol)?;
    let p_t = problem.p_end(tol)?;
    let numerator = problem.coherence_factor() * (p_tau * (p_t - p_tau)).abs();
    if numerator == 0.0 {
        return Ok(0.0);
    }
    let speed = average_fallible(
        |t| {
            let p = decoherence_factor(&problem.dephasing, t, tol)?;
            Ok(gamma_rate(&problem.dephasing, t).abs() * p)
        },
        &problem.window,
        tol,
    )?;
    Ok(if speed < DENOMINATOR_FLOOR {
        f64::INFINITY
    } else {
        numerator / speed
    })
}

/// `p_tau dtau |1 - 4chi| sin 2theta`.
pub fn markovian_qslt(p_tau: f64, delta_tau: f64, chi_value: f64, theta: f64) -> f64 {
    p_tau * delta_tau * (1.0 - 4.0 * chi_value).abs() * libm::sin(2.0 * theta)
}
