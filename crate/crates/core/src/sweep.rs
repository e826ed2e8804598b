//! Single-variable parameter sweeps and the figure presets.
//!
//! A [`SweepSpec`] holds one or more curves (each a packet and a window)
//! and a grid for the swept variable. Every grid point of every curve becomes
//! a [`RowTask`]; `chi` is computed once per distinct `(alpha, K, W)` and
//! rows are then evaluated independently. The sequential [`run_sweep`]
//! lives here; parallel drivers only need [`SweepSpec::tasks`],
//! [`SweepSpec::chi_keys`], [`evaluate_chi`] and [`evaluate_row`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;
use core::fmt;

use crate::dephasing::{is_markovian_window, DephasingSpec};
use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::qslt::{relativistic_qslt, EvolutionWindow, QsltProblem};
use crate::relativity::{chi, BoostedPacketSpec, Rapidity};

/// Ohmicity of the super-Ohmic curves in every preset.
pub const SUPER_OHMIC_N: f64 = 2.0;
pub const DEFAULT_POINTS: usize = 201;

/// Largest relative disagreement tolerated between the Markovian closed form
/// and the general window integral before a row is flagged.
pub const CROSS_CHECK_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Tau,
    Alpha,
    Width,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::Tau => "tau",
            SweepVariable::Alpha => "alpha",
            SweepVariable::Width => "width",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "tau" => Ok(SweepVariable::Tau),
            "alpha" => Ok(SweepVariable::Alpha),
            "width" | "W" => Ok(SweepVariable::Width),
            _ => Err(Error::domain("sweep variable", f64::NAN)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig1,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Fig1,
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig3a,
        Preset::Fig3b,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
        }
    }

    pub fn parse(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.tag() == tag)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Fixed parameters of one curve; the swept variable overrides one field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curve {
    pub packet: BoostedPacketSpec,
    pub window: EvolutionWindow,
}

impl Curve {
    pub fn label(&self) -> String {
        format!(
            "theta={} K={} W={} alpha={} tau={} delta_tau={}",
            self.packet.theta,
            self.packet.momentum,
            self.packet.width,
            self.packet.rapidity.value(),
            self.window.tau,
            self.window.delta_tau
        )
    }

    fn at(&self, variable: SweepVariable, value: f64) -> Result<Curve> {
        let mut c = *self;
        match variable {
            SweepVariable::Tau => c.window = EvolutionWindow::new(value, c.window.delta_tau)?,
            SweepVariable::Alpha => c.packet.rapidity = Rapidity::new(value)?,
            SweepVariable::Width => c.packet.width = value,
        }
        c.packet.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    /// Strictly increasing; `+inf` is allowed as the last point.
    pub grid: Vec<f64>,
    pub ohmic: DephasingSpec,
    pub super_ohmic: DephasingSpec,
    pub curves: Vec<Curve>,
    pub tol: Tolerance,
    pub preset: Option<Preset>,
}

/// `points` evenly spaced values from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => alloc::vec![from],
        _ => {
            let last = (points - 1) as f64;
            (0..points)
                .map(|i| {
                    if i + 1 == points {
                        to
                    } else {
                        from + (to - from) * (i as f64) / last
                    }
                })
                .collect()
        }
    }
}

/// The evaluation of one grid point of one curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowTask {
    pub curve: usize,
    pub value: f64,
    pub params: Curve,
}

/// Identity of a `chi` evaluation: bit patterns of `(alpha, K, W)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChiKey(u64, u64, u64);

impl ChiKey {
    pub fn of(packet: &BoostedPacketSpec) -> Self {
        ChiKey(
            packet.rapidity.value().to_bits(),
            packet.momentum.to_bits(),
            packet.width.to_bits(),
        )
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::domain("grid length", 0.0));
        }
        if self.curves.is_empty() {
            return Err(Error::domain("curve count", 0.0));
        }
        for (i, pair) in self.grid.windows(2).enumerate() {
            if !(pair[1] > pair[0]) || !pair[0].is_finite() {
                return Err(Error::domain("grid", self.grid[i + 1]));
            }
        }
        if self.grid[0].is_nan() {
            return Err(Error::domain("grid", f64::NAN));
        }
        Ok(())
    }

    /// Every (curve, grid point), curve-major.
    pub fn tasks(&self) -> Result<Vec<RowTask>> {
        self.validate()?;
        let mut out = Vec::with_capacity(self.grid.len() * self.curves.len());
        for (ci, curve) in self.curves.iter().enumerate() {
            for &value in &self.grid {
                out.push(RowTask {
                    curve: ci,
                    value,
                    params: curve.at(self.variable, value)?,
                });
            }
        }
        Ok(out)
    }

    /// Distinct `chi` evaluations needed by `tasks`, in a stable order.
    pub fn chi_keys(tasks: &[RowTask]) -> Vec<(ChiKey, BoostedPacketSpec)> {
        let mut seen = BTreeMap::new();
        for t in tasks {
            seen.entry(ChiKey::of(&t.params.packet))
                .or_insert(t.params.packet);
        }
        seen.into_iter().collect()
    }
}

/// Problems attached to a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RowFlags {
    /// A numerical step failed; QSLT columns are NaN.
    pub error: bool,
    /// The window integral disagreed with the Markovian closed form.
    pub cross_check: bool,
    /// The rate turns negative inside the window.
    pub non_markovian: bool,
    /// An Ohmicity outside the validated `[1, 2]` range was used.
    pub unsupported_ohmicity: bool,
}

impl RowFlags {
    /// `ML` (the active bound for this model) followed by any problems,
    /// `|`-separated.
    pub fn render(&self) -> String {
        let mut s = String::from("ML");
        for (set, name) in [
            (self.error, "error"),
            (self.cross_check, "xcheck"),
            (self.non_markovian, "nonmarkov"),
            (self.unsupported_ohmicity, "ohmicity"),
        ] {
            if set {
                s.push('|');
                s.push_str(name);
            }
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub curve: usize,
    pub value: f64,
    pub chi: f64,
    /// Decoherence factor at `tau` for the Ohmic bath.
    pub p_tau: f64,
    pub p_tau_super: f64,
    pub qslt_ohmic: f64,
    pub qslt_superohmic: f64,
    pub flags: RowFlags,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn curve_rows(&self, curve: usize) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.curve == curve)
    }
}

pub fn evaluate_chi(packet: &BoostedPacketSpec, tol: Tolerance) -> Result<f64> {
    chi(packet, tol).map(|r| r.value)
}

fn bath_qslt(
    bath: &DephasingSpec,
    params: &Curve,
    chi_value: f64,
    tol: Tolerance,
    flags: &mut RowFlags,
) -> Result<(f64, f64)> {
    let problem = QsltProblem::with_chi(*bath, chi_value, params.packet.theta, params.window)?;
    let p_tau = problem.p_tau(tol)?;
    let closed = problem.markovian(tol)?;
    if !bath.is_supported() {
        flags.unsupported_ohmicity = true;
    }
    if params.window.is_finite() {
        if is_markovian_window(bath, params.window.tau, params.window.end())? {
            let general = relativistic_qslt(&problem, tol)?;
            if (general - closed).abs() > CROSS_CHECK_REL * closed.abs().max(1e-12) {
                flags.cross_check = true;
            }
        } else {
            flags.non_markovian = true;
        }
    }
    Ok((p_tau, closed))
}

/// Evaluates one row given its (possibly failed) `chi`.
pub fn evaluate_row(task: &RowTask, chi_value: Result<f64>, spec: &SweepSpec) -> SweepRow {
    let mut flags = RowFlags::default();
    let mut row = SweepRow {
        curve: task.curve,
        value: task.value,
        chi: f64::NAN,
        p_tau: f64::NAN,
        p_tau_super: f64::NAN,
        qslt_ohmic: f64::NAN,
        qslt_superohmic: f64::NAN,
        flags,
    };
    let outcome = chi_value.and_then(|c| {
        row.chi = c;
        let ohm = bath_qslt(&spec.ohmic, &task.params, c, spec.tol, &mut flags)?;
        let sup = bath_qslt(&spec.super_ohmic, &task.params, c, spec.tol, &mut flags)?;
        Ok((ohm, sup))
    });
    match outcome {
        Ok(((p, q), (ps, qs))) => {
            row.p_tau = p;
            row.qslt_ohmic = q;
            row.p_tau_super = ps;
            row.qslt_superohmic = qs;
        }
        Err(_) => flags.error = true,
    }
    row.flags = flags;
    row
}

/// Runs the sweep on the calling thread.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    let tasks = spec.tasks()?;
    let chis: BTreeMap<ChiKey, Result<f64>> = SweepSpec::chi_keys(&tasks)
        .into_iter()
        .map(|(key, packet)| (key, evaluate_chi(&packet, spec.tol)))
        .collect();
    let rows = tasks
        .iter()
        .map(|t| evaluate_row(t, chis[&ChiKey::of(&t.params.packet)], spec))
        .collect();
    Ok(SweepTable {
        spec: spec.clone(),
        rows,
    })
}

/// Baths shared by every preset: `eta = 1`, `omega_c = 1`, Ohmic and `n = 2`.
pub fn preset_baths() -> (DephasingSpec, DephasingSpec) {
    (
        DephasingSpec::ohmic(1.0, 1.0).expect("valid"),
        DephasingSpec::new(1.0, 1.0, SUPER_OHMIC_N).expect("valid"),
    )
}

/// Initial times of the curves in the rapidity and width presets.
pub const PRESET_TAUS: [f64; 4] = [0.0, 0.5, 1.0, f64::INFINITY];

/// Fully populated sweep for one of the figure presets.
pub fn preset(tag: Preset) -> SweepSpec {
    let (ohmic, super_ohmic) = preset_baths();
    let packet = |k: f64, w: f64, alpha: f64| BoostedPacketSpec::new(FRAC_PI_4, k, w, alpha).expect("valid");
    let window = |tau: f64| EvolutionWindow::new(tau, 1.0).expect("valid");

    let (variable, grid, curves) = match tag {
        Preset::Fig1 => {
            let mut grid = linspace(0.0, 10.0, DEFAULT_POINTS);
            grid.push(f64::INFINITY);
            let curves = [(1.0, 0.0), (100.0, f64::INFINITY), (0.01, f64::INFINITY)]
                .into_iter()
                .map(|(k, alpha)| Curve {
                    packet: packet(k, 4.0, alpha),
                    window: window(0.0),
                })
                .collect();
            (SweepVariable::Tau, grid, curves)
        }
        Preset::Fig2a | Preset::Fig2b => {
            let k = if tag == Preset::Fig2a { 100.0 } else { 0.01 };
            let mut grid = linspace(0.0, 12.0, DEFAULT_POINTS - 1);
            grid.push(f64::INFINITY);
            let curves = PRESET_TAUS
                .into_iter()
                .map(|tau| Curve {
                    packet: packet(k, 30.0, f64::INFINITY),
                    window: window(tau),
                })
                .collect();
            (SweepVariable::Alpha, grid, curves)
        }
        Preset::Fig3a | Preset::Fig3b => {
            let k = if tag == Preset::Fig3a { 100.0 } else { 0.01 };
            let grid = (1..=DEFAULT_POINTS)
                .map(|i| 60.0 * i as f64 / DEFAULT_POINTS as f64)
                .collect();
            let curves = PRESET_TAUS
                .into_iter()
                .map(|tau| Curve {
                    packet: packet(k, 30.0, f64::INFINITY),
                    window: window(tau),
                })
                .collect();
            (SweepVariable::Width, grid, curves)
        }
    };
    SweepSpec {
        variable,
        grid,
        ohmic,
        super_ohmic,
        curves,
        tol: Tolerance::default(),
        preset: Some(tag),
    }
}
