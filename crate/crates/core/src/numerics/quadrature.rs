//! Adaptive Gauss-Kronrod (10/21 point) quadrature.
//!
//! Panels are kept in a max-heap keyed on their error estimate and the worst
//! panel is bisected until the summed error meets the tolerance. A range
//! `[a, +inf)` is mapped onto `[0, 1)` through `t = a + x / (1 - x)`; the
//! Kronrod nodes are interior, so `x = 1` is never evaluated.
//!
//! The 2-D integrator nests two 1-D integrations. Inner error estimates are
//! integrated with the Kronrod weights alongside the inner values, so the
//! reported error covers both axes.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::error::{Error, Result};

/// Integrand calls allowed per one-dimensional integration.
pub const EVALUATION_BUDGET: usize = 1_000_000;

const INITIAL_PANELS: usize = 4;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_292_618_925,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Outcome of a quadrature or Monte-Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Absolute error estimate, never negative.
    pub error_estimate: f64,
    /// Integrand evaluations spent (at least one).
    pub evaluations: usize,
}

/// Relative and absolute accuracy goal: an estimate is accepted once
/// `error <= max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !(rel > 0.0 && rel.is_finite()) {
            return Err(Error::domain("tol.rel", rel));
        }
        if !(abs >= 0.0 && abs.is_finite()) {
            return Err(Error::domain("tol.abs", abs));
        }
        Ok(Tolerance { rel, abs })
    }

    pub fn target(&self, value: f64) -> f64 {
        f64::max(self.abs, self.rel * value.abs())
    }

    pub(crate) fn scaled(&self, factor: f64) -> Self {
        Tolerance {
            rel: self.rel * factor,
            abs: self.abs * factor,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-8,
            abs: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

/// One 21-point Kronrod step. `f` returns the integrand value together with
/// an absolute error already present in that value (zero for plain
/// integrands).
fn kronrod_panel<F>(f: &mut F, lo: f64, hi: f64, evaluations: &mut usize) -> Result<Panel>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let (fc, ec) = f(center)?;
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut inherited = WGK[10] * ec.abs();
    for j in 0..10 {
        let dx = half * XGK[j];
        let (f1, e1) = f(center - dx)?;
        let (f2, e2) = f(center + dx)?;
        kronrod += WGK[j] * (f1 + f2);
        inherited += WGK[j] * (e1.abs() + e2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    *evaluations += 21;

    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs() + inherited * half.abs();
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::Convergence {
            value,
            error_estimate: f64::INFINITY,
            evaluations: *evaluations,
        });
    }
    Ok(Panel { lo, hi, value, error })
}

/// Adaptive driver over a finite interval for integrands carrying their own
/// error. Returns the integral and the summed error estimate.
fn adaptive<F>(mut f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let mut evaluations = 0usize;
    let mut heap = BinaryHeap::new();
    let width = hi - lo;
    for i in 0..INITIAL_PANELS {
        let a = lo + width * (i as f64) / (INITIAL_PANELS as f64);
        let b = if i + 1 == INITIAL_PANELS {
            hi
        } else {
            lo + width * ((i + 1) as f64) / (INITIAL_PANELS as f64)
        };
        heap.push(kronrod_panel(&mut f, a, b, &mut evaluations)?);
    }

    let total = |heap: &BinaryHeap<Panel>| {
        heap.iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
    };

    loop {
        let (value, error) = total(&heap);
        if error <= tol.target(value) {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.lo + worst.hi);
        let splittable = mid > worst.lo && mid < worst.hi;
        if !splittable || evaluations + 42 > EVALUATION_BUDGET {
            heap.push(worst);
            let (value, error) = total(&heap);
            return Err(Error::Convergence {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        heap.push(kronrod_panel(&mut f, worst.lo, mid, &mut evaluations)?);
        heap.push(kronrod_panel(&mut f, mid, worst.hi, &mut evaluations)?);
    }
}

/// Same as [`adaptive`] but accepts `hi = +inf`.
fn adaptive_range<F>(mut f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    if !lo.is_finite() || hi.is_nan() || hi == f64::NEG_INFINITY {
        return Err(Error::domain("lower limit", lo));
    }
    if hi < lo {
        return Err(Error::domain("upper limit", hi));
    }
    if hi.is_finite() {
        return adaptive(f, lo, hi, tol);
    }
    adaptive(
        |x: f64| {
            let s = 1.0 - x;
            let t = lo + x / s;
            let jac = 1.0 / (s * s);
            let (v, e) = f(t)?;
            Ok((v * jac, e * jac))
        },
        0.0,
        1.0,
        tol,
    )
}

/// Integrates `f` over `[a, b]`; `b` may be `f64::INFINITY`.
pub fn integrate_1d<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    adaptive_range(|x| Ok((f(x), 0.0)), a, b, tol)
}

/// A closed interval, possibly unbounded above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn to_infinity(lo: f64) -> Self {
        Interval {
            lo,
            hi: f64::INFINITY,
        }
    }
}

/// Rectangle `x x y`; either axis may extend to `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub x: Interval,
    pub y: Interval,
}

/// Integrates `f(x, y)` over `domain`, inner axis `y`, outer axis `x`.
pub fn integrate_2d<F>(mut f: F, domain: Rectangle, tol: Tolerance) -> Result<QuadratureResult>
where
    F: FnMut(f64, f64) -> f64,
{
    let inner_tol = tol.scaled(0.25);
    let mut inner_evaluations = 0usize;
    let outer = adaptive_range(
        |x| {
            let r = adaptive_range(|y| Ok((f(x, y), 0.0)), domain.y.lo, domain.y.hi, inner_tol)?;
            inner_evaluations += r.evaluations;
            Ok((r.value, r.error_estimate))
        },
        domain.x.lo,
        domain.x.hi,
        tol,
    );
    outer.map(|r| QuadratureResult {
        evaluations: inner_evaluations.max(1),
        ..r
    })
}
