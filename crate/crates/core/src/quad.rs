//! Adaptive Gauss–Kronrod quadrature on intervals, lines, half-lines, the
//! disk Δ = {|ζ−1| < 1} and the right half-plane.
//!
//! Every engine is deterministic for a fixed config: subintervals are split in
//! a fixed order and the final sum is taken in ascending order of position.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{HalfPlaneFunction, SpectralDensity};

/// Tolerances and windows shared by all engines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper bound on bisections per adaptive run.
    pub max_subdivisions: usize,
    /// Half-width of the first window on unbounded ranges.
    pub axis_window: f64,
    /// Extend unbounded windows until the tail falls below tolerance.
    pub decay_probe: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 1 << 16,
            axis_window: 30.0,
            decay_probe: true,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.axis_window > 0.0
            && self.axis_window.is_finite()
            && self.max_subdivisions >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("invalid quadrature config {self:?}")))
        }
    }

    /// Same config with both tolerances multiplied by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureConfig {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..*self
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value)
    }
}

/// Values the integrators can accumulate.
pub trait QuadValue: Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn modulus(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn modulus(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
}

/// Result of an adaptive run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate<V> {
    pub value: V,
    pub error: f64,
    /// Integral of the modulus of the integrand (Kronrod estimate).
    pub abs_integral: f64,
    pub subdivisions: usize,
}

// QUADPACK qk21 abscissae and weights; the Gauss points are the odd entries.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_351_996,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// Accuracy floor relative to ∫|f|: below this, cancellation in the
/// integrand dominates and further bisection cannot help.
const ROUNDOFF_FLOOR: f64 = 100.0 * f64::EPSILON;
/// Doublings of the tail window before giving up on decay.
const MAX_TAIL_DOUBLINGS: u32 = 64;
/// Panels laid over the first window of an unbounded range.
const WINDOW_PANELS: usize = 8;

#[derive(Debug, Clone, Copy)]
struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
    abs: f64,
}

impl<V> PartialEq for Segment<V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<V> Eq for Segment<V> {}
impl<V> PartialOrd for Segment<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Segment<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod<V, F>(f: &F, a: f64, b: f64, parallel: bool) -> Result<Segment<V>>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V> + Sync,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    // Node order: center, then (left, right) pairs for XGK[0..10].
    let abscissa = |k: usize| -> f64 {
        if k == 0 {
            center
        } else {
            let j = (k - 1) / 2;
            let dx = half * XGK[j];
            if k % 2 == 1 {
                center - dx
            } else {
                center + dx
            }
        }
    };
    let eval = |k: usize| -> Result<V> {
        let x = abscissa(k);
        let v = f(x)?;
        let m = v.modulus();
        if !m.is_finite() {
            return Err(Error::no_conv(format!("integrand is not finite at {x}")));
        }
        Ok(v)
    };
    let vals: Vec<V> = if parallel {
        (0..21).into_par_iter().map(eval).collect::<Result<_>>()?
    } else {
        (0..21).map(eval).collect::<Result<_>>()?
    };

    let fc = vals[0];
    let mut res_k = fc * WGK[10];
    let mut res_g = V::zero();
    let mut res_abs = WGK[10] * fc.modulus();
    for j in 0..10 {
        let (l, r) = (vals[1 + 2 * j], vals[2 + 2 * j]);
        res_k = res_k + (l + r) * WGK[j];
        res_abs += WGK[j] * (l.modulus() + r.modulus());
        if j % 2 == 1 {
            res_g = res_g + (l + r) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).modulus();
    for j in 0..10 {
        let (l, r) = (vals[1 + 2 * j], vals[2 + 2 * j]);
        res_asc += WGK[j] * ((l - mean).modulus() + (r - mean).modulus());
    }
    let hl = half.abs();
    let res_abs = res_abs * hl;
    let res_asc = res_asc * hl;
    let mut err = ((res_k - res_g) * half).modulus();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment {
        a,
        b,
        value: res_k * half,
        error: err,
        abs: res_abs,
    })
}

fn adaptive<V, F>(f: &F, breaks: &[f64], cfg: &QuadratureConfig, parallel: bool) -> Result<QuadEstimate<V>>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V> + Sync,
{
    cfg.validate()?;
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod(f, w[0], w[1], parallel)?);
        }
    }
    let mut frozen: Vec<Segment<V>> = Vec::new();
    let mut splits = 0usize;
    let (mut value, mut error) = sum_segments(heap.iter());
    let mut abs: f64 = heap.iter().map(|s| s.abs).sum();
    loop {
        if error <= cfg.target(value.modulus()).max(ROUNDOFF_FLOOR * abs) {
            break;
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::no_conv(format!(
                "error {error:.3e} stuck above tolerance at machine resolution"
            )));
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) <= 8.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs())
        {
            frozen.push(worst);
            continue;
        }
        if splits >= cfg.max_subdivisions {
            return Err(Error::no_conv(format!(
                "{} subdivisions exhausted with error {error:.3e}",
                cfg.max_subdivisions
            )));
        }
        splits += 1;
        let left = kronrod(f, worst.a, mid, parallel)?;
        let right = kronrod(f, mid, worst.b, parallel)?;
        value = value + (left.value + right.value - worst.value);
        error += left.error + right.error - worst.error;
        abs += left.abs + right.abs - worst.abs;
        heap.push(left);
        heap.push(right);
        // Running totals drift; resynchronise them periodically.
        if splits.is_multiple_of(128) {
            (value, error) = sum_segments(heap.iter().chain(frozen.iter()));
            abs = heap.iter().chain(frozen.iter()).map(|s| s.abs).sum();
        }
    }
    let mut all: Vec<Segment<V>> = heap.into_vec();
    all.extend(frozen);
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let (value, error) = sum_segments(all.iter());
    Ok(QuadEstimate {
        value,
        error,
        abs_integral: all.iter().map(|s| s.abs).sum(),
        subdivisions: splits,
    })
}

fn sum_segments<'a, V: QuadValue + 'a>(segs: impl Iterator<Item = &'a Segment<V>>) -> (V, f64) {
    segs.fold((V::zero(), 0.0), |(v, e), s| (v + s.value, e + s.error))
}

/// ∫_a^b f with an error estimate.
pub fn integrate_estimate<V, F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadEstimate<V>>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V> + Sync,
{
    integrate_breaks_estimate(f, &[a, b], cfg)
}

/// ∫ over `[breaks[0], breaks[last]]`, seeding one panel per gap.
pub fn integrate_breaks_estimate<V, F>(f: F, breaks: &[f64], cfg: &QuadratureConfig) -> Result<QuadEstimate<V>>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V> + Sync,
{
    check_breaks(breaks)?;
    adaptive(&f, breaks, cfg, false)
}

/// ∫_a^b f.
pub fn integrate<V, F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V> + Sync,
{
    Ok(integrate_estimate(f, a, b, cfg)?.value)
}

/// ∫ f over the union of consecutive break intervals.
pub fn integrate_breaks<V, F>(f: F, breaks: &[f64], cfg: &QuadratureConfig) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V> + Sync,
{
    Ok(integrate_breaks_estimate(f, breaks, cfg)?.value)
}

fn check_breaks(breaks: &[f64]) -> Result<()> {
    if breaks.len() < 2 || breaks.iter().any(|x| !x.is_finite()) || breaks.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain(format!(
            "breakpoints must be finite and sorted: {breaks:?}"
        )));
    }
    Ok(())
}

fn panels(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect()
}

fn integrate_unbounded<V, F>(f: &F, two_sided: bool, origin: f64, cfg: &QuadratureConfig, parallel: bool) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V> + Sync,
{
    cfg.validate()?;
    let y = cfg.axis_window;
    let lo = if two_sided { origin - y } else { origin };
    let first = adaptive(f, &panels(lo, origin + y, WINDOW_PANELS), cfg, parallel)?;
    let mut total = first.value;
    if !cfg.decay_probe {
        return Ok(total);
    }
    let mut width = y;
    for _ in 0..MAX_TAIL_DOUBLINGS {
        // Tails only need to be resolved to a fraction of the overall budget;
        // their own relative accuracy is irrelevant and often unattainable.
        let tail_cfg = QuadratureConfig {
            abs_tol: cfg.target(total.modulus()) / 10.0,
            ..*cfg
        };
        let cfg = &tail_cfg;
        let right = adaptive(f, &panels(origin + width, origin + 2.0 * width, 2), cfg, parallel)?;
        let mut tail_abs = right.abs_integral;
        total = total + right.value;
        if two_sided {
            let left = adaptive(f, &panels(origin - 2.0 * width, origin - width, 2), cfg, parallel)?;
            tail_abs += left.abs_integral;
            total = left.value + total;
        }
        if tail_abs < cfg.abs_tol {
            return Ok(total);
        }
        width *= 2.0;
    }
    Err(Error::no_conv(format!(
        "tail still above tolerance beyond |t| = {width:.3e}"
    )))
}

/// ∫_ℝ f, windowed at ±axis_window and extended by doubling tail windows.
pub fn integrate_real_line<V, F>(f: F, cfg: &QuadratureConfig) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V> + Sync,
{
    integrate_unbounded(&f, true, 0.0, cfg, false)
}

/// ∫_a^∞ f.
pub fn integrate_half_line<V, F>(f: F, a: f64, cfg: &QuadratureConfig) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V> + Sync,
{
    integrate_unbounded(&f, false, a, cfg, false)
}

/// ∫_lo^hi f where either bound may be infinite.
pub fn integrate_range<V, F>(f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V> + Sync,
{
    match (lo.is_finite(), hi.is_finite()) {
        _ if lo.is_nan() || hi.is_nan() || lo > hi => Err(Error::domain(format!("bad integration range [{lo}, {hi}]"))),
        (true, true) => integrate(f, lo, hi, cfg),
        (true, false) => integrate_half_line(f, lo, cfg),
        (false, true) => integrate_half_line(|t: f64| f(-t), -hi, cfg),
        (false, false) => integrate_real_line(f, cfg),
    }
}

/// ∫_ℝ |g(x+iy)|² dy.
pub fn line_integral(g: &HalfPlaneFunction, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    integrate_real_line(
        |y: f64| -> Result<f64> {
            let la = g.ln_abs(Complex64::new(x, y))?;
            Ok((2.0 * la).exp())
        },
        cfg,
    )
}

/// ∫_ℝ h(x+iy) dy for a complex-valued integrand.
pub fn line_integral_complex<F>(h: F, x: f64, cfg: &QuadratureConfig) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    integrate_real_line(|y: f64| h(Complex64::new(x, y)), cfg)
}

/// (1/π)∬_Δ g dA over Δ = {|ζ−1| < 1}.
///
/// Polar coordinates at the origin with ρ = 2cos φ·e^{−s}, s ∈ [0, ∞), so the
/// radial integrand is g(ρe^{iφ})·ρ² and algebraic behaviour at ζ = 0 becomes
/// exponential decay in s.
pub fn disk_integral<F>(g: F, cfg: &QuadratureConfig) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    cfg.validate()?;
    let inner_cfg = cfg.tightened(0.1);
    let radial = |phi: f64| -> Result<Complex64> {
        let edge = 2.0 * phi.cos();
        if edge <= 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let dir = Complex64::from_polar(1.0, phi);
        integrate_half_line(
            |s: f64| -> Result<Complex64> {
                let rho = edge * (-s).exp();
                if rho == 0.0 {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                Ok(g(dir * rho)? * (rho * rho))
            },
            0.0,
            &inner_cfg,
        )
    };
    let est = adaptive(&radial, &panels(-FRAC_PI_2, FRAC_PI_2, 4), cfg, true)?;
    Ok(est.value / PI)
}

/// ∫_ℝ |ψ(ξ)|² e^{c·e^ξ} dξ, evaluated as exp(2 Re log ψ + c e^ξ).
pub fn weighted_axis_integral(psi: &SpectralDensity, weight_exponent: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if psi.is_zero() {
        return Ok(0.0);
    }
    let (lo, hi) = psi.support();
    integrate_range(
        |xi: f64| -> Result<f64> {
            Ok(psi
                .ln_weighted(xi, 0.5 * weight_exponent)
                .map_or(0.0, |l| (2.0 * l.re).exp()))
        },
        lo,
        hi,
        cfg,
    )
}

/// ∫_0^∞ dx ∫_ℝ |g(x+iy)|² dy, the unweighted area norm on the right half-plane.
pub fn half_plane_area_integral<F>(g: F, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    cfg.validate()?;
    let inner_cfg = cfg.tightened(0.1);
    let vertical =
        |x: f64| -> Result<f64> { integrate_real_line(|y: f64| Ok(g(Complex64::new(x, y))?.norm_sqr()), &inner_cfg) };
    integrate_unbounded(&vertical, false, 0.0, cfg, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gammakit::cgamma;
    use approx::assert_relative_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn kronrod_weights_integrate_constants() {
        let sum_k: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        let sum_g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert_relative_eq!(sum_k, 2.0, epsilon = 1e-15);
        assert_relative_eq!(sum_g, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn polynomials_and_elementary() {
        let v: f64 = integrate(|x: f64| Ok(x.powi(7)), 0.0, 1.0, &cfg()).unwrap();
        assert_relative_eq!(v, 0.125, epsilon = 1e-15);
        let v: f64 = integrate(|x: f64| Ok(x.sin()), 0.0, PI, &cfg()).unwrap();
        assert_relative_eq!(v, 2.0, epsilon = 1e-12);
        let v: f64 = integrate(|x: f64| Ok(x.sqrt()), 0.0, 1.0, &cfg()).unwrap();
        assert_relative_eq!(v, 2.0 / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn complex_integrand() {
        let v: Complex64 = integrate(|x: f64| Ok(Complex64::new(0.0, x).exp()), 0.0, PI, &cfg()).unwrap();
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn gamma_on_critical_line_gives_pi() {
        let g = HalfPlaneFunction::new("gamma", 0.0, cgamma);
        let v = line_integral(&g, 0.5, &cfg()).unwrap();
        assert_relative_eq!(v, PI, max_relative = 1e-8);
    }

    #[test]
    fn cauchy_density_needs_tail_extension() {
        let g = HalfPlaneFunction::new("1/(z+1)", -1.0, |z| Ok(1.0 / (z + 1.0)));
        let v = line_integral(&g, 0.0, &cfg()).unwrap();
        assert_relative_eq!(v, PI, max_relative = 1e-7);
        let short = QuadratureConfig {
            decay_probe: false,
            ..cfg()
        };
        let truncated = line_integral(&g, 0.0, &short).unwrap();
        assert_relative_eq!(truncated, 2.0 * 30f64.atan(), max_relative = 1e-9);
    }

    #[test]
    fn growing_integrand_is_rejected() {
        let g = HalfPlaneFunction::entire("exp(-z^2)", |z| Ok((-z * z).exp()));
        assert!(matches!(line_integral(&g, 0.0, &cfg()), Err(Error::NonConvergence(_))));
        let flat = HalfPlaneFunction::entire("1", |_| Ok(Complex64::new(1.0, 0.0)));
        assert!(matches!(
            line_integral(&flat, 0.0, &cfg()),
            Err(Error::NonConvergence(_))
        ));
    }

    #[test]
    fn subdivision_budget_is_enforced() {
        let tight = QuadratureConfig {
            max_subdivisions: 1,
            ..cfg()
        };
        let r: Result<f64> = integrate(|x: f64| Ok((50.0 * x).sin().abs()), 0.0, 10.0, &tight);
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }

    #[test]
    fn disk_moments() {
        let one = disk_integral(|_| Ok(Complex64::new(1.0, 0.0)), &cfg()).unwrap();
        assert!((one - 1.0).norm() < 1e-9);
        let z = disk_integral(Ok, &cfg()).unwrap();
        assert!((z - 1.0).norm() < 1e-9);
        let sq = disk_integral(|z: Complex64| Ok(Complex64::new(z.norm_sqr(), 0.0)), &cfg()).unwrap();
        assert!((sq - 1.5).norm() < 1e-9);
    }

    #[test]
    fn weighted_axis_examples() {
        let psi = SpectralDensity::from_fn((f64::NEG_INFINITY, f64::INFINITY), |xi| {
            Complex64::new((xi - 2.0 * xi.exp()).exp(), 0.0)
        });
        let v = weighted_axis_integral(&psi, 2.0, &cfg()).unwrap();
        assert_relative_eq!(v, 0.25, max_relative = 1e-8);
        assert_eq!(
            weighted_axis_integral(&SpectralDensity::zero(), 2.0, &cfg()).unwrap(),
            0.0
        );

        // Oracle for the indicator: composite Simpson on a fine grid.
        let ind = SpectralDensity::from_shape(crate::functions::SpectralShape::Indicator { lo: 0.0, hi: 1.0 }).unwrap();
        let n = 20_000;
        let h = 1.0 / n as f64;
        let simpson: f64 = (0..=n)
            .map(|k| {
                let w = if k == 0 || k == n {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * (2.0 * (k as f64 * h).exp()).exp()
            })
            .sum::<f64>()
            * h
            / 3.0;
        let v = weighted_axis_integral(&ind, 2.0, &cfg()).unwrap();
        assert_relative_eq!(v, simpson, max_relative = 1e-10);
    }

    #[test]
    fn half_plane_area_of_cayley_image_of_one() {
        let c = 2.0 / PI.sqrt();
        let v = half_plane_area_integral(|w: Complex64| Ok(-c / ((w + 1.0) * (w + 1.0))), &cfg()).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-6);
    }

    #[test]
    fn infinite_ranges_either_side() {
        let v: f64 = integrate_range(|x: f64| Ok(x.exp()), f64::NEG_INFINITY, 0.0, &cfg()).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-9);
        let v: f64 = integrate_range(|x: f64| Ok((-x).exp()), 1.0, f64::INFINITY, &cfg()).unwrap();
        assert_relative_eq!(v, (-1.0f64).exp(), max_relative = 1e-9);
        assert!(integrate_range(|x: f64| Ok(x), 1.0, 0.0, &cfg()).is_err());
    }

    #[test]
    fn config_validation() {
        let bad = QuadratureConfig { abs_tol: 0.0, ..cfg() };
        assert!(matches!(bad.validate(), Err(Error::Precondition(_))));
        let r: Result<f64> = integrate(|x: f64| Ok(x), 0.0, 1.0, &bad);
        assert!(r.is_err());
    }
}
