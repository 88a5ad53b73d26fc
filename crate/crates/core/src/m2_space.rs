//! The space ℳ²_ω(ℛ) of holomorphic functions on the right half-plane with
//! norm ‖f‖² = Σ_n (2ⁿ/n!) ∫_ℝ |f(n/2 + iy)|² dy, together with its
//! Paley–Wiener description, reproducing kernel, the classical Mellin
//! transform and the membership and L^p diagnostics built on them.
//!
//! All Fourier and Mellin transforms use the symmetric 1/√(2π) normalization.

use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::functions::{HalfPlaneFunction, SpectralDensity, SpectralShape};
use crate::gammakit::log_cgamma;
use crate::quad::{
    integrate_range, integrate_real_line, line_integral, line_integral_complex, weighted_axis_integral,
    QuadratureConfig,
};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Truncation N used when none is given.
pub const DEFAULT_TRUNCATION: usize = 40;

/// Discrete measure ω = Σ_{n ≤ N} (2ⁿ/n!) δ_{n/2} ⊗ dy, truncated at N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaMeasure {
    pub truncation_n: usize,
}

impl Default for OmegaMeasure {
    fn default() -> Self {
        OmegaMeasure {
            truncation_n: DEFAULT_TRUNCATION,
        }
    }
}

impl OmegaMeasure {
    pub fn new(truncation_n: usize) -> Self {
        OmegaMeasure { truncation_n }
    }

    /// Abscissa n/2 of the n-th line.
    pub fn node(&self, n: usize) -> f64 {
        n as f64 / 2.0
    }

    /// log(2ⁿ/n!).
    pub fn ln_weight(&self, n: usize) -> f64 {
        n as f64 * LN_2 - ln_factorial(n)
    }

    pub fn weight(&self, n: usize) -> f64 {
        self.ln_weight(n).exp()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.truncation_n).map(|n| self.node(n)).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..=self.truncation_n).map(|n| self.weight(n)).collect()
    }
}

fn ln_factorial(n: usize) -> f64 {
    if n < 256 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    } else {
        log_cgamma(Complex64::new(n as f64 + 1.0, 0.0))
            .expect("positive argument")
            .re
    }
}

/// Truncated ω-norm with its per-line terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct M2Norm {
    pub total: f64,
    /// w_n ∫|f(n/2 + iy)|² dy for n = 0..=N.
    pub terms: Vec<f64>,
    /// Last three terms decrease and the last one is below tolerance.
    pub converged: bool,
}

fn require_boundary(f: &HalfPlaneFunction) -> Result<()> {
    if f.contains(Complex64::new(0.0, 0.0)) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{} is not defined on the boundary line Re z = 0",
            f.tag()
        )))
    }
}

fn tail_converged(terms: &[f64], total: f64, cfg: &QuadratureConfig) -> bool {
    let k = terms.len();
    if k < 3 {
        return false;
    }
    let tail = &terms[k - 3..];
    tail[0] > tail[1] && tail[1] > tail[2] && tail[2] < cfg.abs_tol.max(cfg.rel_tol * total.abs())
}

/// ‖f‖² against ω truncated at N.
pub fn m2_norm_sq(f: &HalfPlaneFunction, omega: &OmegaMeasure, cfg: &QuadratureConfig) -> Result<M2Norm> {
    require_boundary(f)?;
    let terms: Vec<f64> = (0..=omega.truncation_n)
        .into_par_iter()
        .map(|n| Ok(omega.weight(n) * line_integral(f, omega.node(n), cfg)?))
        .collect::<Result<_>>()?;
    let total: f64 = terms.iter().sum();
    let converged = tail_converged(&terms, total, cfg);
    Ok(M2Norm {
        total,
        terms,
        converged,
    })
}

/// ⟨f, g⟩ = Σ w_n ∫ f(n/2 + iy) conj g(n/2 + iy) dy.
pub fn m2_inner(
    f: &HalfPlaneFunction,
    g: &HalfPlaneFunction,
    omega: &OmegaMeasure,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    require_boundary(f)?;
    require_boundary(g)?;
    let terms: Vec<Complex64> = (0..=omega.truncation_n)
        .into_par_iter()
        .map(|n| {
            let line = line_integral_complex(|z| Ok(f.eval(z)? * g.eval(z)?.conj()), omega.node(n), cfg)?;
            Ok(line * omega.weight(n))
        })
        .collect::<Result<_>>()?;
    Ok(terms.into_iter().sum())
}

fn ln_m2_kernel(z: Complex64, w: Complex64) -> Result<Complex64> {
    let s = z + w.conj();
    if !(s.re > 0.0) {
        return Err(Error::domain(format!("K(z, w) needs Re(z + w̄) > 0, got {s}")));
    }
    Ok(log_cgamma(s)? - s * LN_2 - (2.0 * PI).ln())
}

/// Reproducing kernel K(z, w) = Γ(z + w̄) / (2π 2^(z + w̄)).
pub fn m2_kernel(z: Complex64, w: Complex64) -> Result<Complex64> {
    Ok(ln_m2_kernel(z, w)?.exp())
}

/// K_w = K(·, w) as a function on Re z > −Re w.
pub fn kernel_function(w: Complex64) -> Result<HalfPlaneFunction> {
    if !(w.re > 0.0) {
        return Err(Error::domain(format!("kernel K_w needs Re w > 0, got {w}")));
    }
    Ok(
        HalfPlaneFunction::new(format!("K_{w}"), -w.re, move |z| m2_kernel(z, w))
            .with_ln_abs(move |z| Ok(ln_m2_kernel(z, w)?.re)),
    )
}

/// f(z) = (1/√(2π)) ∫ ψ(ξ) e^(zξ) dξ, one adaptive quadrature per evaluation.
///
/// Compactly supported ψ give entire functions; otherwise the domain is the
/// closed half-plane Re z ≥ 0.
pub fn pw_synthesis(psi: &SpectralDensity, cfg: &QuadratureConfig) -> HalfPlaneFunction {
    if psi.is_zero() {
        return HalfPlaneFunction::zero();
    }
    let (lo, hi) = psi.support();
    let psi = psi.clone();
    let inner_cfg = cfg.tightened(0.1);
    let eval = move |z: Complex64| -> Result<Complex64> {
        integrate_range(
            |xi: f64| -> Result<Complex64> {
                Ok(psi
                    .ln_value(xi)
                    .map_or(Complex64::new(0.0, 0.0), |l| (l + z * xi - LN_SQRT_2PI).exp()))
            },
            lo,
            hi,
            &inner_cfg,
        )
    };
    if lo.is_finite() && hi.is_finite() {
        HalfPlaneFunction::entire("pw_synthesis", eval)
    } else {
        HalfPlaneFunction::new("pw_synthesis", 0.0, eval).with_closed_boundary()
    }
}

/// ℱ(f(x + i·))(ξ) = (1/√(2π)) ∫ f(x + iy) e^(−iyξ) dy.
///
/// For f = pw_synthesis(ψ) this returns e^(xξ) ψ(ξ).
pub fn pw_analysis(f: &HalfPlaneFunction, x: f64, xi: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    let v = integrate_real_line(
        |y: f64| -> Result<Complex64> { Ok(f.eval(Complex64::new(x, y))? * Complex64::new(0.0, -y * xi).exp()) },
        cfg,
    )?;
    Ok(v * (-LN_SQRT_2PI).exp())
}

/// Two sides of an isometry identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// |lhs − rhs| / rhs, or 0 when both sides vanish.
    pub rel_err: f64,
}

impl IsometryCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        let rel_err = if lhs == 0.0 && rhs == 0.0 {
            0.0
        } else {
            (lhs - rhs).abs() / rhs.abs()
        };
        IsometryCheck { lhs, rhs, rel_err }
    }
}

/// ‖pw_synthesis(ψ)‖²_{ℳ²_ω} against ∫|ψ|² e^(2e^ξ) dξ.
pub fn pw_isometry_check(psi: &SpectralDensity, omega: &OmegaMeasure, cfg: &QuadratureConfig) -> Result<IsometryCheck> {
    let lhs = m2_norm_sq(&pw_synthesis(psi, cfg), omega, cfg)?.total;
    let rhs = weighted_axis_integral(psi, 2.0, cfg)?;
    Ok(IsometryCheck::new(lhs, rhs))
}

/// (1/√(2π)) ∫₀^∞ φ(t) t^(z−1) dt, computed in the variable s = log t.
pub fn mellin<F>(phi: F, z: Complex64, cfg: &QuadratureConfig) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    integrate_real_line(
        |s: f64| -> Result<Complex64> {
            let v = phi(s.exp());
            if v == Complex64::new(0.0, 0.0) {
                return Ok(v);
            }
            Ok((v.ln() + z * s - LN_SQRT_2PI).exp())
        },
        cfg,
    )
}

/// z ↦ mellin(φ, z) as a function on the closed right half-plane.
pub fn mellin_function<F>(phi: F, cfg: &QuadratureConfig) -> HalfPlaneFunction
where
    F: Fn(f64) -> Complex64 + Send + Sync + 'static,
{
    let phi = Arc::new(phi);
    let cfg = cfg.tightened(0.1);
    HalfPlaneFunction::new("mellin", 0.0, move |z| mellin(|t| phi(t), z, &cfg)).with_closed_boundary()
}

/// (1/√(2π)) ∫ g(c + it) ξ^(−c−it) dt.
pub fn mellin_inverse(g: &HalfPlaneFunction, c: f64, xi: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    if !(xi > 0.0) {
        return Err(Error::domain(format!("mellin_inverse needs ξ > 0, got {xi}")));
    }
    let ln_xi = xi.ln();
    let v = line_integral_complex(|z| Ok(g.eval(z)? * (-z * ln_xi).exp()), c, cfg)?;
    Ok(v * (-LN_SQRT_2PI).exp())
}

/// ‖Mφ‖²_{ℳ²_ω} against ∫₀^∞ |φ(t)|² e^(2t) dt/t.
pub fn mellin_isometry_check<F>(phi: F, omega: &OmegaMeasure, cfg: &QuadratureConfig) -> Result<IsometryCheck>
where
    F: Fn(f64) -> Complex64 + Send + Sync + 'static,
{
    let phi = Arc::new(phi);
    let rhs = {
        let phi = Arc::clone(&phi);
        integrate_real_line(
            move |s: f64| -> Result<f64> {
                let t = s.exp();
                Ok((2.0 * phi(t).norm().ln() + 2.0 * t).exp())
            },
            cfg,
        )?
    };
    let lhs = m2_norm_sq(&mellin_function(move |t| phi(t), cfg), omega, cfg)?.total;
    Ok(IsometryCheck::new(lhs, rhs))
}

/// Relative defect of e^(2ξ) = Σ_n (2ⁿ/n!) ξⁿ truncated at N, i.e. the
/// normalized tail |Σ_{n>N} (2ξ)ⁿ/n!| e^(−2ξ).
pub fn measure_identity_check(xi: f64, n: usize) -> f64 {
    if xi == 0.0 {
        return 0.0;
    }
    let x = 2.0 * xi;
    let ln_ax = x.abs().ln();
    let mut tail = 0.0;
    let mut k = n + 1;
    loop {
        let ln_term = k as f64 * ln_ax - ln_factorial(k) - x;
        let sign = if x < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        let term = sign * ln_term.exp();
        tail += term;
        if k as f64 > x.abs() && (term == 0.0 || term.abs() <= 1e-18 * tail.abs()) {
            break;
        }
        k += 1;
    }
    tail.abs()
}

/// Outcome of a membership profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MembershipVerdict {
    Converging,
    Diverging,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipProfile {
    pub eps0: f64,
    pub delta: f64,
    pub terms: Vec<f64>,
    /// t_{n+1}/t_n.
    pub ratios: Vec<f64>,
    /// Geometric bound on Σ_{n>N} t_n when the last-quarter ratios stay
    /// below 1, +∞ otherwise.
    pub tail_bound: f64,
    pub verdict: MembershipVerdict,
}

/// Terms w_n ∫|Γ(ε0 + δ(n/2 + iy))|² dy and a summability verdict.
///
/// Converging needs every ratio t_{n+1}/t_n in the last quarter below 1 and a
/// finite geometric tail bound; anything else is reported as Diverging.
pub fn gamma_membership_profile(
    eps0: f64,
    delta: f64,
    omega: &OmegaMeasure,
    cfg: &QuadratureConfig,
) -> Result<MembershipProfile> {
    if !(eps0 > 0.0 && delta > 0.0 && delta <= 1.0) {
        return Err(Error::Precondition(format!(
            "membership profile needs ε0 > 0 and 0 < δ ≤ 1, got ε0 = {eps0}, δ = {delta}"
        )));
    }
    if omega.truncation_n < 4 {
        return Err(Error::InsufficientData(format!(
            "membership profile needs N ≥ 4, got {}",
            omega.truncation_n
        )));
    }
    let f = gamma_dilate(eps0, delta);
    let terms = m2_norm_sq(&f, omega, cfg)?.terms;
    let ratios: Vec<f64> = terms.windows(2).map(|w| w[1] / w[0]).collect();
    let quarter = (ratios.len() / 4).max(1);
    let last = &ratios[ratios.len() - quarter..];
    let worst = last.iter().cloned().fold(0.0, f64::max);
    let (verdict, tail_bound) = if worst < 1.0 {
        let t_n = *terms.last().expect("N ≥ 4");
        (MembershipVerdict::Converging, t_n * worst / (1.0 - worst))
    } else {
        (MembershipVerdict::Diverging, f64::INFINITY)
    };
    Ok(MembershipProfile {
        eps0,
        delta,
        terms,
        ratios,
        tail_bound,
        verdict,
    })
}

/// z ↦ Γ(ε0 + δ z) on Re z > −ε0/δ.
pub fn gamma_dilate(eps0: f64, delta: f64) -> HalfPlaneFunction {
    HalfPlaneFunction::new(format!("Gamma({eps0}+{delta}z)"), -eps0 / delta, move |z| {
        Ok(log_cgamma(eps0 + delta * z)?.exp())
    })
    .with_ln_abs(move |z| Ok(log_cgamma(eps0 + delta * z)?.re))
}

/// Partial sums of Σ (2ⁿ/n!) ∫|K_w(n/2 + iy)|^p dy with a divergence flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpPartialSums {
    pub p: f64,
    /// S_0, S_1, …, S_N.
    pub sums: Vec<f64>,
    /// Exponent whose growth sequence decides the flag: p itself for p ≥ 2,
    /// the conjugate p/(p−1) for p < 2 (+∞ for p = 1).
    pub witness_exponent: f64,
    /// Sequence whose growth decides the flag: the partial sums for the
    /// witness exponent, or for p = 1 the running maximum of sup_y |K_w|
    /// on the lines Re z = n/2.
    pub witness: Vec<f64>,
    /// witness_N / witness_{⌊N/2⌋}.
    pub growth_ratio: f64,
    pub diverging: bool,
}

/// Growth above this factor between N/2 and N flags divergence.
pub const LP_GROWTH_THRESHOLD: f64 = 10.0;

fn kernel_lp_sums(w: Complex64, p: f64, n: usize, cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    let omega = OmegaMeasure::new(n);
    let terms: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let x = omega.node(k);
            let line = integrate_real_line(|y: f64| Ok((p * ln_m2_kernel(Complex64::new(x, y), w)?.re).exp()), cfg)?;
            Ok(omega.weight(k) * line)
        })
        .collect::<Result<_>>()?;
    Ok(terms
        .iter()
        .scan(0.0, |acc, t| {
            *acc += t;
            Some(*acc)
        })
        .collect())
}

/// Partial sums S_0..=S_N of the ℳ^p-type norm of K_w.
///
/// For p > 2 the sums themselves blow up. For p < 2 they may stay bounded,
/// and unboundedness of the projection is witnessed on the dual exponent.
pub fn lp_kernel_partial_sums(w: Complex64, p: f64, n: usize, cfg: &QuadratureConfig) -> Result<LpPartialSums> {
    if !(w.re > 0.0) {
        return Err(Error::domain(format!("needs Re w > 0, got {w}")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("needs 1 ≤ p < ∞, got {p}")));
    }
    if n < 2 {
        return Err(Error::InsufficientData(format!("needs N ≥ 2, got {n}")));
    }
    let sums = kernel_lp_sums(w, p, n, cfg)?;
    let (witness_exponent, witness) = if p >= 2.0 {
        (p, sums.clone())
    } else if p > 1.0 {
        let q = p / (p - 1.0);
        (q, kernel_lp_sums(w, q, n, cfg)?)
    } else {
        // sup_y |Γ(x + iy)| is attained at y = 0 for x > 0.
        let sups = (0..=n).map(|k| {
            let s = k as f64 / 2.0 + w.re;
            (log_cgamma(Complex64::new(s, 0.0))
                .map(|l| l.re)
                .unwrap_or(f64::INFINITY)
                - s * LN_2)
                .exp()
                / (2.0 * PI)
        });
        let running: Vec<f64> = sups
            .scan(0.0, |m: &mut f64, v| {
                *m = m.max(v);
                Some(*m)
            })
            .collect();
        (f64::INFINITY, running)
    };
    let growth_ratio = witness[n] / witness[n / 2];
    Ok(LpPartialSums {
        p,
        sums,
        witness_exponent,
        witness,
        growth_ratio,
        diverging: growth_ratio > LP_GROWTH_THRESHOLD,
    })
}

/// Spectral data ψ_w(ξ) = (1/√(2π)) e^(−2e^ξ) e^(w̄ξ) of the kernel K_w.
pub fn kernel_datum(w: Complex64) -> Result<SpectralDensity> {
    SpectralDensity::from_shape(SpectralShape::KernelDatum { w })
}
