//! The Mellin–Bergman transform M_Δ f(z) = ⟨f, ζ^(z̄−1)⟩ on A²(Δ), its
//! target space ℋ with kernel H, the Cayley pushforward to the right
//! half-plane and the map T that factors M_Δ through the classical Mellin
//! transform.

use std::f64::consts::{LN_2, PI, SQRT_2};

use num_complex::Complex64;

use crate::disk_space::{DiskFunction, PowerTerm};
use crate::error::{Error, Result};
pub use crate::functions::HalfPlaneFunction;
use crate::gammakit::log_cgamma;
use crate::m2_space::{m2_norm_sq, mellin, M2Norm, OmegaMeasure};
use crate::quad::{disk_integral, QuadratureConfig};

/// Margin kept between the declared domain of `mb_power` and its first pole.
pub const POLE_MARGIN: f64 = 1e-9;

/// Scale in T(ζ^(λ−1))(t) = −(T_MAP_SCALE · 2^λ / Γ(1+λ)) t^λ e^(−2t).
///
/// Pinned so that M_Δ g(z) = −√π 2^z/Γ(z+1) · M(Tg)(z) holds exactly with the
/// symmetric 1/√(2π) Mellin normalization.
pub const T_MAP_SCALE: f64 = SQRT_2;

/// ∫₀^∞ |Tg(t)|² e^(2t) dt/t divided by ‖g‖²_{A²(Δ)}.
///
/// With T_MAP_SCALE fixed by the factorization, T is an isometry only up to
/// this factor (λ = 1 gives 8∫t e^(−2t)dt = 2 against ‖1‖² = 1).
pub const T_MAP_NORM_RATIO: f64 = 2.0;

/// ‖M_Δ f‖²_ℋ divided by ‖f‖²_{A²(Δ)}, where ‖g‖_ℋ = ‖Γ(1+z) 2^(−z) g‖_{ℳ²_ω}.
///
/// Follows from `T_MAP_NORM_RATIO` and the √π in the factorization; it is the
/// normalization under which H(z,w) reproduces ℋ.
pub const H_NORM_RATIO: f64 = 2.0 * PI;

const LN_SQRT_PI: f64 = 0.572_364_942_924_700_1;

fn check_exponent(lambda: Complex64) -> Result<()> {
    if lambda.re > 0.0 && lambda.re.is_finite() && lambda.im.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("exponent needs Re λ > 0, got {lambda}")))
    }
}

fn ln_mb_power(lambda: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(log_cgamma(z + lambda)? - log_cgamma(z + 1.0)? - log_cgamma(lambda + 1.0)?)
}

/// M_Δ(ζ^(λ−1))(z) = Γ(z+λ) / (Γ(z+1) Γ(λ+1)).
pub fn mb_power(lambda: Complex64) -> Result<HalfPlaneFunction> {
    check_exponent(lambda)?;
    let min_re = -lambda.re.min(1.0) + POLE_MARGIN;
    Ok(HalfPlaneFunction::new(format!("mb_power({lambda})"), min_re, move |z| {
        Ok(ln_mb_power(lambda, z)?.exp())
    })
    .with_ln_abs(move |z| Ok(ln_mb_power(lambda, z)?.re)))
}

/// M_Δ f as the matching combination of `mb_power` terms.
pub fn mb_transform(f: &DiskFunction) -> HalfPlaneFunction {
    if f.is_zero() {
        return HalfPlaneFunction::zero();
    }
    let terms: Vec<PowerTerm> = f.terms().to_vec();
    let min_re = terms
        .iter()
        .map(|t| -t.lambda.re.min(1.0) + POLE_MARGIN)
        .fold(f64::NEG_INFINITY, f64::max);
    HalfPlaneFunction::new("mb_transform", min_re, move |z| {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &terms {
            acc += t.coeff * ln_mb_power(t.lambda, z)?.exp();
        }
        Ok(acc)
    })
}

/// M_Δ g(z) = (1/π)∬_Δ g(ζ) ζ̄^(z−1) dA by quadrature.
pub fn mb_quad<G>(g: G, z: Complex64, cfg: &QuadratureConfig) -> Result<Complex64>
where
    G: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if !(z.re > 0.0) {
        return Err(Error::domain(format!("mb_quad needs Re z > 0, got {z}")));
    }
    let zm1 = z - 1.0;
    disk_integral(|zeta: Complex64| Ok(g(zeta)? * (zm1 * zeta.conj().ln()).exp()), cfg)
}

/// Reproducing kernel of ℋ: H(z,w) = Γ(z+w̄) / (2π Γ(1+z) Γ(1+w̄)).
pub fn h_kernel(z: Complex64, w: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0 && w.re > 0.0) {
        return Err(Error::domain(format!(
            "h_kernel needs Re z, Re w > 0, got z = {z}, w = {w}"
        )));
    }
    let wc = w.conj();
    let ln = log_cgamma(z + wc)? - log_cgamma(z + 1.0)? - log_cgamma(wc + 1.0)?;
    Ok(ln.exp() / (2.0 * PI))
}

/// Pointwise bound ‖f‖ · Γ(2 Re z)^(1/2) / |Γ(z+1)| on |M_Δ f(z)|.
pub fn type_envelope(z: Complex64, norm_f: f64) -> Result<f64> {
    if !(z.re > 0.0) {
        return Err(Error::domain(format!("type_envelope needs Re z > 0, got {z}")));
    }
    let ln = 0.5 * log_cgamma(Complex64::new(2.0 * z.re, 0.0))?.re - log_cgamma(z + 1.0)?.re;
    Ok(norm_f * ln.exp())
}

/// f̃(w) = (1/√π) φ′(w) f(φ(w)) with φ(w) = 2/(w+1), mapping A²(Δ)
/// isometrically onto the unweighted Bergman space of the right half-plane.
///
/// Each term c ζ^(λ−1) becomes −c (2^λ/√π)(w+1)^(−λ−1).
pub fn cayley_pushforward(f: &DiskFunction) -> HalfPlaneFunction {
    let terms: Vec<PowerTerm> = f.terms().to_vec();
    HalfPlaneFunction::new("cayley_pushforward", 0.0, move |w| {
        let ln_w1 = (w + 1.0).ln();
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &terms {
            acc -= t.coeff * (t.lambda * LN_2 - LN_SQRT_PI - (t.lambda + 1.0) * ln_w1).exp();
        }
        Ok(acc)
    })
    .with_closed_boundary()
}

/// Cayley map φ(w) = 2/(w+1) from the right half-plane onto Δ.
pub fn cayley_map(w: Complex64) -> Complex64 {
    2.0 / (w + 1.0)
}

/// T(ζ^(λ−1)) as a function on (0, ∞).
#[derive(Debug, Clone, Copy)]
pub struct TMapPower {
    lambda: Complex64,
    ln_scale: Complex64,
}

impl TMapPower {
    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        if !(t > 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        -(self.ln_scale + self.lambda * t.ln() - 2.0 * t).exp()
    }

    /// log |T(ζ^(λ−1))(t)| for t > 0.
    pub fn ln_abs(&self, t: f64) -> f64 {
        (self.ln_scale + self.lambda * t.ln()).re - 2.0 * t
    }
}

/// T(ζ^(λ−1))(t) = −(T_MAP_SCALE · 2^λ / Γ(1+λ)) t^λ e^(−2t).
pub fn t_map_power(lambda: Complex64) -> Result<TMapPower> {
    check_exponent(lambda)?;
    let ln_scale = T_MAP_SCALE.ln() + lambda * LN_2 - log_cgamma(lambda + 1.0)?;
    Ok(TMapPower { lambda, ln_scale })
}

/// |M_Δ(ζ^(λ−1))(z) − (−√π 2^z / Γ(z+1)) · M(T ζ^(λ−1))(z)|.
pub fn factorization_check(lambda: Complex64, z: Complex64) -> Result<f64> {
    if !(z.re > 0.0) {
        return Err(Error::domain(format!("factorization_check needs Re z > 0, got {z}")));
    }
    let direct = mb_power(lambda)?.eval(z)?;
    let tg = t_map_power(lambda)?;
    let cfg = QuadratureConfig {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        ..QuadratureConfig::default()
    };
    let m = mellin(|t| tg.eval(t), z, &cfg)?;
    let prefactor = -(z * LN_2 + LN_SQRT_PI - log_cgamma(z + 1.0)?).exp();
    Ok((direct - prefactor * m).norm())
}

/// ‖g‖²_ℋ = ‖Γ(1+z) 2^(−z) g(z)‖²_{ℳ²_ω}.
pub fn h_norm_sq(g: &HalfPlaneFunction, omega: &OmegaMeasure, cfg: &QuadratureConfig) -> Result<M2Norm> {
    let inner = g.clone();
    let lifted = HalfPlaneFunction::new(format!("lift({})", g.tag()), g.domain_min_re(), move |z| {
        let v = inner.eval(z)?;
        if v == Complex64::new(0.0, 0.0) {
            return Ok(v);
        }
        Ok(v * (log_cgamma(z + 1.0)? - z * LN_2).exp())
    })
    .with_closed_boundary();
    m2_norm_sq(&lifted, omega, cfg)
}
