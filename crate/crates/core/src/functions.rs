//! Function handles shared by the transform and space modules.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

type EvalFn = dyn Fn(Complex64) -> Result<Complex64> + Send + Sync;
type LnAbsFn = dyn Fn(Complex64) -> Result<f64> + Send + Sync;

/// An analytic function on a right half-plane `{Re z > domain_min_re}`
/// (optionally including the boundary line), or on all of ℂ.
///
/// `eval` refuses points outside the declared domain, so closures never see
/// arguments they were not written for.
#[derive(Clone)]
pub struct HalfPlaneFunction {
    eval: Arc<EvalFn>,
    ln_abs: Option<Arc<LnAbsFn>>,
    domain_min_re: f64,
    closed: bool,
    tag: String,
}

impl HalfPlaneFunction {
    pub fn new<F>(tag: impl Into<String>, domain_min_re: f64, f: F) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        HalfPlaneFunction {
            eval: Arc::new(f),
            ln_abs: None,
            domain_min_re,
            closed: false,
            tag: tag.into(),
        }
    }

    pub fn entire<F>(tag: impl Into<String>, f: F) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        Self::new(tag, f64::NEG_INFINITY, f)
    }

    pub fn zero() -> Self {
        Self::entire("0", |_| Ok(Complex64::new(0.0, 0.0)))
    }

    /// Include the boundary line `Re z = domain_min_re` in the domain.
    pub fn with_closed_boundary(mut self) -> Self {
        self.closed = true;
        self
    }

    /// Attach an overflow-safe evaluation of `log |f|`.
    pub fn with_ln_abs<G>(mut self, g: G) -> Self
    where
        G: Fn(Complex64) -> Result<f64> + Send + Sync + 'static,
    {
        self.ln_abs = Some(Arc::new(g));
        self
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn domain_min_re(&self) -> f64 {
        self.domain_min_re
    }

    pub fn is_entire(&self) -> bool {
        self.domain_min_re == f64::NEG_INFINITY
    }

    pub fn boundary_included(&self) -> bool {
        self.closed
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if self.is_entire() {
            return true;
        }
        if self.closed {
            z.re >= self.domain_min_re
        } else {
            z.re > self.domain_min_re
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !self.contains(z) {
            return Err(Error::domain(format!(
                "{} evaluated at {z}, outside Re z {} {}",
                self.tag,
                if self.closed { ">=" } else { ">" },
                self.domain_min_re
            )));
        }
        (self.eval)(z)
    }

    pub fn ln_abs(&self, z: Complex64) -> Result<f64> {
        match &self.ln_abs {
            Some(g) if self.contains(z) => g(z),
            _ => Ok(self.eval(z)?.norm().ln()),
        }
    }

    /// `z ↦ c · f(z)` on the same domain.
    pub fn scaled(&self, c: Complex64) -> Self {
        let inner = self.clone();
        let mut out = HalfPlaneFunction::new(format!("{c}*({})", self.tag), self.domain_min_re, move |z| {
            Ok(c * inner.eval(z)?)
        });
        out.closed = self.closed;
        if let Some(g) = self.ln_abs.clone() {
            let lc = c.norm().ln();
            out.ln_abs = Some(Arc::new(move |z| Ok(lc + g(z)?)));
        }
        out
    }

    /// Pointwise sum; the domain is the intersection of both domains.
    pub fn sum(&self, other: &HalfPlaneFunction) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let (min_re, closed) = if self.domain_min_re > other.domain_min_re {
            (self.domain_min_re, self.closed)
        } else if other.domain_min_re > self.domain_min_re {
            (other.domain_min_re, other.closed)
        } else {
            (self.domain_min_re, self.closed && other.closed)
        };
        let mut out = HalfPlaneFunction::new(format!("{}+{}", self.tag, other.tag), min_re, move |z| {
            Ok(a.eval(z)? + b.eval(z)?)
        });
        out.closed = closed;
        out
    }
}

impl fmt::Debug for HalfPlaneFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HalfPlaneFunction")
            .field("tag", &self.tag)
            .field("domain_min_re", &self.domain_min_re)
            .field("closed", &self.closed)
            .finish()
    }
}

/// Parametric spectral data that can be written to and read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralShape {
    /// `(1/√(2π)) e^{-2e^ξ} e^{w̄ ξ}`, the boundary spectrum of the kernel `K_w`.
    KernelDatum {
        w: Complex64,
    },
    /// `e^{-ξ²} e^{-e^ξ}`.
    GaussDoubleExp,
    /// `𝟙_{[lo, hi]}(ξ)`.
    Indicator {
        lo: f64,
        hi: f64,
    },
    /// Smooth bump `exp(-1/(1-u²))` with `u` the affine image of ξ in (-1, 1).
    Bump {
        lo: f64,
        hi: f64,
    },
    Zero,
}

type LnSpectrum = dyn Fn(f64) -> Option<Complex64> + Send + Sync;

/// Boundary data ψ(ξ) on the real line.
///
/// Values are stored in logarithmic form (`None` meaning an exact zero) so
/// that products such as `ψ(ξ) e^{zξ}` or `|ψ(ξ)|² e^{2e^ξ}` can be formed
/// without overflow.
#[derive(Clone)]
pub struct SpectralDensity {
    /// log ψ(ξ) + double_exp·e^ξ.
    ln_value: Arc<LnSpectrum>,
    /// Coefficient `a` of a factor e^{-a e^ξ} kept out of `ln_value`, so that
    /// it can cancel exactly against the weight e^{2e^ξ}.
    double_exp: f64,
    support: (f64, f64),
    shape: Option<SpectralShape>,
}

impl SpectralDensity {
    pub fn from_shape(shape: SpectralShape) -> Result<Self> {
        let inv_sqrt_2pi_ln = -0.5 * (2.0 * PI).ln();
        let mut double_exp = 0.0;
        let (ln_value, support): (Arc<LnSpectrum>, (f64, f64)) = match shape.clone() {
            SpectralShape::KernelDatum { w } => {
                if !(w.re > 0.0) {
                    return Err(Error::domain(format!("kernel datum needs Re w > 0, got {w}")));
                }
                let wc = w.conj();
                double_exp = 2.0;
                (
                    Arc::new(move |xi: f64| Some(inv_sqrt_2pi_ln + wc * xi)),
                    (f64::NEG_INFINITY, f64::INFINITY),
                )
            }
            SpectralShape::GaussDoubleExp => {
                double_exp = 1.0;
                (
                    Arc::new(|xi: f64| Some(Complex64::new(-xi * xi, 0.0))),
                    (f64::NEG_INFINITY, f64::INFINITY),
                )
            }
            SpectralShape::Indicator { lo, hi } => {
                check_interval(lo, hi)?;
                (
                    Arc::new(move |xi: f64| (lo..=hi).contains(&xi).then(|| Complex64::new(0.0, 0.0))),
                    (lo, hi),
                )
            }
            SpectralShape::Bump { lo, hi } => {
                check_interval(lo, hi)?;
                let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
                (
                    Arc::new(move |xi: f64| {
                        let u = (xi - mid) / half;
                        (u.abs() < 1.0).then(|| Complex64::new(-1.0 / (1.0 - u * u), 0.0))
                    }),
                    (lo, hi),
                )
            }
            SpectralShape::Zero => (Arc::new(|_| None), (0.0, 0.0)),
        };
        Ok(SpectralDensity {
            ln_value,
            double_exp,
            support,
            shape: Some(shape),
        })
    }

    /// Wrap an arbitrary function. `support` bounds may be infinite.
    pub fn from_fn<F>(support: (f64, f64), f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        SpectralDensity {
            ln_value: Arc::new(move |xi| {
                let v = f(xi);
                (v != Complex64::new(0.0, 0.0)).then(|| v.ln())
            }),
            double_exp: 0.0,
            support,
            shape: None,
        }
    }

    pub fn zero() -> Self {
        Self::from_shape(SpectralShape::Zero).expect("zero density is always valid")
    }

    pub fn shape(&self) -> Option<&SpectralShape> {
        self.shape.as_ref()
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.shape, Some(SpectralShape::Zero))
    }

    /// `log ψ(ξ)`, `None` where ψ vanishes.
    pub fn ln_value(&self, xi: f64) -> Option<Complex64> {
        self.ln_weighted(xi, 0.0)
    }

    /// `log(ψ(ξ) e^{b e^ξ})`, exact when `b` cancels the density's own
    /// double-exponential factor.
    pub fn ln_weighted(&self, xi: f64, b: f64) -> Option<Complex64> {
        if xi < self.support.0 || xi > self.support.1 {
            return None;
        }
        let c = b - self.double_exp;
        let l = (self.ln_value)(xi)?;
        Some(if c == 0.0 { l } else { l + c * xi.exp() })
    }

    pub fn value(&self, xi: f64) -> Complex64 {
        self.ln_value(xi).map_or(Complex64::new(0.0, 0.0), |l| l.exp())
    }
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(Error::domain(format!("bad support interval [{lo}, {hi}]")))
    }
}

impl fmt::Debug for SpectralDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralDensity")
            .field("shape", &self.shape)
            .field("support", &self.support)
            .finish()
    }
}

impl Serialize for SpectralDensity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.shape {
            Some(shape) => shape.serialize(s),
            None => Err(serde::ser::Error::custom(
                "spectral density built from a closure has no JSON form",
            )),
        }
    }
}

impl<'de> Deserialize<'de> for SpectralDensity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let shape = SpectralShape::deserialize(d)?;
        SpectralDensity::from_shape(shape).map_err(serde::de::Error::custom)
    }
}
