//! The Bergman space A²(Δ) on Δ = {|ζ − 1| < 1}, normalized so that
//! ‖1‖ = 1, i.e. ⟨f, g⟩ = (1/π)∬_Δ f ḡ dA.
//!
//! Powers use the principal branch ζ^w = exp(w log ζ); Δ lies in the closed
//! right half-plane so arg ζ ∈ (−π/2, π/2) on Δ \ {0}.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gammakit::power_inner;

/// Exponents closer than this are merged into one term.
pub const MERGE_TOLERANCE: f64 = 1e-12;
/// Slack allowed when testing membership in the closed disk.
pub const BOUNDARY_SLACK: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// One term `coeff · ζ^(lambda − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub lambda: Complex64,
    pub coeff: Complex64,
}

/// A finite combination Σ c_m ζ^(λ_m − 1) with Re λ_m > 0.
///
/// Terms are kept sorted by (Re λ, Im λ), exponents are pairwise distinct and
/// no stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<PowerTerm>", into = "Vec<PowerTerm>")]
pub struct DiskFunction {
    terms: Vec<PowerTerm>,
}

impl TryFrom<Vec<PowerTerm>> for DiskFunction {
    type Error = Error;
    fn try_from(terms: Vec<PowerTerm>) -> Result<Self> {
        DiskFunction::new(terms.into_iter().map(|t| (t.lambda, t.coeff)))
    }
}

impl From<DiskFunction> for Vec<PowerTerm> {
    fn from(f: DiskFunction) -> Self {
        f.terms
    }
}

impl DiskFunction {
    /// Build from `(lambda, coeff)` pairs, merging near-equal exponents.
    pub fn new(terms: impl IntoIterator<Item = (Complex64, Complex64)>) -> Result<Self> {
        let mut raw: Vec<PowerTerm> = Vec::new();
        for (lambda, coeff) in terms {
            if !(lambda.re.is_finite() && lambda.im.is_finite() && coeff.re.is_finite() && coeff.im.is_finite()) {
                return Err(Error::domain(format!("non-finite term ({lambda}, {coeff})")));
            }
            if !(lambda.re > 0.0) {
                return Err(Error::domain(format!(
                    "ζ^(λ−1) lies in A²(Δ) only for Re λ > 0, got λ = {lambda}"
                )));
            }
            raw.push(PowerTerm { lambda, coeff });
        }
        raw.sort_by(|a, b| {
            a.lambda
                .re
                .total_cmp(&b.lambda.re)
                .then(a.lambda.im.total_cmp(&b.lambda.im))
        });
        let mut merged: Vec<PowerTerm> = Vec::with_capacity(raw.len());
        for t in raw {
            match merged
                .iter_mut()
                .find(|m| (m.lambda - t.lambda).norm() < MERGE_TOLERANCE)
            {
                Some(m) => m.coeff += t.coeff,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != ZERO);
        Ok(DiskFunction { terms: merged })
    }

    pub fn zero() -> Self {
        DiskFunction { terms: Vec::new() }
    }

    /// ζ^(λ−1).
    pub fn power(lambda: Complex64) -> Result<Self> {
        Self::new([(lambda, ONE)])
    }

    /// ζ^k.
    pub fn monomial(k: u32) -> Self {
        Self::power(Complex64::new(k as f64 + 1.0, 0.0)).expect("Re λ = k + 1 > 0")
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new([(ONE, c)]).expect("λ = 1 is admissible")
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.terms.iter().map(|t| (t.lambda, c * t.coeff))).expect("exponents already valid")
    }

    /// Σ c_m ζ^(λ_m − 1) at a point of the closed disk.
    pub fn evaluate(&self, zeta: Complex64) -> Result<Complex64> {
        check_closed_disk(zeta)?;
        if zeta == ZERO {
            let mut acc = ZERO;
            for t in &self.terms {
                if t.lambda == ONE {
                    acc += t.coeff;
                } else if !(t.lambda.re > 1.0) {
                    return Err(Error::domain(format!(
                        "ζ^(λ−1) with λ = {} is singular at ζ = 0",
                        t.lambda
                    )));
                }
            }
            return Ok(acc);
        }
        let log_zeta = zeta.ln();
        Ok(self
            .terms
            .iter()
            .map(|t| t.coeff * ((t.lambda - 1.0) * log_zeta).exp())
            .sum())
    }
}

impl Add for &DiskFunction {
    type Output = DiskFunction;
    fn add(self, rhs: &DiskFunction) -> DiskFunction {
        DiskFunction::new(self.terms.iter().chain(&rhs.terms).map(|t| (t.lambda, t.coeff)))
            .expect("exponents already valid")
    }
}

impl Sub for &DiskFunction {
    type Output = DiskFunction;
    fn sub(self, rhs: &DiskFunction) -> DiskFunction {
        self + &(-rhs)
    }
}

impl Neg for &DiskFunction {
    type Output = DiskFunction;
    fn neg(self) -> DiskFunction {
        self.scale(-ONE)
    }
}

impl Mul<&DiskFunction> for Complex64 {
    type Output = DiskFunction;
    fn mul(self, rhs: &DiskFunction) -> DiskFunction {
        rhs.scale(self)
    }
}

/// Whether ζ lies in the open disk Δ.
pub fn in_disk(zeta: Complex64) -> bool {
    (zeta - 1.0).norm() < 1.0
}

fn check_closed_disk(zeta: Complex64) -> Result<()> {
    if (zeta - 1.0).norm() <= 1.0 + BOUNDARY_SLACK {
        Ok(())
    } else {
        Err(Error::domain(format!("{zeta} lies outside the disk |ζ − 1| ≤ 1")))
    }
}

/// ⟨f, g⟩ = (1/π)∬_Δ f ḡ dA, in closed form over pairs of terms.
pub fn inner_product(f: &DiskFunction, g: &DiskFunction) -> Complex64 {
    let mut acc = ZERO;
    for a in &f.terms {
        for b in &g.terms {
            let pair = power_inner(a.lambda - 1.0, b.lambda - 1.0).expect("Re λ > 0 on both sides");
            acc += a.coeff * b.coeff.conj() * pair;
        }
    }
    acc
}

/// ‖f‖² in A²(Δ).
pub fn norm_sq(f: &DiskFunction) -> f64 {
    inner_product(f, f).re.max(0.0)
}

/// Reproducing kernel B_{ζ0}(ζ) = (1 − (ζ − 1)(conj ζ0 − 1))^(−2), so that
/// ⟨f, B_{ζ0}⟩ = f(ζ0).
///
/// ζ0 must lie in the open disk; ζ may also lie on the boundary circle.
pub fn bergman_kernel(zeta0: Complex64, zeta: Complex64) -> Result<Complex64> {
    if !in_disk(zeta0) {
        return Err(Error::domain(format!("kernel pole {zeta0} must lie inside Δ")));
    }
    check_closed_disk(zeta)?;
    let d = 1.0 - (zeta - 1.0) * (zeta0.conj() - 1.0);
    Ok(1.0 / (d * d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{disk_integral, QuadratureConfig};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quad_inner(f: &DiskFunction, g: &DiskFunction) -> Complex64 {
        disk_integral(
            |z| Ok(f.evaluate(z)? * g.evaluate(z)?.conj()),
            &QuadratureConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn inner_product_examples() {
        let one = DiskFunction::constant(ONE);
        assert_relative_eq!(inner_product(&one, &one).re, 1.0, max_relative = 1e-14);
        let z = DiskFunction::monomial(1);
        assert_relative_eq!(inner_product(&z, &z).re, 1.5, max_relative = 1e-14);
        let h = DiskFunction::power(c(0.5, 0.0)).unwrap();
        assert_relative_eq!(inner_product(&h, &h).re, 4.0 / PI, max_relative = 1e-13);
    }

    #[test]
    fn norm_examples() {
        assert_relative_eq!(norm_sq(&DiskFunction::constant(ONE)), 1.0, max_relative = 1e-14);
        let f = &DiskFunction::monomial(1) - &DiskFunction::constant(ONE);
        assert_relative_eq!(norm_sq(&f), 0.5, max_relative = 1e-13);
        let p = DiskFunction::power(c(0.3, 0.0)).unwrap();
        let closed =
            crate::gammakit::cgamma(c(0.6, 0.0)).unwrap().re / crate::gammakit::cgamma(c(1.3, 0.0)).unwrap().re.powi(2);
        assert_relative_eq!(norm_sq(&p), closed, max_relative = 1e-12);
        assert_relative_eq!(quad_inner(&p, &p).re, closed, max_relative = 1e-6);
        assert_eq!(norm_sq(&DiskFunction::zero()), 0.0);
    }

    #[test]
    fn canonicalization_merges_and_drops() {
        let f = DiskFunction::new([(c(2.0, 0.0), ONE), (c(2.0 + 1e-14, 0.0), -ONE), (c(1.0, 0.0), ONE)]).unwrap();
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.terms()[0].lambda, ONE);
        assert!(DiskFunction::power(c(0.0, 1.0)).is_err());
        assert!(DiskFunction::power(c(-0.5, 0.0)).is_err());
    }

    #[test]
    fn evaluation() {
        assert_relative_eq!(DiskFunction::monomial(3).evaluate(ONE).unwrap().re, 1.0);
        let h = DiskFunction::power(c(0.5, 0.0)).unwrap();
        assert_relative_eq!(
            h.evaluate(c(2.0, 0.0)).unwrap().re,
            2f64.powf(-0.5),
            max_relative = 1e-15
        );
        let w = DiskFunction::power(c(1.0, 1.0)).unwrap();
        assert!((w.evaluate(ONE).unwrap() - ONE).norm() < 1e-15);
        assert_eq!(DiskFunction::constant(c(2.0, 1.0)).evaluate(ZERO).unwrap(), c(2.0, 1.0));
        assert_eq!(DiskFunction::monomial(2).evaluate(ZERO).unwrap(), ZERO);
        assert!(matches!(h.evaluate(ZERO), Err(Error::Domain(_))));
        assert!(matches!(h.evaluate(c(3.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn kernel_examples() {
        for z in [c(0.5, 0.2), c(1.9, 0.0), c(1.0, -0.99)] {
            assert_eq!(bergman_kernel(ONE, z).unwrap(), ONE);
        }
        let z0 = c(1.2, 0.3);
        let diag = bergman_kernel(z0, z0).unwrap();
        assert_relative_eq!(diag.re, (1.0 - (z0 - 1.0).norm_sqr()).powi(-2), max_relative = 1e-14);
        assert!(diag.im.abs() < 1e-15);
        assert!(bergman_kernel(c(2.5, 0.0), ONE).is_err());
        assert!(bergman_kernel(ONE, c(-0.5, 0.0)).is_err());
    }

    #[test]
    fn kernel_reproduces_by_quadrature() {
        let z0 = c(1.2, 0.3);
        let v = disk_integral(
            |z: Complex64| Ok(z * z * bergman_kernel(z0, z)?.conj()),
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!((v - z0 * z0).norm() < 1e-6);
    }

    #[test]
    fn json_shape() {
        let f = DiskFunction::new([(c(1.0, 0.0), c(2.0, 0.0)), (c(0.5, 1.0), c(0.0, -1.0))]).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(
            text,
            r#"[{"lambda":[0.5,1.0],"coeff":[0.0,-1.0]},{"lambda":[1.0,0.0],"coeff":[2.0,0.0]}]"#
        );
        let back: DiskFunction = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<DiskFunction>(r#"[{"lambda":[-1,0],"coeff":[1,0]}]"#).is_err());
    }

    fn arb_term() -> impl Strategy<Value = (Complex64, Complex64)> {
        (0.2f64..4.0, -3.0f64..3.0, -2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b, x, y)| (c(a, b), c(x, y)))
    }

    proptest! {
        #[test]
        fn cauchy_schwarz(f in prop::collection::vec(arb_term(), 1..4), g in prop::collection::vec(arb_term(), 1..4)) {
            let f = DiskFunction::new(f).unwrap();
            let g = DiskFunction::new(g).unwrap();
            let ip = inner_product(&f, &g).norm_sqr();
            prop_assert!(ip <= norm_sq(&f) * norm_sq(&g) * (1.0 + 1e-10) + 1e-300);
        }

        #[test]
        fn inner_product_is_hermitian(f in prop::collection::vec(arb_term(), 1..4), g in prop::collection::vec(arb_term(), 1..4)) {
            let f = DiskFunction::new(f).unwrap();
            let g = DiskFunction::new(g).unwrap();
            let (a, b) = (inner_product(&f, &g), inner_product(&g, &f).conj());
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }

        #[test]
        fn kernel_is_hermitian(r0 in 0.0f64..0.95, t0 in -3.2f64..3.2, r1 in 0.0f64..0.95, t1 in -3.2f64..3.2) {
            let z0 = 1.0 + Complex64::from_polar(r0, t0);
            let z1 = 1.0 + Complex64::from_polar(r1, t1);
            let a = bergman_kernel(z0, z1).unwrap();
            let b = bergman_kernel(z1, z0).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-12 * a.norm());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn closed_form_matches_quadrature(a in arb_term(), b in arb_term()) {
            let f = DiskFunction::power(a.0).unwrap();
            let g = DiskFunction::power(b.0).unwrap();
            let closed = inner_product(&f, &g);
            let quad = quad_inner(&f, &g);
            prop_assert!((closed - quad).norm() <= 1e-6 * closed.norm(), "{closed} vs {quad}");
        }
    }
}
