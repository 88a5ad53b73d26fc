//! Self-checks against closed forms, grouped into suites for the CLI.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disk_space::DiskFunction;
use crate::error::{Error, Result};
use crate::functions::{HalfPlaneFunction, SpectralDensity, SpectralShape};
use crate::gammakit::{cgamma, power_inner};
use crate::m2_space::{
    gamma_membership_profile, kernel_datum, kernel_function, lp_kernel_partial_sums, m2_inner, measure_identity_check,
    mellin_isometry_check, pw_isometry_check, pw_synthesis, MembershipVerdict, OmegaMeasure,
};
use crate::mellin_bergman::{factorization_check, h_kernel, mb_quad, mb_transform};
use crate::quad::{disk_integral, integrate_real_line, line_integral, QuadratureConfig};
use crate::sequences::{
    carleman_limsup_est, carleman_sides, uniqueness_verdict_with, weierstrass_product, PointSequence, SequenceRule,
    Verdict, VerdictOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Gamma,
    Quad,
    Disk,
    Mb,
    M2,
    Sequences,
    All,
}

impl Suite {
    const EACH: [Suite; 6] = [
        Suite::Gamma,
        Suite::Quad,
        Suite::Disk,
        Suite::Mb,
        Suite::M2,
        Suite::Sequences,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Gamma => "gamma",
            Suite::Quad => "quad",
            Suite::Disk => "disk",
            Suite::Mb => "mb",
            Suite::M2 => "m2",
            Suite::Sequences => "sequences",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::All]
            .into_iter()
            .chain(Suite::EACH)
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown suite {s:?}; expected one of gamma, quad, disk, mb, m2, sequences, all"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub quadrature: QuadratureConfig,
    pub omega_n: usize,
    pub margin: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            quadrature: QuadratureConfig::default(),
            omega_n: crate::m2_space::DEFAULT_TRUNCATION,
            margin: crate::sequences::DEFAULT_MARGIN,
        }
    }
}

/// A check body yields pass/fail with a human-readable measurement.
type Outcome = Result<(bool, String)>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Deterministic low-discrepancy points in the square |Re|, |Im| ≤ half.
fn spread(n: usize, half: f64) -> Vec<Complex64> {
    let (a, b) = (0.618_033_988_749_894_9, 0.414_213_562_373_095_1);
    (1..=n)
        .map(|k| {
            let k = k as f64;
            c(
                half * (2.0 * (k * a).fract() - 1.0),
                half * (2.0 * (k * b).fract() - 1.0),
            )
        })
        .collect()
}

fn near_integer(z: Complex64) -> bool {
    z.im.abs() < 1e-3 && (z.re - z.re.round()).abs() < 1e-3
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> VerifyReport {
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    let checks: Vec<Check> = suites.into_iter().flat_map(|s| run_one(s, opts)).collect();
    let passed = checks.iter().all(|c| c.passed);
    VerifyReport { checks, passed }
}

type CheckFn = Box<dyn Fn(&VerifyOptions) -> Outcome>;

fn run_one(suite: Suite, opts: &VerifyOptions) -> Vec<Check> {
    let list: Vec<(&str, CheckFn)> = match suite {
        Suite::Gamma => vec![
            ("critical-line modulus", Box::new(gamma_critical_line)),
            ("reflection", Box::new(gamma_reflection)),
            ("recurrence", Box::new(gamma_recurrence)),
        ],
        Suite::Quad => vec![
            ("gaussian over the real line", Box::new(quad_gaussian)),
            ("gamma line integral", Box::new(quad_gamma_line)),
            ("disk moments", Box::new(quad_disk_moments)),
        ],
        Suite::Disk => vec![("power inner products by quadrature", Box::new(disk_power_inner))],
        Suite::Mb => vec![
            ("monomial transforms", Box::new(mb_monomials)),
            ("transform by quadrature", Box::new(mb_by_quadrature)),
            ("reduction factorization", Box::new(mb_factorization)),
            ("kernel of H at (1, 1)", Box::new(mb_h_kernel)),
        ],
        Suite::M2 => vec![
            ("Paley-Wiener isometry", Box::new(m2_pw_isometry)),
            ("Mellin isometry", Box::new(m2_mellin_isometry)),
            ("reproducing kernel", Box::new(m2_reproducing)),
            ("measure identity", Box::new(m2_measure_identity)),
            ("membership thresholds", Box::new(m2_membership)),
            ("L^p divergence", Box::new(m2_lp)),
        ],
        Suite::Sequences => vec![
            ("verdicts", Box::new(seq_verdicts)),
            ("sine product", Box::new(seq_product)),
            ("Carleman boundedness", Box::new(seq_carleman)),
        ],
        Suite::All => Vec::new(),
    };
    list.into_iter()
        .map(|(name, body)| {
            let (passed, detail) = body(opts).unwrap_or_else(|e| (false, format!("error: {e}")));
            Check {
                suite,
                name: name.to_string(),
                passed,
                detail,
            }
        })
        .collect()
}

fn gamma_critical_line(_: &VerifyOptions) -> Outcome {
    let mut worst: f64 = 0.0;
    for y in [0.0, 0.5, 1.0, 2.0] {
        let g = cgamma(c(0.5, y))?.norm_sqr();
        let exact = PI / (PI * y).cosh();
        worst = worst.max((g - exact).abs() / exact);
    }
    Ok((worst < 1e-10, format!("max rel err {worst:.3e}")))
}

fn gamma_reflection(_: &VerifyOptions) -> Outcome {
    let mut worst: f64 = 0.0;
    for z in spread(200, 20.0)
        .into_iter()
        .filter(|z| !near_integer(*z) && z.norm() <= 30.0)
    {
        // Compare in the bounded region only; sin(πz) overflows far off the axis.
        if z.im.abs() > 15.0 {
            continue;
        }
        let lhs = cgamma(z)? * cgamma(1.0 - z)?;
        let rhs = PI / (PI * z).sin();
        worst = worst.max(rel(lhs, rhs));
    }
    Ok((worst < 1e-10, format!("max rel err {worst:.3e}")))
}

fn gamma_recurrence(_: &VerifyOptions) -> Outcome {
    let mut worst: f64 = 0.0;
    for z in spread(200, 20.0)
        .into_iter()
        .filter(|z| !near_integer(*z) && !near_integer(*z + 1.0))
    {
        worst = worst.max(rel(cgamma(z + 1.0)?, z * cgamma(z)?));
    }
    Ok((worst < 1e-10, format!("max rel err {worst:.3e}")))
}

fn quad_gaussian(o: &VerifyOptions) -> Outcome {
    let v: f64 = integrate_real_line(|x: f64| Ok((-x * x).exp()), &o.quadrature)?;
    let err = (v - PI.sqrt()).abs() / PI.sqrt();
    Ok((err < 1e-8, format!("∫e^(-x²) = {v:.15}, rel err {err:.3e}")))
}

fn quad_gamma_line(o: &VerifyOptions) -> Outcome {
    let g = HalfPlaneFunction::entire("gamma", cgamma);
    let v = line_integral(&g, 0.5, &o.quadrature)?;
    let err = (v - PI).abs() / PI;
    Ok((err < 1e-8, format!("∫|Γ(1/2+iy)|² dy = {v:.15}, rel err {err:.3e}")))
}

fn quad_disk_moments(o: &VerifyOptions) -> Outcome {
    let one = disk_integral(|_| Ok(c(1.0, 0.0)), &o.quadrature)?;
    let zeta = disk_integral(Ok, &o.quadrature)?;
    let sq = disk_integral(|z: Complex64| Ok(c(z.norm_sqr(), 0.0)), &o.quadrature)?;
    let err = (one - 1.0).norm().max((zeta - 1.0).norm()).max((sq - 1.5).norm());
    Ok((
        err < 1e-8,
        format!("mean of 1, ζ, |ζ|²: {one:.12}, {zeta:.12}, {sq:.12}"),
    ))
}

fn disk_power_inner(o: &VerifyOptions) -> Outcome {
    let pairs = [
        (c(0.0, 0.0), c(0.0, 0.0)),
        (c(1.0, 0.0), c(2.0, 0.0)),
        (c(-0.4, 0.0), c(0.5, 1.0)),
        (c(2.5, -2.0), c(1.0, 3.0)),
        (c(0.3, 0.7), c(-0.3, -0.7)),
        (c(3.0, 1.0), c(3.0, 1.0)),
    ];
    let mut worst: f64 = 0.0;
    for (a, b) in pairs {
        let q = disk_integral(
            |z: Complex64| {
                let l = z.ln();
                Ok((a * l).exp() * (b * l).exp().conj())
            },
            &o.quadrature,
        )?;
        worst = worst.max(rel(q, power_inner(a, b)?));
    }
    Ok((
        worst < 1e-6,
        format!("max rel err {worst:.3e} over {} pairs", pairs.len()),
    ))
}

fn rising(z: Complex64, k: u32) -> Complex64 {
    (1..=k).fold(c(1.0, 0.0), |acc, j| acc * (z + j as f64))
}

fn mb_monomials(_: &VerifyOptions) -> Outcome {
    let grid = [
        c(0.5, 0.0),
        c(1.0, 0.0),
        c(2.0, 0.0),
        c(3.0, 0.0),
        c(0.5, 1.0),
        c(1.0, -2.0),
        c(2.5, 3.0),
        c(4.0, 0.5),
        c(0.1, 5.0),
    ];
    let mut worst: f64 = 0.0;
    for k in 0..=5u32 {
        let f = mb_transform(&DiskFunction::monomial(k));
        let fact: f64 = (1..=k + 1).map(f64::from).product();
        for z in grid {
            let want = rising(z, k) / fact;
            worst = worst.max((f.eval(z)? - want).norm() / want.norm().max(1.0));
        }
    }
    Ok((worst < 1e-10, format!("ζ^k ↦ (z+1)⋯(z+k)/(k+1)!, max err {worst:.3e}")))
}

fn mb_by_quadrature(o: &VerifyOptions) -> Outcome {
    let f = DiskFunction::new([(c(1.0, 0.0), c(1.0, 0.0)), (c(2.0, 0.0), c(1.0, 0.0))])?;
    let z = c(1.5, 0.5);
    let q = mb_quad(|zeta| f.evaluate(zeta), z, &o.quadrature)?;
    let closed = mb_transform(&f).eval(z)?;
    let err = (q - closed).norm();
    Ok((err < 1e-6, format!("M(1+ζ)({z}) = {q:.10} vs {closed:.10}")))
}

fn mb_factorization(_: &VerifyOptions) -> Outcome {
    let set = [c(1.0, 0.0), c(2.0, 0.0), c(0.3, 0.0), c(0.5, 1.0)];
    let mut worst: f64 = 0.0;
    for lambda in set {
        for z in set {
            worst = worst.max(factorization_check(lambda, z)?);
        }
    }
    Ok((worst < 1e-8, format!("max residual {worst:.3e}")))
}

fn mb_h_kernel(_: &VerifyOptions) -> Outcome {
    let v = h_kernel(c(1.0, 0.0), c(1.0, 0.0))?;
    let err = (v - 1.0 / (2.0 * PI)).norm();
    Ok((err < 1e-14, format!("H(1,1) = {:.15}", v.re)))
}

fn m2_pw_isometry(o: &VerifyOptions) -> Outcome {
    let om = OmegaMeasure::new(o.omega_n);
    let chk = pw_isometry_check(&kernel_datum(c(1.0, 0.0))?, &om, &o.quadrature)?;
    Ok((
        chk.rel_err < 1e-3,
        format!(
            "kernel datum w=1, N={}: lhs {:.10e}, rhs {:.10e}, rel err {:.3e}",
            o.omega_n, chk.lhs, chk.rhs, chk.rel_err
        ),
    ))
}

fn m2_mellin_isometry(o: &VerifyOptions) -> Outcome {
    let om = OmegaMeasure::new(o.omega_n);
    let chk = mellin_isometry_check(|t| c(t * (-4.0 * t).exp(), 0.0), &om, &o.quadrature)?;
    let target = 1.0 / 36.0;
    let ok = (chk.lhs - target).abs() < 1e-3 && (chk.rhs - target).abs() < 1e-3;
    Ok((
        ok,
        format!("t e^(-4t), N={}: lhs {:.10}, rhs {:.10}", o.omega_n, chk.lhs, chk.rhs),
    ))
}

fn m2_reproducing(o: &VerifyOptions) -> Outcome {
    let om = OmegaMeasure::new(o.omega_n);
    let f = pw_synthesis(
        &SpectralDensity::from_shape(SpectralShape::GaussDoubleExp)?,
        &o.quadrature,
    );
    let w = c(0.7, 0.3);
    let v = m2_inner(&f, &kernel_function(w)?, &om, &o.quadrature)?;
    let fw = f.eval(w)?;
    let err = (v - fw).norm();
    Ok((err < 1e-4, format!("|<f, K_w> - f(w)| = {err:.3e} at w = {w}")))
}

fn m2_measure_identity(_: &VerifyOptions) -> Outcome {
    let worst = [0.1, 1.0, 5.0]
        .into_iter()
        .map(|xi| measure_identity_check(xi, 120))
        .fold(0.0, f64::max);
    Ok((worst < 1e-10, format!("max defect {worst:.3e} at N=120")))
}

fn m2_membership(o: &VerifyOptions) -> Outcome {
    let om = OmegaMeasure::new(o.omega_n);
    let half = gamma_membership_profile(1.0, 0.5, &om, &o.quadrature)?.verdict;
    let one = gamma_membership_profile(1.0, 1.0, &om, &o.quadrature)?.verdict;
    Ok((
        half == MembershipVerdict::Converging && one == MembershipVerdict::Diverging,
        format!("Γ(1+δz): δ=0.5 {half:?}, δ=1 {one:?}"),
    ))
}

fn m2_lp(o: &VerifyOptions) -> Outcome {
    let p3 = lp_kernel_partial_sums(c(1.0, 0.0), 3.0, 60, &o.quadrature)?;
    let p2 = lp_kernel_partial_sums(c(1.0, 0.0), 2.0, 60, &o.quadrature)?;
    let drift = (p2.sums[60] - p2.sums[30]).abs() / p2.sums[60];
    Ok((
        p3.growth_ratio > 10.0 && drift < 1e-3,
        format!("p=3 growth {:.3e}, p=2 drift {drift:.3e}", p3.growth_ratio),
    ))
}

fn seq_verdicts(o: &VerifyOptions) -> Outcome {
    let opts = VerdictOptions {
        margin: o.margin,
        ..VerdictOptions::new(1.0)
    };
    let r = 10f64.exp();
    let j = PointSequence::from_rule(SequenceRule::Arith { a: 1.0, b: 0.0 }, r)?;
    let three = PointSequence::from_rule(SequenceRule::Arith { a: 3.0, b: 0.0 }, r)?;
    let vertical = PointSequence::from_rule(
        SequenceRule::Power {
            offset: c(2.0, 0.0),
            scale: 1.0,
            alpha: 0.75,
            theta: FRAC_PI_2,
        },
        r,
    )?;
    let vj = uniqueness_verdict_with(&j, &opts)?;
    let v3 = uniqueness_verdict_with(&three, &opts)?;
    let vr = uniqueness_verdict_with(&vertical, &opts)?;
    let limsup = carleman_limsup_est(&j)?;
    let d3 = v3.d_plus.unwrap_or(f64::NAN);
    let ok = vj.verdict == Verdict::UniquenessSufficient
        && (limsup - 1.0).abs() < 0.01
        && v3.verdict == Verdict::ZeroSetSufficientDensity
        && (d3 - 1.0 / 3.0).abs() < 0.02
        && vr.verdict == Verdict::ZeroSetSufficientBlaschke;
    Ok((
        ok,
        format!(
            "{{j}}: {:?} (limsup est {limsup:.4}); {{3j}}: {:?} (d⁺ {d3:.4}); {{2+ij^0.75}}: {:?}",
            vj.verdict, v3.verdict, vr.verdict
        ),
    ))
}

fn seq_product(_: &VerifyOptions) -> Outcome {
    let s = PointSequence::from_rule(SequenceRule::Arith { a: 3.0, b: 0.0 }, 3e5)?;
    let v = weierstrass_product(&s, c(1.5, 0.0))?.value;
    let err = (v - 2.0 / PI).norm();
    Ok((err < 1e-4, format!("Π(1.5) = {:.8}, |Π - 2/π| = {err:.3e}", v.re)))
}

fn seq_carleman(o: &VerifyOptions) -> Outcome {
    let sinc = HalfPlaneFunction::entire("sinc", |z: Complex64| {
        if z.norm() < 1e-8 {
            return Ok(c(1.0, 0.0));
        }
        Ok((PI * z).sin() / (PI * z))
    });
    let zeros = PointSequence::from_rule(SequenceRule::Arith { a: 1.0, b: 0.0 }, 40.0)?;
    let res = [5.0, 10.0, 20.0, 40.0]
        .into_iter()
        .map(|r| Ok(carleman_sides(&sinc, &zeros, r, &o.quadrature)?.residual()))
        .collect::<Result<Vec<f64>>>()?;
    let tv: f64 = res.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    Ok((tv < 2.0, format!("residuals {res:.4?}, total variation {tv:.4}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("bogus".parse::<Suite>(), Err(Error::Parse(_))));
    }

    #[test]
    fn spread_is_deterministic_and_bounded() {
        let a = spread(50, 3.0);
        assert_eq!(a, spread(50, 3.0));
        assert!(a.iter().all(|z| z.re.abs() <= 3.0 && z.im.abs() <= 3.0));
    }

    #[test]
    fn fast_suites_pass() {
        for s in [Suite::Gamma, Suite::Quad, Suite::Mb, Suite::Sequences] {
            let r = run(s, &VerifyOptions::default());
            assert!(r.passed, "{:#?}", r.checks);
        }
    }

    #[test]
    fn small_truncation_fails_isometry() {
        let opts = VerifyOptions {
            omega_n: 5,
            ..VerifyOptions::default()
        };
        let r = m2_pw_isometry(&opts).unwrap();
        assert!(!r.0, "{}", r.1);
    }
}
