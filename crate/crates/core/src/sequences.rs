//! Point sequences in the right half-plane and the decision layer built on
//! them: counting functions, densities, Carleman and Blaschke sums, verdicts,
//! canonical products and the Carleman-formula diagnostic.
//!
//! Every limsup/liminf here is a finite-data estimate taken over the upper
//! half (in log scale) of the available modulus range.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::HalfPlaneFunction;
use crate::gammakit::log_cgamma;
use crate::quad::{integrate_breaks, QuadratureConfig};

/// Default safety margin around the 2/π and 1/2 thresholds.
pub const DEFAULT_MARGIN: f64 = 0.02;
/// |ρ̂₁ − 1| within this counts as ρ₁ = 1.
pub const UNIT_EXPONENT_TOLERANCE: f64 = 0.05;
/// Shell-to-shell ratio of Blaschke mass below which the sum is judged finite.
pub const BLASCHKE_RATIO_THRESHOLD: f64 = 0.9;
/// Largest sequence a rule may materialize.
pub const MAX_RULE_POINTS: usize = 10_000_000;
/// |z ∓ z_j| ≤ this · max(1, |z_j|) is reported as an exact zero.
pub const ZERO_HIT_TOLERANCE: f64 = 1e-12;
/// |f| below this on a Carleman contour marks a near-zero for refinement.
pub const NEAR_ZERO_MODULUS: f64 = 1e-13;

const LOG_GRID: usize = 64;
const CURVE_POINTS: usize = 32;
const PRODUCT_CHUNK: usize = 4096;
/// log|f| is clamped here; just above ln of the smallest normal double.
const LN_FLOOR: f64 = -708.0;
const CONTOUR_SCAN: usize = 1024;

fn one() -> f64 {
    1.0
}

/// Generators for rule-based sequences, `j = 1, 2, …` up to `r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum SequenceRule {
    /// z_j = a·j + b on the real axis.
    Arith {
        #[serde(default = "one")]
        a: f64,
        #[serde(default)]
        b: f64,
    },
    /// z_j = offset + scale·j^alpha·e^(iθ).
    Power {
        #[serde(default)]
        offset: Complex64,
        #[serde(default = "one")]
        scale: f64,
        alpha: f64,
        #[serde(default)]
        theta: f64,
    },
    /// z_j = a·j·e^(iθ).
    Ray {
        #[serde(default = "one")]
        a: f64,
        #[serde(default)]
        theta: f64,
    },
}

impl SequenceRule {
    fn point(&self, j: usize) -> Complex64 {
        let j = j as f64;
        match *self {
            SequenceRule::Arith { a, b } => Complex64::new(a * j + b, 0.0),
            SequenceRule::Power {
                offset,
                scale,
                alpha,
                theta,
            } => offset + Complex64::from_polar(scale * j.powf(alpha), theta),
            SequenceRule::Ray { a, theta } => Complex64::from_polar(a * j, theta),
        }
    }

    /// Lower bound on |z_j| that is eventually increasing in j.
    fn modulus_floor(&self, j: usize) -> f64 {
        let j = j as f64;
        match *self {
            SequenceRule::Arith { a, b } => a * j - b.abs(),
            SequenceRule::Power {
                offset, scale, alpha, ..
            } => scale * j.powf(alpha) - offset.norm(),
            SequenceRule::Ray { a, .. } => a * j,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            SequenceRule::Arith { a, b } => a > 0.0 && b.is_finite(),
            SequenceRule::Power {
                offset,
                scale,
                alpha,
                theta,
            } => scale > 0.0 && alpha > 0.0 && alpha.is_finite() && offset.is_finite() && theta.is_finite(),
            SequenceRule::Ray { a, theta } => a > 0.0 && theta.abs() < FRAC_PI_2,
        };
        if ok && self.modulus_floor(1).is_finite() {
            Ok(())
        } else {
            Err(Error::Precondition(format!("degenerate sequence rule {self}")))
        }
    }
}

impl fmt::Display for SequenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SequenceRule::Arith { a, b } => write!(f, "{a}·j + {b}"),
            SequenceRule::Power {
                offset,
                scale,
                alpha,
                theta,
            } => write!(f, "{offset} + {scale}·j^{alpha}·e^(i·{theta})"),
            SequenceRule::Ray { a, theta } => write!(f, "{a}·j·e^(i·{theta})"),
        }
    }
}

/// A rule together with its truncation radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleSpec {
    #[serde(flatten)]
    pub rule: SequenceRule,
    pub r_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSource {
    Explicit,
    Rule(RuleSpec),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum SequenceJson {
    Points(Vec<Complex64>),
    Rule(RuleSpec),
}

/// Points with Re z_j > 0, sorted by modulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SequenceJson", into = "SequenceJson")]
pub struct PointSequence {
    points: Vec<Complex64>,
    moduli: Vec<f64>,
    /// prefix[k] = Σ_{j<k} Re(1/z_j).
    prefix: Vec<f64>,
    source: SequenceSource,
}

impl TryFrom<SequenceJson> for PointSequence {
    type Error = Error;

    fn try_from(j: SequenceJson) -> Result<Self> {
        match j {
            SequenceJson::Points(p) => PointSequence::from_points(p),
            SequenceJson::Rule(spec) => PointSequence::from_rule(spec.rule, spec.r_max),
        }
    }
}

impl From<PointSequence> for SequenceJson {
    fn from(s: PointSequence) -> Self {
        match s.source {
            SequenceSource::Rule(spec) => SequenceJson::Rule(spec),
            SequenceSource::Explicit => SequenceJson::Points(s.points),
        }
    }
}

impl PointSequence {
    pub fn from_points(mut points: Vec<Complex64>) -> Result<Self> {
        if let Some(z) = points.iter().find(|z| !(z.re > 0.0) || !z.is_finite()) {
            return Err(Error::domain(format!("sequence point {z} is not in Re z > 0")));
        }
        points.sort_by(|a, b| {
            a.norm()
                .total_cmp(&b.norm())
                .then(a.re.total_cmp(&b.re))
                .then(a.im.total_cmp(&b.im))
        });
        Ok(Self::assemble(points, SequenceSource::Explicit))
    }

    /// Materializes z_1, z_2, … with |z_j| ≤ r_max.
    pub fn from_rule(rule: SequenceRule, r_max: f64) -> Result<Self> {
        rule.validate()?;
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::Precondition(format!(
                "rule truncation r_max = {r_max} must be positive"
            )));
        }
        let mut points = Vec::new();
        let mut j = 1usize;
        while rule.modulus_floor(j) <= r_max {
            let z = rule.point(j);
            if z.norm() <= r_max {
                if !(z.re > 0.0) {
                    return Err(Error::domain(format!(
                        "rule {rule} produces z_{j} = {z} outside Re z > 0"
                    )));
                }
                points.push(z);
                if points.len() > MAX_RULE_POINTS {
                    return Err(Error::Precondition(format!(
                        "rule {rule} exceeds {MAX_RULE_POINTS} points below r_max = {r_max}"
                    )));
                }
            }
            j += 1;
        }
        let mut seq = Self::from_points(points)?;
        seq.source = SequenceSource::Rule(RuleSpec { rule, r_max });
        Ok(seq)
    }

    fn assemble(points: Vec<Complex64>, source: SequenceSource) -> Self {
        let moduli = points.iter().map(|z| z.norm()).collect();
        let mut prefix = Vec::with_capacity(points.len() + 1);
        let mut acc = 0.0;
        prefix.push(acc);
        for z in &points {
            acc += z.inv().re;
            prefix.push(acc);
        }
        PointSequence {
            points,
            moduli,
            prefix,
            source,
        }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn moduli(&self) -> &[f64] {
        &self.moduli
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn source(&self) -> &SequenceSource {
        &self.source
    }

    /// Radius up to which the sequence is known: the rule truncation, or the
    /// largest modulus for explicit data.
    pub fn r_max(&self) -> f64 {
        match &self.source {
            SequenceSource::Rule(spec) => spec.r_max,
            SequenceSource::Explicit => self.moduli.last().copied().unwrap_or(0.0),
        }
    }

    pub fn min_re(&self) -> Option<f64> {
        self.points.iter().map(|z| z.re).min_by(f64::total_cmp)
    }

    /// Explicit union of both point sets.
    pub fn union(&self, other: &PointSequence) -> Result<PointSequence> {
        PointSequence::from_points(self.points.iter().chain(other.points.iter()).copied().collect())
    }

    /// Σ_{|z_j| ≤ r} Re(1/z_j).
    pub fn carleman_sum(&self, r: f64) -> f64 {
        self.prefix[counting_function(self, r)]
    }

    fn require_unit_modulus(&self) -> Result<()> {
        match self.moduli.first() {
            Some(&m) if m < 1.0 => Err(Error::Precondition(format!(
                "density analytics need |z_j| ≥ 1, smallest modulus is {m}"
            ))),
            _ => Ok(()),
        }
    }

    /// [max(√R, |z_1|), R] with R = r_max.
    fn upper_window(&self) -> Result<(f64, f64)> {
        let hi = self.r_max();
        let first = self.moduli.first().copied().unwrap_or(f64::INFINITY);
        let lo = hi.sqrt().max(first);
        if self.len() < 2 || !(hi > lo) {
            return Err(Error::InsufficientData(format!(
                "{} points do not span a modulus range (window [{lo}, {hi}])",
                self.len()
            )));
        }
        Ok((lo, hi))
    }
}

/// #{j : |z_j| ≤ r}.
pub fn counting_function(seq: &PointSequence, r: f64) -> usize {
    seq.moduli.partition_point(|&m| m <= r)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Least-squares slope of y against x.
fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    pub rho1: f64,
    /// Fewer than 20 points, or less than two decades of modulus.
    pub low_confidence: bool,
}

/// Slope of log n(r) against log r over the upper window.
pub fn convergence_exponent(seq: &PointSequence) -> Result<ExponentEstimate> {
    seq.require_unit_modulus()?;
    let (lo, hi) = seq.upper_window()?;
    let grid = log_grid(lo, hi, LOG_GRID);
    let x: Vec<f64> = grid.iter().map(|r| r.ln()).collect();
    let y: Vec<f64> = grid.iter().map(|&r| (counting_function(seq, r) as f64).ln()).collect();
    let span = hi / seq.moduli[0];
    Ok(ExponentEstimate {
        rho1: ls_slope(&x, &y),
        low_confidence: seq.len() < 20 || span < 100.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Densities {
    pub d_plus: f64,
    pub d_minus: f64,
}

/// max/min of n(r)/r^ρ over r = R·2^(−k) inside the upper window.
pub fn densities(seq: &PointSequence, rho1: f64) -> Result<Densities> {
    seq.require_unit_modulus()?;
    if !(rho1 > 0.0) {
        return Err(Error::Precondition(format!(
            "density exponent must be positive, got {rho1}"
        )));
    }
    let (lo, hi) = seq.upper_window()?;
    let mut grid: Vec<f64> = std::iter::successors(Some(hi), |r| Some(r / 2.0))
        .take_while(|&r| r >= lo)
        .collect();
    if grid.len() < 2 {
        grid = vec![lo, hi];
    }
    let ratios = grid.iter().map(|&r| counting_function(seq, r) as f64 / r.powf(rho1));
    let (d_minus, d_plus) = ratios.fold((f64::INFINITY, 0.0f64), |(mn, mx), v| (mn.min(v), mx.max(v)));
    Ok(Densities { d_plus, d_minus })
}

/// (1/log R)·Σ_{|z_j| ≤ R} Re(1/z_j).
pub fn carleman_ratio(seq: &PointSequence, r: f64) -> Result<f64> {
    if !(r > 1.0) {
        return Err(Error::Precondition(format!("Carleman ratio needs R > 1, got {r}")));
    }
    Ok(seq.carleman_sum(r) / r.ln())
}

/// Carleman ratios on a log grid from e to r_max.
pub fn carleman_ratio_curve(seq: &PointSequence) -> Vec<(f64, f64)> {
    let hi = seq.r_max();
    if !(hi > std::f64::consts::E) {
        return Vec::new();
    }
    log_grid(std::f64::consts::E, hi, CURVE_POINTS)
        .into_iter()
        .map(|r| (r, seq.carleman_sum(r) / r.ln()))
        .collect()
}

/// Estimate of limsup (1/log R) Σ_{|z_j|≤R} Re(1/z_j).
///
/// The literal ratio carries an O(1/log R) offset (γ/log R for z_j = j), so
/// the estimate is the slope of the Carleman sum against log R over
/// [√R_max, R_max]; it equals the limit whenever the sum is a + b·log R + o(1).
pub fn carleman_limsup_est(seq: &PointSequence) -> Result<f64> {
    let hi = seq.r_max();
    if !(hi > 1.0) || seq.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no Carleman data beyond R = 1 ({} points, r_max = {hi})",
            seq.len()
        )));
    }
    let grid = log_grid(hi.sqrt(), hi, LOG_GRID);
    let x: Vec<f64> = grid.iter().map(|r| r.ln()).collect();
    let y: Vec<f64> = grid.iter().map(|&r| seq.carleman_sum(r)).collect();
    Ok(ls_slope(&x, &y))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeSum {
    /// Σ Re z_j / (1 + |z_j|²) over the available points.
    pub partial_sum: f64,
    pub converging: bool,
    /// Fitted ratio between successive dyadic shells of the upper half.
    pub shell_ratio: Option<f64>,
}

/// Partial Blaschke sum with a tail verdict from dyadic-shell decay.
pub fn blaschke_sum(seq: &PointSequence) -> BlaschkeSum {
    let term = |z: &Complex64| z.re / (1.0 + z.norm_sqr());
    let partial_sum = seq.points.iter().map(term).sum();
    // Shells [2^k, 2^(k+1)) lying entirely below r_max.
    let full = (seq.r_max().max(1.0)).log2().floor() as usize;
    let mut shells = vec![0.0; full];
    for (z, &m) in seq.points.iter().zip(&seq.moduli) {
        if m >= 1.0 {
            let k = m.log2().floor() as usize;
            if k < full {
                shells[k] += term(z);
            }
        }
    }
    let (ks, logs): (Vec<f64>, Vec<f64>) = shells
        .iter()
        .enumerate()
        .skip(full / 2)
        .filter(|(_, &s)| s > 0.0)
        .map(|(k, s)| (k as f64, s.ln()))
        .unzip();
    if ks.len() < 2 {
        return BlaschkeSum {
            partial_sum,
            converging: true,
            shell_ratio: None,
        };
    }
    let ratio = ls_slope(&ks, &logs).exp();
    BlaschkeSum {
        partial_sum,
        converging: ratio < BLASCHKE_RATIO_THRESHOLD,
        shell_ratio: Some(ratio),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Carleman sum grows faster than (2/π)·log R: the powers ζ^(z_j−1) are
    /// complete in A²(Δ).
    UniquenessSufficient,
    /// ρ₁ = 1 and d⁺ < 1/2.
    ZeroSetSufficientDensity,
    /// Σ Re z_j/(1+|z_j|²) < ∞.
    ZeroSetSufficientBlaschke,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictOptions {
    pub eps0: f64,
    pub margin: f64,
    pub unit_exponent_tolerance: f64,
}

impl VerdictOptions {
    pub fn new(eps0: f64) -> Self {
        VerdictOptions {
            eps0,
            margin: DEFAULT_MARGIN,
            unit_exponent_tolerance: UNIT_EXPONENT_TOLERANCE,
        }
    }
}

/// All estimates behind a verdict. Fields that could not be estimated are
/// `None`, with the reason recorded in `evidence`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub n_points: usize,
    pub r_max: f64,
    pub n_of_r: Vec<(f64, usize)>,
    pub rho1: Option<f64>,
    pub rho1_low_confidence: bool,
    /// Exponent the densities were measured against (1 when ρ̂₁ ≈ 1).
    pub density_exponent: Option<f64>,
    pub d_plus: Option<f64>,
    pub d_minus: Option<f64>,
    pub carleman_ratio_curve: Vec<(f64, f64)>,
    pub carleman_limsup_est: Option<f64>,
    pub carleman_threshold: f64,
    /// Whether the estimate respects the necessary condition limsup ≤ 2/π for
    /// zero-sets. Diagnostic only.
    pub zero_set_necessary_condition: Option<bool>,
    pub blaschke: BlaschkeSum,
    pub min_re: Option<f64>,
    pub eps0: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub evidence: Vec<String>,
}

pub fn uniqueness_verdict(seq: &PointSequence, eps0: f64) -> Result<SequenceReport> {
    uniqueness_verdict_with(seq, &VerdictOptions::new(eps0))
}

/// Rules, first match wins:
/// 1. min Re z_j ≥ ε₀ and limsup estimate > 2/π + margin → uniqueness;
/// 2. ρ̂₁ ≈ 1 and d⁺ < 1/2 − margin → zero-set by density;
/// 3. Blaschke sum converging → zero-set by Blaschke;
/// 4. inconclusive.
pub fn uniqueness_verdict_with(seq: &PointSequence, opts: &VerdictOptions) -> Result<SequenceReport> {
    if !(opts.eps0 > 0.0) {
        return Err(Error::Precondition(format!("eps0 must be positive, got {}", opts.eps0)));
    }
    if !(opts.margin >= 0.0) || !(opts.unit_exponent_tolerance >= 0.0) {
        return Err(Error::Precondition(
            "margin and exponent tolerance must be non-negative".into(),
        ));
    }
    let mut evidence = Vec::new();
    let r_max = seq.r_max();
    let min_re = seq.min_re();
    let n_of_r = match seq.moduli.first() {
        Some(&first) if r_max > first => log_grid(first, r_max, CURVE_POINTS)
            .into_iter()
            .map(|r| (r, counting_function(seq, r)))
            .collect(),
        _ => Vec::new(),
    };

    let limsup = match carleman_limsup_est(seq) {
        Ok(v) => {
            evidence.push(format!(
                "Carleman limsup estimate {v:.6} (slope of Σ Re(1/z_j) against log R on [{:.4e}, {r_max:.4e}]); threshold 2/π = {FRAC_2_PI:.6}",
                r_max.sqrt()
            ));
            Some(v)
        }
        Err(e) => {
            evidence.push(format!("Carleman estimate unavailable: {e}"));
            None
        }
    };
    let zero_set_necessary_condition = limsup.map(|v| v <= FRAC_2_PI);

    let (rho1, low_conf) = match convergence_exponent(seq) {
        Ok(est) => {
            evidence.push(format!(
                "exponent of convergence estimate ρ₁ = {:.4}{}",
                est.rho1,
                if est.low_confidence { " (low confidence)" } else { "" }
            ));
            (Some(est.rho1), est.low_confidence)
        }
        Err(e) => {
            evidence.push(format!("exponent of convergence unavailable: {e}"));
            (None, true)
        }
    };
    let unit_rho = rho1.is_some_and(|r| (r - 1.0).abs() <= opts.unit_exponent_tolerance);
    let density_exponent = rho1.map(|r| if unit_rho { 1.0 } else { r });
    let dens = density_exponent.and_then(|rho| match densities(seq, rho) {
        Ok(d) => {
            evidence.push(format!(
                "densities against r^{rho:.4}: d⁺ = {:.4}, d⁻ = {:.4}",
                d.d_plus, d.d_minus
            ));
            Some(d)
        }
        Err(e) => {
            evidence.push(format!("densities unavailable: {e}"));
            None
        }
    });

    let blaschke = blaschke_sum(seq);
    evidence.push(format!(
        "Blaschke partial sum {:.6}, shell ratio {}, {}",
        blaschke.partial_sum,
        blaschke.shell_ratio.map_or("n/a".to_string(), |r| format!("{r:.4}")),
        if blaschke.converging { "converging" } else { "diverging" }
    ));

    let uniform_re = min_re.is_some_and(|m| m >= opts.eps0);
    let verdict = if uniform_re && limsup.is_some_and(|v| v > FRAC_2_PI + opts.margin) {
        evidence.push(format!(
            "rule 1: Re z_j ≥ {} and Carleman estimate exceeds 2/π + {}: {{ζ^(z_j−1)}} is complete in A²(Δ)",
            opts.eps0, opts.margin
        ));
        Verdict::UniquenessSufficient
    } else if unit_rho && !low_conf && dens.is_some_and(|d| d.d_plus < 0.5 - opts.margin) {
        evidence.push(format!("rule 2: ρ₁ ≈ 1 and d⁺ < 1/2 − {}", opts.margin));
        Verdict::ZeroSetSufficientDensity
    } else if blaschke.converging {
        evidence.push("rule 3: Blaschke sum converges".to_string());
        Verdict::ZeroSetSufficientBlaschke
    } else {
        if !uniform_re && limsup.is_some_and(|v| v > FRAC_2_PI + opts.margin) {
            evidence.push(format!(
                "large Carleman estimate, but Re z_j is not bounded below by eps0 = {}",
                opts.eps0
            ));
        }
        evidence.push("no sufficient condition met".to_string());
        Verdict::Inconclusive
    };

    Ok(SequenceReport {
        n_points: seq.len(),
        r_max,
        n_of_r,
        rho1,
        rho1_low_confidence: low_conf,
        density_exponent,
        d_plus: dens.map(|d| d.d_plus),
        d_minus: dens.map(|d| d.d_minus),
        carleman_ratio_curve: carleman_ratio_curve(seq),
        carleman_limsup_est: limsup,
        carleman_threshold: FRAC_2_PI,
        zero_set_necessary_condition,
        blaschke,
        min_re,
        eps0: opts.eps0,
        margin: opts.margin,
        verdict,
        evidence,
    })
}

/// Value of a canonical product together with its logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductValue {
    pub value: Complex64,
    /// Sum of principal logarithms of the factors; Re is log|Π|.
    pub ln: Complex64,
    /// z coincides with some ±z_j.
    pub is_zero: bool,
}

impl ProductValue {
    pub fn ln_abs(&self) -> f64 {
        self.ln.re
    }
}

/// log(1 − u), accurate for small u.
fn ln_one_minus(u: Complex64) -> Complex64 {
    if u.norm() < 1e-4 {
        -u * (1.0 + u * (0.5 + u / 3.0))
    } else {
        (1.0 - u).ln()
    }
}

/// Π_j (1 − z²/z_j²).
///
/// Factor logs are summed over fixed-size chunks in parallel and the chunk
/// sums are combined in order, so results do not depend on thread count.
pub fn weierstrass_product(seq: &PointSequence, z: Complex64) -> Result<ProductValue> {
    seq.require_unit_modulus()?;
    if !z.is_finite() {
        return Err(Error::domain(format!("product evaluated at {z}")));
    }
    let hit = seq
        .points
        .par_iter()
        .any(|&zj| (z - zj).norm().min((z + zj).norm()) <= ZERO_HIT_TOLERANCE * zj.norm().max(1.0));
    if hit {
        return Ok(ProductValue {
            value: Complex64::new(0.0, 0.0),
            ln: Complex64::new(f64::NEG_INFINITY, 0.0),
            is_zero: true,
        });
    }
    let z2 = z * z;
    let chunks: Vec<Complex64> = seq
        .points
        .par_chunks(PRODUCT_CHUNK)
        .map(|c| c.iter().map(|&zj| ln_one_minus(z2 / (zj * zj))).sum())
        .collect();
    let ln: Complex64 = chunks.into_iter().sum();
    Ok(ProductValue {
        value: ln.exp(),
        ln,
        is_zero: false,
    })
}

/// The canonical product as an entire function.
pub fn canonical_product(seq: &PointSequence) -> Result<HalfPlaneFunction> {
    seq.require_unit_modulus()?;
    let s = Arc::new(seq.clone());
    let t = Arc::clone(&s);
    Ok(
        HalfPlaneFunction::entire("canonical_product", move |z| Ok(weierstrass_product(&s, z)?.value))
            .with_ln_abs(move |z| Ok(weierstrass_product(&t, z)?.ln_abs())),
    )
}

/// Where log M(r) is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArcSampling {
    /// 64 angles strictly inside (−π/2, π/2).
    HalfCircle,
    /// 128 equally spaced angles, including ±π/2.
    FullCircle,
    /// The two points offset ± i·r.
    ImaginaryDirection { offset: f64 },
}

impl ArcSampling {
    fn points(&self, r: f64) -> Vec<Complex64> {
        match *self {
            ArcSampling::HalfCircle => (0..64)
                .map(|k| Complex64::from_polar(r, -FRAC_PI_2 + PI * (k as f64 + 0.5) / 64.0))
                .collect(),
            ArcSampling::FullCircle => (0..128)
                .map(|k| Complex64::from_polar(r, 2.0 * PI * k as f64 / 128.0))
                .collect(),
            ArcSampling::ImaginaryDirection { offset } => {
                vec![Complex64::new(offset, r), Complex64::new(offset, -r)]
            }
        }
    }
}

/// Slope of log M(r) against r, sampling full circles for entire functions
/// and right half-circles otherwise.
pub fn exp_type_estimate(f: &HalfPlaneFunction, radii: &[f64]) -> Result<f64> {
    let sampling = if f.is_entire() {
        ArcSampling::FullCircle
    } else {
        ArcSampling::HalfCircle
    };
    exp_type_estimate_with(f, radii, sampling)
}

pub fn exp_type_estimate_with(f: &HalfPlaneFunction, radii: &[f64], sampling: ArcSampling) -> Result<f64> {
    if radii.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "type estimate needs at least 3 radii, got {}",
            radii.len()
        )));
    }
    if radii[0] <= 0.0 || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Precondition(format!(
            "radii must be positive and increasing: {radii:?}"
        )));
    }
    let ln_max: Vec<f64> = radii
        .iter()
        .map(|&r| {
            let vals: Vec<f64> = sampling
                .points(r)
                .into_par_iter()
                .map(|z| f.ln_abs(z))
                .collect::<Result<_>>()?;
            let m = vals.into_iter().fold(f64::NEG_INFINITY, f64::max);
            if m.is_finite() {
                Ok(m)
            } else {
                Err(Error::domain(format!("log M({r}) is not finite")))
            }
        })
        .collect::<Result<_>>()?;
    Ok(ls_slope(radii, &ln_max))
}

/// F(z) = Π(z)·Γ(1 + δz), a function of ℳ²_ω vanishing exactly on `seq`.
///
/// `type_est` is the exponential type of Π; it defaults to π·d⁺. Requires
/// ρ₁ ≈ 1, d⁺ < 1/2 and 2·type/π < δ < 1.
pub fn zero_set_witness(seq: &PointSequence, delta: f64, type_est: Option<f64>) -> Result<HalfPlaneFunction> {
    let rho = convergence_exponent(seq)?;
    if (rho.rho1 - 1.0).abs() > UNIT_EXPONENT_TOLERANCE {
        return Err(Error::Precondition(format!(
            "witness needs ρ₁ ≈ 1, measured {:.4}",
            rho.rho1
        )));
    }
    let d_plus = densities(seq, 1.0)?.d_plus;
    if !(d_plus < 0.5) {
        return Err(Error::Precondition(format!(
            "witness needs d⁺ < 1/2, measured {d_plus:.4}"
        )));
    }
    let tau = type_est.unwrap_or(PI * d_plus);
    let lo = 2.0 * tau / PI;
    if !(delta > lo && delta < 1.0) {
        return Err(Error::Precondition(format!(
            "δ = {delta} outside ({lo:.4}, 1) for type {tau:.4} (d⁺ = {d_plus:.4})"
        )));
    }
    let s = Arc::new(seq.clone());
    let t = Arc::clone(&s);
    let f = HalfPlaneFunction::new("zero_set_witness", -1.0 / delta, move |z| {
        let p = weierstrass_product(&s, z)?;
        if p.is_zero {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok((p.ln + log_cgamma(1.0 + delta * z)?).exp())
    })
    .with_ln_abs(move |z| {
        let p = weierstrass_product(&t, z)?;
        if p.is_zero {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(p.ln_abs() + log_cgamma(1.0 + delta * z)?.re)
    });
    Ok(f)
}

/// The three sides of the half-plane Carleman formula at radius R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarlemanSides {
    pub radius: f64,
    /// Σ_{1≤r_j≤R} (1/r_j − r_j/R²) cos θ_j.
    pub zeros: f64,
    /// (1/2π) ∫₁^R (1/y² − 1/R²) log|f(iy) f(−iy)| dy.
    pub axis: f64,
    /// (1/(πR)) ∫_{−π/2}^{π/2} log|f(Re^{it})| cos t dt.
    pub arc: f64,
}

impl CarlemanSides {
    /// L − I − J, the bounded remainder.
    pub fn residual(&self) -> f64 {
        self.zeros - self.axis - self.arc
    }
}

/// Breakpoints for ∫ over [lo, hi]: the ends, `extra`, and grid points where
/// |f| falls below `NEAR_ZERO_MODULUS`.
fn contour_breaks<F>(lo: f64, hi: f64, ln_abs: &F, extra: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let cut = NEAR_ZERO_MODULUS.ln();
    let scan: Vec<f64> = (1..CONTOUR_SCAN)
        .into_par_iter()
        .map(|k| lo + (hi - lo) * k as f64 / CONTOUR_SCAN as f64)
        .map(|t| Ok((t, ln_abs(t)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&(_, v)| v < cut)
        .map(|(t, _)| t)
        .collect();
    let mut b: Vec<f64> = [lo, hi]
        .into_iter()
        .chain(extra.iter().copied().filter(|t| *t > lo && *t < hi))
        .chain(scan)
        .collect();
    b.sort_by(f64::total_cmp);
    b.dedup();
    Ok(b)
}

/// Evaluates the Carleman formula's sides for f analytic on the closed
/// right half-plane with the given zeros.
pub fn carleman_sides(
    f: &HalfPlaneFunction,
    zeros: &PointSequence,
    radius: f64,
    cfg: &QuadratureConfig,
) -> Result<CarlemanSides> {
    if !(radius >= 1.0) || !radius.is_finite() {
        return Err(Error::Precondition(format!(
            "Carleman radius must be ≥ 1, got {radius}"
        )));
    }
    if !f.contains(Complex64::new(0.0, 1.0)) {
        return Err(Error::domain(format!(
            "{} is not defined on the imaginary axis",
            f.tag()
        )));
    }
    let r2 = radius * radius;
    let zeros_side: f64 = zeros
        .points
        .iter()
        .zip(&zeros.moduli)
        .filter(|(_, &m)| m >= 1.0 && m <= radius)
        .map(|(z, &m)| (1.0 / m - m / r2) * z.re / m)
        .sum();

    let ln_f = |z: Complex64| -> Result<f64> { Ok(f.ln_abs(z)?.max(LN_FLOOR)) };

    let axis_ln = |y: f64| -> Result<f64> { Ok(ln_f(Complex64::new(0.0, y))? + ln_f(Complex64::new(0.0, -y))?) };
    let axis = if radius > 1.0 {
        let breaks = contour_breaks(1.0, radius, &axis_ln, &[])?;
        integrate_breaks(|y: f64| Ok((1.0 / (y * y) - 1.0 / r2) * axis_ln(y)?), &breaks, cfg)? / (2.0 * PI)
    } else {
        0.0
    };

    let arc_ln = |t: f64| ln_f(Complex64::from_polar(radius, t));
    let on_arc: Vec<f64> = zeros
        .points
        .iter()
        .zip(&zeros.moduli)
        .filter(|(_, &m)| (m - radius).abs() <= 1e-9 * radius)
        .map(|(z, _)| z.arg())
        .collect();
    let breaks = contour_breaks(-FRAC_PI_2, FRAC_PI_2, &arc_ln, &on_arc)?;
    let arc = integrate_breaks(|t: f64| Ok(arc_ln(t)? * t.cos()), &breaks, cfg)? / (PI * radius);

    Ok(CarlemanSides {
        radius,
        zeros: zeros_side,
        axis,
        arc,
    })
}
