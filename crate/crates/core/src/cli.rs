//! Batch front end: argument parsing, config merging and JSON/CSV emission.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::disk_space::{norm_sq, DiskFunction};
use crate::error::{Error, Result};
use crate::functions::{HalfPlaneFunction, SpectralDensity, SpectralShape};
use crate::m2_space::{
    gamma_membership_profile, kernel_function, m2_kernel, m2_norm_sq, mellin_isometry_check, pw_isometry_check,
    pw_synthesis, OmegaMeasure, DEFAULT_TRUNCATION,
};
use crate::mellin_bergman::{h_kernel, mb_transform, type_envelope};
use crate::quad::QuadratureConfig;
use crate::sequences::{
    canonical_product, carleman_sides, uniqueness_verdict_with, zero_set_witness, PointSequence, SequenceRule,
    VerdictOptions, DEFAULT_MARGIN,
};
use crate::verify::{self, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Settings from the optional TOML config file; omitted fields take the
/// library defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub quadrature: QuadratureConfig,
    pub omega_truncation: usize,
    pub margin: f64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            quadrature: QuadratureConfig::default(),
            omega_truncation: DEFAULT_TRUNCATION,
            margin: DEFAULT_MARGIN,
            output_format: OutputFormat::Json,
            output_path: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bergman-muntz",
    version,
    about = "Mellin–Bergman transforms, ℳ²_ω norms and Müntz–Szász sequence tests"
)]
pub struct Cli {
    /// TOML config file; command-line flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Truncation N of the measure ω.
    #[arg(long = "omega-n", global = true, value_name = "N")]
    pub omega_n: Option<usize>,
    /// Sets both the absolute and the relative quadrature tolerance.
    #[arg(long, global = true, value_name = "X")]
    pub tol: Option<f64>,
    /// Safety margin for sequence verdicts.
    #[arg(long, global = true, value_name = "X")]
    pub margin: Option<f64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate M_Δ f on a grid. Input: JSON list of {"lambda": [re, im], "coeff": [re, im]}.
    Transform {
        #[arg(long, value_name = "FILE|-")]
        input: PathBuf,
        /// Comma-separated complex points such as 1,2+i,0.5-3i.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true, value_parser = parse_complex)]
        grid: Vec<Complex64>,
    },
    /// Reproducing kernel of ℳ²_ω or ℋ at (z, w).
    Kernel {
        #[arg(long, value_enum)]
        space: KernelSpace,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        w: Complex64,
    },
    /// ℳ²_ω norm of a constructed function.
    Norm {
        #[command(subcommand)]
        source: NormSource,
    },
    /// Sequence report and verdict. Input: PointSequence JSON.
    Sequence {
        #[arg(long, value_name = "FILE|-")]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        eps0: f64,
    },
    /// Build Π(z)Γ(1+δz) for a sequence and evaluate it.
    Witness {
        #[arg(long, value_name = "FILE|-")]
        input: PathBuf,
        #[arg(long)]
        delta: f64,
        /// Exponential type of the product; defaults to π·d⁺.
        #[arg(long)]
        type_est: Option<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_complex)]
        grid: Vec<Complex64>,
        /// Also compute the ℳ²_ω norm terms.
        #[arg(long)]
        norm: bool,
    },
    /// Sides of the Carleman formula on a list of radii.
    Carleman {
        #[arg(long, value_enum, default_value_t = CarlemanFunction::Sinc)]
        function: CarlemanFunction,
        /// Zeros as PointSequence JSON; required for `product`.
        #[arg(long, value_name = "FILE|-")]
        zeros: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,40")]
        radii: Vec<f64>,
    },
    /// Run a verification suite: gamma, quad, disk, mb, m2, sequences or all.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelSpace {
    M2,
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CarlemanFunction {
    /// sin(πz)/(πz) with zeros 1, 2, 3, …
    Sinc,
    /// e^z, no zeros.
    Exp,
    /// Canonical product of --zeros.
    Product,
}

#[derive(Debug, Subcommand)]
pub enum NormSource {
    /// Paley–Wiener synthesis of spectral data, e.g. '{"kind": "gauss_double_exp"}'.
    Pw {
        #[arg(long, value_name = "JSON|@FILE")]
        psi: String,
    },
    /// Mellin transform of φ, e.g. '{"kind": "power_exp", "a": 1, "b": 4}' for t e^(-4t).
    Mellin {
        #[arg(long, value_name = "JSON|@FILE")]
        phi: String,
    },
    /// Kernel function K_w.
    Kernel {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        w: Complex64,
    },
    /// Γ(ε0 + δz) membership profile.
    Gamma { eps0: f64, delta: f64 },
}

/// Radial test functions for the Mellin norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSpec {
    /// φ(t) = t^a e^(−bt).
    PowerExp {
        #[serde(default)]
        a: f64,
        b: f64,
    },
}

/// Parses `a`, `bi`, `a+bi` and `a-bi` (also `i`, `-i`).
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    t.parse::<Complex64>()
        .ok()
        .filter(|z| z.is_finite())
        .ok_or_else(|| format!("not a complex number: {s:?} (expected a, bi or a+bi)"))
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

/// A rendered result: JSON for `--format json`, rows for `--format csv`.
pub struct Output {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub exit_code: i32,
}

impl Output {
    fn new(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Output {
            json,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
            exit_code: EXIT_OK,
        }
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).map_err(|e| Error::Parse(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io_err = |e: csv::Error| Error::Parse(e.to_string());
                w.write_record(&self.header).map_err(io_err)?;
                for r in &self.rows {
                    w.write_record(r).map_err(io_err)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
            }
        }
    }
}

/// 17 significant digits, enough to round-trip any f64.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_USAGE,
        Error::NonConvergence(_) => EXIT_NUMERICAL,
        Error::Pole(_) | Error::Domain(_) | Error::InsufficientData(_) | Error::Precondition(_) => EXIT_DOMAIN,
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// Inline JSON, or `@path` to read it from a file.
fn inline_or_file(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(p) => read_input(Path::new(p)),
        None => Ok(arg.to_string()),
    }
}

/// Settings after merging defaults, config file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub config: RunConfig,
}

impl Settings {
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let mut config = match &cli.config {
            Some(p) => RunConfig::from_toml(&read_input(p)?)?,
            None => RunConfig::default(),
        };
        if let Some(n) = cli.omega_n {
            config.omega_truncation = n;
        }
        if let Some(t) = cli.tol {
            config.quadrature.abs_tol = t;
            config.quadrature.rel_tol = t;
        }
        if let Some(m) = cli.margin {
            config.margin = m;
        }
        if let Some(f) = cli.format {
            config.output_format = f;
        }
        if let Some(p) = &cli.out {
            config.output_path = Some(p.clone());
        }
        config
            .quadrature
            .validate()
            .map_err(|e| Error::Parse(format!("quadrature settings: {e}")))?;
        Ok(Settings { config })
    }

    fn omega(&self) -> OmegaMeasure {
        OmegaMeasure::new(self.config.omega_truncation)
    }

    fn quad(&self) -> &QuadratureConfig {
        &self.config.quadrature
    }
}

pub fn execute(command: &Command, s: &Settings) -> Result<Output> {
    match command {
        Command::Transform { input, grid } => cmd_transform(&read_input(input)?, grid),
        Command::Kernel { space, z, w } => Ok(cmd_kernel(*space, *z, *w)),
        Command::Norm { source } => cmd_norm(source, s),
        Command::Sequence { input, eps0 } => cmd_sequence(&read_input(input)?, *eps0, s),
        Command::Witness {
            input,
            delta,
            type_est,
            grid,
            norm,
        } => cmd_witness(&read_input(input)?, *delta, *type_est, grid, *norm, s),
        Command::Carleman { function, zeros, radii } => {
            let zeros = zeros.as_deref().map(read_input).transpose()?;
            cmd_carleman(*function, zeros.as_deref(), radii, s)
        }
        Command::Verify { suite } => Ok(cmd_verify(*suite, s)),
    }
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Table of values with row-level error markers; any failing row makes the
/// exit code `EXIT_DOMAIN` (or `EXIT_NUMERICAL`), while the other rows are
/// still emitted.
fn value_rows<F>(grid: &[Complex64], extra: &str, f: F) -> Output
where
    F: Fn(Complex64) -> Result<(Complex64, Option<f64>)>,
{
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut code = EXIT_OK;
    for &z in grid {
        match f(z) {
            Ok((v, e)) => {
                rows.push(vec![
                    num(z.re),
                    num(z.im),
                    num(v.re),
                    num(v.im),
                    e.map(num).unwrap_or_default(),
                    String::new(),
                ]);
                items.push(json!({"z": complex_json(z), "value": complex_json(v), extra: e}));
            }
            Err(err) => {
                code = code.max(exit_code(&err));
                rows.push(vec![
                    num(z.re),
                    num(z.im),
                    String::new(),
                    String::new(),
                    String::new(),
                    err.to_string(),
                ]);
                items.push(json!({"z": complex_json(z), "error": err.to_string()}));
            }
        }
    }
    let mut out = Output::new(
        json!({ "rows": items }),
        &["z_re", "z_im", "re", "im", extra, "error"],
        rows,
    );
    out.exit_code = code;
    out
}

pub fn cmd_transform(input: &str, grid: &[Complex64]) -> Result<Output> {
    let f: DiskFunction = parse_json(input, "disk function")?;
    let g = mb_transform(&f);
    let norm = norm_sq(&f).sqrt();
    Ok(value_rows(grid, "envelope", |z| {
        Ok((g.eval(z)?, type_envelope(z, norm).ok()))
    }))
}

pub fn cmd_kernel(space: KernelSpace, z: Complex64, w: Complex64) -> Output {
    value_rows(&[z], "w_re", |z| {
        let v = match space {
            KernelSpace::M2 => m2_kernel(z, w)?,
            KernelSpace::H => h_kernel(z, w)?,
        };
        Ok((v, Some(w.re)))
    })
}

fn norm_output(json: Value, terms: &[f64], omega: &OmegaMeasure) -> Output {
    let rows = terms
        .iter()
        .enumerate()
        .map(|(n, t)| vec![n.to_string(), num(omega.node(n)), num(omega.weight(n)), num(*t)])
        .collect();
    Output::new(json, &["n", "node", "weight", "term"], rows)
}

pub fn cmd_norm(source: &NormSource, s: &Settings) -> Result<Output> {
    let omega = s.omega();
    let cfg = s.quad();
    match source {
        NormSource::Pw { psi } => {
            let shape: SpectralShape = parse_json(&inline_or_file(psi)?, "spectral data")?;
            let density = SpectralDensity::from_shape(shape.clone())?;
            let norm = m2_norm_sq(&pw_synthesis(&density, cfg), &omega, cfg)?;
            let chk = pw_isometry_check(&density, &omega, cfg)?;
            let json =
                json!({"source": "pw", "psi": to_json(&shape), "norm": to_json(&norm), "isometry": to_json(&chk)});
            Ok(norm_output(json, &norm.terms, &omega))
        }
        NormSource::Mellin { phi } => {
            let spec: PhiSpec = parse_json(&inline_or_file(phi)?, "phi")?;
            let PhiSpec::PowerExp { a, b } = spec;
            if !(a > 0.0 && b > 1.0) {
                return Err(Error::Precondition(format!(
                    "t^a e^(-bt) needs a > 0 and b > 1 for a finite weighted norm, got a = {a}, b = {b}"
                )));
            }
            let phi_fn = move |t: f64| Complex64::new((a * t.ln() - b * t).exp(), 0.0);
            let norm = m2_norm_sq(&crate::m2_space::mellin_function(phi_fn, cfg), &omega, cfg)?;
            let chk = mellin_isometry_check(phi_fn, &omega, cfg)?;
            let json =
                json!({"source": "mellin", "phi": to_json(&spec), "norm": to_json(&norm), "isometry": to_json(&chk)});
            Ok(norm_output(json, &norm.terms, &omega))
        }
        NormSource::Kernel { w } => {
            let norm = m2_norm_sq(&kernel_function(*w)?, &omega, cfg)?;
            let exact = m2_kernel(*w, *w)?.re;
            let json = json!({"source": "kernel", "w": complex_json(*w), "norm": to_json(&norm), "exact": exact});
            Ok(norm_output(json, &norm.terms, &omega))
        }
        NormSource::Gamma { eps0, delta } => {
            let prof = gamma_membership_profile(*eps0, *delta, &omega, cfg)?;
            let json = json!({"source": "gamma", "profile": to_json(&prof)});
            Ok(norm_output(json, &prof.terms, &omega))
        }
    }
}

pub fn cmd_sequence(input: &str, eps0: f64, s: &Settings) -> Result<Output> {
    let seq: PointSequence = parse_json(input, "point sequence")?;
    let opts = VerdictOptions {
        margin: s.config.margin,
        ..VerdictOptions::new(eps0)
    };
    let report = uniqueness_verdict_with(&seq, &opts)?;
    let rows = report
        .carleman_ratio_curve
        .iter()
        .map(|&(r, v)| vec![num(r), num(v)])
        .collect();
    Ok(Output::new(to_json(&report), &["R", "carleman_ratio"], rows))
}

/// Sequence points checked for exact vanishing of the witness.
const WITNESS_ZERO_CHECKS: usize = 50;

pub fn cmd_witness(
    input: &str,
    delta: f64,
    type_est: Option<f64>,
    grid: &[Complex64],
    with_norm: bool,
    s: &Settings,
) -> Result<Output> {
    let seq: PointSequence = parse_json(input, "point sequence")?;
    let f = zero_set_witness(&seq, delta, type_est)?;
    let mut max_on_zeros: f64 = 0.0;
    for &z in seq.points().iter().take(WITNESS_ZERO_CHECKS) {
        max_on_zeros = max_on_zeros.max(f.eval(z)?.norm());
    }
    let mut out = value_rows(grid, "ln_abs", |z| {
        Ok((f.eval(z)?, f.ln_abs(z).ok().filter(|v| v.is_finite())))
    });
    let norm = if with_norm {
        Some(m2_norm_sq(&f, &s.omega(), s.quad())?)
    } else {
        None
    };
    out.json = json!({
        "delta": delta,
        "type_est": type_est,
        "max_abs_on_sequence": max_on_zeros,
        "checked_points": seq.len().min(WITNESS_ZERO_CHECKS),
        "values": out.json["rows"].clone(),
        "norm": norm.as_ref().map(to_json),
    });
    Ok(out)
}

pub fn cmd_carleman(function: CarlemanFunction, zeros: Option<&str>, radii: &[f64], s: &Settings) -> Result<Output> {
    let r_top = radii.iter().cloned().fold(1.0, f64::max);
    let (f, zeros): (HalfPlaneFunction, PointSequence) = match function {
        CarlemanFunction::Sinc => (
            HalfPlaneFunction::entire("sinc", |z: Complex64| {
                if z.norm() < 1e-8 {
                    return Ok(Complex64::new(1.0, 0.0));
                }
                let w = std::f64::consts::PI * z;
                Ok(w.sin() / w)
            }),
            PointSequence::from_rule(SequenceRule::Arith { a: 1.0, b: 0.0 }, r_top)?,
        ),
        CarlemanFunction::Exp => (
            HalfPlaneFunction::entire("exp", |z: Complex64| Ok(z.exp())).with_ln_abs(|z: Complex64| Ok(z.re)),
            PointSequence::from_points(Vec::new())?,
        ),
        CarlemanFunction::Product => {
            let text = zeros.ok_or_else(|| Error::Parse("carleman --function product needs --zeros".into()))?;
            let seq: PointSequence = parse_json(text, "zeros")?;
            (canonical_product(&seq)?, seq)
        }
    };
    let sides = radii
        .iter()
        .map(|&r| carleman_sides(&f, &zeros, r, s.quad()))
        .collect::<Result<Vec<_>>>()?;
    let residuals: Vec<f64> = sides.iter().map(|c| c.residual()).collect();
    let tv: f64 = residuals.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let rows = sides
        .iter()
        .map(|c| vec![num(c.radius), num(c.zeros), num(c.axis), num(c.arc), num(c.residual())])
        .collect();
    let json = json!({
        "function": format!("{function:?}").to_lowercase(),
        "sides": to_json(&sides),
        "residuals": residuals,
        "residual_total_variation": tv,
    });
    Ok(Output::new(json, &["R", "L", "I", "J", "residual"], rows))
}

pub fn cmd_verify(suite: Suite, s: &Settings) -> Output {
    let opts = VerifyOptions {
        quadrature: *s.quad(),
        omega_n: s.config.omega_truncation,
        margin: s.config.margin,
    };
    let report = verify::run(suite, &opts);
    let rows = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.suite.to_string(),
                c.name.clone(),
                c.passed.to_string(),
                c.detail.clone(),
            ]
        })
        .collect();
    let mut out = Output::new(to_json(&report), &["suite", "check", "passed", "detail"], rows);
    if !report.passed {
        out.exit_code = EXIT_NUMERICAL;
    }
    out
}

/// Parses `args`, runs the command and writes the result. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let fail = |stderr: &mut dyn Write, e: &Error| {
        let _ = writeln!(stderr, "error: {e}");
        exit_code(e)
    };
    let settings = match Settings::resolve(&cli) {
        Ok(s) => s,
        Err(e) => return fail(stderr, &e),
    };
    let out = match execute(&cli.command, &settings) {
        Ok(o) => o,
        Err(e) => return fail(stderr, &e),
    };
    let text = match out.render(settings.config.output_format) {
        Ok(t) => t,
        Err(e) => return fail(stderr, &e),
    };
    let written = match &settings.config.output_path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::Parse(format!("stdout: {e}"))),
    };
    if let Err(e) = written {
        return fail(stderr, &e);
    }
    out.exit_code
}
