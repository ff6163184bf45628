//! TOML run configuration.
//!
//! ```toml
//! [problem]
//! alpha = "pi/2"
//! beta = 0.0
//!
//! [problem.transmission]
//! row_a = [1.0, 1.0, -1.0, 0.0]
//! row_b = [0.0, 1.0, 0.0, -1.0]
//!
//! [problem.potential]
//! kind = "cosine"
//! amplitude = 1.0
//! frequency = 1.0
//!
//! [solver]
//! count = 20
//! jump_convention = "cramer"
//!
//! [report]
//! out_dir = "out/case-one"
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use transmission_sl::{
    BoundaryAngles, ColumnConvention, Error as SolverError, IntegratorConfig, JumpConvention,
    Method, PotentialForm, PotentialSpec, ProblemSpec, SpectrumConfig, TransmissionMatrix,
    ValidatedProblem,
};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown key: {message}")]
    UnknownKey { line: usize, message: String },
    #[error("invalid configuration: {}", .0.join("; "))]
    Validation(Vec<String>),
}

/// An angle given either as a number of radians or as an expression such as
/// `"pi/2"`, `"-pi/3"` or `"2*pi/3"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Radians(f64),
    Expr(String),
}

impl Angle {
    pub fn radians(&self) -> Result<f64, String> {
        match self {
            Angle::Radians(v) => Ok(*v),
            Angle::Expr(s) => parse_angle(s),
        }
    }
}

fn parse_angle(text: &str) -> Result<f64, String> {
    let bad =
        || format!("cannot read angle {text:?}; use radians or forms like \"pi/2\", \"-2*pi/3\"");
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let compact = compact.replace('π', "pi");
    if let Ok(v) = compact.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = match compact.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (compact.as_str(), 1.0),
    };
    let (sign, num) = match num.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, num.strip_prefix('+').unwrap_or(num)),
    };
    let coef = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some(c) => c
            .strip_suffix('*')
            .unwrap_or(c)
            .parse::<f64>()
            .map_err(|_| bad())?,
        None => return Err(bad()),
    };
    if den == 0.0 {
        return Err(bad());
    }
    Ok(sign * coef * PI / den)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmissionBlock {
    pub row_a: [f64; 4],
    pub row_b: [f64; 4],
    #[serde(default)]
    pub columns: ColumnConvention,
}

/// Either one form for both halves or separate `left` / `right` tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PotentialBlock {
    Split {
        left: PotentialForm,
        right: PotentialForm,
    },
    Uniform(PotentialForm),
}

impl Default for PotentialBlock {
    fn default() -> Self {
        PotentialBlock::Uniform(PotentialForm::Zero)
    }
}

impl PotentialBlock {
    pub fn spec(&self) -> PotentialSpec {
        match self {
            PotentialBlock::Split { left, right } => PotentialSpec {
                left: left.clone(),
                right: right.clone(),
            },
            PotentialBlock::Uniform(f) => PotentialSpec::uniform(f.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemBlock {
    pub alpha: Angle,
    pub beta: Angle,
    pub transmission: Option<TransmissionBlock>,
    #[serde(default)]
    pub potential: PotentialBlock,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    #[default]
    #[serde(alias = "dopri", alias = "adaptive")]
    DormandPrince,
    #[serde(alias = "fixed")]
    Rk4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBlock {
    pub method: MethodName,
    pub atol: f64,
    pub rtol: f64,
    /// Step bound for the fixed-step method.
    pub max_step: f64,
    pub mesh_points: usize,
    pub jump_convention: JumpConvention,
    pub count: usize,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub refine_tol: f64,
}

impl Default for SolverBlock {
    fn default() -> Self {
        Self {
            method: MethodName::default(),
            atol: 1e-10,
            rtol: 1e-10,
            max_step: 1e-3,
            mesh_points: 513,
            jump_convention: JumpConvention::default(),
            count: 10,
            lambda_min: None,
            lambda_max: None,
            refine_tol: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportBlock {
    pub out_dir: PathBuf,
    pub formats: Vec<Format>,
    /// `[n_min, n_max]` for the asymptotic fit.
    pub window: Option<[usize; 2]>,
}

impl Default for ReportBlock {
    fn default() -> Self {
        Self {
            out_dir: PathBuf::from("out"),
            formats: vec![Format::Csv, Format::Json],
            window: None,
        }
    }
}

/// The file as written.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub problem: ProblemBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub report: ReportBlock,
}

/// A configuration that parsed and validated.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub raw: RawConfig,
    pub source: Option<PathBuf>,
    pub problem: ValidatedProblem,
    pub convention: JumpConvention,
    pub spectrum: SpectrumConfig,
    pub count: usize,
    pub out_dir: PathBuf,
    pub formats: Vec<Format>,
    pub window: Option<(usize, usize)>,
}

impl RunConfig {
    pub fn integrator(&self) -> &IntegratorConfig {
        &self.spectrum.integrator
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses and validates configuration text. Relative output directories are
/// kept as written.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(1, |s| line_of(text, s.start));
        let message = e.message().trim().to_string();
        if message.starts_with("unknown field") {
            ConfigError::UnknownKey { line, message }
        } else {
            ConfigError::Parse { line, message }
        }
    })?;
    validate(raw)
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut cfg = parse_config(&text)?;
    cfg.source = Some(path.to_path_buf());
    Ok(cfg)
}

fn validate(raw: RawConfig) -> Result<RunConfig, ConfigError> {
    let mut errors = Vec::new();
    let mut angle = |name: &str, a: &Angle| match a.radians() {
        Ok(v) if v.is_finite() => v,
        Ok(v) => {
            errors.push(format!("problem.{name} must be finite (got {v})"));
            0.0
        }
        Err(e) => {
            errors.push(format!("problem.{name}: {e}"));
            0.0
        }
    };
    let alpha = angle("alpha", &raw.problem.alpha);
    let beta = angle("beta", &raw.problem.beta);

    let s = &raw.solver;
    if !(s.atol > 0.0 && s.rtol > 0.0) {
        errors.push("solver.atol and solver.rtol must be positive".into());
    }
    if s.method == MethodName::Rk4 && !(s.max_step > 0.0) {
        errors.push("solver.max_step must be positive".into());
    }
    if s.count == 0 {
        errors.push("solver.count must be at least 1".into());
    }
    if !(s.refine_tol > 0.0 && s.refine_tol < 1e-3) {
        errors.push("solver.refine_tol must lie in (0, 1e-3)".into());
    }
    if let (Some(a), Some(b)) = (s.lambda_min, s.lambda_max) {
        if !(a < b) {
            errors.push(format!(
                "solver.lambda_min ({a}) must be below solver.lambda_max ({b})"
            ));
        }
    }
    let method = match s.method {
        MethodName::DormandPrince => Method::DormandPrince {
            atol: s.atol,
            rtol: s.rtol,
        },
        MethodName::Rk4 => Method::Rk4 {
            max_step: s.max_step,
        },
    };
    let integrator = IntegratorConfig {
        method,
        mesh_points: s.mesh_points,
        ..IntegratorConfig::default()
    };
    if let Err(e) = integrator.validate() {
        errors.push(format!("solver: {e}"));
    }
    let window = raw.report.window.map(|[a, b]| (a, b));
    if let Some((a, b)) = window {
        if a == 0 || b < a + 4 {
            errors.push(format!(
                "report.window [{a}, {b}] must start at 1 or later and span at least 5 indices"
            ));
        }
    }
    if raw.report.formats.is_empty() {
        errors.push("report.formats must name at least one of \"csv\", \"json\"".into());
    }

    let problem = match &raw.problem.transmission {
        None => {
            errors.push("missing [problem.transmission] block (row_a, row_b)".into());
            None
        }
        Some(t) => {
            let spec = ProblemSpec {
                angles: BoundaryAngles::new(alpha, beta),
                transmission: TransmissionMatrix::new(t.row_a, t.row_b).with_columns(t.columns),
                potential: raw.problem.potential.spec(),
            };
            match spec.validate() {
                Ok(p) => Some(p),
                Err(SolverError::InvalidProblem(list)) => {
                    errors.extend(list.iter().map(|e| e.to_string()));
                    None
                }
                Err(e) => {
                    errors.push(e.to_string());
                    None
                }
            }
        }
    };
    if !errors.is_empty() {
        return Err(ConfigError::Validation(errors));
    }
    let spectrum = SpectrumConfig {
        integrator,
        refine_tol: s.refine_tol,
        lambda_min: s.lambda_min,
        lambda_max: s.lambda_max,
        ..SpectrumConfig::default()
    };
    Ok(RunConfig {
        convention: s.jump_convention,
        count: s.count,
        out_dir: raw.report.out_dir.clone(),
        formats: raw.report.formats.clone(),
        window,
        spectrum,
        problem: problem.expect("validated above"),
        source: None,
        raw,
    })
}
