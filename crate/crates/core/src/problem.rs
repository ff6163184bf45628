//! Problem instances: boundary angles, the 2×4 transmission matrix with its
//! column determinants, the potential, and the four-way boundary case split.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{Potential, PotentialSpec, Side};

/// Default zero tolerance for `sin α`, `sin β` in [`classify_case`].
pub const CASE_TOLERANCE: f64 = 1e-12;

/// `cos α y(-π) + sin α y'(-π) = 0` and `cos β y(π) + sin β y'(π) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryAngles {
    pub alpha: f64,
    pub beta: f64,
}

impl BoundaryAngles {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    /// Angles reduced to `[0, π)`. Only used for reporting; evaluation
    /// always uses the raw values.
    pub fn reduced(&self) -> (f64, f64) {
        (self.alpha.rem_euclid(PI), self.beta.rem_euclid(PI))
    }
}

/// Which interface quantity each column of the transmission matrix multiplies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColumnConvention {
    /// Columns are `(y(0-), y'(0-), y(0+), y'(0+))`.
    #[default]
    ValueFirst,
    /// Columns are `(y'(0-), y(0-), y'(0+), y(0+))`.
    DerivativeFirst,
}

/// Rows `a` and `b` of the conditions `Γ₁ = a·v = 0`, `Γ₂ = b·v = 0`, where `v`
/// collects the one-sided interface values in the order set by `columns`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransmissionMatrix {
    pub row_a: [f64; 4],
    pub row_b: [f64; 4],
    #[serde(default)]
    pub columns: ColumnConvention,
}

impl TransmissionMatrix {
    pub fn new(row_a: [f64; 4], row_b: [f64; 4]) -> Self {
        Self {
            row_a,
            row_b,
            columns: ColumnConvention::default(),
        }
    }

    pub fn with_columns(mut self, columns: ColumnConvention) -> Self {
        self.columns = columns;
        self
    }

    /// `y(0-) = y(0+)`, `y'(0-) = y'(0+)`.
    pub fn continuity() -> Self {
        Self::new([1.0, 0.0, -1.0, 0.0], [0.0, 1.0, 0.0, -1.0])
    }

    /// Rows reordered so that columns read `(y(0-), y'(0-), y(0+), y'(0+))`.
    pub fn value_first_rows(&self) -> ([f64; 4], [f64; 4]) {
        match self.columns {
            ColumnConvention::ValueFirst => (self.row_a, self.row_b),
            ColumnConvention::DerivativeFirst => {
                let swap = |r: [f64; 4]| [r[1], r[0], r[3], r[2]];
                (swap(self.row_a), swap(self.row_b))
            }
        }
    }

    /// `(Γ₁, Γ₂)` for one-sided states `(y, y')` at `0-` and `0+`.
    pub fn residuals(&self, minus: (f64, f64), plus: (f64, f64)) -> [f64; 2] {
        let (a, b) = self.value_first_rows();
        let v = [minus.0, minus.1, plus.0, plus.1];
        let dot = |r: [f64; 4]| r.iter().zip(v).map(|(c, x)| c * x).sum::<f64>();
        [dot(a), dot(b)]
    }

    fn is_finite(&self) -> bool {
        self.row_a.iter().chain(&self.row_b).all(|v| v.is_finite())
    }

    fn row_norm_product(&self) -> f64 {
        let norm = |r: &[f64; 4]| r.iter().map(|v| v * v).sum::<f64>().sqrt();
        norm(&self.row_a) * norm(&self.row_b)
    }
}

/// The six 2×2 column determinants `ρ_kj = a_k b_j − a_j b_k` of the
/// transmission matrix (1-based column indices, in stored column order).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoSet {
    pub r12: f64,
    pub r13: f64,
    pub r14: f64,
    pub r23: f64,
    pub r24: f64,
    pub r34: f64,
}

impl RhoSet {
    /// `ρ_kj` for `1 ≤ k < j ≤ 4`; `ρ_jk = −ρ_kj` and `ρ_kk = 0`.
    pub fn get(&self, k: usize, j: usize) -> f64 {
        match (k, j) {
            (1, 2) => self.r12,
            (1, 3) => self.r13,
            (1, 4) => self.r14,
            (2, 3) => self.r23,
            (2, 4) => self.r24,
            (3, 4) => self.r34,
            (k, j) if k == j && (1..=4).contains(&k) => 0.0,
            (k, j) if k > j => -self.get(j, k),
            _ => panic!("column index out of range: ({k}, {j})"),
        }
    }

    pub fn values(&self) -> [f64; 6] {
        [self.r12, self.r13, self.r14, self.r23, self.r24, self.r34]
    }

    /// `ρ₁₂ρ₃₄ − ρ₁₃ρ₂₄ + ρ₁₄ρ₂₃`, zero for every 2×4 matrix.
    pub fn plucker(&self) -> f64 {
        self.r12 * self.r34 - self.r13 * self.r24 + self.r14 * self.r23
    }

    /// Plücker defect relative to the size of its terms.
    pub fn plucker_relative(&self) -> f64 {
        let scale =
            (self.r12 * self.r34).abs() + (self.r13 * self.r24).abs() + (self.r14 * self.r23).abs();
        if scale == 0.0 {
            0.0
        } else {
            self.plucker().abs() / scale
        }
    }
}

fn determinants(t: &TransmissionMatrix) -> RhoSet {
    let (a, b) = (t.row_a, t.row_b);
    let d = |k: usize, j: usize| a[k] * b[j] - a[j] * b[k];
    RhoSet {
        r12: d(0, 1),
        r13: d(0, 2),
        r14: d(0, 3),
        r23: d(1, 2),
        r24: d(1, 3),
        r34: d(2, 3),
    }
}

fn degeneracy_floor(t: &TransmissionMatrix) -> f64 {
    1e-14 * t.row_norm_product().max(1.0)
}

/// Column determinants of `t`.
pub fn build_rho(t: &TransmissionMatrix) -> Result<RhoSet> {
    let rho = determinants(t);
    let floor = degeneracy_floor(t);
    if rho.values().iter().all(|v| v.abs() < floor) {
        return Err(Error::DegenerateMatrix);
    }
    Ok(rho)
}

/// The four boundary cases, keyed on whether `sin α` and `sin β` vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `sin β ≠ 0`, `sin α ≠ 0`
    I,
    /// `sin β ≠ 0`, `sin α = 0`
    II,
    /// `sin β = 0`, `sin α ≠ 0`
    III,
    /// `sin β = 0`, `sin α = 0`
    IV,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case::I => "I",
            Case::II => "II",
            Case::III => "III",
            Case::IV => "IV",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseTag {
    pub case: Case,
    pub sin_alpha_zero: bool,
    pub sin_beta_zero: bool,
}

pub fn classify_case(angles: &BoundaryAngles, tol: f64) -> CaseTag {
    let sin_alpha_zero = angles.alpha.sin().abs() <= tol;
    let sin_beta_zero = angles.beta.sin().abs() <= tol;
    let case = match (sin_beta_zero, sin_alpha_zero) {
        (false, false) => Case::I,
        (false, true) => Case::II,
        (true, false) => Case::III,
        (true, true) => Case::IV,
    };
    CaseTag {
        case,
        sin_alpha_zero,
        sin_beta_zero,
    }
}

/// Unvalidated problem description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub angles: BoundaryAngles,
    pub transmission: TransmissionMatrix,
    pub potential: PotentialSpec,
}

/// One reason a [`ProblemSpec`] fails validation.
#[derive(Clone, Debug, PartialEq)]
pub enum ProblemError {
    RhoSignViolation { name: &'static str, value: f64 },
    PotentialUnbounded { side: Side, detail: String },
    RankDeficientTransmission,
    NonFiniteInput(&'static str),
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemError::RhoSignViolation { name, value } => {
                write!(f, "{name} > 0 required (got {value})")
            }
            ProblemError::PotentialUnbounded { side, detail } => {
                write!(f, "{side:?} potential is not usable: {detail}")
            }
            ProblemError::RankDeficientTransmission => {
                f.write_str("transmission rows are linearly dependent")
            }
            ProblemError::NonFiniteInput(what) => write!(f, "{what} must be finite"),
        }
    }
}

/// Parameters the leading-order asymptotic formulas depend on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticParams {
    pub alpha: f64,
    pub beta: f64,
    pub rho12: f64,
    pub rho24: f64,
    pub rho34: f64,
}

/// A problem that passed [`validate_problem`]. Immutable; `ρ` is computed once
/// here and cached.
#[derive(Clone, Debug)]
pub struct ValidatedProblem {
    spec: ProblemSpec,
    rho: RhoSet,
    potential: Potential,
}

impl ValidatedProblem {
    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn angles(&self) -> BoundaryAngles {
        self.spec.angles
    }

    pub fn transmission(&self) -> &TransmissionMatrix {
        &self.spec.transmission
    }

    pub fn rho(&self) -> &RhoSet {
        &self.rho
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn case(&self) -> CaseTag {
        classify_case(&self.spec.angles, CASE_TOLERANCE)
    }

    pub fn asymptotic_params(&self) -> AsymptoticParams {
        AsymptoticParams {
            alpha: self.spec.angles.alpha,
            beta: self.spec.angles.beta,
            rho12: self.rho.r12,
            rho24: self.rho.r24,
            rho34: self.rho.r34,
        }
    }

    /// Recomputes `ρ` from the stored matrix and compares with the cache.
    pub fn rho_cache_consistent(&self) -> bool {
        determinants(&self.spec.transmission) == self.rho
    }
}

/// Checks `ρ₁₂ > 0`, `ρ₃₄ > 0`, rank, finiteness and the potential, collecting
/// every violation.
pub fn validate_problem(
    spec: &ProblemSpec,
) -> std::result::Result<ValidatedProblem, Vec<ProblemError>> {
    let mut errors = Vec::new();
    if !spec.angles.alpha.is_finite() {
        errors.push(ProblemError::NonFiniteInput("alpha"));
    }
    if !spec.angles.beta.is_finite() {
        errors.push(ProblemError::NonFiniteInput("beta"));
    }
    let t = &spec.transmission;
    let rho = determinants(t);
    if !t.is_finite() {
        errors.push(ProblemError::NonFiniteInput("transmission matrix"));
    } else {
        let floor = degeneracy_floor(t);
        if rho.values().iter().all(|v| v.abs() < floor) {
            errors.push(ProblemError::RankDeficientTransmission);
        }
        if !(rho.r12 > 0.0) {
            errors.push(ProblemError::RhoSignViolation {
                name: "rho12",
                value: rho.r12,
            });
        }
        if !(rho.r34 > 0.0) {
            errors.push(ProblemError::RhoSignViolation {
                name: "rho34",
                value: rho.r34,
            });
        }
    }
    let potential = match spec.potential.compile() {
        Ok(p) => Some(p),
        Err(issue) => {
            errors.push(ProblemError::PotentialUnbounded {
                side: issue.side,
                detail: issue.detail,
            });
            None
        }
    };
    match potential {
        Some(potential) if errors.is_empty() => Ok(ValidatedProblem {
            spec: spec.clone(),
            rho,
            potential,
        }),
        _ => Err(errors),
    }
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<ValidatedProblem> {
        validate_problem(self).map_err(Error::InvalidProblem)
    }
}
