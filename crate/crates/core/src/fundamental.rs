//! Left- and right-launched fundamental solutions `φ`, `χ` and the interface
//! jump map that carries them across `x = 0`.
//!
//! `φ` starts from `(y, y')(-π) = (sin α, −cos α)`, is integrated to `0-`,
//! mapped to `0+` and continued to `π`. `χ` starts from
//! `(y, y')(π) = (−sin β, cos β)` and runs the other way.
//!
//! Two jump maps are provided:
//!
//! * [`JumpConvention::CramerSolve`] solves `Γ₁ = Γ₂ = 0` for the unknown
//!   one-sided values, so the pieced function satisfies both transmission
//!   conditions.
//! * [`JumpConvention::PaperLiteral`] applies the printed `ρ` formulas as
//!   they stand: `y(0+) = (ρ₂₃ y + ρ₂₄ y')/ρ₁₂`,
//!   `y'(0+) = −(ρ₁₃ y + ρ₁₄ y')/ρ₁₂` on the way out of the left piece and
//!   `y(0-) = −(ρ₁₄ y + ρ₂₄ y')/ρ₃₄`, `y'(0-) = (ρ₁₃ y + ρ₂₃ y')/ρ₃₄` on the
//!   way out of the right piece. For value-first columns these are the
//!   inverses of the Cramer maps, so the resulting function generally violates
//!   the transmission conditions; its residuals are reported, not assumed zero.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ivp::{integrate_ivp, uniform_mesh, IntegratorConfig, SolutionPath, StatePair};
use crate::potential::Side;
use crate::problem::{
    classify_case, AsymptoticParams, BoundaryAngles, Case, CaseTag, RhoSet, TransmissionMatrix,
    ValidatedProblem, CASE_TOLERANCE,
};
use crate::quadrature::cumulative_simpson;

const SINGULAR: f64 = 1e-14;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JumpConvention {
    #[serde(alias = "paper")]
    PaperLiteral,
    #[default]
    #[serde(alias = "cramer")]
    CramerSolve,
}

type Mat2 = [[f64; 2]; 2];

fn apply(m: &Mat2, v: (f64, f64)) -> (f64, f64) {
    (m[0][0] * v.0 + m[0][1] * v.1, m[1][0] * v.0 + m[1][1] * v.1)
}

fn det(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Linear maps `(y, y')(0-) → (y, y')(0+)` and back.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpMap {
    forward: Mat2,
    backward: Mat2,
    convention: JumpConvention,
}

impl JumpMap {
    pub fn new(t: &TransmissionMatrix, rho: &RhoSet, convention: JumpConvention) -> Result<Self> {
        Ok(Self {
            forward: forward_matrix(t, rho, convention)?,
            backward: backward_matrix(t, rho, convention)?,
            convention,
        })
    }

    pub fn for_problem(problem: &ValidatedProblem, convention: JumpConvention) -> Result<Self> {
        Self::new(problem.transmission(), problem.rho(), convention)
    }

    pub fn convention(&self) -> JumpConvention {
        self.convention
    }

    /// State at `0-` → state at `0+`.
    pub fn forward(&self, minus: StatePair) -> StatePair {
        let (y, dy) = apply(&self.forward, (minus.y, minus.dy));
        StatePair::new(0.0, y, dy)
    }

    /// State at `0+` → state at `0-`.
    pub fn backward(&self, plus: StatePair) -> StatePair {
        let (y, dy) = apply(&self.backward, (plus.y, plus.dy));
        StatePair::new(0.0, y, dy)
    }

    /// Determinant of the forward map; Wronskians at `0+` are this multiple of
    /// Wronskians at `0-`.
    pub fn determinant(&self) -> f64 {
        det(&self.forward)
    }
}

/// Coefficient blocks `(minus, plus)` with columns `(y, y')`.
fn blocks(t: &TransmissionMatrix) -> (Mat2, Mat2) {
    let (a, b) = t.value_first_rows();
    ([[a[0], a[1]], [b[0], b[1]]], [[a[2], a[3]], [b[2], b[3]]])
}

/// `−X⁻¹ Y`, failing when `det X` is below the singularity floor.
fn solve_block(x: &Mat2, y: &Mat2, which: &'static str) -> Result<Mat2> {
    let d = det(x);
    if d.abs() < SINGULAR {
        return Err(Error::SingularJump { which, value: d });
    }
    let inv = [[x[1][1] / d, -x[0][1] / d], [-x[1][0] / d, x[0][0] / d]];
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = -(inv[i][0] * y[0][j] + inv[i][1] * y[1][j]);
        }
    }
    Ok(out)
}

fn forward_matrix(t: &TransmissionMatrix, rho: &RhoSet, conv: JumpConvention) -> Result<Mat2> {
    match conv {
        JumpConvention::CramerSolve => {
            let (minus, plus) = blocks(t);
            solve_block(&plus, &minus, "rho34")
        }
        JumpConvention::PaperLiteral => {
            let d = rho.r12;
            if d.abs() < SINGULAR {
                return Err(Error::SingularJump {
                    which: "rho12",
                    value: d,
                });
            }
            Ok([[rho.r23 / d, rho.r24 / d], [-rho.r13 / d, -rho.r14 / d]])
        }
    }
}

fn backward_matrix(t: &TransmissionMatrix, rho: &RhoSet, conv: JumpConvention) -> Result<Mat2> {
    match conv {
        JumpConvention::CramerSolve => {
            let (minus, plus) = blocks(t);
            solve_block(&minus, &plus, "rho12")
        }
        JumpConvention::PaperLiteral => {
            let d = rho.r34;
            if d.abs() < SINGULAR {
                return Err(Error::SingularJump {
                    which: "rho34",
                    value: d,
                });
            }
            Ok([[-rho.r14 / d, -rho.r24 / d], [rho.r13 / d, rho.r23 / d]])
        }
    }
}

/// Carries a left-piece terminal state across the interface.
pub fn left_jump(
    state: StatePair,
    t: &TransmissionMatrix,
    rho: &RhoSet,
    conv: JumpConvention,
) -> Result<StatePair> {
    let m = forward_matrix(t, rho, conv)?;
    let (y, dy) = apply(&m, (state.y, state.dy));
    Ok(StatePair::new(0.0, y, dy))
}

/// Carries a right-piece terminal state across the interface.
pub fn right_jump(
    state: StatePair,
    t: &TransmissionMatrix,
    rho: &RhoSet,
    conv: JumpConvention,
) -> Result<StatePair> {
    let m = backward_matrix(t, rho, conv)?;
    let (y, dy) = apply(&m, (state.y, state.dy));
    Ok(StatePair::new(0.0, y, dy))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FundamentalKind {
    Phi,
    Chi,
}

/// Both pieces of `φ` or `χ` at one `λ`. Paths keep their integration order:
/// `φ` pieces ascend, `χ` pieces descend.
#[derive(Clone, Debug)]
pub struct FundamentalPair {
    pub left: SolutionPath,
    pub right: SolutionPath,
    pub lambda: f64,
    pub kind: FundamentalKind,
    pub convention: JumpConvention,
}

impl FundamentalPair {
    pub fn piece(&self, side: Side) -> &SolutionPath {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// `(y, y')` at `0-` and `0+`.
    pub fn interface_values(&self) -> (StatePair, StatePair) {
        let at0 = |p: &SolutionPath| {
            if p.first().x == 0.0 {
                p.first()
            } else {
                p.last()
            }
        };
        (at0(&self.left), at0(&self.right))
    }

    /// `(Γ₁, Γ₂)` evaluated on the interface values.
    pub fn transmission_residuals(&self, t: &TransmissionMatrix) -> [f64; 2] {
        let (m, p) = self.interface_values();
        t.residuals((m.y, m.dy), (p.y, p.dy))
    }

    /// Euclidean norm of `(y(0-), y'(0-), y(0+), y'(0+))`.
    pub fn interface_norm(&self) -> f64 {
        let (m, p) = self.interface_values();
        (m.y * m.y + m.dy * m.dy + p.y * p.y + p.dy * p.dy).sqrt()
    }
}

pub fn phi_initial(angles: &BoundaryAngles) -> StatePair {
    StatePair::new(-PI, angles.alpha.sin(), -angles.alpha.cos())
}

pub fn chi_initial(angles: &BoundaryAngles) -> StatePair {
    StatePair::new(PI, -angles.beta.sin(), angles.beta.cos())
}

pub fn build_phi(
    problem: &ValidatedProblem,
    lambda: f64,
    conv: JumpConvention,
    cfg: &IntegratorConfig,
) -> Result<FundamentalPair> {
    let jump = JumpMap::for_problem(problem, conv)?;
    let pot = problem.potential();
    let left = integrate_ivp(
        pot.piece(Side::Left),
        lambda,
        -PI,
        0.0,
        phi_initial(&problem.angles()),
        cfg,
    )?;
    let start = jump.forward(left.last());
    let right = integrate_ivp(pot.piece(Side::Right), lambda, 0.0, PI, start, cfg)?;
    Ok(FundamentalPair {
        left,
        right,
        lambda,
        kind: FundamentalKind::Phi,
        convention: conv,
    })
}

pub fn build_chi(
    problem: &ValidatedProblem,
    lambda: f64,
    conv: JumpConvention,
    cfg: &IntegratorConfig,
) -> Result<FundamentalPair> {
    let jump = JumpMap::for_problem(problem, conv)?;
    let pot = problem.potential();
    let right = integrate_ivp(
        pot.piece(Side::Right),
        lambda,
        PI,
        0.0,
        chi_initial(&problem.angles()),
        cfg,
    )?;
    let start = jump.backward(right.last());
    let left = integrate_ivp(pot.piece(Side::Left), lambda, 0.0, -PI, start, cfg)?;
    Ok(FundamentalPair {
        left,
        right,
        lambda,
        kind: FundamentalKind::Chi,
        convention: conv,
    })
}

/// Which piece of which fundamental solution an integral equation targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Piece {
    /// `φ₁` on `[-π, 0]`
    Phi1,
    /// `φ₂` on `[0, π]`
    Phi2,
    /// `χ₁` on `[-π, 0]`
    Chi1,
    /// `χ₂` on `[0, π]`
    Chi2,
}

impl Piece {
    pub fn side(self) -> Side {
        match self {
            Piece::Phi1 | Piece::Chi1 => Side::Left,
            Piece::Phi2 | Piece::Chi2 => Side::Right,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PicardConfig {
    pub max_iterations: usize,
    /// Quadrature nodes per piece.
    pub mesh_points: usize,
    /// Stop once successive iterates differ by less than this (sup norm).
    pub tolerance: f64,
    /// Largest final change still accepted when the cap is reached.
    pub accept: f64,
}

impl Default for PicardConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            mesh_points: 1025,
            tolerance: 1e-10,
            accept: 1e-6,
        }
    }
}

/// Solves the Volterra equation for one fundamental piece by successive
/// approximation.
///
/// With `s = √λ` and launch point `x₀` carrying data `(y₀, y₀')`,
///
/// ```text
/// y(x)  = y₀ cos s(x−x₀) + y₀' sin s(x−x₀)/s + ∫_{x₀}^{x} sin s(x−z)/s · q(z) y(z) dz
/// y'(x) = −s y₀ sin s(x−x₀) + y₀' cos s(x−x₀) + ∫_{x₀}^{x} cos s(x−z) · q(z) y(z) dz
/// ```
///
/// `φ₁` launches at `−π` from its boundary data, `χ₂` at `π`. `φ₂` and `χ₁`
/// launch at `0` from the jump of the Picard solution of `φ₁` (resp. `χ₂`), so
/// the whole chain stays independent of the shooting integrator. The
/// derivative equation supplies `y'` on the returned path.
pub fn picard_solve(
    which: Piece,
    problem: &ValidatedProblem,
    lambda: f64,
    conv: JumpConvention,
    cfg: &PicardConfig,
) -> Result<SolutionPath> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidInput(format!(
            "integral equations need lambda > 0, got {lambda}"
        )));
    }
    if cfg.max_iterations < 1 || cfg.mesh_points < 3 {
        return Err(Error::InvalidInput(
            "picard needs at least one iteration and three nodes".into(),
        ));
    }
    let angles = problem.angles();
    let (from, to, init) = match which {
        Piece::Phi1 => (-PI, 0.0, phi_initial(&angles)),
        Piece::Chi2 => (PI, 0.0, chi_initial(&angles)),
        Piece::Phi2 => {
            let left = picard_solve(Piece::Phi1, problem, lambda, conv, cfg)?;
            let jump = JumpMap::for_problem(problem, conv)?;
            (0.0, PI, jump.forward(left.last()))
        }
        Piece::Chi1 => {
            let right = picard_solve(Piece::Chi2, problem, lambda, conv, cfg)?;
            let jump = JumpMap::for_problem(problem, conv)?;
            (0.0, -PI, jump.backward(right.last()))
        }
    };
    let q = problem.potential().piece(which.side());
    volterra(lambda, from, to, init, |x| q.eval(x), which.side(), cfg)
}

fn volterra(
    lambda: f64,
    from: f64,
    to: f64,
    init: StatePair,
    q: impl Fn(f64) -> f64,
    side: Side,
    cfg: &PicardConfig,
) -> Result<SolutionPath> {
    let s = lambda.sqrt();
    let xs = uniform_mesh(from, to, cfg.mesh_points);
    let n = xs.len();
    let h = (to - from) / (n - 1) as f64;
    let qs: Vec<f64> = xs.iter().map(|&x| q(x)).collect();
    let (sin_x, cos_x): (Vec<f64>, Vec<f64>) = xs.iter().map(|&x| (s * x).sin_cos()).unzip();

    let free: Vec<(f64, f64)> = xs
        .iter()
        .map(|&x| {
            let (sn, cs) = (s * (x - from)).sin_cos();
            (
                init.y * cs + init.dy * sn / s,
                -init.y * s * sn + init.dy * cs,
            )
        })
        .collect();

    // ∫ sin s(x−z) g(z) dz = sin sx ∫ cos sz g − cos sx ∫ sin sz g
    // ∫ cos s(x−z) g(z) dz = cos sx ∫ cos sz g + sin sx ∫ sin sz g
    let integrals = |y: &[f64]| {
        let gc: Vec<f64> = (0..n).map(|i| cos_x[i] * qs[i] * y[i]).collect();
        let gs: Vec<f64> = (0..n).map(|i| sin_x[i] * qs[i] * y[i]).collect();
        (cumulative_simpson(h, &gc), cumulative_simpson(h, &gs))
    };

    let mut y: Vec<f64> = free.iter().map(|f| f.0).collect();
    let mut change = f64::INFINITY;
    let mut iterations = 0;
    while iterations < cfg.max_iterations {
        iterations += 1;
        let (ic, is) = integrals(&y);
        let next: Vec<f64> = (0..n)
            .map(|i| free[i].0 + (sin_x[i] * ic[i] - cos_x[i] * is[i]) / s)
            .collect();
        change = next
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        y = next;
        if change < cfg.tolerance {
            break;
        }
    }
    if change >= cfg.tolerance && change > cfg.accept {
        return Err(Error::NoConvergence { iterations, change });
    }

    let (ic, is) = integrals(&y);
    let mut states = Vec::with_capacity(n);
    let mut curvature = Vec::with_capacity(n);
    for i in 0..n {
        let dy = free[i].1 + cos_x[i] * ic[i] + sin_x[i] * is[i];
        states.push(StatePair::new(xs[i], y[i], dy));
        curvature.push((qs[i] - lambda) * y[i]);
    }
    Ok(SolutionPath::from_parts(side, lambda, states, curvature))
}

fn check_case(case: CaseTag, params: &AsymptoticParams) -> Result<()> {
    let expected = classify_case(
        &BoundaryAngles::new(params.alpha, params.beta),
        CASE_TOLERANCE,
    );
    if expected.case != case.case {
        return Err(Error::CaseMismatch {
            supplied: case.case,
            expected: expected.case,
        });
    }
    Ok(())
}

/// Leading term of `dᵏ/dxᵏ` of a fundamental piece as `|λ| → ∞`, for real
/// `s = √λ`. The remainder is not included.
///
/// `φ₁` and `φ₂` branch on `sin α`, `χ₁` and `χ₂` on `sin β`, following the
/// printed expressions (including the `+ sin β` sign of the `χ₂` term). `k`
/// differentiates the `x`-dependent factor only.
pub fn asymptotic_fundamental(
    which: Piece,
    case: CaseTag,
    s: f64,
    x: f64,
    k: u8,
    params: &AsymptoticParams,
) -> Result<f64> {
    if !(s > 0.0) || k > 1 {
        return Err(Error::InvalidInput(format!(
            "asymptotic terms need s > 0 and k in {{0, 1}} (s = {s}, k = {k})"
        )));
    }
    let (lo, hi) = which.side().domain();
    if !(x >= lo && x <= hi) {
        return Err(Error::InvalidInput(format!(
            "x = {x} is outside [{lo}, {hi}] for {which:?}"
        )));
    }
    check_case(case, params)?;
    let (sa, ca) = params.alpha.sin_cos();
    let (sb, cb) = params.beta.sin_cos();
    let deriv_cos = |arg: f64, inner: f64| {
        if k == 0 {
            arg.cos()
        } else {
            -inner * arg.sin()
        }
    };
    let deriv_sin = |arg: f64, inner: f64| {
        if k == 0 {
            arg.sin()
        } else {
            inner * arg.cos()
        }
    };
    let v = match which {
        Piece::Phi1 if !case.sin_alpha_zero => sa * deriv_cos(s * (x + PI), s),
        Piece::Phi1 => -(ca / s) * deriv_sin(s * (x + PI), s),
        Piece::Phi2 if !case.sin_alpha_zero => {
            params.rho24 / params.rho12 * sa * s * (s * PI).sin() * deriv_cos(s * x, s)
        }
        Piece::Phi2 => -params.rho24 / params.rho12 * ca * (s * PI).cos() * deriv_cos(s * x, s),
        Piece::Chi2 if !case.sin_beta_zero => sb * deriv_cos(s * (PI - x), -s),
        Piece::Chi2 => -(cb / s) * deriv_sin(s * (PI - x), -s),
        Piece::Chi1 if !case.sin_beta_zero => {
            -params.rho24 / params.rho34 * sb * s * (s * PI).sin() * deriv_cos(s * x, s)
        }
        Piece::Chi1 => -params.rho24 / params.rho34 * cb * (s * PI).cos() * deriv_cos(s * x, s),
    };
    Ok(v)
}

/// Convenience: [`Case`] of a problem's angles as a full tag.
pub fn case_tag(case: Case, params: &AsymptoticParams) -> CaseTag {
    let tag = classify_case(
        &BoundaryAngles::new(params.alpha, params.beta),
        CASE_TOLERANCE,
    );
    CaseTag { case, ..tag }
}
