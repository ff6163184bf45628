//! Eigenvalues as real zeros of `w(λ)`, normalised eigenfunctions, weighted
//! orthogonality and comparison with the large-`n` asymptotics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::characteristic::{char_value, linspace};
use crate::error::{Error, Result};
use crate::fundamental::{build_phi, JumpConvention};
use crate::ivp::{IntegratorConfig, SolutionPath, StatePair};
use crate::problem::{
    classify_case, AsymptoticParams, BoundaryAngles, Case, CaseTag, ValidatedProblem,
    CASE_TOLERANCE,
};
use crate::quadrature::simpson;
use crate::roots::{brent, golden_min};

/// Where `w` was seen to vanish on a grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Bracket {
    /// `w(lo)` and `w(hi)` differ in sign, or one of them is exactly zero.
    SignChange {
        lo: f64,
        hi: f64,
        w_lo: f64,
        w_hi: f64,
    },
    /// `|w|` dips at `mid` without changing sign.
    Tangency {
        lo: f64,
        mid: f64,
        hi: f64,
        w_lo: f64,
        w_mid: f64,
        w_hi: f64,
    },
}

impl Bracket {
    pub fn span(&self) -> (f64, f64) {
        match *self {
            Bracket::SignChange { lo, hi, .. } | Bracket::Tangency { lo, hi, .. } => (lo, hi),
        }
    }
}

/// Local minima of `|w|` at most this fraction of the larger neighbour are
/// reported as tangency candidates.
const DIP_RATIO: f64 = 0.25;

/// Brackets read off samples `w[i] = w(grid[i])`.
pub fn brackets_from_samples(grid: &[f64], w: &[f64]) -> Vec<Bracket> {
    let n = grid.len().min(w.len());
    let mut out = Vec::new();
    for i in 0..n {
        if w[i] == 0.0 {
            out.push(Bracket::SignChange {
                lo: grid[i],
                hi: grid[i],
                w_lo: 0.0,
                w_hi: 0.0,
            });
            continue;
        }
        if i + 1 < n && w[i + 1] != 0.0 && w[i].signum() != w[i + 1].signum() {
            out.push(Bracket::SignChange {
                lo: grid[i],
                hi: grid[i + 1],
                w_lo: w[i],
                w_hi: w[i + 1],
            });
        }
        if i > 0 && i + 1 < n {
            let (a, b, c) = (w[i - 1], w[i], w[i + 1]);
            let same = a.signum() == b.signum() && b.signum() == c.signum() && a != 0.0 && c != 0.0;
            if same
                && b.abs() < a.abs()
                && b.abs() < c.abs()
                && b.abs() <= DIP_RATIO * a.abs().max(c.abs())
            {
                out.push(Bracket::Tangency {
                    lo: grid[i - 1],
                    mid: grid[i],
                    hi: grid[i + 1],
                    w_lo: a,
                    w_mid: b,
                    w_hi: c,
                });
            }
        }
    }
    out
}

fn sample_grid(
    problem: &ValidatedProblem,
    grid: &[f64],
    conv: JumpConvention,
    cfg: &IntegratorConfig,
) -> Result<Vec<f64>> {
    grid.par_iter()
        .map(|&l| char_value(problem, l, conv, cfg))
        .collect()
}

/// Sign changes and tangency candidates of `w` on a uniform grid.
pub fn scan_brackets(
    problem: &ValidatedProblem,
    lambda_min: f64,
    lambda_max: f64,
    grid_points: usize,
    conv: JumpConvention,
    cfg: &IntegratorConfig,
) -> Result<Vec<Bracket>> {
    if !(lambda_min < lambda_max) || grid_points < 16 {
        return Err(Error::InvalidInput(format!(
            "scan needs lambda_min < lambda_max and at least 16 points \
             (got [{lambda_min}, {lambda_max}], {grid_points})"
        )));
    }
    let grid = linspace(lambda_min, lambda_max, grid_points);
    let w = sample_grid(problem, &grid, conv, cfg)?;
    Ok(brackets_from_samples(&grid, &w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootKind {
    Simple,
    /// Accepted from a tangency: `|w|` reached the noise floor without a sign
    /// change, so the zero may be double.
    DoubleCandidate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinedRoot {
    pub lambda: f64,
    pub w: f64,
    pub kind: RootKind,
}

fn xtol(tol: f64) -> impl Fn(f64) -> f64 {
    move |b: f64| tol * (b.abs() + tol)
}

/// Refines one bracket. Sign changes go through Brent's method; tangencies
/// through golden-section minimisation of `|w|`, accepted only if the minimum
/// is below `1e3 × integrator tolerance × max(|w(lo)|, |w(hi)|)`.
pub fn refine_root(
    problem: &ValidatedProblem,
    bracket: &Bracket,
    tol: f64,
    conv: JumpConvention,
    cfg: &IntegratorConfig,
) -> Result<RefinedRoot> {
    let f = |l: f64| char_value(problem, l, conv, cfg);
    match *bracket {
        Bracket::SignChange { lo, hi, w_lo, w_hi } => {
            if lo == hi {
                let w = f(lo)?;
                if w != 0.0 {
                    return Err(Error::LostBracket { lo, hi });
                }
                return Ok(RefinedRoot {
                    lambda: lo,
                    w,
                    kind: RootKind::Simple,
                });
            }
            let lambda = brent(f, lo, hi, w_lo, w_hi, xtol(tol))?;
            Ok(RefinedRoot {
                lambda,
                w: f(lambda)?,
                kind: RootKind::Simple,
            })
        }
        Bracket::Tangency {
            lo, hi, w_lo, w_hi, ..
        } => {
            let floor = 1e3 * cfg.tolerance() * w_lo.abs().max(w_hi.abs());
            let (lambda, min_abs) =
                golden_min(|l| f(l).map(f64::abs), lo, hi, xtol(tol)(0.5 * (lo + hi)))?;
            if min_abs > floor {
                return Err(Error::TangencyRejected {
                    lambda,
                    min_abs,
                    floor,
                });
            }
            Ok(RefinedRoot {
                lambda,
                w: f(lambda)?,
                kind: RootKind::DoubleCandidate,
            })
        }
    }
}

const SUBSCAN: usize = 64;

/// Every zero inside a bracket. Tangency triples are first re-sampled, since
/// two close simple zeros look like a dip on a coarse grid; rejected
/// tangencies yield nothing.
pub fn refine_bracket(
    problem: &ValidatedProblem,
    bracket: &Bracket,
    tol: f64,
    conv: JumpConvention,
    cfg: &IntegratorConfig,
) -> Result<Vec<RefinedRoot>> {
    match bracket {
        Bracket::SignChange { .. } => Ok(vec![refine_root(problem, bracket, tol, conv, cfg)?]),
        Bracket::Tangency { lo, hi, .. } => {
            let grid = linspace(*lo, *hi, SUBSCAN);
            let w = sample_grid(problem, &grid, conv, cfg)?;
            let hidden: Vec<Bracket> = brackets_from_samples(&grid, &w)
                .into_iter()
                .filter(|b| matches!(b, Bracket::SignChange { .. }))
                .collect();
            if hidden.is_empty() {
                return match refine_root(problem, bracket, tol, conv, cfg) {
                    Ok(r) => Ok(vec![r]),
                    Err(Error::TangencyRejected { .. }) => Ok(Vec::new()),
                    Err(e) => Err(e),
                };
            }
            hidden
                .iter()
                .map(|b| refine_root(problem, b, tol, conv, cfg))
                .collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumConfig {
    pub integrator: IntegratorConfig,
    /// Relative tolerance of the refined eigenvalues.
    pub refine_tol: f64,
    /// Lower end of the search; `−(10 + sup|q|)` when absent.
    pub lambda_min: Option<f64>,
    /// Upper end beyond which the search is not extended.
    pub lambda_max: Option<f64>,
    /// Grid step in `s = √λ` on the positive axis.
    pub s_step: f64,
    /// Minimum number of grid points on the negative axis.
    pub negative_points: usize,
    /// Grid doublings attempted when the eigenvalue count looks wrong.
    pub max_refinements: usize,
    /// Allowed deviation of the eigenvalue count from `2 √(Λ − q̄)`.
    pub weyl_slack: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            integrator: IntegratorConfig::default(),
            refine_tol: 1e-12,
            lambda_min: None,
            lambda_max: None,
            s_step: 1.0 / 128.0,
            negative_points: 64,
            max_refinements: 3,
            weyl_slack: 2.0,
        }
    }
}

impl SpectrumConfig {
    pub fn lambda_floor(&self, problem: &ValidatedProblem) -> f64 {
        self.lambda_min
            .unwrap_or_else(|| -(10.0 + problem.potential().sup_abs()))
    }
}

/// `√λ`, negated for negative `λ`.
pub fn signed_s(lambda: f64) -> f64 {
    if lambda >= 0.0 {
        lambda.sqrt()
    } else {
        -(-lambda).sqrt()
    }
}

fn search_grid(a: f64, b: f64, density: usize, cfg: &SpectrumConfig) -> Vec<f64> {
    let mut grid = Vec::new();
    if a < 0.0 {
        let top = b.min(0.0);
        let n = (cfg.negative_points.max((8.0 * (top - a)).ceil() as usize) * density).max(2);
        grid.extend(linspace(a, top, n));
    }
    if b > 0.0 {
        let s0 = a.max(0.0).sqrt();
        let s1 = b.sqrt();
        let ds = cfg.s_step / density as f64;
        let n = (((s1 - s0) / ds).ceil() as usize + 1).max(2);
        for s in linspace(s0, s1, n) {
            let l = s * s;
            if grid.last().map_or(true, |&p| l > p) {
                grid.push(l);
            }
        }
    }
    grid
}

fn merge_roots(mut roots: Vec<RefinedRoot>, tol: f64) -> Vec<RefinedRoot> {
    roots.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let mut out: Vec<RefinedRoot> = Vec::with_capacity(roots.len());
    for r in roots {
        if let Some(last) = out.last() {
            if (r.lambda - last.lambda).abs() <= 1e3 * tol * (1.0 + r.lambda.abs()) {
                continue;
            }
        }
        out.push(r);
    }
    out
}

fn roots_on_grid(
    problem: &ValidatedProblem,
    grid: &[f64],
    conv: JumpConvention,
    cfg: &SpectrumConfig,
) -> Result<Vec<RefinedRoot>> {
    let w = sample_grid(problem, grid, conv, &cfg.integrator)?;
    let brackets = brackets_from_samples(grid, &w);
    let found = brackets
        .par_iter()
        .map(|b| refine_bracket(problem, b, cfg.refine_tol, conv, &cfg.integrator))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_roots(
        found.into_iter().flatten().collect(),
        cfg.refine_tol,
    ))
}

/// All zeros of `w` in `[a, b]` found on the default search grid.
pub fn eigenvalues_in_range(
    problem: &ValidatedProblem,
    a: f64,
    b: f64,
    conv: JumpConvention,
    cfg: &SpectrumConfig,
) -> Result<Vec<RefinedRoot>> {
    if !(a < b) {
        return Err(Error::InvalidInput(format!("empty range [{a}, {b}]")));
    }
    roots_on_grid(problem, &search_grid(a, b, 1, cfg), conv, cfg)
}

/// Counting check: the number of eigenvalues up to `λ_N` should follow
/// `N ≈ 2 √(λ_N − q̄)`.
pub fn weyl_deviation(problem: &ValidatedProblem, n: usize, lambda_n: f64) -> f64 {
    let mean = problem.potential().mean();
    n as f64 - 2.0 * (lambda_n - mean).max(0.0).sqrt()
}

fn locate(
    problem: &ValidatedProblem,
    count: usize,
    conv: JumpConvention,
    cfg: &SpectrumConfig,
) -> Result<Vec<RefinedRoot>> {
    let lo = cfg.lambda_floor(problem);
    let cap = cfg.lambda_max.unwrap_or(f64::INFINITY);
    let pot = problem.potential();
    let first_top = {
        let s = 0.5 * (count as f64 + 3.0);
        pot.mean() + pot.sup_abs() + s * s
    };
    let mut last_failure = None;
    for level in 0..=cfg.max_refinements {
        let density = 1usize << level;
        let mut top = first_top.min(cap).max(lo + 1.0);
        let mut roots = roots_on_grid(problem, &search_grid(lo, top, density, cfg), conv, cfg)?;
        while roots.len() < count && top < cap {
            let next = {
                let s = signed_s(top).max(1.0);
                (1.5 * s + 1.0).powi(2).min(cap)
            };
            let more = roots_on_grid(problem, &search_grid(top, next, density, cfg), conv, cfg)?;
            roots.extend(more);
            roots = merge_roots(roots, cfg.refine_tol);
            top = next;
        }
        if roots.len() < count {
            return Err(Error::IncompleteSpectrum {
                found: roots.len(),
                expected: count as f64,
                lambda_max: top,
            });
        }
        roots.truncate(count);
        let lambda_n = roots[count - 1].lambda;
        let dev = weyl_deviation(problem, count, lambda_n);
        if dev.abs() <= cfg.weyl_slack {
            return Ok(roots);
        }
        last_failure = Some(Error::IncompleteSpectrum {
            found: count,
            expected: 2.0 * (lambda_n - pot.mean()).max(0.0).sqrt(),
            lambda_max: lambda_n,
        });
    }
    Err(last_failure.expect("at least one pass"))
}

/// Boundary, transmission and characteristic residuals of an eigenfunction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `cos α u(−π) + sin α u'(−π)`
    pub boundary_left: f64,
    /// `cos β u(π) + sin β u'(π)`
    pub boundary_right: f64,
    pub transmission_1: f64,
    pub transmission_2: f64,
    /// `w(λ)` at the refined eigenvalue.
    pub char_value: f64,
    /// Norm of `(u(0-), u'(0-), u(0+), u'(0+))`.
    pub interface_norm: f64,
}

impl Residuals {
    /// Largest of `|Γ₁|`, `|Γ₂|`, `|Γ₄|` relative to `1 + ‖interface values‖`.
    pub fn relative_max(&self) -> f64 {
        self.transmission_1
            .abs()
            .max(self.transmission_2.abs())
            .max(self.boundary_right.abs())
            / (1.0 + self.interface_norm)
    }
}

/// `φ` at an eigenvalue, normalised in the weighted norm.
#[derive(Clone, Debug)]
pub struct Eigenfunction {
    pub lambda: f64,
    pub left: SolutionPath,
    pub right: SolutionPath,
    /// Weighted norm after normalisation (1 up to rounding).
    pub norm_sq: f64,
    /// Factor applied to `φ`.
    pub scale: f64,
    pub residuals: Residuals,
}

impl Eigenfunction {
    /// `(x, u(x))` ascending, with both one-sided values at `x = 0`.
    pub fn samples(&self) -> Vec<(f64, f64)> {
        self.left
            .states()
            .iter()
            .chain(self.right.states())
            .map(|s| (s.x, s.y))
            .collect()
    }

    /// `(u, u')` at `x`; `x = 0` resolves to the side given.
    pub fn state_at(&self, x: f64, side: crate::potential::Side) -> Option<StatePair> {
        match side {
            crate::potential::Side::Left => self.left.state_at(x),
            crate::potential::Side::Right => self.right.state_at(x),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Eigenpair {
    /// 1-based position in ascending order.
    pub index: usize,
    pub lambda: f64,
    /// `√λ`, negative for `λ < 0`.
    pub s: f64,
    pub kind: RootKind,
    pub eigenfunction: Eigenfunction,
}

fn weighted_integral(rho12: f64, rho34: f64, left: &[f64], hl: f64, right: &[f64], hr: f64) -> f64 {
    rho12 * simpson(hl, left) + rho34 * simpson(hr, right)
}

fn spacing(path: &SolutionPath) -> f64 {
    let st = path.ascending();
    (st[st.len() - 1].x - st[0].x) / (st.len() - 1) as f64
}

/// Builds `φ` at `λ` and normalises it so that
/// `ρ₁₂ ∫_{−π}^{0} u² + ρ₃₄ ∫_{0}^{π} u² = 1`, with the first nonzero of
/// `(u(−π), u'(−π))` positive.
///
/// Fails with [`Error::NotAnEigenvalue`] when the right boundary residual
/// exceeds `1e-6 (1 + |u(π)| + |u'(π)| + sup|u|)`. The `sup|u|` term keeps
/// states bound to the left boundary, whose tail at `π` carries amplified
/// integration error, from being rejected.
pub fn assemble_eigenfunction(
    problem: &ValidatedProblem,
    lambda: f64,
    conv: JumpConvention,
    cfg: &IntegratorConfig,
) -> Result<Eigenfunction> {
    let phi = build_phi(problem, lambda, conv, cfg)?;
    let rho = problem.rho();
    let sq = |p: &SolutionPath| p.states().iter().map(|s| s.y * s.y).collect::<Vec<_>>();
    let raw = weighted_integral(
        rho.r12,
        rho.r34,
        &sq(&phi.left),
        spacing(&phi.left),
        &sq(&phi.right),
        spacing(&phi.right),
    );
    if !(raw > 0.0) || !raw.is_finite() {
        return Err(Error::NotAnEigenvalue {
            lambda,
            residual: f64::NAN,
        });
    }
    let start = phi.left.first();
    let lead = if start.y.abs() > CASE_TOLERANCE {
        start.y
    } else {
        start.dy
    };
    let scale = lead.signum() / raw.sqrt();

    let angles = problem.angles();
    let (sa, ca) = angles.alpha.sin_cos();
    let (sb, cb) = angles.beta.sin_cos();
    let end = phi.right.last();
    let [g1, g2] = phi.transmission_residuals(problem.transmission());
    let w = char_value(problem, lambda, conv, cfg)?;
    let residuals = Residuals {
        boundary_left: scale * (ca * start.y + sa * start.dy),
        boundary_right: scale * (cb * end.y + sb * end.dy),
        transmission_1: scale * g1,
        transmission_2: scale * g2,
        char_value: w,
        interface_norm: scale.abs() * phi.interface_norm(),
    };
    let (uy, udy) = (scale * end.y, scale * end.dy);
    let sup = scale.abs()
        * phi
            .left
            .states()
            .iter()
            .chain(phi.right.states())
            .map(|s| s.y.abs())
            .fold(0.0, f64::max);
    if residuals.boundary_right.abs() > 1e-6 * (1.0 + uy.abs() + udy.abs() + sup) {
        return Err(Error::NotAnEigenvalue {
            lambda,
            residual: residuals.boundary_right,
        });
    }
    let left = phi.left.scaled(scale);
    let right = phi.right.scaled(scale);
    let norm_sq = weighted_integral(
        rho.r12,
        rho.r34,
        &sq(&left),
        spacing(&left),
        &sq(&right),
        spacing(&right),
    );
    Ok(Eigenfunction {
        lambda,
        left,
        right,
        norm_sq,
        scale,
        residuals,
    })
}

/// The `count` smallest eigenvalues at or above the search floor, with
/// normalised eigenfunctions.
pub fn find_eigenvalues(
    problem: &ValidatedProblem,
    count: usize,
    conv: JumpConvention,
    cfg: &SpectrumConfig,
) -> Result<Vec<Eigenpair>> {
    if count == 0 {
        return Err(Error::InvalidInput("count must be at least 1".into()));
    }
    cfg.integrator.validate()?;
    let roots = locate(problem, count, conv, cfg)?;
    roots
        .par_iter()
        .enumerate()
        .map(|(i, r)| {
            Ok(Eigenpair {
                index: i + 1,
                lambda: r.lambda,
                s: signed_s(r.lambda),
                kind: r.kind,
                eigenfunction: assemble_eigenfunction(problem, r.lambda, conv, &cfg.integrator)?,
            })
        })
        .collect()
}

/// `G[i][j] = ρ₁₂ ∫_{−π}^{0} u_i u_j + ρ₃₄ ∫_{0}^{π} u_i u_j`.
pub fn gram_matrix(pairs: &[Eigenpair], rho12: f64, rho34: f64) -> Result<Vec<Vec<f64>>> {
    let Some(first) = pairs.first() else {
        return Err(Error::InvalidInput(
            "gram matrix of no eigenfunctions".into(),
        ));
    };
    let mesh = |p: &SolutionPath| p.mesh().collect::<Vec<_>>();
    let (ml, mr) = (
        mesh(&first.eigenfunction.left),
        mesh(&first.eigenfunction.right),
    );
    for p in pairs {
        if mesh(&p.eigenfunction.left) != ml || mesh(&p.eigenfunction.right) != mr {
            return Err(Error::MeshMismatch);
        }
    }
    let hl = spacing(&first.eigenfunction.left);
    let hr = spacing(&first.eigenfunction.right);
    let ys = |p: &SolutionPath| p.states().iter().map(|s| s.y).collect::<Vec<_>>();
    let cols: Vec<(Vec<f64>, Vec<f64>)> = pairs
        .iter()
        .map(|p| (ys(&p.eigenfunction.left), ys(&p.eigenfunction.right)))
        .collect();
    let n = pairs.len();
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let prod =
                |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).collect::<Vec<_>>();
            let v = weighted_integral(
                rho12,
                rho34,
                &prod(&cols[i].0, &cols[j].0),
                hl,
                &prod(&cols[i].1, &cols[j].1),
                hr,
            );
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    Ok(g)
}

/// Largest off-diagonal magnitude of a square matrix.
pub fn max_off_diagonal(g: &[Vec<f64>]) -> f64 {
    let mut m: f64 = 0.0;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j {
                m = m.max(v.abs());
            }
        }
    }
    m
}

/// Leading-order target sequences for `s_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetSequence {
    /// `n − 1/2`
    ShiftedIntegers,
    /// `n / 2`
    HalfIntegers,
    /// `n`
    Integers,
}

impl TargetSequence {
    pub fn for_case(case: Case) -> Self {
        match case {
            Case::I => TargetSequence::ShiftedIntegers,
            _ => TargetSequence::HalfIntegers,
        }
    }

    pub fn target(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            TargetSequence::ShiftedIntegers => n - 0.5,
            TargetSequence::HalfIntegers => 0.5 * n,
            TargetSequence::Integers => n,
        }
    }

    pub fn spacing(self) -> f64 {
        match self {
            TargetSequence::HalfIntegers => 0.5,
            _ => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TargetSequence::ShiftedIntegers => "n-1/2",
            TargetSequence::HalfIntegers => "n/2",
            TargetSequence::Integers => "n",
        }
    }
}

/// Leading term of `s_n`: `n − 1/2` in case I, `n/2` otherwise.
pub fn asymptotic_s(case: CaseTag, n: usize) -> f64 {
    TargetSequence::for_case(case.case).target(n)
}

fn check_case(case: CaseTag, alpha: f64, beta: f64) -> Result<()> {
    let expected = classify_case(&BoundaryAngles::new(alpha, beta), CASE_TOLERANCE);
    if expected.case != case.case {
        return Err(Error::CaseMismatch {
            supplied: case.case,
            expected: expected.case,
        });
    }
    Ok(())
}

fn sigma(case: CaseTag, n: usize) -> f64 {
    asymptotic_s(case, n)
}

/// Leading term of the `n`-th eigenfunction `φ` (unnormalised), chosen by the
/// `(sin α, sin β)` predicates of the fundamental-solution asymptotics with
/// `s` replaced by its leading term `σ_n`: on `[−π, 0]` `sin α cos σ(x+π)` or
/// `−(cos α/σ) sin σ(x+π)`, on `(0, π]` the matching transmitted forms.
pub fn asymptotic_eigenfunction(
    case: CaseTag,
    n: usize,
    x: f64,
    params: &AsymptoticParams,
) -> Result<f64> {
    if n == 0 || !(-PI..=PI).contains(&x) {
        return Err(Error::InvalidInput(format!(
            "need n >= 1 and x in [-pi, pi] (n = {n}, x = {x})"
        )));
    }
    check_case(case, params.alpha, params.beta)?;
    let s = sigma(case, n);
    let (sa, ca) = params.alpha.sin_cos();
    let r = params.rho24 / params.rho12;
    Ok(match (x <= 0.0, case.sin_alpha_zero) {
        (true, false) => sa * (s * (x + PI)).cos(),
        (true, true) => -(ca / s) * (s * (x + PI)).sin(),
        (false, false) => r * sa * s * (s * PI).sin() * (s * x).cos(),
        (false, true) => -r * ca * (s * PI).cos() * (s * x).cos(),
    })
}

/// The expressions exactly as printed under each case label (i)–(iv), over the
/// whole interval. Several of them contradict their own premises; see
/// [`asymptotic_eigenfunction`] for the consistent form.
pub fn printed_eigenfunction_term(
    case: CaseTag,
    n: usize,
    x: f64,
    params: &AsymptoticParams,
) -> Result<f64> {
    if n == 0 || !(-PI..=PI).contains(&x) {
        return Err(Error::InvalidInput(format!(
            "need n >= 1 and x in [-pi, pi] (n = {n}, x = {x})"
        )));
    }
    check_case(case, params.alpha, params.beta)?;
    let nf = n as f64;
    let h = 0.5 * nf;
    let (sa, ca) = params.alpha.sin_cos();
    let r = params.rho24 / params.rho12;
    Ok(match case.case {
        Case::I => sa * ((nf - 0.5) * (x + PI)).cos(),
        Case::II => r * sa * h * (h * PI).sin() * (h * x).cos(),
        Case::III => -(2.0 * ca / nf) * (h * (x + PI)).sin(),
        Case::IV => -r * ca * (h * PI).cos() * (h * x).cos(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub n: usize,
    pub target: f64,
    pub s: f64,
    pub err: f64,
}

/// Errors below this are treated as exact and left out of the log-log fit.
pub const EXACT_FLOOR: f64 = 1e-9;

/// Least-squares fit of `log err ≈ log C − p log n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub target: TargetSequence,
    pub window: (usize, usize),
    /// `p`; infinite when every matched error is below [`EXACT_FLOOR`].
    pub exponent: f64,
    pub constant: f64,
    pub exact_match: bool,
    /// Points that entered the regression.
    pub used: usize,
    /// Matched points with error below [`EXACT_FLOOR`].
    pub exact: usize,
    /// Targets with no computed `s` within a quarter spacing.
    pub unmatched: Vec<usize>,
    pub points: Vec<FitPoint>,
}

/// Plain power-law fit of `(n, err)` pairs; returns `(p, C)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, e)| *n > 0.0 && *e > 0.0 && e.is_finite())
        .map(|(n, e)| (n.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::DegenerateFit(format!("{} usable points", pts.len())));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all n equal".into()));
    }
    let slope = sxy / sxx;
    Ok((-slope, (my - slope * mx).exp()))
}

/// Matches each target `n` in `window` to the nearest computed `s` (within a
/// quarter of the target spacing).
pub fn match_targets(
    s_values: &[f64],
    target: TargetSequence,
    window: (usize, usize),
) -> (Vec<FitPoint>, Vec<usize>) {
    let mut points = Vec::new();
    let mut unmatched = Vec::new();
    for n in window.0..=window.1 {
        let t = target.target(n);
        let best = s_values
            .iter()
            .copied()
            .min_by(|a, b| (a - t).abs().total_cmp(&(b - t).abs()));
        match best {
            Some(s) if (s - t).abs() <= 0.25 * target.spacing() => points.push(FitPoint {
                n,
                target: t,
                s,
                err: (s - t).abs(),
            }),
            _ => unmatched.push(n),
        }
    }
    (points, unmatched)
}

/// Empirical convergence order of computed `s` values towards a target
/// sequence over `window = (n_min, n_max)`.
pub fn convergence_fit_with(
    s_values: &[f64],
    target: TargetSequence,
    window: (usize, usize),
) -> Result<AsymptoticFit> {
    if window.0 == 0 || window.1 < window.0 + 4 {
        return Err(Error::InvalidInput(format!(
            "window {window:?} must start at 1 or later and span at least 5 indices"
        )));
    }
    let (points, unmatched) = match_targets(s_values, target, window);
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.err >= EXACT_FLOOR)
        .map(|p| (p.n as f64, p.err))
        .collect();
    let exact = points.len() - usable.len();
    let base = AsymptoticFit {
        target,
        window,
        exponent: f64::INFINITY,
        constant: 0.0,
        exact_match: false,
        used: usable.len(),
        exact,
        unmatched,
        points,
    };
    if usable.is_empty() && exact >= 5 {
        return Ok(AsymptoticFit {
            exact_match: true,
            ..base
        });
    }
    if usable.len() < 5 {
        return Err(Error::DegenerateFit(format!(
            "{} usable and {} exact points for target {} over {:?}; {} targets unmatched",
            usable.len(),
            exact,
            target.label(),
            window,
            base.unmatched.len()
        )));
    }
    let (p, c) = fit_power_law(&usable)?;
    Ok(AsymptoticFit {
        exponent: p,
        constant: c,
        ..base
    })
}

/// [`convergence_fit_with`] against the case's own target sequence.
pub fn convergence_fit(
    s_values: &[f64],
    case: CaseTag,
    window: (usize, usize),
) -> Result<AsymptoticFit> {
    convergence_fit_with(s_values, TargetSequence::for_case(case.case), window)
}

/// Eigenpairs together with their asymptotic comparison.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub eigenpairs: Vec<Eigenpair>,
    pub case: CaseTag,
    /// `asymptotic_s(case, n)` for each eigenpair's index.
    pub asymptotic_targets: Vec<f64>,
    /// `|s_n − target|` aligned with `eigenpairs`.
    pub errors: Vec<f64>,
    pub fit: Option<AsymptoticFit>,
}

impl SpectrumReport {
    pub fn new(eigenpairs: Vec<Eigenpair>, case: CaseTag, window: Option<(usize, usize)>) -> Self {
        let asymptotic_targets: Vec<f64> = eigenpairs
            .iter()
            .map(|e| asymptotic_s(case, e.index))
            .collect();
        let errors = eigenpairs
            .iter()
            .zip(&asymptotic_targets)
            .map(|(e, t)| (e.s - t).abs())
            .collect();
        let fit = window.and_then(|w| {
            let s: Vec<f64> = eigenpairs.iter().map(|e| e.s).collect();
            convergence_fit(&s, case, w).ok()
        });
        Self {
            eigenpairs,
            case,
            asymptotic_targets,
            errors,
            fit,
        }
    }
}
