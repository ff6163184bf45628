//! The characteristic function `w(λ)`, whose real zeros are the eigenvalues.
//!
//! `w₁ = W[φ₁, χ₁](0-)` and `w₂ = W[φ₂, χ₂](0+)` are the one-sided
//! Wronskians. Their ratio is the determinant of the jump map, so
//! `ρ₁₂ w₁ = ρ₃₄ w₂` when the transmission conditions are solved exactly and
//! `ρ₃₄ w₁ = ρ₁₂ w₂` for the paper-literal map. `w` is defined as `ρ₁₂ w₂`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fundamental::{
    build_chi, build_phi, phi_initial, FundamentalPair, JumpConvention, JumpMap,
};
use crate::ivp::{shoot, IntegratorConfig, SolutionPath};
use crate::potential::Side;
use crate::problem::{
    classify_case, AsymptoticParams, BoundaryAngles, Case, CaseTag, ValidatedProblem,
    CASE_TOLERANCE,
};

/// `W[p, q](x) = p q' − q p'` with both paths interpolated at `x`.
pub fn wronskian_at(p: &SolutionPath, q: &SolutionPath, x: f64) -> Result<f64> {
    if p.side() != q.side() {
        return Err(Error::SideMismatch);
    }
    if p.lambda() != q.lambda() {
        return Err(Error::InvalidInput(format!(
            "paths at different lambda ({} and {})",
            p.lambda(),
            q.lambda()
        )));
    }
    let outside = || Error::InvalidInput(format!("x = {x} outside the common span"));
    let a = p.state_at(x).ok_or_else(outside)?;
    let b = q.state_at(x).ok_or_else(outside)?;
    Ok(a.y * b.dy - b.y * a.dy)
}

/// `(x, W[p, q](x))` at every shared mesh node, ascending in `x`.
pub fn wronskian_profile(p: &SolutionPath, q: &SolutionPath) -> Result<Vec<(f64, f64)>> {
    if p.side() != q.side() {
        return Err(Error::SideMismatch);
    }
    let (a, b) = (p.ascending(), q.ascending());
    if a.len() != b.len() || a.iter().zip(&b).any(|(u, v)| u.x != v.x) {
        return Err(Error::MeshMismatch);
    }
    Ok(a.iter()
        .zip(&b)
        .map(|(u, v)| (u.x, u.y * v.dy - v.y * u.dy))
        .collect())
}

/// Largest deviation of a Wronskian profile from its mean.
pub fn wronskian_variation(profile: &[(f64, f64)]) -> f64 {
    if profile.is_empty() {
        return 0.0;
    }
    let mean = profile.iter().map(|p| p.1).sum::<f64>() / profile.len() as f64;
    profile
        .iter()
        .map(|p| (p.1 - mean).abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicSample {
    pub lambda: f64,
    /// `√λ` for `λ ≥ 0`.
    pub s: Option<f64>,
    pub w1: f64,
    pub w2: f64,
    pub w: f64,
    pub w_boundary_form: f64,
    pub consistency_residual: f64,
    pub convention: JumpConvention,
}

impl CharacteristicSample {
    /// Ratio `w₂ / w₁`.
    pub fn ratio(&self) -> f64 {
        self.w2 / self.w1
    }
}

/// Residual of the Wronskian identity implied by the jump map.
pub fn consistency_residual(
    problem: &ValidatedProblem,
    conv: JumpConvention,
    w1: f64,
    w2: f64,
) -> f64 {
    let rho = problem.rho();
    match conv {
        JumpConvention::CramerSolve => (rho.r12 * w1 - rho.r34 * w2).abs(),
        JumpConvention::PaperLiteral => (rho.r34 * w1 - rho.r12 * w2).abs(),
    }
}

fn interface_state(pair: &FundamentalPair, side: Side) -> crate::ivp::StatePair {
    let path = pair.piece(side);
    if path.first().x == 0.0 {
        path.first()
    } else {
        path.last()
    }
}

/// Samples `w` from already built `φ` and `χ`.
pub fn sample_from(
    problem: &ValidatedProblem,
    phi: &FundamentalPair,
    chi: &FundamentalPair,
) -> CharacteristicSample {
    let wr = |side| {
        let a = interface_state(phi, side);
        let b = interface_state(chi, side);
        a.y * b.dy - b.y * a.dy
    };
    let w1 = wr(Side::Left);
    let w2 = wr(Side::Right);
    let end = phi.right.last();
    let (sb, cb) = problem.angles().beta.sin_cos();
    let lambda = phi.lambda;
    CharacteristicSample {
        lambda,
        s: (lambda >= 0.0).then(|| lambda.sqrt()),
        w1,
        w2,
        w: problem.rho().r12 * w2,
        w_boundary_form: cb * end.y + sb * end.dy,
        consistency_residual: consistency_residual(problem, phi.convention, w1, w2),
        convention: phi.convention,
    }
}

/// Builds `φ` and `χ` at `λ` and evaluates every form of the characteristic
/// function.
pub fn char_w(
    problem: &ValidatedProblem,
    lambda: f64,
    conv: JumpConvention,
    cfg: &IntegratorConfig,
) -> Result<CharacteristicSample> {
    let phi = build_phi(problem, lambda, conv, cfg)?;
    let chi = build_chi(problem, lambda, conv, cfg)?;
    Ok(sample_from(problem, &phi, &chi))
}

/// `w(λ) = ρ₁₂ (cos β φ₂(π) + sin β φ₂'(π))` from a single shot of `φ`; the
/// cheap form used for root finding.
pub fn char_value(
    problem: &ValidatedProblem,
    lambda: f64,
    conv: JumpConvention,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let jump = JumpMap::for_problem(problem, conv)?;
    let pot = problem.potential();
    let mid = shoot(
        pot.piece(Side::Left),
        lambda,
        -PI,
        0.0,
        phi_initial(&problem.angles()),
        cfg,
    )?;
    let end = shoot(
        pot.piece(Side::Right),
        lambda,
        0.0,
        PI,
        jump.forward(mid),
        cfg,
    )?;
    let (sb, cb) = problem.angles().beta.sin_cos();
    Ok(problem.rho().r12 * (cb * end.y + sb * end.dy))
}

/// `w` sampled on a strictly increasing `λ` grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicCurve {
    pub grid: Vec<f64>,
    pub samples: Vec<CharacteristicSample>,
}

impl CharacteristicCurve {
    pub fn sample(
        problem: &ValidatedProblem,
        grid: Vec<f64>,
        conv: JumpConvention,
        cfg: &IntegratorConfig,
    ) -> Result<Self> {
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "lambda grid must be strictly increasing".into(),
            ));
        }
        let samples = grid
            .par_iter()
            .map(|&l| char_w(problem, l, conv, cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { grid, samples })
    }

    pub fn uniform(
        problem: &ValidatedProblem,
        lambda_min: f64,
        lambda_max: f64,
        points: usize,
        conv: JumpConvention,
        cfg: &IntegratorConfig,
    ) -> Result<Self> {
        if !(lambda_min < lambda_max) || points < 2 {
            return Err(Error::InvalidInput(format!(
                "need lambda_min < lambda_max and at least two points \
                 (got [{lambda_min}, {lambda_max}], {points})"
            )));
        }
        Self::sample(problem, linspace(lambda_min, lambda_max, points), conv, cfg)
    }
}

pub(crate) fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i == n - 1 {
                b
            } else {
                a + (b - a) * (i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

/// Leading term of `w(s²)` for large real `s`.
pub fn char_w_asymptotic(case: CaseTag, s: f64, params: &AsymptoticParams) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::InvalidInput(format!("s must be positive, got {s}")));
    }
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
    let r = params.rho24 / params.rho12;
    let (sa, ca) = params.alpha.sin_cos();
    let (sb, cb) = params.beta.sin_cos();
    let (sn, cs) = (s * PI).sin_cos();
    Ok(match case.case {
        Case::I => -r * sa * sb * s * s * sn * sn,
        Case::II => r * ca * sb * s * cs * sn,
        Case::III => r * sa * cb * s * sn * cs,
        Case::IV => -r * cb * ca * cs * cs,
    })
}
