//! Spectral solver for `−y'' + q(x) y = λ y` on `[−π, 0) ∪ (0, π]` with
//! separated boundary conditions at `±π` and two linear transmission
//! conditions linking `(y, y')` on both sides of `x = 0`.
//!
//! The pipeline is: validate a [`ProblemSpec`], build the fundamental
//! solutions `φ` and `χ` ([`build_phi`], [`build_chi`]), evaluate the
//! characteristic function ([`char_w`]) and locate its zeros
//! ([`find_eigenvalues`]).
//!
//! ```
//! use transmission_sl::*;
//!
//! let problem = ProblemSpec {
//!     angles: BoundaryAngles::new(0.0, 0.0),
//!     transmission: TransmissionMatrix::continuity(),
//!     potential: PotentialSpec::zero(),
//! }
//! .validate()?;
//! let pairs = find_eigenvalues(&problem, 3, JumpConvention::CramerSolve, &SpectrumConfig::default())?;
//! assert!((pairs[2].s - 1.5).abs() < 1e-8);
//! # Ok::<(), transmission_sl::Error>(())
//! ```

pub mod characteristic;
pub mod error;
pub mod fundamental;
pub mod ivp;
pub mod potential;
pub mod problem;
pub mod quadrature;
pub mod roots;
pub mod spectrum;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/problem.md")]
    pub mod problem {}
    #[doc = include_str!("../../../book/src/fundamental.md")]
    pub mod fundamental {}
    #[doc = include_str!("../../../book/src/characteristic.md")]
    pub mod characteristic {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    pub mod spectrum {}
    #[doc = include_str!("../../../book/src/asymptotics.md")]
    pub mod asymptotics {}
}

pub use characteristic::{
    char_value, char_w, char_w_asymptotic, wronskian_at, wronskian_profile, wronskian_variation,
    CharacteristicCurve, CharacteristicSample,
};
pub use error::{Error, Result};
pub use fundamental::{
    asymptotic_fundamental, build_chi, build_phi, chi_initial, left_jump, phi_initial,
    picard_solve, right_jump, FundamentalKind, FundamentalPair, JumpConvention, JumpMap,
    PicardConfig, Piece,
};
pub use ivp::{
    constant_q_closed_form, integrate_ivp, shoot, IntegratorConfig, Method, SolutionPath, StatePair,
};
pub use potential::{Interpolation, Potential, PotentialForm, PotentialPiece, PotentialSpec, Side};
pub use problem::{
    build_rho, classify_case, validate_problem, AsymptoticParams, BoundaryAngles, Case, CaseTag,
    ColumnConvention, ProblemError, ProblemSpec, RhoSet, TransmissionMatrix, ValidatedProblem,
    CASE_TOLERANCE,
};
pub use spectrum::{
    assemble_eigenfunction, asymptotic_eigenfunction, asymptotic_s, convergence_fit,
    convergence_fit_with, eigenvalues_in_range, find_eigenvalues, fit_power_law, gram_matrix,
    match_targets, max_off_diagonal, printed_eigenfunction_term, refine_root, scan_brackets,
    signed_s, weyl_deviation, AsymptoticFit, Bracket, Eigenfunction, Eigenpair, FitPoint,
    RefinedRoot, Residuals, RootKind, SpectrumConfig, SpectrumReport, TargetSequence, EXACT_FLOOR,
};
