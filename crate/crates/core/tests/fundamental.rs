use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use transmission_sl::fundamental::*;
use transmission_sl::ivp::constant_q_closed_form;
use transmission_sl::potential::{PotentialForm, PotentialSpec};
use transmission_sl::problem::{ColumnConvention, ProblemSpec};
use transmission_sl::*;

fn coupling() -> TransmissionMatrix {
    TransmissionMatrix::new([1.0, 1.0, -1.0, 0.0], [0.0, 1.0, 0.0, -1.0])
}

fn problem(alpha: f64, beta: f64, t: TransmissionMatrix, q: PotentialForm) -> ValidatedProblem {
    ProblemSpec {
        angles: BoundaryAngles::new(alpha, beta),
        transmission: t,
        potential: PotentialSpec::uniform(q),
    }
    .validate()
    .unwrap()
}

fn rho(t: &TransmissionMatrix) -> RhoSet {
    transmission_sl::problem::build_rho(t).unwrap()
}

#[test]
fn continuity_jump_is_identity() {
    let t = TransmissionMatrix::continuity();
    let r = rho(&t);
    let v = StatePair::new(0.0, 0.3, -2.0);
    for conv in [JumpConvention::CramerSolve, JumpConvention::PaperLiteral] {
        let out = left_jump(v, &t, &r, conv).unwrap();
        assert_eq!((out.y, out.dy), (0.3, -2.0), "{conv:?}");
        let back = right_jump(v, &t, &r, conv).unwrap();
        assert_eq!((back.y, back.dy), (0.3, -2.0), "{conv:?}");
    }
}

#[test]
fn coupling_cramer_jump() {
    let t = coupling();
    let r = rho(&t);
    let out = left_jump(
        StatePair::new(0.0, 1.0, 1.0),
        &t,
        &r,
        JumpConvention::CramerSolve,
    )
    .unwrap();
    assert_eq!((out.y, out.dy), (2.0, 1.0));
    let back = right_jump(
        StatePair::new(0.0, 2.0, 1.0),
        &t,
        &r,
        JumpConvention::CramerSolve,
    )
    .unwrap();
    assert_eq!((back.y, back.dy), (1.0, 1.0));
}

#[test]
fn coupling_paper_literal_jump_and_residuals() {
    let t = coupling();
    let r = rho(&t);
    // (ρ₂₃ + ρ₂₄)/ρ₁₂ = 0 and −(ρ₁₃ + ρ₁₄)/ρ₁₂ = 1
    let out = left_jump(
        StatePair::new(0.0, 1.0, 1.0),
        &t,
        &r,
        JumpConvention::PaperLiteral,
    )
    .unwrap();
    assert_eq!((out.y, out.dy), (0.0, 1.0));
    let res = t.residuals((1.0, 1.0), (out.y, out.dy));
    assert_eq!(res, [2.0, 0.0]);
}

#[test]
fn singular_jump_reported() {
    // ρ₃₄ = 0: no control over the right-hand values
    let t = TransmissionMatrix::new([1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 2.0, 0.0]);
    let r = rho(&t);
    assert!(matches!(
        left_jump(
            StatePair::new(0.0, 1.0, 1.0),
            &t,
            &r,
            JumpConvention::CramerSolve
        ),
        Err(Error::SingularJump { which: "rho34", .. })
    ));
}

#[test]
fn jump_determinants() {
    let t = TransmissionMatrix::new([2.0, 1.0, -1.0, 0.5], [0.3, 1.5, 0.2, -2.0]);
    let r = rho(&t);
    let cramer = JumpMap::new(&t, &r, JumpConvention::CramerSolve).unwrap();
    assert!((cramer.determinant() - r.r12 / r.r34).abs() < 1e-12);
    let paper = JumpMap::new(&t, &r, JumpConvention::PaperLiteral).unwrap();
    assert!((paper.determinant() - r.r34 / r.r12).abs() < 1e-12);
    let dfirst = t.with_columns(ColumnConvention::DerivativeFirst);
    let m = JumpMap::new(&dfirst, &r, JumpConvention::CramerSolve).unwrap();
    assert!((m.determinant() - r.r12 / r.r34).abs() < 1e-12);
}

fn valid_matrix() -> impl Strategy<Value = TransmissionMatrix> {
    (
        proptest::array::uniform4(-5.0f64..5.0),
        proptest::array::uniform4(-5.0f64..5.0),
        any::<bool>(),
    )
        .prop_filter_map("needs rho12, rho34 away from zero", |(a, b, dfirst)| {
            let cols = if dfirst {
                ColumnConvention::DerivativeFirst
            } else {
                ColumnConvention::ValueFirst
            };
            let t = TransmissionMatrix::new(a, b).with_columns(cols);
            let r = transmission_sl::problem::build_rho(&t).ok()?;
            (r.r12.abs() > 0.1 && r.r34.abs() > 0.1).then_some(t)
        })
}

proptest! {
    #[test]
    fn cramer_jumps_are_mutual_inverses(t in valid_matrix(), y in -10.0f64..10.0, dy in -10.0f64..10.0) {
        let r = rho(&t);
        let v = StatePair::new(0.0, y, dy);
        let c = JumpConvention::CramerSolve;
        let there = left_jump(v, &t, &r, c).unwrap();
        let back = right_jump(there, &t, &r, c).unwrap();
        let scale = 1.0 + y.abs() + dy.abs();
        prop_assert!((back.y - y).abs() < 1e-9 * scale * (1.0 + there.y.abs() + there.dy.abs()));
        prop_assert!((back.dy - dy).abs() < 1e-9 * scale * (1.0 + there.y.abs() + there.dy.abs()));
        let res = t.residuals((y, dy), (there.y, there.dy));
        let norm = (y * y + dy * dy + there.y * there.y + there.dy * there.dy).sqrt();
        prop_assert!(res[0].abs() + res[1].abs() <= 1e-10 * (1.0 + norm) * 20.0);

        let other = right_jump(v, &t, &r, c).unwrap();
        let again = left_jump(other, &t, &r, c).unwrap();
        let scale2 = scale * (1.0 + other.y.abs() + other.dy.abs());
        prop_assert!((again.y - y).abs() < 1e-9 * scale2);
        prop_assert!((again.dy - dy).abs() < 1e-9 * scale2);
    }
}

#[test]
fn phi_dirichlet_closed_form() {
    let p = problem(
        0.0,
        0.0,
        TransmissionMatrix::continuity(),
        PotentialForm::Zero,
    );
    let s = 1.7;
    let phi = build_phi(
        &p,
        s * s,
        JumpConvention::CramerSolve,
        &IntegratorConfig::default(),
    )
    .unwrap();
    assert_eq!(phi.left.first(), StatePair::new(-PI, 0.0, -1.0));
    for st in phi.left.states().iter().chain(phi.right.states()) {
        let exact = -(s * (st.x + PI)).sin() / s;
        assert!((st.y - exact).abs() < 1e-9, "x = {}", st.x);
    }
}

#[test]
fn phi_constant_at_zero_lambda() {
    let p = problem(
        FRAC_PI_2,
        0.3,
        TransmissionMatrix::continuity(),
        PotentialForm::Zero,
    );
    let phi = build_phi(
        &p,
        0.0,
        JumpConvention::CramerSolve,
        &IntegratorConfig::default(),
    )
    .unwrap();
    for st in phi.left.states().iter().chain(phi.right.states()) {
        assert_eq!(st.y, 1.0);
        assert!(st.dy.abs() < 1e-16);
    }
}

#[test]
fn phi_initial_state_exact() {
    let p = problem(
        0.77,
        -1.3,
        coupling(),
        PotentialForm::Constant { value: 2.0 },
    );
    let phi = build_phi(
        &p,
        5.0,
        JumpConvention::CramerSolve,
        &IntegratorConfig::default(),
    )
    .unwrap();
    assert_eq!(
        phi.left.first(),
        StatePair::new(-PI, 0.77f64.sin(), -0.77f64.cos())
    );
    assert_eq!(phi.kind, FundamentalKind::Phi);
}

#[test]
fn chi_dirichlet_closed_form() {
    let p = problem(
        0.0,
        0.0,
        TransmissionMatrix::continuity(),
        PotentialForm::Zero,
    );
    let s = 2.3;
    let chi = build_chi(
        &p,
        s * s,
        JumpConvention::CramerSolve,
        &IntegratorConfig::default(),
    )
    .unwrap();
    assert_eq!(chi.right.first(), StatePair::new(PI, 0.0, 1.0));
    for st in chi.left.states().iter().chain(chi.right.states()) {
        let exact = -(s * (PI - st.x)).sin() / s;
        assert!((st.y - exact).abs() < 1e-9, "x = {}", st.x);
    }
}

#[test]
fn chi_terminal_state_exact() {
    let p = problem(0.2, 2.1, coupling(), PotentialForm::Zero);
    let chi = build_chi(
        &p,
        3.0,
        JumpConvention::PaperLiteral,
        &IntegratorConfig::default(),
    )
    .unwrap();
    assert_eq!(
        chi.right.first(),
        StatePair::new(PI, -2.1f64.sin(), 2.1f64.cos())
    );
    assert!(!chi.right.is_ascending());
}

#[test]
fn pieced_solutions_satisfy_transmission() {
    let p = problem(
        0.4,
        1.1,
        TransmissionMatrix::new([2.0, 1.0, -1.0, 0.5], [0.3, 1.5, 0.2, -2.0]),
        PotentialForm::Cosine {
            amplitude: 1.5,
            frequency: 1.0,
        },
    );
    let cfg = IntegratorConfig::default();
    for lambda in [-3.0, 0.0, 2.5, 40.0, 150.0] {
        for pair in [
            build_phi(&p, lambda, JumpConvention::CramerSolve, &cfg).unwrap(),
            build_chi(&p, lambda, JumpConvention::CramerSolve, &cfg).unwrap(),
        ] {
            let [g1, g2] = pair.transmission_residuals(p.transmission());
            assert!(
                g1.abs() + g2.abs() <= 1e-8 * (1.0 + pair.interface_norm()),
                "lambda {lambda}: {g1} {g2}"
            );
        }
    }
}

#[test]
fn picard_zero_potential_is_free_term() {
    let p = problem(FRAC_PI_4, 0.5, coupling(), PotentialForm::Zero);
    let s: f64 = 3.0;
    let path = picard_solve(
        Piece::Phi1,
        &p,
        s * s,
        JumpConvention::CramerSolve,
        &PicardConfig::default(),
    )
    .unwrap();
    let (sa, ca) = FRAC_PI_4.sin_cos();
    for st in path.states() {
        let exact = sa * (s * (st.x + PI)).cos() - ca / s * (s * (st.x + PI)).sin();
        assert!((st.y - exact).abs() < 1e-14);
    }
}

#[test]
fn picard_matches_shooting() {
    let p = problem(
        FRAC_PI_4,
        1.0,
        coupling(),
        PotentialForm::Cosine {
            amplitude: 1.0,
            frequency: 1.0,
        },
    );
    let pc = PicardConfig::default();
    let cfg = IntegratorConfig::default().with_mesh_points(pc.mesh_points);
    let conv = JumpConvention::CramerSolve;
    let phi = build_phi(&p, 10.0, conv, &cfg).unwrap();
    let chi = build_chi(&p, 10.0, conv, &cfg).unwrap();
    for (which, shot) in [
        (Piece::Phi1, &phi.left),
        (Piece::Phi2, &phi.right),
        (Piece::Chi2, &chi.right),
        (Piece::Chi1, &chi.left),
    ] {
        let pic = picard_solve(which, &p, 10.0, conv, &pc).unwrap();
        assert_eq!(pic.len(), shot.len());
        for (a, b) in pic.states().iter().zip(shot.states()) {
            assert_eq!(a.x, b.x);
            assert!((a.y - b.y).abs() < 1e-6, "{which:?} y at {}", a.x);
            assert!((a.dy - b.dy).abs() < 1e-6, "{which:?} dy at {}", a.x);
        }
    }
}

#[test]
fn picard_derivative_matches_finite_difference() {
    let p = problem(
        0.3,
        0.0,
        coupling(),
        PotentialForm::Cosine {
            amplitude: 2.0,
            frequency: 1.0,
        },
    );
    let path = picard_solve(
        Piece::Phi1,
        &p,
        6.0,
        JumpConvention::CramerSolve,
        &PicardConfig::default(),
    )
    .unwrap();
    let st = path.states();
    let h = st[1].x - st[0].x;
    for i in 2..st.len() - 2 {
        let fd = (-st[i + 2].y + 8.0 * st[i + 1].y - 8.0 * st[i - 1].y + st[i - 2].y) / (12.0 * h);
        assert!((fd - st[i].dy).abs() < 1e-5, "i = {i}");
    }
}

#[test]
fn picard_rejects_nonpositive_lambda() {
    let p = problem(0.0, 0.0, coupling(), PotentialForm::Zero);
    assert!(matches!(
        picard_solve(
            Piece::Phi1,
            &p,
            0.0,
            JumpConvention::CramerSolve,
            &PicardConfig::default()
        ),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn picard_cap_reports_no_convergence() {
    let p = problem(
        0.5,
        0.0,
        coupling(),
        PotentialForm::Constant { value: 40.0 },
    );
    let cfg = PicardConfig {
        max_iterations: 2,
        ..PicardConfig::default()
    };
    assert!(matches!(
        picard_solve(Piece::Phi1, &p, 0.5, JumpConvention::CramerSolve, &cfg),
        Err(Error::NoConvergence { iterations: 2, .. })
    ));
}

#[test]
fn constant_potential_picard_vs_closed_form() {
    let p = problem(
        1.0,
        0.0,
        coupling(),
        PotentialForm::Constant { value: -2.0 },
    );
    let path = picard_solve(
        Piece::Chi2,
        &p,
        7.0,
        JumpConvention::CramerSolve,
        &PicardConfig::default(),
    )
    .unwrap();
    let init = chi_initial(&p.angles());
    for st in path.states() {
        let exact = constant_q_closed_form(-2.0, 7.0, init, st.x);
        assert!((st.y - exact.y).abs() < 1e-8);
        assert!((st.dy - exact.dy).abs() < 1e-8);
    }
}

fn params(alpha: f64, beta: f64) -> AsymptoticParams {
    AsymptoticParams {
        alpha,
        beta,
        rho12: 1.0,
        rho24: -1.0,
        rho34: 1.0,
    }
}

#[test]
fn asymptotic_examples() {
    let pa = params(FRAC_PI_2, FRAC_PI_2);
    let tag = classify_case(&BoundaryAngles::new(FRAC_PI_2, FRAC_PI_2), CASE_TOLERANCE);
    let v = asymptotic_fundamental(Piece::Phi1, tag, 5.0, 0.0, 0, &pa).unwrap();
    assert!((v + 1.0).abs() < 1e-12);

    let pb = params(0.0, FRAC_PI_2);
    let tag = classify_case(&BoundaryAngles::new(0.0, FRAC_PI_2), CASE_TOLERANCE);
    let v = asymptotic_fundamental(Piece::Phi1, tag, 4.0, 0.0, 0, &pb).unwrap();
    assert!(v.abs() < 1e-12);

    let beta = 0.9;
    let pc = params(0.3, beta);
    let tag = classify_case(&BoundaryAngles::new(0.3, beta), CASE_TOLERANCE);
    let v = asymptotic_fundamental(Piece::Chi2, tag, 7.3, PI, 0, &pc).unwrap();
    assert!((v - beta.sin()).abs() < 1e-15);
}

#[test]
fn asymptotic_derivative_is_derivative() {
    let pa = params(0.7, 1.2);
    let tag = classify_case(&BoundaryAngles::new(0.7, 1.2), CASE_TOLERANCE);
    let h = 1e-6;
    for which in [Piece::Phi1, Piece::Phi2, Piece::Chi1, Piece::Chi2] {
        let x = if which.side() == Side::Left {
            -1.3
        } else {
            1.3
        };
        let f = |x| asymptotic_fundamental(which, tag, 6.2, x, 0, &pa).unwrap();
        let fd = (f(x + h) - f(x - h)) / (2.0 * h);
        let d = asymptotic_fundamental(which, tag, 6.2, x, 1, &pa).unwrap();
        assert!((fd - d).abs() < 1e-5 * (1.0 + d.abs()), "{which:?}");
    }
}

#[test]
fn asymptotic_case_mismatch() {
    let pa = params(0.0, 0.0);
    let tag = classify_case(&BoundaryAngles::new(1.0, 1.0), CASE_TOLERANCE);
    assert!(matches!(
        asymptotic_fundamental(Piece::Phi1, tag, 3.0, -1.0, 0, &pa),
        Err(Error::CaseMismatch {
            supplied: Case::I,
            expected: Case::IV
        })
    ));
}

#[test]
fn phi1_approaches_leading_term() {
    // q = 0: φ₁ − sin α cos s(x+π) = −(cos α / s) sin s(x+π), so s·error is O(1)
    let alpha = 1.0;
    let p = problem(alpha, 0.4, coupling(), PotentialForm::Zero);
    let tag = p.case();
    let pa = p.asymptotic_params();
    let cfg = IntegratorConfig::default();
    let mut scaled = Vec::new();
    for s in [10.0, 20.0, 40.0] {
        let phi = build_phi(&p, s * s, JumpConvention::CramerSolve, &cfg).unwrap();
        let err = phi
            .left
            .states()
            .iter()
            .map(|st| {
                (st.y - asymptotic_fundamental(Piece::Phi1, tag, s, st.x, 0, &pa).unwrap()).abs()
            })
            .fold(0.0, f64::max);
        scaled.push(s * err);
    }
    for w in scaled.windows(2) {
        assert!(w[1] <= 1.1 * w[0], "{scaled:?}");
    }
}
