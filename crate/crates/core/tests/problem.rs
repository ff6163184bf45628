use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};
use transmission_sl::problem::*;
use transmission_sl::*;

fn build_rho_ok(t: &TransmissionMatrix) -> RhoSet {
    build_rho(t).unwrap()
}

fn row_norm_product(t: &TransmissionMatrix) -> f64 {
    let norm = |r: &[f64; 4]| r.iter().map(|v| v * v).sum::<f64>().sqrt();
    norm(&t.row_a) * norm(&t.row_b)
}

fn coupling() -> TransmissionMatrix {
    TransmissionMatrix::new([1.0, 1.0, -1.0, 0.0], [0.0, 1.0, 0.0, -1.0])
}

// Independent 2x2 determinant used to cross-check build_rho.
fn det2(m: [[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[1][0] * m[0][1]
}

#[test]
fn continuity_rho() {
    let rho = build_rho(&TransmissionMatrix::continuity()).unwrap();
    assert_eq!(rho.r12, 1.0);
    assert_eq!(rho.r34, 1.0);
    assert_eq!(rho.r24, 0.0);
    assert_eq!(rho.r13, 0.0);
    assert_eq!(rho.r23, 1.0);
    assert_eq!(rho.r14, -1.0);
}

#[test]
fn coupling_rho_matches_column_determinants() {
    let t = coupling();
    let rho = build_rho(&t).unwrap();
    for k in 1..=4 {
        for j in k + 1..=4 {
            let m = [
                [t.row_a[k - 1], t.row_a[j - 1]],
                [t.row_b[k - 1], t.row_b[j - 1]],
            ];
            assert_eq!(rho.get(k, j), det2(m), "rho{k}{j}");
        }
    }
    assert_eq!(
        (rho.r12, rho.r34, rho.r24, rho.r23, rho.r13, rho.r14),
        (1.0, 1.0, -1.0, 1.0, 0.0, -1.0)
    );
    assert_eq!(rho.plucker(), 0.0);
}

#[test]
fn rho_get_is_antisymmetric() {
    let rho = build_rho(&coupling()).unwrap();
    assert_eq!(rho.get(4, 2), 1.0);
    assert_eq!(rho.get(3, 3), 0.0);
}

#[test]
fn zero_matrix_is_degenerate() {
    let t = TransmissionMatrix::new([0.0; 4], [0.0; 4]);
    assert_eq!(build_rho(&t), Err(Error::DegenerateMatrix));
}

fn spec_with(t: TransmissionMatrix) -> ProblemSpec {
    ProblemSpec {
        angles: BoundaryAngles::new(0.0, 0.0),
        transmission: t,
        potential: PotentialSpec::zero(),
    }
}

#[test]
fn canonical_problem_validates() {
    let p = validate_problem(&spec_with(TransmissionMatrix::continuity())).unwrap();
    assert!(p.rho_cache_consistent());
    assert_eq!(p.case().case, Case::IV);
}

#[test]
fn proportional_rows_rank_deficient() {
    let t = TransmissionMatrix::new([1.0, 0.0, 1.0, 0.0], [2.0, 0.0, 2.0, 0.0]);
    let errs = validate_problem(&spec_with(t)).unwrap_err();
    assert!(errs.contains(&ProblemError::RankDeficientTransmission));
}

#[test]
fn swapped_rows_flip_rho12() {
    let t = TransmissionMatrix::new([0.0, 1.0, 0.0, -1.0], [1.0, 0.0, -1.0, 0.0]);
    let errs = validate_problem(&spec_with(t)).unwrap_err();
    assert!(errs.contains(&ProblemError::RhoSignViolation {
        name: "rho12",
        value: -1.0
    }));
    assert!(errs[0].to_string().contains("rho12 > 0 required"));
}

#[test]
fn bad_potential_listed_with_other_errors() {
    let mut spec = spec_with(TransmissionMatrix::new(
        [0.0, 1.0, 0.0, -1.0],
        [1.0, 0.0, -1.0, 0.0],
    ));
    spec.potential.right = transmission_sl::potential::PotentialForm::Constant {
        value: f64::INFINITY,
    };
    let errs = validate_problem(&spec).unwrap_err();
    assert_eq!(errs.len(), 3, "{errs:?}");
    assert!(matches!(
        errs[2],
        ProblemError::PotentialUnbounded {
            side: Side::Right,
            ..
        }
    ));
}

#[test]
fn case_examples() {
    let c = |a, b| classify_case(&BoundaryAngles::new(a, b), CASE_TOLERANCE).case;
    assert_eq!(c(FRAC_PI_2, FRAC_PI_2), Case::I);
    assert_eq!(c(0.0, FRAC_PI_2), Case::II);
    assert_eq!(c(FRAC_PI_2, 0.0), Case::III);
    assert_eq!(c(0.0, 0.0), Case::IV);
    // sin(π) is ~1.2e-16, inside the default tolerance
    assert_eq!(c(PI, PI), Case::IV);
    assert_eq!(
        classify_case(&BoundaryAngles::new(1e-9, 0.3), 1e-12).case,
        Case::I
    );
}

#[test]
fn reduced_angles() {
    let a = BoundaryAngles::new(-FRAC_PI_2, 3.0 * PI);
    let (ra, rb) = a.reduced();
    assert!((ra - FRAC_PI_2).abs() < 1e-15);
    assert!(rb.abs() < 1e-12 || (rb - PI).abs() < 1e-12);
}

#[test]
fn derivative_first_reorders_columns() {
    let t = coupling().with_columns(ColumnConvention::DerivativeFirst);
    let (a, b) = t.value_first_rows();
    assert_eq!(a, [1.0, 1.0, 0.0, -1.0]);
    assert_eq!(b, [1.0, 0.0, -1.0, 0.0]);
    // y'(0-) + y(0-) - y'(0+) = 0 and y(0-) - y(0+) = 0
    assert_eq!(t.residuals((2.0, 3.0), (2.0, 5.0)), [0.0, 0.0]);
}

fn matrix() -> impl Strategy<Value = TransmissionMatrix> {
    (
        proptest::array::uniform4(-10.0f64..10.0),
        proptest::array::uniform4(-10.0f64..10.0),
    )
        .prop_map(|(a, b)| TransmissionMatrix::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn plucker_holds(t in matrix()) {
        let rho = build_rho_ok(&t);
        let scale = row_norm_product(&t).powi(2);
        prop_assert!(rho.plucker().abs() <= 1e-12 * scale);
    }
}

proptest! {
    #[test]
    fn row_swap_negates(t in matrix()) {
        let swapped = TransmissionMatrix::new(t.row_b, t.row_a);
        let (r, s) = (build_rho_ok(&t), build_rho_ok(&swapped));
        for (x, y) in r.values().iter().zip(s.values()) {
            prop_assert_eq!(*x, -y);
        }
    }

    #[test]
    fn row_scaling_scales(t in matrix(), c in 0.1f64..10.0) {
        let scaled = TransmissionMatrix::new(t.row_a.map(|v| c * v), t.row_b);
        let (r, s) = (build_rho_ok(&t), build_rho_ok(&scaled));
        for (x, y) in r.values().iter().zip(s.values()) {
            prop_assert!((c * x - y).abs() <= 1e-12 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn classification_is_total(a in -1e3f64..1e3, b in -1e3f64..1e3) {
        let tag = classify_case(&BoundaryAngles::new(a, b), CASE_TOLERANCE);
        let again = classify_case(&BoundaryAngles::new(a, b), CASE_TOLERANCE);
        prop_assert_eq!(tag, again);
        prop_assert_eq!(tag.sin_alpha_zero, a.sin().abs() <= CASE_TOLERANCE);
    }
}
