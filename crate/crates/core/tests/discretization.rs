use forchlab::constitutive::{ConstitutiveLaw, ForchheimerPolynomial};
use forchlab::discretization::{
    apply_operator, cell_derivative, cell_inner, divergence, face_inner, gradient, BoundaryData, BoundaryExpressions,
    BoundaryFrame, FaceField, Grid, ScalarField,
};
use proptest::prelude::*;
use std::f64::consts::PI;

fn law() -> ConstitutiveLaw {
    ConstitutiveLaw::new(ForchheimerPolynomial::two_term(1.0, 1.0).unwrap())
}

#[test]
fn grid_rejects_bad_shapes() {
    assert!(Grid::new_1d(3, 1.0).is_err());
    assert!(Grid::new_1d(8, 0.0).is_err());
    assert!(Grid::new_1d(8, f64::NAN).is_err());
    assert!(Grid::new(3, &[8, 8, 8], &[1.0, 1.0, 1.0]).is_err());
    assert!(Grid::new(2, &[8], &[1.0]).is_err());
}

#[test]
fn grid_geometry() {
    let g = Grid::new_2d(8, 4, 2.0, 1.0).unwrap();
    assert_eq!(g.len(), 32);
    assert_eq!(g.x_faces(), 9 * 4);
    assert_eq!(g.y_faces(), 8 * 5);
    assert!((g.cell_volume() - 0.0625).abs() < 1e-15);
    assert!((g.measure() - 2.0).abs() < 1e-15);
    assert_eq!(g.center(g.index(0, 0)), [0.125, 0.125]);
    let r = g.refined(2).unwrap();
    assert_eq!(r.cells(), &[16, 8]);
    assert_eq!(r.extent(), g.extent());
}

#[test]
fn field_length_must_match_grid() {
    let g = Grid::new_1d(8, 1.0).unwrap();
    assert!(ScalarField::new(g, vec![0.0; 7], 0.0).is_err());
    assert!(ScalarField::new(g, vec![0.0; 8], 0.0).is_ok());
}

#[test]
fn affine_fields_have_exact_face_gradients() {
    let g = Grid::new_2d(6, 5, 1.0, 2.0).unwrap();
    let f = |x: [f64; 2]| 0.3 + 1.7 * x[0] - 0.4 * x[1];
    let field = ScalarField::from_fn(g, 0.0, f).unwrap();
    let frame = BoundaryFrame::sample(&g, 0.0, |x, _| f(x));
    let grad = gradient(&field, &frame);
    assert!(grad.normal.x.iter().all(|v| (v - 1.7).abs() < 1e-12));
    assert!(grad.normal.y.iter().all(|v| (v + 0.4).abs() < 1e-12));
    assert!(grad.tangential.x.iter().all(|v| (v + 0.4).abs() < 1e-12));
    assert!(grad.tangential.y.iter().all(|v| (v - 1.7).abs() < 1e-12));
    // Constant gradient, constant flux, zero divergence.
    let op = apply_operator(&field, &law(), &frame).unwrap();
    assert!(op.iter().all(|v| v.abs() < 1e-10), "{op:?}");
}

fn derivative_error(cells: usize) -> f64 {
    let g = Grid::new_1d(cells, 1.0).unwrap();
    let field = ScalarField::from_fn(g, 0.0, |x| (PI * x[0]).sin() + x[0]).unwrap();
    let frame = BoundaryFrame::sample(&g, 0.0, |x, _| (PI * x[0]).sin() + x[0]);
    cell_derivative(&field, &frame, 0)
        .iter()
        .zip(g.centers())
        .map(|(d, x)| (d - (PI * (PI * x[0]).cos() + 1.0)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn cell_derivative_is_second_order() {
    let ratio = derivative_error(32) / derivative_error(64);
    assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
}

fn operator_error(cells: usize) -> f64 {
    // Gradient bounded away from zero keeps K(|∇p|)∇p smooth. Boundary cells
    // carry an O(1) truncation error from the half-cell closure and are skipped.
    let law = law();
    let g = Grid::new_1d(cells, 1.0).unwrap();
    let p = |x: [f64; 2]| x[0] + x[0] * x[0] + 0.1 * (PI * x[0]).sin();
    let field = ScalarField::from_fn(g, 0.0, p).unwrap();
    let frame = BoundaryFrame::sample(&g, 0.0, |x, _| p(x));
    let op = apply_operator(&field, &law, &frame).unwrap();
    op.iter()
        .zip(g.centers())
        .skip(1)
        .take(cells - 2)
        .map(|(v, x)| {
            let u = 1.0 + 2.0 * x[0] + 0.1 * PI * (PI * x[0]).cos();
            let uxx = 2.0 - 0.1 * PI * PI * (PI * x[0]).sin();
            let k = law.eval_K(u).unwrap();
            let kp = law.eval_K_prime(u).unwrap();
            ((k + kp * u) * uxx - v).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn nonlinear_operator_converges_in_the_interior() {
    let ratio = operator_error(64) / operator_error(128);
    assert!(ratio > 3.0, "ratio {ratio}");
}

#[test]
fn derivative_cross_check_flags_wrong_callbacks() {
    let good = BoundaryData::from_expressions(&BoundaryExpressions {
        psi: "sin(x) * exp(-t)".into(),
        psi_t: Some("-sin(x) * exp(-t)".into()),
        psi_x: Some("cos(x) * exp(-t)".into()),
        psi_xx: Some("-sin(x) * exp(-t)".into()),
        ..Default::default()
    })
    .unwrap();
    let g = Grid::new_1d(8, 1.0).unwrap();
    assert!(good.check_derivatives(&g, 1.0, 50, 1e-5, 1) < 1e-6);
    let bad = BoundaryData::from_expressions(&BoundaryExpressions {
        psi: "sin(x) * exp(-t)".into(),
        psi_x: Some("sin(x) * exp(-t)".into()),
        ..Default::default()
    })
    .unwrap();
    assert!(bad.check_derivatives(&g, 1.0, 50, 1e-5, 1) > 1e-2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// With zero boundary data, `divergence` is the negative adjoint of `gradient`.
    #[test]
    fn summation_by_parts(
        u in prop::collection::vec(-5.0f64..5.0, 30),
        fx in prop::collection::vec(-5.0f64..5.0, 7 * 5),
        fy in prop::collection::vec(-5.0f64..5.0, 6 * 6),
    ) {
        let g = Grid::new_2d(6, 5, 1.0, 1.3).unwrap();
        let field = ScalarField::new(g, u.clone(), 0.0).unwrap();
        let frame = BoundaryFrame::zero(&g, 0.0);
        let flux = FaceField { x: fx, y: fy };
        let lhs = cell_inner(&g, &u, &divergence(&g, &flux));
        let rhs = -face_inner(&g, &gradient(&field, &frame).normal, &flux);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }

    /// `-⟨A(u), u⟩ = ⟨K∇u, ∇u⟩ ≥ 0` for homogeneous data in 1D.
    #[test]
    fn operator_is_dissipative(u in prop::collection::vec(-5.0f64..5.0, 16)) {
        let g = Grid::new_1d(16, 1.0).unwrap();
        let field = ScalarField::new(g, u.clone(), 0.0).unwrap();
        let op = apply_operator(&field, &law(), &BoundaryFrame::zero(&g, 0.0)).unwrap();
        prop_assert!(cell_inner(&g, &u, &op) <= 1e-12);
    }

    #[test]
    fn constant_fields_are_stationary(c in -10.0f64..10.0) {
        let g = Grid::new_2d(5, 5, 1.0, 1.0).unwrap();
        let field = ScalarField::constant(g, c, 0.0);
        let op = apply_operator(&field, &law(), &BoundaryFrame::sample(&g, 0.0, |_, _| c)).unwrap();
        prop_assert!(op.iter().all(|v| v.abs() < 1e-9));
    }
}
