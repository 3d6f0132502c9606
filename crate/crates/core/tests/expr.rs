use forchlab::expr::{Expr, Var};

fn ev(s: &str) -> f64 {
    Expr::parse(s).unwrap().eval(0.5, 2.0, 3.0)
}

#[test]
fn precedence_and_associativity() {
    assert_eq!(ev("1 + 2 * 3"), 7.0);
    assert_eq!(ev("(1 + 2) * 3"), 9.0);
    assert_eq!(ev("2 ^ 3 ^ 2"), 512.0);
    assert_eq!(ev("-2 ^ 2"), -4.0);
    assert_eq!(ev("2 ^ -1"), 0.5);
    assert_eq!(ev("8 / 4 / 2"), 1.0);
    assert_eq!(ev("10 - 4 - 3"), 3.0);
}

#[test]
fn variables_functions_constants() {
    assert_eq!(ev("x + y * t"), 6.5);
    assert!((ev("sin(pi * x)") - 1.0).abs() < 1e-15);
    assert!((ev("exp(-t) * e^t") - 1.0).abs() < 1e-15);
    assert_eq!(ev("sqrt(abs(-16))"), 4.0);
    assert_eq!(ev("cos(0)"), 1.0);
}

#[test]
fn scientific_notation_versus_constant_e() {
    assert_eq!(ev("2e-3"), 0.002);
    assert_eq!(ev("1.5E2"), 150.0);
    assert!((ev("2*e") - 2.0 * std::f64::consts::E).abs() < 1e-15);
}

#[test]
fn errors() {
    for bad in ["", "1 +", "sin x", "foo(1)", "(1", "1 2", "z", "3 $ 4"] {
        assert!(Expr::parse(bad).is_err(), "{bad}");
    }
}

#[test]
fn uses_reports_variables() {
    let e = Expr::parse("x * sin(t)").unwrap();
    assert!(e.uses(Var::X) && e.uses(Var::T) && !e.uses(Var::Y));
}
