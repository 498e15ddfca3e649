//! Frozen reference values for the quadratic toolkit, computed
//! independently with exact computer algebra and pinned here.

use exactalg::{
    discriminant, eval_poly, quad_roots, rat, resultant_quadratics, Poly, Quadratic, Rational,
    RootPairKind,
};
use num_traits::Signed;

#[test]
fn discriminant_pin() {
    // a1^2 - 4 a0 a2 for (-2, 6, -4): 36 - 32 = 4.
    let q = Quadratic::from_i64(-2, 6, -4);
    assert_eq!(discriminant(&q), rat(4, 1));
}

#[test]
fn resultant_pin() {
    let p = Quadratic::from_i64(-2, 6, -4);
    let q = Quadratic::from_i64(-2, -6, -4);
    assert_eq!(resultant_quadratics(&p, &q), rat(1152, 1));
    // The resultant vanishes exactly on a shared root.
    let a = Quadratic::from_i64(1, -3, 2); // roots 1, 2
    let b = Quadratic::from_i64(1, -5, 6); // roots 2, 3
    assert_eq!(resultant_quadratics(&a, &b), rat(0, 1));
}

#[test]
fn resultant_equals_leading_sq_times_values_at_roots() {
    // Res(p, q) = p0^2 q(r1) q(r2) when p = p0 (x - r1)(x - r2).
    let p = Quadratic::from_i64(-2, 6, -4); // -2(x-1)(x-2)
    let q = Quadratic::from_i64(-2, -6, -4);
    let expect = rat(4, 1) * q.eval(&rat(1, 1)) * q.eval(&rat(2, 1));
    assert_eq!(resultant_quadratics(&p, &q), expect);
}

#[test]
fn exact_roots_pin() {
    // -(x-1)(x-2) = -x^2 + 3x - 2.
    let rp = quad_roots(&Quadratic::from_i64(-1, 3, -2), 1e-12).unwrap();
    assert_eq!(rp.kind, RootPairKind::ExactRational);
    assert_eq!(rp.r1.lo, rat(1, 1));
    assert_eq!(rp.r1.hi, rat(1, 1));
    assert_eq!(rp.r2.lo, rat(2, 1));
    assert_eq!(rp.r2.hi, rat(2, 1));
}

#[test]
fn double_root_pin() {
    // x^2: double root at 0 is still an exact pair (0, 0).
    let rp = quad_roots(&Quadratic::from_i64(1, 0, 0), 1e-12).unwrap();
    assert_eq!(rp.kind, RootPairKind::ExactRational);
    assert_eq!(rp.r1.lo, rat(0, 1));
    assert_eq!(rp.r2.hi, rat(0, 1));
}

#[test]
fn irrational_roots_certified_intervals() {
    // x^2 - 2: roots -sqrt(2), +sqrt(2).
    let q = Quadratic::from_i64(1, 0, -2);
    let tol = 1e-12;
    let rp = quad_roots(&q, tol).unwrap();
    assert_eq!(rp.kind, RootPairKind::AlgebraicInterval);
    let tol_q = Rational::from_float(tol).unwrap();
    for enc in [&rp.r1, &rp.r2] {
        assert!(enc.width() <= tol_q, "width {} > tol", enc.width());
        // Certified bracket: sign change of q across the enclosure.
        let flo = q.eval(&enc.lo);
        let fhi = q.eval(&enc.hi);
        assert!(
            !(flo.is_positive() && fhi.is_positive())
                && !(flo.is_negative() && fhi.is_negative()),
            "enclosure does not bracket the root"
        );
    }
    assert!((rp.r1.to_f64() + 2f64.sqrt()).abs() < 1e-11);
    assert!((rp.r2.to_f64() - 2f64.sqrt()).abs() < 1e-11);
    assert!(rp.r1.hi < rp.r2.lo);
}

#[test]
fn degenerate_and_complex_errors() {
    assert!(matches!(
        quad_roots(&Quadratic::from_i64(0, 1, -2), 1e-12),
        Err(exactalg::ExactAlgError::DegenerateLeadingCoefficient)
    ));
    assert!(matches!(
        quad_roots(&Quadratic::from_i64(1, 0, 2), 1e-12),
        Err(exactalg::ExactAlgError::ComplexRoots { .. })
    ));
}

#[test]
fn eval_poly_exact_spot() {
    // p = x^3 - 2x^2 + 6x - 4 at 3/2: 27/8 - 36/8 + 40/8 = 31/8.
    let p = Poly::from_i64(&[1, -2, 6, -4]);
    assert_eq!(eval_poly(&p, &rat(3, 2)), rat(31, 8));
    // Same value through the f64 path.
    let f = eval_poly(&p, &1.5f64);
    assert!((f - 31.0 / 8.0).abs() < 1e-15);
}

#[test]
fn poly_json_round_trip() {
    let p = Poly::new(vec![rat(1, 1), rat(-2, 1), rat(6, 1), rat(-4, 3)]);
    let s = serde_json::to_string(&p).unwrap();
    assert_eq!(s, r#"["1","-2","6","-4/3"]"#);
    let back: Poly = serde_json::from_str(&s).unwrap();
    assert_eq!(back, p);
    // Integer coefficient entries are accepted too.
    let mixed: Poly = serde_json::from_str(r#"[1, "-2", "6", "-4/3"]"#).unwrap();
    assert_eq!(mixed, p);
}
