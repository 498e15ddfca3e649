//! Property tests for the exact arithmetic layer.

use exactalg::{
    discriminant, quad_roots, rat, resultant_quadratics, Poly, Quadratic, Rational, RootPairKind,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |q| !q.is_zero())
}

fn small_poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rational(), 0..=max_len).prop_map(Poly::new)
}

proptest! {
    #[test]
    fn roots_from_construction_are_recovered(
        a0 in nonzero_rational(),
        r1 in small_rational(),
        r2 in small_rational(),
    ) {
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let q = Quadratic::from_roots(a0, &lo, &hi);
        let rp = quad_roots(&q, 1e-12).unwrap();
        prop_assert_eq!(rp.kind, RootPairKind::ExactRational);
        prop_assert_eq!(&rp.r1.lo, &lo);
        prop_assert_eq!(&rp.r2.lo, &hi);
        // Exact roots really are roots.
        prop_assert!(q.eval(&rp.r1.lo).is_zero());
        prop_assert!(q.eval(&rp.r2.lo).is_zero());
    }

    #[test]
    fn interval_roots_bracket_and_meet_tolerance(
        a0 in nonzero_rational(),
        a1 in small_rational(),
        a2 in small_rational(),
    ) {
        let q = Quadratic::new(a0, a1, a2);
        let disc = discriminant(&q);
        prop_assume!(disc.is_positive());
        let tol = 1e-10;
        let rp = quad_roots(&q, tol).unwrap();
        if rp.kind == RootPairKind::AlgebraicInterval {
            let tol_q = Rational::from_float(tol).unwrap();
            for enc in [&rp.r1, &rp.r2] {
                prop_assert!(enc.width() <= tol_q);
                let flo = q.eval(&enc.lo);
                let fhi = q.eval(&enc.hi);
                prop_assert!(
                    flo.is_zero() || fhi.is_zero() || flo.is_positive() != fhi.is_positive()
                );
            }
            prop_assert!(rp.r1.midpoint() <= rp.r2.midpoint());
        } else {
            // Perfect-square discriminant: both roots evaluate to zero.
            prop_assert!(q.eval(&rp.r1.lo).is_zero());
            prop_assert!(q.eval(&rp.r2.lo).is_zero());
        }
    }

    #[test]
    fn resultant_is_leading_sq_times_values(
        a0 in nonzero_rational(),
        r1 in small_rational(),
        r2 in small_rational(),
        b0 in small_rational(),
        b1 in small_rational(),
        b2 in small_rational(),
    ) {
        let p = Quadratic::from_roots(a0.clone(), &r1, &r2);
        let q = Quadratic::new(b0, b1, b2);
        let expect = &a0 * &a0 * q.eval(&r1) * q.eval(&r2);
        prop_assert_eq!(resultant_quadratics(&p, &q), expect);
    }

    #[test]
    fn resultant_symmetric_for_quadratic_pairs(
        a in prop::array::uniform3(small_rational()),
        b in prop::array::uniform3(small_rational()),
    ) {
        let p = Quadratic::new(a[0].clone(), a[1].clone(), a[2].clone());
        let q = Quadratic::new(b[0].clone(), b[1].clone(), b[2].clone());
        prop_assert_eq!(resultant_quadratics(&p, &q), resultant_quadratics(&q, &p));
    }

    #[test]
    fn product_rule_for_derivatives(p in small_poly(5), q in small_poly(5)) {
        let lhs = (&p * &q).derivative();
        let rhs = &(&p.derivative() * &q) + &(&p * &q.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplication_commutes_with_evaluation(
        p in small_poly(5),
        q in small_poly(5),
        x in small_rational(),
    ) {
        let lhs = (&p * &q).eval(&x);
        let rhs = p.eval(&x) * q.eval(&x);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn division_round_trips(p in small_poly(6), d in small_poly(3)) {
        prop_assume!(!d.is_zero());
        let (quot, rem) = p.div_rem(&d);
        let recon = &(&quot * &d) + &rem;
        prop_assert_eq!(recon, p);
        if let (Some(rd), Some(dd)) = (rem.degree(), d.degree()) {
            prop_assert!(rd < dd);
        }
    }

    #[test]
    fn float_eval_tracks_exact_eval(p in small_poly(5), x in small_rational()) {
        use num_traits::ToPrimitive;
        let exact = p.eval(&x).to_f64().unwrap();
        let approx = p.eval(&x.to_f64().unwrap());
        let scale = 1f64.max(exact.abs());
        prop_assert!((exact - approx).abs() <= 1e-12 * scale);
    }
}
