use crate::{GridSample, OrthotoricError, OrthotoricStructure};
use exactalg::{rat, Poly, Quadratic, Rational, RealScalar, Scalar};
use num_traits::{Signed, Zero};

/// Profile polynomial with its derivatives up to fourth order,
/// precomputed once per profile.
#[derive(Clone, Debug)]
pub struct ProfileJet {
    pub p: Poly,
    pub d1: Poly,
    pub d2: Poly,
    pub d3: Poly,
    pub d4: Poly,
}

impl ProfileJet {
    pub fn new(p: &Poly) -> Self {
        let d1 = p.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        let d4 = d3.derivative();
        ProfileJet {
            p: p.clone(),
            d1,
            d2,
            d3,
            d4,
        }
    }

    /// Embed all five coefficient lists into a scalar type once, so a
    /// grid sweep pays no per-point rational-to-scalar conversion.
    pub fn evaluator<S: Scalar>(&self) -> JetEval<S> {
        let embed = |p: &Poly| -> Vec<S> { p.coeffs().iter().map(S::from_rational).collect() };
        JetEval {
            c: [
                embed(&self.p),
                embed(&self.d1),
                embed(&self.d2),
                embed(&self.d3),
                embed(&self.d4),
            ],
        }
    }
}

/// Scalar-embedded jet of one profile: Horner-ready coefficient lists
/// for the value and first four derivatives.
#[derive(Clone, Debug)]
pub struct JetEval<S> {
    c: [Vec<S>; 5],
}

impl<S: Scalar> JetEval<S> {
    fn horner(c: &[S], x: &S) -> S {
        let mut acc = S::zero();
        for k in c {
            acc = acc * x.clone() + k.clone();
        }
        acc
    }

    /// (p, p', p'', p''', p'''') at x.
    pub fn eval_all(&self, x: &S) -> [S; 5] {
        [
            Self::horner(&self.c[0], x),
            Self::horner(&self.c[1], x),
            Self::horner(&self.c[2], x),
            Self::horner(&self.c[3], x),
            Self::horner(&self.c[4], x),
        ]
    }

    /// Second derivative alone (used by curvature sweeps).
    pub fn eval_d2(&self, x: &S) -> S {
        Self::horner(&self.c[2], x)
    }
}

/// Both profile evaluators plus the embedded lambda^2 term: everything
/// a residual sweep needs, in the target scalar type.
pub struct ResidualKernel<S> {
    pub a: JetEval<S>,
    pub b: JetEval<S>,
    /// The constant fourth term -2 lambda^2.
    pub minus_two_lambda_sq: S,
}

impl<S: Scalar> ResidualKernel<S> {
    pub fn new(a: &Poly, b: &Poly, lambda_sq: &Rational) -> Self {
        ResidualKernel {
            a: ProfileJet::new(a).evaluator(),
            b: ProfileJet::new(b).evaluator(),
            minus_two_lambda_sq: S::from_int(-2) * S::from_rational(lambda_sq),
        }
    }

    /// The four displayed constituents of the reduced sixth-order
    /// residual (x - y)^4 S at a point, in order:
    ///
    /// 1. (1/2)(x-y)^2 [ (A A''')' + (B B''')' + A'' B'' ]
    /// 2. -(x-y) [ A A''' - B B''' + A' B'' - B' A'' ]
    /// 3. (A+B)(A''+B'') - (1/2)(A'+B')^2
    /// 4. -2 lambda^2
    ///
    /// Their sum is the full residual; their magnitudes set the natural
    /// scale for relative tolerances. Everything is polynomial in x and
    /// y, so there is no singularity at x = y. (A A''')' expands to
    /// A'A''' + A A''''.
    pub fn terms(&self, x: &S, y: &S) -> [S; 4] {
        let [av, a1, a2, a3, a4] = self.a.eval_all(x);
        let [bv, b1, b2, b3, b4] = self.b.eval_all(y);
        let d = x.clone() - y.clone();
        let half = S::one_half();

        let aa3_prime = a1.clone() * a3.clone() + av.clone() * a4;
        let bb3_prime = b1.clone() * b3.clone() + bv.clone() * b4;
        let t1 = half.clone()
            * d.clone()
            * d.clone()
            * (aa3_prime + bb3_prime + a2.clone() * b2.clone());

        let t2 = -(d
            * (av.clone() * a3 - bv.clone() * b3 + a1.clone() * b2.clone()
                - b1.clone() * a2.clone()));

        let sum_d1 = a1 + b1;
        let t3 = (av + bv) * (a2 + b2) - half * sum_d1.clone() * sum_d1;

        [t1, t2, t3, self.minus_two_lambda_sq.clone()]
    }

    /// Full residual (x - y)^4 S at a point.
    pub fn residual(&self, x: &S, y: &S) -> S {
        let [t1, t2, t3, t4] = self.terms(x, y);
        t1 + t2 + t3 + t4
    }
}

/// Full residual for raw polynomial profiles at a single point. For
/// grid sweeps build a [`ResidualKernel`] once instead.
pub fn full_residual_profiles<S: Scalar>(
    a: &Poly,
    b: &Poly,
    lambda_sq: &Rational,
    x: &S,
    y: &S,
) -> S {
    ResidualKernel::new(a, b, lambda_sq).residual(x, y)
}

/// The residual constant for quadratic profiles:
/// 2 (a0 + b0)(a2 + b2) - (1/2)(a1 + b1)^2 - 2 lambda^2.
/// For quadratic profiles the full residual equals this constant
/// identically in (x, y).
pub fn quadratic_residual_constant(a: &Quadratic, b: &Quadratic, lambda_sq: &Rational) -> Rational {
    let s0 = &a.a0 + &b.a0;
    let s1 = &a.a1 + &b.a1;
    let s2 = &a.a2 + &b.a2;
    rat(2, 1) * &s0 * &s2 - rat(1, 2) * &s1 * &s1 - rat(2, 1) * lambda_sq
}

/// The admissibility polynomial f(t) = 4 (t a0 + b0)(t a2 + b2)
/// - (t a1 + b1)^2, as a quadratic in t. Solutions with profile pair
/// (t1 A, t2 B) exist precisely where f(t1/t2) >= 0; its discriminant
/// ties to the resultant of (A, B) through D(f) = 16 Res(A, B).
pub fn admissibility_quadratic(a: &Quadratic, b: &Quadratic) -> Quadratic {
    let four = rat(4, 1);
    let c2 = &(&four * &a.a0 * &a.a2) - &(&a.a1 * &a.a1);
    let c1 = &(&four * &(&(&a.a0 * &b.a2) + &(&a.a2 * &b.a0))) - &(rat(2, 1) * &a.a1 * &b.a1);
    let c0 = &(&four * &b.a0 * &b.a2) - &(&b.a1 * &b.a1);
    Quadratic::new(c2, c1, c0)
}

/// f(t) evaluated exactly.
pub fn admissibility_f(a: &Quadratic, b: &Quadratic, t: &Rational) -> Rational {
    admissibility_quadratic(a, b).eval(t)
}

/// The unique lambda^2 making the quadratic residual constant vanish:
/// lambda^2 = (a0 + b0)(a2 + b2) - (1/4)(a1 + b1)^2 = f(1)/4 for the
/// pair (A, B). Errors with the negative witness value when the pair is
/// not admissible.
pub fn solve_lambda(a: &Quadratic, b: &Quadratic) -> Result<Rational, OrthotoricError> {
    let s0 = &a.a0 + &b.a0;
    let s1 = &a.a1 + &b.a1;
    let s2 = &a.a2 + &b.a2;
    let lambda_sq = &(&s0 * &s2) - &(rat(1, 4) * &s1 * &s1);
    if lambda_sq.is_negative() {
        return Err(OrthotoricError::NotAdmissible { lambda_sq });
    }
    Ok(lambda_sq)
}

impl OrthotoricStructure {
    /// Scalar-embedded residual kernel for this structure.
    pub fn kernel<S: Scalar>(&self) -> ResidualKernel<S> {
        ResidualKernel::new(self.a(), self.b(), self.lambda_sq())
    }

    /// Full residual at a point, over any scalar. Builds a kernel per
    /// call; use [`OrthotoricStructure::kernel`] for sweeps.
    pub fn full_residual<S: Scalar>(&self, x: &S, y: &S) -> S {
        self.kernel().residual(x, y)
    }

    /// The four residual constituents at a point.
    pub fn residual_terms<S: Scalar>(&self, x: &S, y: &S) -> [S; 4] {
        self.kernel().terms(x, y)
    }

    /// Scalar curvature R = -(A''(x) + B''(y)) / (x - y).
    pub fn scalar_curvature<S: Scalar>(&self, x: &S, y: &S) -> Result<S, OrthotoricError> {
        let d = x.clone() - y.clone();
        if d.is_zero() {
            return Err(OrthotoricError::SingularPoint);
        }
        let num = -(self.a().derivative_n(2).eval(x) + self.b().derivative_n(2).eval(y));
        Ok(num / d)
    }

    /// The primitive torsion form's two diagonal densities at a point:
    /// (lambda/(x-y)^2, -lambda/(x-y)^2). Their sum — the omega-trace —
    /// vanishes identically (primitivity).
    pub fn theta_form<S: RealScalar>(&self, x: &S, y: &S) -> Result<(S, S), OrthotoricError> {
        let d = x.clone() - y.clone();
        if d.is_zero() {
            return Err(OrthotoricError::SingularPoint);
        }
        let lambda = S::from_rational(self.lambda_sq()).sqrt();
        let c = lambda / (d.clone() * d);
        Ok((c.clone(), -c))
    }
}

/// A perturbation direction in coefficient space: shifts of the two
/// profile polynomials and of lambda^2.
#[derive(Clone, Debug)]
pub struct CoefficientDirection {
    pub label: String,
    pub d_a: Poly,
    pub d_b: Poly,
    pub d_lambda_sq: Rational,
}

impl CoefficientDirection {
    fn monomial(power: usize) -> Poly {
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[0] = Rational::from_integer(1.into());
        Poly::new(coeffs)
    }

    /// Unit direction in one coefficient of A. `index` counts from the
    /// leading coefficient down, matching the display a0, a1, a2, ...
    pub fn in_a(deg: usize, index: usize) -> Self {
        CoefficientDirection {
            label: format!("a{index}"),
            d_a: Self::monomial(deg - index),
            d_b: Poly::zero(),
            d_lambda_sq: Rational::zero(),
        }
    }

    pub fn in_b(deg: usize, index: usize) -> Self {
        CoefficientDirection {
            label: format!("b{index}"),
            d_a: Poly::zero(),
            d_b: Self::monomial(deg - index),
            d_lambda_sq: Rational::zero(),
        }
    }

    pub fn in_lambda_sq() -> Self {
        CoefficientDirection {
            label: "lambda_sq".to_string(),
            d_a: Poly::zero(),
            d_b: Poly::zero(),
            d_lambda_sq: Rational::from_integer(1.into()),
        }
    }
}

/// All unit coefficient directions of a structure: every coefficient of
/// A, every coefficient of B, then lambda^2.
pub fn unit_directions(s: &OrthotoricStructure) -> Vec<CoefficientDirection> {
    let mut out = Vec::new();
    let dega = s.a().degree().unwrap_or(0);
    let degb = s.b().degree().unwrap_or(0);
    for i in 0..=dega {
        out.push(CoefficientDirection::in_a(dega, i));
    }
    for i in 0..=degb {
        out.push(CoefficientDirection::in_b(degb, i));
    }
    out.push(CoefficientDirection::in_lambda_sq());
    out
}

/// Directional derivative of the full residual in coefficient space,
/// sampled on an nx x ny interior grid.
///
/// The residual is a quadratic polynomial in the profile coefficients
/// and affine in lambda^2, so the symmetric polarization
/// (res(S + D) - res(S - D)) / 2 is the exact symbolic directional
/// derivative of the closed-form residual, not a finite-difference
/// approximation.
pub fn residual_jacobian(
    s: &OrthotoricStructure,
    direction: &CoefficientDirection,
    nx: usize,
    ny: usize,
) -> GridSample {
    let plus: ResidualKernel<f64> = ResidualKernel::new(
        &(s.a() + &direction.d_a),
        &(s.b() + &direction.d_b),
        &(s.lambda_sq() + &direction.d_lambda_sq),
    );
    let minus: ResidualKernel<f64> = ResidualKernel::new(
        &(s.a() - &direction.d_a),
        &(s.b() - &direction.d_b),
        &(s.lambda_sq() - &direction.d_lambda_sq),
    );
    crate::structure::sample_scalar(
        s,
        &format!("residual_jacobian[{}]", direction.label),
        nx,
        ny,
        |x, y| 0.5 * (plus.residual(&x, &y) - minus.residual(&x, &y)),
    )
}

/// Exact rational directional derivative at a single rational point,
/// by the same polarization.
pub fn residual_jacobian_at(
    s: &OrthotoricStructure,
    direction: &CoefficientDirection,
    x: &Rational,
    y: &Rational,
) -> Rational {
    let plus = full_residual_profiles(
        &(s.a() + &direction.d_a),
        &(s.b() + &direction.d_b),
        &(s.lambda_sq() + &direction.d_lambda_sq),
        x,
        y,
    );
    let minus = full_residual_profiles(
        &(s.a() - &direction.d_a),
        &(s.b() - &direction.d_b),
        &(s.lambda_sq() - &direction.d_lambda_sq),
        x,
        y,
    );
    (plus - minus) / rat(2, 1)
}
