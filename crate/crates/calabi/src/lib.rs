//! Fibered profiles over a constant-scalar-curvature base: a circle
//! bundle of curvature integer k over a two-sphere with orbifold
//! weights (v, w), carrying the one-variable profile V(z) on the
//! moment interval [-1, 1].
//!
//! The central object is the sixth-order reduced residual 4*S(z): a
//! rational function with denominator (kz + c)^4 whose numerator is
//! polynomial in the data, evaluated here by exact polynomial
//! differentiation. Its weighted moments against (kz + c) and
//! (kz + c)^2 depend only on the boundary data (k, c, v, w, s_sigma,
//! lambda^2) — not on the interior shape of V — and admit closed
//! rational forms: these are the Futaki-type obstructions that decide
//! when the torsion parameter lambda^2 can be chosen consistently.

use exactalg::{count_roots_half_open, rat, Poly, Rational, Scalar};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative agreement required between quadrature orders q and 2q.
pub const QUADRATURE_DOUBLING_REL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CalabiError {
    #[error("evaluation point z = {z} lies outside the open interval (-1, 1)")]
    OutOfDomain { z: f64 },
    #[error("quadrature did not converge for {integral}: |delta| = {delta:e} at scale {scale:e}")]
    QuadratureNotConverged {
        integral: &'static str,
        delta: f64,
        scale: f64,
    },
    #[error("profile is not positive on the open interval (-1, 1)")]
    NonpositiveProfile,
    #[error("invalid profile data: {0}")]
    InvalidInput(String),
}

/// A fibered-ansatz profile: curvature integer k, fiber offset c with
/// c > |k| (so kz + c > 0 on [-1, 1]), orbifold weights v, w >= 1,
/// constant base scalar curvature s_sigma, profile polynomial V(z),
/// and torsion parameter lambda_sq >= 0.
///
/// The fiber profile is Theta(z) = V(z)/(kz + c). Validated invariants:
///
///   * V(-1) = V(1) = 0 (Theta vanishes at both poles),
///   * V'(-1) = 2(c - k)/w and V'(1) = -2(c + k)/v, equivalently
///     Theta'(-1) = 2/w and Theta'(1) = -2/v (cone angles 2 pi / w and
///     2 pi / v at the poles),
///   * Theta > 0 on (-1, 1), certified by a Sturm count on V/(1 - z^2),
///   * c > |k| and lambda_sq >= 0.
///
/// All checks are exact on the rational data.
#[derive(Clone, Debug, PartialEq)]
pub struct CalabiProfile {
    k: Rational,
    c: Rational,
    v: i64,
    w: i64,
    s_sigma: Rational,
    v_poly: Poly,
    lambda_sq: Rational,
}

impl CalabiProfile {
    pub fn new(
        k: Rational,
        c: Rational,
        v: i64,
        w: i64,
        s_sigma: Rational,
        v_poly: Poly,
        lambda_sq: Rational,
    ) -> Result<Self, CalabiError> {
        let bad = |msg: String| Err(CalabiError::InvalidInput(msg));
        if v < 1 || w < 1 {
            return bad(format!("orbifold weights must be positive integers, got v = {v}, w = {w}"));
        }
        if c <= k.abs() {
            return bad(format!(
                "need c > |k| so the fiber factor kz + c stays positive: c = {}, k = {}",
                exactalg::format_rational(&c),
                exactalg::format_rational(&k)
            ));
        }
        if lambda_sq.is_negative() {
            return bad(format!(
                "torsion parameter lambda_sq must be nonnegative, got {}",
                exactalg::format_rational(&lambda_sq)
            ));
        }
        let one = Rational::from_integer(1.into());
        if !v_poly.eval(&one).is_zero() || !v_poly.eval(&(-&one)).is_zero() {
            return bad("profile must vanish at both endpoints z = -1 and z = 1".into());
        }
        let d1 = v_poly.derivative();
        let want_left = rat(2, w) * (&c - &k);
        let want_right = rat(-2, v) * (&c + &k);
        if d1.eval(&(-&one)) != want_left {
            return bad(format!(
                "left cone-angle condition fails: V'(-1) = {}, expected 2(c - k)/w = {}",
                exactalg::format_rational(&d1.eval(&(-&one))),
                exactalg::format_rational(&want_left)
            ));
        }
        if d1.eval(&one) != want_right {
            return bad(format!(
                "right cone-angle condition fails: V'(1) = {}, expected -2(c + k)/v = {}",
                exactalg::format_rational(&d1.eval(&one)),
                exactalg::format_rational(&want_right)
            ));
        }
        // Positivity of Theta = V/(kz + c) on (-1, 1). Since kz + c > 0
        // there, this is positivity of V, i.e. of g = V/(1 - z^2): the
        // endpoint conditions give g(-1) = (c - k)/w > 0 and
        // g(1) = (c + k)/v > 0, so positivity fails exactly when g has
        // a root inside.
        let one_minus_z2 = Poly::from_i64(&[-1, 0, 1]);
        let (g, rem) = v_poly.div_rem(&one_minus_z2);
        if !rem.is_zero() {
            return bad("profile is not divisible by 1 - z^2 despite vanishing at both endpoints".into());
        }
        if g.is_zero() || count_roots_half_open(&g, &rat(-1, 1), &rat(1, 1)) != 0 {
            return Err(CalabiError::NonpositiveProfile);
        }
        Ok(CalabiProfile {
            k,
            c,
            v,
            w,
            s_sigma,
            v_poly,
            lambda_sq,
        })
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }
    pub fn c(&self) -> &Rational {
        &self.c
    }
    pub fn v(&self) -> i64 {
        self.v
    }
    pub fn w(&self) -> i64 {
        self.w
    }
    pub fn s_sigma(&self) -> &Rational {
        &self.s_sigma
    }
    pub fn v_poly(&self) -> &Poly {
        &self.v_poly
    }
    pub fn lambda_sq(&self) -> &Rational {
        &self.lambda_sq
    }

    /// The linear fiber factor u(z) = kz + c.
    pub fn u_poly(&self) -> Poly {
        Poly::new(vec![self.k.clone(), self.c.clone()])
    }

    /// Precompute the residual's polynomial numerator data.
    pub fn kernel(&self) -> ResidualKernel {
        ResidualKernel::new(self)
    }

    /// Exact closed form of the first moment
    /// I1 = integral of 4 S(z) (kz + c) dz over [-1, 1]:
    ///
    ///   2 P (k Q + s_sigma) - 2 c lambda^2 / (c^2 - k^2)^2
    ///
    /// with P = 1/v + 1/w and Q = 1/v - 1/w. Depends only on boundary
    /// data, not on the interior of V.
    pub fn futaki_1_closed(&self) -> Rational {
        let (p, q) = weight_sums(self.v, self.w);
        let c2k2 = &(&self.c * &self.c) - &(&self.k * &self.k);
        rat(2, 1) * &p * (&(&self.k * &q) + &self.s_sigma)
            - rat(2, 1) * &self.c * &self.lambda_sq / (&c2k2 * &c2k2)
    }

    /// Exact closed form of the second moment
    /// I2 = integral of 4 S(z) (kz + c)^2 dz over [-1, 1]:
    ///
    ///   2 [ 2 k^2 (1/v^2 + 1/w^2) + 2 k c P Q
    ///       + s_sigma (c P + k Q) - lambda^2 / (c^2 - k^2) ]
    ///
    /// again a function of boundary data only.
    pub fn futaki_2_closed(&self) -> Rational {
        let (p, q) = weight_sums(self.v, self.w);
        let inv_sq = rat(1, self.v) * rat(1, self.v) + rat(1, self.w) * rat(1, self.w);
        let c2k2 = &(&self.c * &self.c) - &(&self.k * &self.k);
        rat(2, 1)
            * (rat(2, 1) * &self.k * &self.k * inv_sq
                + rat(2, 1) * &self.k * &self.c * &p * &q
                + &self.s_sigma * &(&(&self.c * &p) + &(&self.k * &q))
                - &self.lambda_sq / &c2k2)
    }
}

/// P = 1/v + 1/w and Q = 1/v - 1/w as exact rationals.
fn weight_sums(v: i64, w: i64) -> (Rational, Rational) {
    (rat(1, v) + rat(1, w), rat(1, v) - rat(1, w))
}

/// Serialized profile: rationals as "p/q" strings, weights as plain
/// integers, V as its highest-first coefficient list. Deserialization
/// re-runs the full constructor validation.
#[derive(Serialize, Deserialize)]
struct ProfileRepr {
    #[serde(with = "exactalg::rational_serde")]
    k: Rational,
    #[serde(with = "exactalg::rational_serde")]
    c: Rational,
    v: i64,
    w: i64,
    #[serde(with = "exactalg::rational_serde")]
    s_sigma: Rational,
    #[serde(rename = "V")]
    v_poly: Poly,
    #[serde(with = "exactalg::rational_serde")]
    lambda_sq: Rational,
}

impl Serialize for CalabiProfile {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ProfileRepr {
            k: self.k.clone(),
            c: self.c.clone(),
            v: self.v,
            w: self.w,
            s_sigma: self.s_sigma.clone(),
            v_poly: self.v_poly.clone(),
            lambda_sq: self.lambda_sq.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for CalabiProfile {
    fn deserialize<D: serde::Deserializer<'de>>(des: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = ProfileRepr::deserialize(des)?;
        CalabiProfile::new(r.k, r.c, r.v, r.w, r.s_sigma, r.v_poly, r.lambda_sq)
            .map_err(D::Error::custom)
    }
}

/// The reduced residual as exact numerator polynomials over the common
/// denominator u^4 = (kz + c)^4.
///
/// With u = kz + c, s = s_sigma, and N = V * (-V''' u - k (s - V'')),
/// the four displayed terms of 4 S(z) are
///
///   T1 = (3 k N - N' u) / u^4     (outer derivative term)
///   T2 = -k N / u^4               (first-order correction)
///   T3 = (k V' - s u)(V'' u - k V') / u^4
///   T4 = -lambda^2 / u^4
///
/// Each numerator is precomputed once by exact polynomial arithmetic;
/// evaluation is generic over [`Scalar`], so the same kernel serves
/// exact rational identity checks and floating-point sampling.
#[derive(Clone, Debug)]
pub struct ResidualKernel {
    terms: [Poly; 4],
    numerator: Poly,
    u: Poly,
}

impl ResidualKernel {
    fn new(p: &CalabiProfile) -> Self {
        let u = p.u_poly();
        let v1 = p.v_poly.derivative();
        let v2 = v1.derivative();
        let v3 = v2.derivative();
        let s = Poly::constant(p.s_sigma.clone());
        // N = V * (-V''' u - k (s - V''))
        let n0 = &(-&(&v3 * &u)) - &(&s - &v2).scale(&p.k);
        let n = &p.v_poly * &n0;
        let n1 = n.derivative();
        let t1 = &n.scale(&(rat(3, 1) * &p.k)) - &(&n1 * &u);
        let t2 = -&n.scale(&p.k);
        let t3 = &(&v1.scale(&p.k) - &u.scale(&p.s_sigma)) * &(&(&v2 * &u) - &v1.scale(&p.k));
        let t4 = Poly::constant(-&p.lambda_sq);
        let numerator = &(&(&t1 + &t2) + &t3) + &t4;
        ResidualKernel {
            terms: [t1, t2, t3, t4],
            numerator,
            u,
        }
    }

    /// Numerator polynomial of 4 S(z) over u^4.
    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    /// The linear factor u(z) = kz + c.
    pub fn u(&self) -> &Poly {
        &self.u
    }

    /// 4 S(z), no domain check.
    pub fn eval<S: Scalar>(&self, z: &S) -> S {
        let u = self.u.eval(z);
        let u2 = u.clone() * u.clone();
        self.numerator.eval(z) / (u2.clone() * u2)
    }

    /// The four summands of 4 S(z) separately (they sum to [`eval`]).
    ///
    /// [`eval`]: ResidualKernel::eval
    pub fn eval_terms<S: Scalar>(&self, z: &S) -> [S; 4] {
        let u = self.u.eval(z);
        let u2 = u.clone() * u.clone();
        let u4 = u2.clone() * u2;
        [
            self.terms[0].eval(z) / u4.clone(),
            self.terms[1].eval(z) / u4.clone(),
            self.terms[2].eval(z) / u4.clone(),
            self.terms[3].eval(z) / u4,
        ]
    }
}

/// The reduced residual 4 S(z) at an interior point of (-1, 1).
pub fn calabi_residual(p: &CalabiProfile, z: f64) -> Result<f64, CalabiError> {
    if !(z > -1.0 && z < 1.0) {
        return Err(CalabiError::OutOfDomain { z });
    }
    Ok(p.kernel().eval(&z))
}

/// Gauss-Legendre value of integral of numerator/u^power over [-1, 1],
/// plus the mass of |integrand| as a cancellation-aware scale.
fn moment_sums(kernel: &ResidualKernel, power: i32, order: usize) -> (f64, f64) {
    let (nodes, weights) = quadrature::gauss_legendre(order);
    let mut value = 0.0f64;
    let mut mass = 0.0f64;
    for (z, wgt) in nodes.iter().zip(&weights) {
        let u = kernel.u.eval(z);
        let f = kernel.numerator.eval(z) / u.powi(power);
        value += wgt * f;
        mass += wgt * f.abs();
    }
    (value, mass)
}

fn converged_moment(
    p: &CalabiProfile,
    power: i32,
    quad_order: usize,
    name: &'static str,
) -> Result<f64, CalabiError> {
    let kernel = p.kernel();
    let order = quad_order.max(2);
    let (coarse, _) = moment_sums(&kernel, power, order);
    let (fine, mass) = moment_sums(&kernel, power, 2 * order);
    let delta = (coarse - fine).abs();
    let scale = fine.abs().max(mass);
    if delta > QUADRATURE_DOUBLING_REL * scale {
        return Err(CalabiError::QuadratureNotConverged {
            integral: name,
            delta,
            scale,
        });
    }
    Ok(fine)
}

/// First moment I1 = integral of 4 S(z) (kz + c) dz over [-1, 1], by
/// Gauss-Legendre quadrature with an order-doubling convergence check
/// (the integrand numerator/(kz + c)^3 is smooth since kz + c >= c - |k| > 0).
///
/// The exact value is [`CalabiProfile::futaki_1_closed`]; it vanishes
/// exactly when lambda^2 equals [`lambda_sq_from_first_moment`].
pub fn futaki_integral_1(p: &CalabiProfile, quad_order: usize) -> Result<f64, CalabiError> {
    converged_moment(p, 3, quad_order, "first moment")
}

/// Second moment I2 = integral of 4 S(z) (kz + c)^2 dz over [-1, 1],
/// by the same quadrature scheme. The exact value is
/// [`CalabiProfile::futaki_2_closed`].
pub fn futaki_integral_2(p: &CalabiProfile, quad_order: usize) -> Result<f64, CalabiError> {
    converged_moment(p, 2, quad_order, "second moment")
}

/// The unique lambda^2 making the first moment vanish at the given
/// boundary data:
///
///   lambda^2 = ((c^2 - k^2)^2 / c) P (k Q + s_sigma),
///
/// P = 1/v + 1/w, Q = 1/v - 1/w. May be negative, in which case no
/// admissible profile realizes it.
///
/// Panics if c <= 0 or v, w < 1.
pub fn lambda_sq_from_first_moment(
    k: &Rational,
    c: &Rational,
    v: i64,
    w: i64,
    s_sigma: &Rational,
) -> Rational {
    assert!(c.is_positive(), "need c > 0");
    assert!(v >= 1 && w >= 1, "weights must be positive integers");
    let (p, q) = weight_sums(v, w);
    let c2k2 = &(c * c) - &(k * k);
    (&c2k2 * &c2k2) / c * p * (&(k * &q) + s_sigma)
}

/// The unique (s_sigma, lambda^2) making both moments vanish for k != 0.
#[derive(Clone, Debug, Serialize)]
pub struct ForcedParameters {
    #[serde(with = "exactalg::rational_serde")]
    pub s_sigma_forced: Rational,
    #[serde(with = "exactalg::rational_serde")]
    pub lambda_sq_forced: Rational,
}

/// Solve the two moment conditions jointly for (s_sigma, lambda^2) at
/// curvature k != 0:
///
///   s_sigma = -k Q - c P,    lambda^2 = -(c^2 - k^2)^2 P^2.
///
/// The forced lambda^2 is strictly negative for every admissible input
/// (c > |k| > 0, v, w >= 1), so no profile with real torsion exists:
/// this is the obstruction at nonzero curvature.
///
/// Panics if k = 0, c <= |k|, or v, w < 1.
pub fn futaki_obstruction_k_nonzero(
    k: &Rational,
    c: &Rational,
    v: i64,
    w: i64,
) -> ForcedParameters {
    assert!(!k.is_zero(), "curvature integer must be nonzero here");
    assert!(c > &k.abs(), "need c > |k|");
    assert!(v >= 1 && w >= 1, "weights must be positive integers");
    let (p, q) = weight_sums(v, w);
    let c2k2 = &(c * c) - &(k * k);
    ForcedParameters {
        s_sigma_forced: -&(k * &q) - &(c * &p),
        lambda_sq_forced: -&(&(&c2k2 * &c2k2) * &(&p * &p)),
    }
}

/// Outcome of the k = 0 moment system.
#[derive(Clone, Debug, Serialize)]
pub struct FlatVerticalReport {
    /// lambda^2 = c^3 s_sigma (1/v + 1/w) from the first moment.
    #[serde(with = "exactalg::rational_serde")]
    pub lambda_sq: Rational,
    /// Whether the full system is solvable: requires v = w (the second
    /// obstruction vanishes only for equal weights) and lambda_sq >= 0.
    pub consistent: bool,
}

/// The k = 0 moment system: the first moment forces
/// lambda^2 = c^3 s_sigma (1/v + 1/w); for v != w the remaining
/// obstruction cannot vanish, so the system is inconsistent regardless
/// of s_sigma.
///
/// Panics if c <= 0 or v, w < 1.
pub fn futaki_obstruction_k0(
    c: &Rational,
    v: i64,
    w: i64,
    s_sigma: &Rational,
) -> FlatVerticalReport {
    assert!(c.is_positive(), "need c > 0");
    assert!(v >= 1 && w >= 1, "weights must be positive integers");
    let (p, _) = weight_sums(v, w);
    let lambda_sq = c * c * c * &(s_sigma * &p);
    let consistent = v == w && !lambda_sq.is_negative();
    FlatVerticalReport {
        lambda_sq,
        consistent,
    }
}

/// The product solution V = c - c z^2 at k = 0, v = w = 1, with
/// lambda^2 = 2 c^3 s_sigma: the residual vanishes identically,
/// 4 S = 2 s_sigma / c - lambda^2 / c^4 = 0.
///
/// Panics if c <= 0 or s_sigma < 0.
pub fn samelson_product(c: &Rational, s_sigma: &Rational) -> CalabiProfile {
    assert!(c.is_positive(), "need c > 0");
    assert!(!s_sigma.is_negative(), "need s_sigma >= 0");
    let v_poly = Poly::new(vec![-c, Rational::zero(), c.clone()]);
    let lambda_sq = rat(2, 1) * c * c * c * s_sigma;
    CalabiProfile::new(
        Rational::zero(),
        c.clone(),
        1,
        1,
        s_sigma.clone(),
        v_poly,
        lambda_sq,
    )
    .expect("product profile satisfies all invariants by construction")
}

/// Build the profile of minimal degree matching the four endpoint
/// constraints, plus free interior shape knobs:
///
///   V = (1 - z^2)(w0 + w1 z) + (1 - z^2)^2 (knobs[0] + knobs[1] z + ...)
///
/// with w0 = (c P + k Q)/2 and w1 = (c Q + k P)/2 so that the cubic
/// part alone already satisfies V(+-1) = 0, V'(-1) = 2(c - k)/w,
/// V'(1) = -2(c + k)/v; the quartic-and-up knob block vanishes to
/// second order at both endpoints and so never disturbs the boundary
/// data. Fails with [`CalabiError::NonpositiveProfile`] when the knobs
/// push the profile to a zero inside (-1, 1).
pub fn make_profile_from_boundary(
    k: &Rational,
    c: &Rational,
    v: i64,
    w: i64,
    s_sigma: &Rational,
    lambda_sq: &Rational,
    interior_knobs: &[Rational],
) -> Result<CalabiProfile, CalabiError> {
    if v < 1 || w < 1 {
        return Err(CalabiError::InvalidInput(format!(
            "orbifold weights must be positive integers, got v = {v}, w = {w}"
        )));
    }
    let (p, q) = weight_sums(v, w);
    let w0 = (&(c * &p) + &(k * &q)) * rat(1, 2);
    let w1 = (&(c * &q) + &(k * &p)) * rat(1, 2);
    let one_minus_z2 = Poly::from_i64(&[-1, 0, 1]);
    let cubic = &one_minus_z2 * &Poly::new(vec![w1, w0]);
    // knobs are ascending powers of z: knobs[i] multiplies z^i.
    let mut knob_coeffs: Vec<Rational> = interior_knobs.to_vec();
    knob_coeffs.reverse();
    let knob_poly = Poly::new(knob_coeffs);
    let v_poly = &cubic + &(&(&one_minus_z2 * &one_minus_z2) * &knob_poly);
    CalabiProfile::new(
        k.clone(),
        c.clone(),
        v,
        w,
        s_sigma.clone(),
        v_poly,
        lambda_sq.clone(),
    )
}
