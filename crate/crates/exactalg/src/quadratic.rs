use crate::{ExactAlgError, Poly, Rational, Scalar};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// q(x) = a0 x^2 + a1 x + a2 with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Quadratic {
    pub a0: Rational,
    pub a1: Rational,
    pub a2: Rational,
}

impl Quadratic {
    pub fn new(a0: Rational, a1: Rational, a2: Rational) -> Self {
        Quadratic { a0, a1, a2 }
    }

    pub fn from_i64(a0: i64, a1: i64, a2: i64) -> Self {
        Quadratic {
            a0: Rational::from_integer(a0.into()),
            a1: Rational::from_integer(a1.into()),
            a2: Rational::from_integer(a2.into()),
        }
    }

    /// Quadratic with leading coefficient `a0` and the given roots:
    /// a0 (x - r1)(x - r2).
    pub fn from_roots(a0: Rational, r1: &Rational, r2: &Rational) -> Self {
        let a1 = -&a0 * (r1 + r2);
        let a2 = &a0 * &(r1 * r2);
        Quadratic { a0, a1, a2 }
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(vec![self.a0.clone(), self.a1.clone(), self.a2.clone()])
    }

    /// Reads a polynomial of degree <= 2 as a quadratic (padding with
    /// zero coefficients); `None` for higher degree.
    pub fn from_poly(p: &Poly) -> Option<Quadratic> {
        match p.degree() {
            Some(d) if d > 2 => None,
            _ => Some(Quadratic {
                a0: p.coeff(2),
                a1: p.coeff(1),
                a2: p.coeff(0),
            }),
        }
    }

    pub fn eval<S: Scalar>(&self, x: &S) -> S {
        (S::from_rational(&self.a0) * x.clone() + S::from_rational(&self.a1)) * x.clone()
            + S::from_rational(&self.a2)
    }
}

/// Discriminant a1^2 - 4 a0 a2.
pub fn discriminant(q: &Quadratic) -> Rational {
    &(&q.a1 * &q.a1) - &(Rational::from_integer(4.into()) * &q.a0 * &q.a2)
}

/// Resultant of two quadratics p, q:
/// (p0 q2 - p2 q0)^2 - (p0 q1 - p1 q0)(p1 q2 - p2 q1).
/// Vanishes exactly when p and q share a root.
pub fn resultant_quadratics(p: &Quadratic, q: &Quadratic) -> Rational {
    let m02 = &(&p.a0 * &q.a2) - &(&p.a2 * &q.a0);
    let m01 = &(&p.a0 * &q.a1) - &(&p.a1 * &q.a0);
    let m12 = &(&p.a1 * &q.a2) - &(&p.a2 * &q.a1);
    &(&m02 * &m02) - &(&m01 * &m12)
}

/// Horner evaluation of a polynomial over any [`Scalar`].
pub fn eval_poly<S: Scalar>(p: &Poly, x: &S) -> S {
    p.eval(x)
}

/// One certified real root: either an exact rational point (lo == hi)
/// or a closed rational interval guaranteed to contain the root.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RootEnclosure {
    #[serde(with = "crate::rational_serde")]
    pub lo: Rational,
    #[serde(with = "crate::rational_serde")]
    pub hi: Rational,
}

impl RootEnclosure {
    pub fn exact(r: Rational) -> Self {
        RootEnclosure { lo: r.clone(), hi: r }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

/// How the two roots of a quadratic are represented.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum RootPairKind {
    /// Discriminant is a perfect rational square: both roots exact.
    ExactRational,
    /// Irrational roots: certified enclosing intervals.
    AlgebraicInterval,
}

/// Both real roots of a quadratic, in ascending order (r1 <= r2).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RootPair {
    pub kind: RootPairKind,
    pub r1: RootEnclosure,
    pub r2: RootEnclosure,
}

/// Exact square root of a nonnegative rational, when it is a perfect
/// square. In lowest terms p/d is a square iff p and d are both integer
/// squares.
pub fn rational_sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (p, d) = (q.numer(), q.denom());
    let sp = p.sqrt();
    let sd = d.sqrt();
    if &(&sp * &sp) == p && &(&sd * &sd) == d {
        Some(Rational::new(sp, sd))
    } else {
        None
    }
}

/// Certified rational enclosure [lo, hi] of sqrt(q) for q > 0, with
/// hi - lo <= width, by integer square root followed by exact bisection.
fn sqrt_enclosure(q: &Rational, width: &Rational) -> (Rational, Rational) {
    debug_assert!(q.is_positive());
    let n: BigInt = q.numer() * q.denom();
    let m = n.sqrt();
    let two = Rational::from_integer(2.into());
    let mut lo = Rational::new(m.clone(), q.denom().clone());
    let mut hi = Rational::new(m + BigInt::from(1), q.denom().clone());
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        if &(&mid * &mid) <= q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Both roots of a genuine real-rooted quadratic.
///
/// If the discriminant is a perfect rational square the roots are exact
/// (`RootPairKind::ExactRational`); otherwise each root is returned as a
/// certified rational interval of width at most `tol`.
pub fn quad_roots(q: &Quadratic, tol: f64) -> Result<RootPair, ExactAlgError> {
    assert!(tol > 0.0, "tol must be positive");
    if q.a0.is_zero() {
        return Err(ExactAlgError::DegenerateLeadingCoefficient);
    }
    let disc = discriminant(q);
    if disc.is_negative() {
        return Err(ExactAlgError::ComplexRoots { disc });
    }
    let two_a0 = Rational::from_integer(2.into()) * &q.a0;
    if let Some(s) = rational_sqrt_exact(&disc) {
        let mut r1 = (-&q.a1 - &s) / &two_a0;
        let mut r2 = (-&q.a1 + &s) / &two_a0;
        if r1 > r2 {
            std::mem::swap(&mut r1, &mut r2);
        }
        return Ok(RootPair {
            kind: RootPairKind::ExactRational,
            r1: RootEnclosure::exact(r1),
            r2: RootEnclosure::exact(r2),
        });
    }
    // Interval case. A width w enclosure of sqrt(disc) maps to root
    // enclosures of width w / |2 a0|.
    let tol_q = Rational::from_float(tol).expect("tol is finite");
    let width = &tol_q * &two_a0.abs();
    let (slo, shi) = sqrt_enclosure(&disc, &width);
    let enclose = |t_lo: &Rational, t_hi: &Rational| -> RootEnclosure {
        let e1 = (-&q.a1 + t_lo) / &two_a0;
        let e2 = (-&q.a1 + t_hi) / &two_a0;
        if e1 <= e2 {
            RootEnclosure { lo: e1, hi: e2 }
        } else {
            RootEnclosure { lo: e2, hi: e1 }
        }
    };
    let neg_slo = -&slo;
    let neg_shi = -&shi;
    let minus_branch = enclose(&neg_shi, &neg_slo);
    let plus_branch = enclose(&slo, &shi);
    let (r1, r2) = if minus_branch.midpoint() <= plus_branch.midpoint() {
        (minus_branch, plus_branch)
    } else {
        (plus_branch, minus_branch)
    };
    Ok(RootPair {
        kind: RootPairKind::AlgebraicInterval,
        r1,
        r2,
    })
}
