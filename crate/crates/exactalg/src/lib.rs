//! Exact rational arithmetic, dense rational polynomials, and certified
//! root pairs for real-rooted quadratics.
//!
//! This crate is the arithmetic bedrock of the workspace: everything
//! upstairs (profile construction, residual kernels, admissibility
//! checks) either runs exactly on [`Rational`] data or generically over
//! the [`Scalar`] trait so the same kernel serves both exact identity
//! checks and floating-point grids.

mod poly;
mod quadratic;
mod scalar;

pub use poly::Poly;
pub use quadratic::{
    discriminant, eval_poly, quad_roots, rational_sqrt_exact, resultant_quadratics, Quadratic,
    RootEnclosure, RootPair, RootPairKind,
};
pub use scalar::{RealScalar, Scalar};

use num_traits::{Signed, Zero};
use thiserror::Error;

pub use num_bigint::BigInt;

/// Arbitrary-precision rational number, always reduced with positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for the exact rational n/d.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[derive(Debug, Error)]
pub enum ExactAlgError {
    #[error("leading coefficient is zero: not a genuine quadratic")]
    DegenerateLeadingCoefficient,
    #[error("negative discriminant {disc}: the roots are complex")]
    ComplexRoots { disc: Rational },
    #[error("cannot parse {input:?} as a rational number")]
    ParseRational { input: String },
}

/// Parse `"p/q"`, a plain integer `"p"`, or a finite decimal like
/// `"1.5"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, ExactAlgError> {
    let raw = s;
    let fail = || ExactAlgError::ParseRational {
        input: raw.to_string(),
    };
    let s = s.trim();
    if s.is_empty() {
        return Err(fail());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| fail())?;
        let d: BigInt = den.trim().parse().map_err(|_| fail())?;
        if d == BigInt::from(0) {
            return Err(fail());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let ip: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::from(0)
        } else {
            int_part.parse().map_err(|_| fail())?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(fail());
        }
        let fp: BigInt = frac_part.parse().map_err(|_| fail())?;
        let scale = BigInt::from(10).pow(frac_part.len() as u32);
        let frac = Rational::new(if negative { -fp } else { fp }, scale);
        return Ok(Rational::from_integer(ip) + frac);
    }
    let n: BigInt = s.parse().map_err(|_| fail())?;
    Ok(Rational::from_integer(n))
}

/// Canonical text form: `"p"` when the denominator is 1, else `"p/q"`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Serde adapter for [`Rational`] fields: serializes through
/// [`format_rational`], deserializes either `"p/q"` text or a JSON
/// integer. Use as `#[serde(with = "exactalg::rational_serde")]`.
pub mod rational_serde {
    use super::{format_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(des: D) -> Result<Rational, D::Error> {
        let repr = crate::poly::RationalRepr::deserialize(des)?;
        repr.into_rational().map_err(serde::de::Error::custom)
    }
}

/// Number of sign changes in a sequence, skipping zeros.
fn sign_changes(vals: &[Rational]) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for v in vals {
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if let Some(was) = last {
            if was != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}

/// Number of distinct real roots of `p` in the half-open interval
/// (a, b], counted exactly by a Sturm chain. Endpoints must satisfy
/// a < b.
pub fn count_roots_half_open(p: &Poly, a: &Rational, b: &Rational) -> usize {
    assert!(a < b, "empty interval");
    if p.is_zero() {
        panic!("zero polynomial has no well-defined root count");
    }
    if p.degree() == Some(0) {
        return 0;
    }
    // Sturm chain: p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k).
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        chain.push(-&r);
    }
    let at = |x: &Rational| -> Vec<Rational> { chain.iter().map(|q| q.eval(x)).collect() };
    let sa = sign_changes(&at(a));
    let sb = sign_changes(&at(b));
    sa.saturating_sub(sb)
}
