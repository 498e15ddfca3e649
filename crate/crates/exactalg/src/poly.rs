use crate::{format_rational, parse_rational, Rational, Scalar};
use num_traits::Zero;
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense univariate polynomial with exact rational coefficients, stored
/// highest-degree first. The zero polynomial has an empty coefficient
/// vector; otherwise the leading coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    /// Build from highest-first coefficients; leading zeros are stripped.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut coeffs = coeffs;
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) => {
                coeffs.drain(..k);
                Poly { coeffs }
            }
            None => Poly { coeffs: Vec::new() },
        }
    }

    /// Build from highest-first integer coefficients.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial x.
    pub fn x() -> Self {
        Poly::from_i64(&[1, 0])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest-first coefficients (empty for the zero polynomial).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.first()
    }

    /// Coefficient of x^power (zero when absent).
    pub fn coeff(&self, power: usize) -> Rational {
        let n = self.coeffs.len();
        if power < n {
            self.coeffs[n - 1 - power].clone()
        } else {
            Rational::zero()
        }
    }

    /// Horner evaluation over any [`Scalar`].
    pub fn eval<S: Scalar>(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in &self.coeffs {
            acc = acc * x.clone() + S::from_rational(c);
        }
        acc
    }

    /// Exact derivative.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let deg = self.coeffs.len() - 1;
        let coeffs = self
            .coeffs
            .iter()
            .take(deg)
            .enumerate()
            .map(|(i, c)| c * Rational::from_integer(((deg - i) as i64).into()))
            .collect();
        Poly::new(coeffs)
    }

    /// n-th derivative.
    pub fn derivative_n(&self, n: usize) -> Poly {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derivative();
        }
        p
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division: `self = divisor * quotient + remainder` with
    /// `deg remainder < deg divisor`. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dlead = divisor.coeffs[0].clone();
        let ddeg = divisor.coeffs.len() - 1;
        let mut rem: Vec<Rational> = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let qlen = rem.len() - ddeg;
        let mut quot = vec![Rational::zero(); qlen];
        for i in 0..qlen {
            let factor = &rem[i] / &dlead;
            if !factor.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    let t = &rem[i + j] - &(d * &factor);
                    rem[i + j] = t;
                }
            }
            quot[i] = factor;
        }
        (Poly::new(quot), Poly::new(rem[qlen..].to_vec()))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[n - self.coeffs.len() + i] = c.clone();
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            let k = n - rhs.coeffs.len() + i;
            let t = &out[k] + c;
            out[k] = t;
        }
        Poly::new(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let n = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = &out[i + j] + &(a * b);
                out[i + j] = t;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let deg = self.coeffs.len() - 1;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let p = deg - i;
            match p {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}*x", format_rational(c))?,
                _ => write!(f, "{}*x^{}", format_rational(c), p)?,
            }
        }
        Ok(())
    }
}

// JSON form: an array of "p/q" strings (integers allowed), highest-first.
impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&format_rational(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PolyVisitor;
        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = Poly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of rational coefficients, highest degree first")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Poly, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(v) = seq.next_element::<RationalRepr>()? {
                    coeffs.push(v.into_rational().map_err(de::Error::custom)?);
                }
                Ok(Poly::new(coeffs))
            }
        }
        deserializer.deserialize_seq(PolyVisitor)
    }
}

/// Accepts `"p/q"`, `"p"`, or a JSON integer for a rational value.
#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum RationalRepr {
    Text(String),
    Int(i64),
}

impl RationalRepr {
    pub(crate) fn into_rational(self) -> Result<Rational, crate::ExactAlgError> {
        match self {
            RationalRepr::Text(s) => parse_rational(&s),
            RationalRepr::Int(n) => Ok(Rational::from_integer(n.into())),
        }
    }
}
