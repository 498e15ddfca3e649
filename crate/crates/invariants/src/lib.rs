//! Cohomological constants and slope arithmetic from supplied
//! intersection numbers: the normalizing constant c_{alpha,beta}, the
//! two-constraint topology gate for the surface case, and the
//! large-time slope of the energy along a test configuration.
//!
//! Everything here is plain arithmetic on pairing numbers computed
//! elsewhere (for toric structures, by polytope quadrature); the
//! records deliberately store raw cup-product values and apply the
//! factorial normalizations internally.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InvariantsError {
    #[error("topology gate requires complex dimension 2, got n = {n}")]
    InvalidDimension { n: u32 },
    #[error("alpha_top must be positive, got {value}")]
    NonpositiveVolume { value: f64 },
}

/// Intersection numbers of a polarized surface-like class pair
/// (alpha, beta) in complex dimension n:
///
///   c1_sq_alpha  = c1^2 . alpha^{n-2}
///   beta_sq_alpha = beta^2 . alpha^{n-2}
///   alpha_top    = alpha^n  (> 0: alpha is a volume class)
///   beta_alpha   = beta . alpha^{n-1}
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntersectionData {
    pub n: u32,
    pub c1_sq_alpha: f64,
    pub beta_sq_alpha: f64,
    pub alpha_top: f64,
    pub beta_alpha: f64,
}

impl IntersectionData {
    pub fn validate(&self) -> Result<(), InvariantsError> {
        if !(self.alpha_top > 0.0) {
            return Err(InvariantsError::NonpositiveVolume {
                value: self.alpha_top,
            });
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for IntersectionData {
    fn deserialize<D: serde::Deserializer<'de>>(des: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: u32,
            c1_sq_alpha: f64,
            beta_sq_alpha: f64,
            alpha_top: f64,
            beta_alpha: f64,
        }
        let r = Raw::deserialize(des)?;
        let d = IntersectionData {
            n: r.n,
            c1_sq_alpha: r.c1_sq_alpha,
            beta_sq_alpha: r.beta_sq_alpha,
            alpha_top: r.alpha_top,
            beta_alpha: r.beta_alpha,
        };
        d.validate().map_err(serde::de::Error::custom)?;
        Ok(d)
    }
}

/// Intersection numbers on the total space of a test configuration
/// over the projective line, complex dimension n downstairs (n + 1
/// upstairs). Raw un-normalized powers:
///
///   K_rel_sq_A = c1(relative canonical)^2 . A^{n-1}
///   B_sq_A     = B^2 . A^{n-1}
///   A_top      = A^{n+1}
///   c_ab       = the constant c_{alpha,beta} of the central fiber
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestConfigData {
    pub n: u32,
    #[serde(rename = "K_rel_sq_A")]
    pub k_rel_sq_a: f64,
    #[serde(rename = "B_sq_A")]
    pub b_sq_a: f64,
    #[serde(rename = "A_top")]
    pub a_top: f64,
    pub c_ab: f64,
}

/// The normalizing constant
///
///   c_{alpha,beta} = 2 n (n - 1) (c1^2 + beta^2) . alpha^{n-2} / alpha^n,
///
/// zero in complex dimension 1 (the n - 1 factor).
///
/// Panics if `d.alpha_top <= 0`.
pub fn c_alpha_beta(d: &IntersectionData) -> f64 {
    assert!(d.alpha_top > 0.0, "alpha_top must be positive");
    let n = d.n as f64;
    2.0 * n * (n - 1.0) * (d.c1_sq_alpha + d.beta_sq_alpha) / d.alpha_top
}

/// Outcome of the two topological constraints in complex dimension 2:
/// primitivity beta . alpha = 0 and closure c1^2 + beta^2 = 0, each
/// judged against tol times a common magnitude scale.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TopologyReport {
    /// |beta . alpha|
    pub primitivity_residual: f64,
    /// |c1^2 + beta^2| (contracted with alpha^{n-2})
    pub closure_residual: f64,
    /// max(1, |c1_sq_alpha|, |beta_sq_alpha|, alpha_top)
    pub scale: f64,
    pub tol: f64,
    pub primitivity_pass: bool,
    pub closure_pass: bool,
    pub pass: bool,
}

/// Check the dimension-2 constraints beta . alpha = 0 and
/// c1^2 + beta^2 = 0 within `tol` relative to the natural magnitude of
/// the supplied pairings.
pub fn topology_gate(d: &IntersectionData, tol: f64) -> Result<TopologyReport, InvariantsError> {
    if d.n != 2 {
        return Err(InvariantsError::InvalidDimension { n: d.n });
    }
    d.validate()?;
    let scale = 1.0f64
        .max(d.c1_sq_alpha.abs())
        .max(d.beta_sq_alpha.abs())
        .max(d.alpha_top);
    let primitivity_residual = d.beta_alpha.abs();
    let closure_residual = (d.c1_sq_alpha + d.beta_sq_alpha).abs();
    let primitivity_pass = primitivity_residual <= tol * scale;
    let closure_pass = closure_residual <= tol * scale;
    Ok(TopologyReport {
        primitivity_residual,
        closure_residual,
        scale,
        tol,
        primitivity_pass,
        closure_pass,
        pass: primitivity_pass && closure_pass,
    })
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Large-time slope of the energy along a test configuration:
///
///   -(2 pi)^{n+1} [ (K_rel_sq_A + B_sq_A) / (n-1)!
///                   - (c_ab / 2) A_top / (n+1)! ]
///
/// The inputs are raw cup products; the factorial divisions implement
/// the normalized powers A^[k] = A^k / k! used by the displayed
/// formula. Affine in each pairing field.
pub fn e_na_slope(t: &TestConfigData) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let lead = two_pi.powi(t.n as i32 + 1);
    let curvature_term = (t.k_rel_sq_a + t.b_sq_a) / factorial(t.n - 1);
    let volume_term = 0.5 * t.c_ab * t.a_top / factorial(t.n + 1);
    -lead * (curvature_term - volume_term)
}
