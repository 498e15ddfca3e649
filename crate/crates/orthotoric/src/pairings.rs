use crate::{OrthotoricError, OrthotoricStructure};
use num_traits::ToPrimitive;
use serde::Serialize;
use std::f64::consts::PI;

/// Relative agreement required between quadrature orders q and 2q.
pub const QUADRATURE_DOUBLING_REL: f64 = 1e-9;

/// The five cohomological pairings of a structure, computed as double
/// integrals of closed-form densities over the domain rectangle, times
/// the angular volume factor (2 pi)^2.
///
/// Densities (with P = -(A'' + B'')/(4(x-y)) and
/// Qc = -(x-y)(A'' - B'')/4 + (A' + B')/2, in the volume normalization
/// omega^2 = (x - y) dx dy dtheta1 dtheta2):
///
///   omega_omega: (x - y)
///   theta_theta: -lambda^2 / (x - y)^3
///   rho_omega:   -(A'' + B'')/4
///   rho_rho:     (x - y) (P^2 - Qc^2/(x - y)^4)
///   theta_omega: (x - y)(c_x + c_y)/2 where (c_x, c_y) are the two
///                theta densities — identically zero (primitivity).
///
/// The `_abs` fields integrate the |density| and provide the natural
/// magnitude scale for near-cancellation checks (for several families
/// rho_rho integrates to zero through genuine sign changes).
#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub theta_theta: f64,
    pub rho_rho: f64,
    pub rho_omega: f64,
    pub theta_omega: f64,
    pub omega_omega: f64,
    pub theta_theta_abs: f64,
    pub rho_rho_abs: f64,
    pub rho_omega_abs: f64,
    pub theta_omega_abs: f64,
    pub omega_omega_abs: f64,
    pub quad_order: usize,
}

struct PairingSums {
    values: [f64; 5],
    abs: [f64; 5],
}

fn pairing_sums(s: &OrthotoricStructure, order: usize) -> PairingSums {
    let kernel = s.kernel::<f64>();
    let lambda_sq = s.lambda_sq().to_f64().unwrap_or(f64::NAN);
    let (xlo, xhi) = s.domain_x_f64();
    let (ylo, yhi) = s.domain_y_f64();
    let (nodes, weights) = quadrature::gauss_legendre(order);
    let midx = 0.5 * (xlo + xhi);
    let halfx = 0.5 * (xhi - xlo);
    let midy = 0.5 * (ylo + yhi);
    let halfy = 0.5 * (yhi - ylo);
    let mut values = [0.0f64; 5];
    let mut abs = [0.0f64; 5];
    for (xi, wx) in nodes.iter().zip(&weights) {
        let x = midx + halfx * xi;
        let [_, a1, a2, _, _] = kernel.a.eval_all(&x);
        for (yj, wy) in nodes.iter().zip(&weights) {
            let y = midy + halfy * yj;
            let [_, b1, b2, _, _] = kernel.b.eval_all(&y);
            let w = wx * wy;
            let d = x - y;
            let sum2 = a2 + b2;
            let p = -sum2 / (4.0 * d);
            let qc = -d * (a2 - b2) / 4.0 + (a1 + b1) / 2.0;

            let lam = lambda_sq.sqrt();
            let cx = lam / (d * d);
            let cy = -cx;

            let dens = [
                -lambda_sq / (d * d * d),      // theta_theta
                d * (p * p - (qc * qc) / (d * d * d * d)), // rho_rho
                -sum2 / 4.0,                   // rho_omega
                d * (cx + cy) / 2.0,           // theta_omega
                d,                             // omega_omega
            ];
            for k in 0..5 {
                values[k] += w * dens[k];
                abs[k] += w * dens[k].abs();
            }
        }
    }
    let jac = halfx * halfy;
    let angular = (2.0 * PI) * (2.0 * PI);
    for k in 0..5 {
        values[k] *= jac * angular;
        abs[k] *= jac * angular;
    }
    PairingSums { values, abs }
}

/// Gauss-Legendre quadrature of the five pairing densities over the
/// domain rectangle (times the angular factor (2 pi)^2), with a
/// convergence check: the values at orders `quad_order` and
/// `2 quad_order` must agree to [`QUADRATURE_DOUBLING_REL`] relative to
/// the larger of the value and the |density| mass. The converged
/// (doubled-order) values are returned.
pub fn polytope_pairings(
    s: &OrthotoricStructure,
    quad_order: usize,
) -> Result<PairingReport, OrthotoricError> {
    let order = quad_order.max(2);
    let coarse = pairing_sums(s, order);
    let fine = pairing_sums(s, 2 * order);
    let names = [
        "theta_theta",
        "rho_rho",
        "rho_omega",
        "theta_omega",
        "omega_omega",
    ];
    for k in 0..5 {
        let delta = (coarse.values[k] - fine.values[k]).abs();
        let scale = fine.values[k].abs().max(fine.abs[k]);
        if delta > QUADRATURE_DOUBLING_REL * scale {
            return Err(OrthotoricError::QuadratureNotConverged {
                pairing: names[k],
                delta,
                scale,
            });
        }
    }
    Ok(PairingReport {
        theta_theta: fine.values[0],
        rho_rho: fine.values[1],
        rho_omega: fine.values[2],
        theta_omega: fine.values[3],
        omega_omega: fine.values[4],
        theta_theta_abs: fine.abs[0],
        rho_rho_abs: fine.abs[1],
        rho_omega_abs: fine.abs[2],
        theta_omega_abs: fine.abs[3],
        omega_omega_abs: fine.abs[4],
        quad_order: order,
    })
}
