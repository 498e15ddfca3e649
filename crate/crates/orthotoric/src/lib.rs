//! Orthotoric structures on labelled quadrilaterals: the two-profile
//! ansatz, its sixth-order reduced residual, admissibility and
//! lambda-solvability, explicit solution families, enumeration, and
//! cohomological pairings by polytope quadrature.
//!
//! A structure is a pair of one-variable profile polynomials A(x), B(y)
//! with root rectangles y1 < y2 < x1 < x2, plus a torsion parameter
//! lambda^2 >= 0. For quadratic profiles the reduced residual is the
//! constant 2(a0+b0)(a2+b2) - (1/2)(a1+b1)^2 - 2 lambda^2, which is the
//! load-bearing identity behind every solution family in this crate.

mod families;
mod pairings;
mod residual;
mod structure;
mod verify;

pub use families::{
    boundary_check, cgms_family, cgms_triples, enumerate_quadrilateral_solutions, legendre_pair,
    normalized_profiles, BoundaryReport, EnumeratedSolution, FacetCheck,
};
pub use pairings::{polytope_pairings, PairingReport, QUADRATURE_DOUBLING_REL};
pub use residual::{
    admissibility_f, admissibility_quadratic, full_residual_profiles, quadratic_residual_constant,
    residual_jacobian, residual_jacobian_at, solve_lambda, unit_directions, CoefficientDirection,
    JetEval, ProfileJet, ResidualKernel,
};
pub use structure::{
    rational_interior_points, FacetLabels, GridSample, IntegralityReport, LabelledQuadrilateral,
    OrthotoricStructure, ROOT_ENCLOSURE_TOL,
};
pub use verify::{bhe_lift_data, sample_field, verify_solution, FieldKind, LiftData, VerificationReport};

use exactalg::Rational;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OrthotoricError {
    #[error("evaluation point lies on the singular diagonal x = y")]
    SingularPoint,
    #[error("profile pair is not admissible: solved lambda^2 = {lambda_sq} < 0")]
    NotAdmissible { lambda_sq: Rational },
    #[error("structure roots do not match the quadrilateral vertices")]
    RootMismatch,
    #[error("degenerate family parameter d = {d} (needs d > 0)")]
    DegenerateD { d: Rational },
    #[error("root ordering y1 < y2 < x1 < x2 violated")]
    RootOrdering,
    #[error("coincident roots: the profile degenerates to a double root")]
    DoubleRoot,
    #[error("quadrature did not converge for {pairing}: |delta| = {delta:e} at scale {scale:e}")]
    QuadratureNotConverged {
        pairing: &'static str,
        delta: f64,
        scale: f64,
    },
    #[error("scalar curvature is not positive: R = {value}")]
    NonpositiveScalarCurvature { value: f64 },
    #[error("facet labels and scaling parameters must be positive")]
    NonpositiveLabel,
    #[error("profile is not positive on its domain interval")]
    ProfileNotPositive,
    #[error(transparent)]
    Algebra(#[from] exactalg::ExactAlgError),
    #[error("{0}")]
    InvalidInput(String),
}
