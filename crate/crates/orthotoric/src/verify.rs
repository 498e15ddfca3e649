use crate::{GridSample, OrthotoricError, OrthotoricStructure};
use num_traits::ToPrimitive;
use serde::Serialize;

/// Grid verification summary for one structure.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    /// Largest |full residual| over the interior grid.
    pub max_abs_residual: f64,
    /// Largest magnitude among the individual residual constituents —
    /// the scale against which the tolerance is read.
    pub residual_scale: f64,
    /// Smallest scalar curvature over the grid (must stay positive).
    pub min_scalar_curvature: f64,
    pub nx: usize,
    pub ny: usize,
    pub tol: f64,
}

/// Evaluate the full residual and the scalar curvature on an nx x ny
/// Chebyshev-interior grid. Passes iff
/// max |residual| <= tol * (max over the grid of the largest individual
/// residual-term magnitude) and min R > 0.
pub fn verify_solution(
    s: &OrthotoricStructure,
    nx: usize,
    ny: usize,
    tol: f64,
) -> VerificationReport {
    let kernel = s.kernel::<f64>();
    let (xs, ys) = GridSample::nodes(s, nx, ny);
    let mut max_abs = 0.0f64;
    let mut scale = 0.0f64;
    let mut min_r = f64::INFINITY;
    for x in &xs {
        let a2 = kernel.a.eval_d2(x);
        for y in &ys {
            let terms = kernel.terms(x, y);
            let res: f64 = terms.iter().sum();
            max_abs = max_abs.max(res.abs());
            for t in terms {
                scale = scale.max(t.abs());
            }
            let r = -(a2 + kernel.b.eval_d2(y)) / (x - y);
            min_r = min_r.min(r);
        }
    }
    let residual_ok = if scale > 0.0 {
        max_abs <= tol * scale
    } else {
        max_abs == 0.0
    };
    VerificationReport {
        pass: residual_ok && min_r > 0.0,
        max_abs_residual: max_abs,
        residual_scale: scale,
        min_scalar_curvature: min_r,
        nx,
        ny,
        tol,
    }
}

/// The transversal data of the six-dimensional lift at one point: the
/// metric of the lifted space restricts on the transversal slice to
/// (R/2) times the four-dimensional metric, with unit coefficients on
/// the two fiber directions. The full six-manifold tensor assembly is
/// intentionally out of scope; this record carries exactly the scalars
/// the lift consumes. Under the scaling (A, B, lambda) ->
/// (sA, sB, s lambda) the transversal factor scales by s and the fiber
/// block is unchanged.
#[derive(Clone, Debug, Serialize)]
pub struct LiftData {
    pub fiber_metric_coefficient: f64,
    pub transversal_scaling: f64,
}

/// Requires R(x, y) > 0; errors with the offending value otherwise.
pub fn bhe_lift_data(
    s: &OrthotoricStructure,
    x: f64,
    y: f64,
) -> Result<LiftData, OrthotoricError> {
    let r: f64 = s.scalar_curvature(&x, &y)?;
    if !(r > 0.0) {
        return Err(OrthotoricError::NonpositiveScalarCurvature { value: r });
    }
    Ok(LiftData {
        fiber_metric_coefficient: 1.0,
        transversal_scaling: 0.5 * r,
    })
}

/// Samplable scalar fields of a structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    ScalarCurvature,
    Residual,
    /// First diagonal density of the primitive torsion form,
    /// lambda/(x-y)^2; the second is its pointwise negation.
    ThetaDensity,
}

impl FieldKind {
    pub fn name(&self) -> &'static str {
        match self {
            FieldKind::ScalarCurvature => "scalar_curvature",
            FieldKind::Residual => "residual",
            FieldKind::ThetaDensity => "theta_density",
        }
    }

    pub fn parse(s: &str) -> Option<FieldKind> {
        match s {
            "scalar-curvature" | "scalar_curvature" => Some(FieldKind::ScalarCurvature),
            "residual" => Some(FieldKind::Residual),
            "theta-densities" | "theta-density" | "theta_density" => Some(FieldKind::ThetaDensity),
            _ => None,
        }
    }
}

/// Sample one field on the interior Chebyshev grid.
pub fn sample_field(
    s: &OrthotoricStructure,
    field: FieldKind,
    nx: usize,
    ny: usize,
) -> GridSample {
    let kernel = s.kernel::<f64>();
    let lambda = s
        .lambda_sq()
        .to_f64()
        .unwrap_or(f64::NAN)
        .sqrt();
    crate::structure::sample_scalar(s, field.name(), nx, ny, move |x, y| match field {
        FieldKind::ScalarCurvature => {
            -(kernel.a.eval_d2(&x) + kernel.b.eval_d2(&y)) / (x - y)
        }
        FieldKind::Residual => kernel.residual(&x, &y),
        FieldKind::ThetaDensity => lambda / ((x - y) * (x - y)),
    })
}
