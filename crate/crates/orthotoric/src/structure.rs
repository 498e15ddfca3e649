use crate::OrthotoricError;
use exactalg::{quad_roots, rat, Poly, Quadratic, Rational, RootEnclosure};
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Default enclosure width for irrational profile roots. Narrow enough
/// that domain endpoints are pinned far below every grid/quadrature
/// tolerance in the workspace.
pub const ROOT_ENCLOSURE_TOL: f64 = 1e-14;

/// Facet labels of the quadrilateral: either one positive rational per
/// facet, or the two-parameter form that scales the x-facets by 1/t1
/// and the y-facets by 1/t2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FacetLabels {
    Explicit {
        #[serde(with = "exactalg::rational_serde")]
        rx1: Rational,
        #[serde(with = "exactalg::rational_serde")]
        rx2: Rational,
        #[serde(with = "exactalg::rational_serde")]
        py1: Rational,
        #[serde(with = "exactalg::rational_serde")]
        py2: Rational,
    },
    TwoParameter {
        #[serde(with = "exactalg::rational_serde")]
        t1: Rational,
        #[serde(with = "exactalg::rational_serde")]
        t2: Rational,
    },
}

/// A planar quadrilateral with vertex data y1 < y2 < x1 < x2 on the two
/// coordinate axes of the ansatz, together with positive facet labels.
///
/// The facets are the lines x = x1, x = x2 (labels rx1, rx2) and
/// y = y1, y = y2 (labels py1, py2); the corresponding conormals are
/// (1/label)(-v, 1) for facet value v.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledQuadrilateral {
    #[serde(with = "exactalg::rational_serde")]
    pub y1: Rational,
    #[serde(with = "exactalg::rational_serde")]
    pub y2: Rational,
    #[serde(with = "exactalg::rational_serde")]
    pub x1: Rational,
    #[serde(with = "exactalg::rational_serde")]
    pub x2: Rational,
    pub labels: FacetLabels,
}

/// Integrality diagnostics for the quadrilateral (quasi-regularity data).
#[derive(Clone, Debug, Serialize)]
pub struct IntegralityReport {
    /// All vertex and label data are rational (true by construction).
    pub rational_data: bool,
    /// Pairwise determinants of scaled facet conormals are rational
    /// (automatic for rational data; kept as an explicit diagnostic).
    pub rational_normal_determinants: bool,
    /// Strict mode only: every scaled conormal is an integer vector and
    /// adjacent pairs span the integer lattice (determinant +-1).
    pub lattice_spanning: Option<bool>,
}

impl LabelledQuadrilateral {
    pub fn new(
        y1: Rational,
        y2: Rational,
        x1: Rational,
        x2: Rational,
        labels: FacetLabels,
    ) -> Result<Self, OrthotoricError> {
        if !(y1 < y2 && y2 < x1 && x1 < x2) {
            return Err(OrthotoricError::RootOrdering);
        }
        let positive = match &labels {
            FacetLabels::Explicit { rx1, rx2, py1, py2 } => {
                rx1.is_positive() && rx2.is_positive() && py1.is_positive() && py2.is_positive()
            }
            FacetLabels::TwoParameter { t1, t2 } => t1.is_positive() && t2.is_positive(),
        };
        if !positive {
            return Err(OrthotoricError::NonpositiveLabel);
        }
        Ok(LabelledQuadrilateral {
            y1,
            y2,
            x1,
            x2,
            labels,
        })
    }

    /// Convenience constructor from integer vertices and the
    /// two-parameter labels.
    pub fn from_integers(
        vertices: (i64, i64, i64, i64),
        t1: i64,
        t2: i64,
    ) -> Result<Self, OrthotoricError> {
        LabelledQuadrilateral::new(
            rat(vertices.0, 1),
            rat(vertices.1, 1),
            rat(vertices.2, 1),
            rat(vertices.3, 1),
            FacetLabels::TwoParameter {
                t1: rat(t1, 1),
                t2: rat(t2, 1),
            },
        )
    }

    /// Per-facet labels (rx1, rx2, py1, py2); the two-parameter form
    /// means rx = 1/t1 and py = 1/t2.
    pub fn explicit_labels(&self) -> (Rational, Rational, Rational, Rational) {
        match &self.labels {
            FacetLabels::Explicit { rx1, rx2, py1, py2 } => {
                (rx1.clone(), rx2.clone(), py1.clone(), py2.clone())
            }
            FacetLabels::TwoParameter { t1, t2 } => {
                let rx = t1.recip();
                let py = t2.recip();
                (rx.clone(), rx, py.clone(), py)
            }
        }
    }

    /// Scaled facet conormals (1/label)(-v, 1) for the four facets, in
    /// the order x1, x2, y1, y2.
    pub fn conormals(&self) -> [(Rational, Rational); 4] {
        let (rx1, rx2, py1, py2) = self.explicit_labels();
        let n = |v: &Rational, label: &Rational| (-v / label, label.recip());
        [
            n(&self.x1, &rx1),
            n(&self.x2, &rx2),
            n(&self.y1, &py1),
            n(&self.y2, &py2),
        ]
    }

    /// Quasi-regularity diagnostics. `strict` additionally demands that
    /// the scaled conormals are integer vectors and that every adjacent
    /// (x-facet, y-facet) pair has determinant +-1, i.e. spans the
    /// integer lattice.
    pub fn integrality(&self, strict: bool) -> IntegralityReport {
        // Vertex and label data are Rational by type; the pairwise
        // determinants of rational conormals are rational identically.
        let lattice_spanning = strict.then(|| {
            let ns = self.conormals();
            let is_int = |q: &Rational| q.denom() == &exactalg::BigInt::from(1);
            let all_int = ns.iter().all(|(u, v)| is_int(u) && is_int(v));
            let one = Rational::from_integer(1.into());
            let mut spans = true;
            for xi in 0..2 {
                for yj in 2..4 {
                    let det = &ns[xi].0 * &ns[yj].1 - &ns[xi].1 * &ns[yj].0;
                    if det.abs() != one {
                        spans = false;
                    }
                }
            }
            all_int && spans
        });
        IntegralityReport {
            rational_data: true,
            rational_normal_determinants: true,
            lattice_spanning,
        }
    }
}

/// The two profile polynomials (A in x, B in y), the torsion parameter
/// lambda^2, and the certified domain rectangle cut out by their roots:
/// (x1, x2) from A and (y1, y2) from B with y1 < y2 < x1 < x2.
///
/// Invariants enforced on construction:
/// - strict root ordering y1 < y2 < x1 < x2 (certified at enclosure
///   precision);
/// - A > 0 at the x-midpoint and B > 0 at the y-midpoint, plus negative
///   leading coefficients for genuinely quadratic profiles;
/// - lambda_sq >= 0;
/// - for quadratic pairs, -(a0 + b0) > 0 (positive scalar curvature at
///   scale).
#[derive(Clone, Debug)]
pub struct OrthotoricStructure {
    a: Poly,
    b: Poly,
    lambda_sq: Rational,
    x1: RootEnclosure,
    x2: RootEnclosure,
    y1: RootEnclosure,
    y2: RootEnclosure,
}

impl OrthotoricStructure {
    /// Build from quadratic profiles; the domain is computed from the
    /// certified quadratic roots.
    pub fn from_quadratics(
        a: &Quadratic,
        b: &Quadratic,
        lambda_sq: Rational,
    ) -> Result<Self, OrthotoricError> {
        let ra = quad_roots(a, ROOT_ENCLOSURE_TOL)?;
        let rb = quad_roots(b, ROOT_ENCLOSURE_TOL)?;
        Self::with_domain(
            a.to_poly(),
            b.to_poly(),
            lambda_sq,
            (ra.r1, ra.r2),
            (rb.r1, rb.r2),
        )
    }

    /// Build from general polynomial profiles with an explicitly given
    /// domain rectangle (x-interval from `x_roots`, y-interval from
    /// `y_roots`). The same ordering/positivity invariants are checked;
    /// boundary conditions are the business of `boundary_check`, not of
    /// this constructor.
    pub fn with_domain(
        a: Poly,
        b: Poly,
        lambda_sq: Rational,
        x_roots: (RootEnclosure, RootEnclosure),
        y_roots: (RootEnclosure, RootEnclosure),
    ) -> Result<Self, OrthotoricError> {
        if lambda_sq.is_negative() {
            return Err(OrthotoricError::NotAdmissible { lambda_sq });
        }
        let (x1, x2) = x_roots;
        let (y1, y2) = y_roots;
        // Strict ordering, certified through the enclosure bounds.
        let ordered = y1.hi < y2.lo && y2.hi < x1.lo && x1.hi < x2.lo;
        if !ordered {
            return Err(OrthotoricError::RootOrdering);
        }
        let two = rat(2, 1);
        let xmid = (&x1.hi + &x2.lo) / &two;
        let ymid = (&y1.hi + &y2.lo) / &two;
        if !a.eval(&xmid).is_positive() || !b.eval(&ymid).is_positive() {
            return Err(OrthotoricError::ProfileNotPositive);
        }
        let dega = a.degree().unwrap_or(0);
        let degb = b.degree().unwrap_or(0);
        if dega == 2 && degb == 2 {
            let a0 = a.coeff(2);
            let b0 = b.coeff(2);
            if !a0.is_negative() || !b0.is_negative() {
                return Err(OrthotoricError::ProfileNotPositive);
            }
            // -(a0 + b0) > 0: positive scalar curvature at scale.
            if !(-(&a0 + &b0)).is_positive() {
                return Err(OrthotoricError::ProfileNotPositive);
            }
        }
        Ok(OrthotoricStructure {
            a,
            b,
            lambda_sq,
            x1,
            x2,
            y1,
            y2,
        })
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn lambda_sq(&self) -> &Rational {
        &self.lambda_sq
    }

    /// lambda = +sqrt(lambda_sq) (the sign choice is an isometry).
    pub fn lambda(&self) -> f64 {
        self.lambda_sq.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    pub fn x_roots(&self) -> (&RootEnclosure, &RootEnclosure) {
        (&self.x1, &self.x2)
    }

    pub fn y_roots(&self) -> (&RootEnclosure, &RootEnclosure) {
        (&self.y1, &self.y2)
    }

    /// Inner rational bounds of the open domain rectangle
    /// (x1, x2) x (y1, y2): guaranteed interior for any certification
    /// width.
    pub fn domain_x(&self) -> (Rational, Rational) {
        (self.x1.hi.clone(), self.x2.lo.clone())
    }

    pub fn domain_y(&self) -> (Rational, Rational) {
        (self.y1.hi.clone(), self.y2.lo.clone())
    }

    pub fn domain_x_f64(&self) -> (f64, f64) {
        let (lo, hi) = self.domain_x();
        (
            lo.to_f64().unwrap_or(f64::NAN),
            hi.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn domain_y_f64(&self) -> (f64, f64) {
        let (lo, hi) = self.domain_y();
        (
            lo.to_f64().unwrap_or(f64::NAN),
            hi.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Quadratic views of the profiles when both have degree <= 2.
    pub fn quadratics(&self) -> Option<(Quadratic, Quadratic)> {
        Some((Quadratic::from_poly(&self.a)?, Quadratic::from_poly(&self.b)?))
    }

    /// The structure (sA, sB, s*lambda), s > 0: same quadrilateral,
    /// scaled labels 1/(s t).
    pub fn scaled(&self, s: &Rational) -> Result<Self, OrthotoricError> {
        if !s.is_positive() {
            return Err(OrthotoricError::NonpositiveLabel);
        }
        OrthotoricStructure::with_domain(
            self.a.scale(s),
            self.b.scale(s),
            &self.lambda_sq * &(s * s),
            (self.x1.clone(), self.x2.clone()),
            (self.y1.clone(), self.y2.clone()),
        )
    }
}

/// Serialized form of a structure: profile coefficient lists
/// (highest-degree first, "p/q" strings) plus lambda_sq. The optional
/// domain fields are only needed when a profile has degree > 2 (the
/// quadratic domain is recomputed from certified roots on load).
#[derive(Serialize, Deserialize)]
struct StructureRepr {
    #[serde(rename = "A")]
    a: Poly,
    #[serde(rename = "B")]
    b: Poly,
    #[serde(with = "exactalg::rational_serde")]
    lambda_sq: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain_x: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain_y: Option<[String; 2]>,
}

impl Serialize for OrthotoricStructure {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let quadratic = self.a.degree().unwrap_or(0) <= 2 && self.b.degree().unwrap_or(0) <= 2;
        let fmt = |e: &RootEnclosure| exactalg::format_rational(&e.midpoint());
        let repr = StructureRepr {
            a: self.a.clone(),
            b: self.b.clone(),
            lambda_sq: self.lambda_sq.clone(),
            domain_x: (!quadratic).then(|| [fmt(&self.x1), fmt(&self.x2)]),
            domain_y: (!quadratic).then(|| [fmt(&self.y1), fmt(&self.y2)]),
        };
        repr.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for OrthotoricStructure {
    fn deserialize<D: serde::Deserializer<'de>>(des: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = StructureRepr::deserialize(des)?;
        let quadratic = repr.a.degree().unwrap_or(0) <= 2 && repr.b.degree().unwrap_or(0) <= 2;
        if quadratic && repr.domain_x.is_none() && repr.domain_y.is_none() {
            let a = Quadratic::from_poly(&repr.a).expect("degree checked");
            let b = Quadratic::from_poly(&repr.b).expect("degree checked");
            return OrthotoricStructure::from_quadratics(&a, &b, repr.lambda_sq)
                .map_err(D::Error::custom);
        }
        let parse_pair = |p: &Option<[String; 2]>| -> Result<(RootEnclosure, RootEnclosure), D::Error> {
            let pair = p
                .as_ref()
                .ok_or_else(|| D::Error::custom("domain_x/domain_y required for degree > 2 profiles"))?;
            let lo = exactalg::parse_rational(&pair[0]).map_err(D::Error::custom)?;
            let hi = exactalg::parse_rational(&pair[1]).map_err(D::Error::custom)?;
            Ok((RootEnclosure::exact(lo), RootEnclosure::exact(hi)))
        };
        let xr = parse_pair(&repr.domain_x)?;
        let yr = parse_pair(&repr.domain_y)?;
        OrthotoricStructure::with_domain(repr.a, repr.b, repr.lambda_sq, xr, yr)
            .map_err(D::Error::custom)
    }
}

/// A rectangular sample of one scalar field over the domain, row-major
/// with the x-index outermost: `values[i * ny + j]` is the field at
/// (xs[i], ys[j]).
#[derive(Clone, Debug, Serialize)]
pub struct GridSample {
    pub field_name: String,
    pub nx: usize,
    pub ny: usize,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
}

impl GridSample {
    /// Chebyshev-interior sampling nodes for a structure's domain:
    /// strictly inside the rectangle, so facet boundaries (where the
    /// labels, not the residual, govern regularity) are never touched.
    pub fn nodes(s: &OrthotoricStructure, nx: usize, ny: usize) -> (Vec<f64>, Vec<f64>) {
        let (xlo, xhi) = s.domain_x_f64();
        let (ylo, yhi) = s.domain_y_f64();
        (
            quadrature::chebyshev_interior(nx, xlo, xhi),
            quadrature::chebyshev_interior(ny, ylo, yhi),
        )
    }

    pub fn build(
        field_name: impl Into<String>,
        xs: Vec<f64>,
        ys: Vec<f64>,
        f: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let mut values = Vec::with_capacity(xs.len() * ys.len());
        for x in &xs {
            for y in &ys {
                values.push(f(*x, *y));
            }
        }
        GridSample {
            field_name: field_name.into(),
            nx: xs.len(),
            ny: ys.len(),
            xs,
            ys,
            values,
        }
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ny + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, v| m.min(*v))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v))
    }

    /// CSV rows "x,y,value" (row-major, x outermost), Unix newlines.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,value\n");
        for (i, x) in self.xs.iter().enumerate() {
            for (j, y) in self.ys.iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", x, y, self.value(i, j)));
            }
        }
        out
    }
}

/// Exact rational Chebyshev-free midpoint grid is not used; all float
/// grids in this crate go through [`GridSample::nodes`]. Rational
/// sample points for exactness checks are generated here instead:
/// `count` equispaced strictly interior rational points of an interval.
pub fn rational_interior_points(lo: &Rational, hi: &Rational, count: usize) -> Vec<Rational> {
    let n = count.max(1);
    let denom = rat((n + 1) as i64, 1);
    let span = hi - lo;
    (1..=n)
        .map(|i| lo + &(&span * &rat(i as i64, 1)) / &denom)
        .collect()
}

/// Evaluate any scalar-kernel closure on the nodes of a structure.
pub(crate) fn sample_scalar<F: Fn(f64, f64) -> f64>(
    s: &OrthotoricStructure,
    name: &str,
    nx: usize,
    ny: usize,
    f: F,
) -> GridSample {
    let (xs, ys) = GridSample::nodes(s, nx, ny);
    GridSample::build(name, xs, ys, f)
}
