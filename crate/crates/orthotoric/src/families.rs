use crate::{
    admissibility_f, solve_lambda, FacetLabels, LabelledQuadrilateral, OrthotoricError,
    OrthotoricStructure,
};
use exactalg::{rat, Quadratic, Rational};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

/// The three-parameter family of residual-zero structures attached to
/// positive integers (a, b, c) with d = -a + b - c:
///
///   A(x) = -(x - 1)(x - c/d),  B(y) = -(ab/(cd)) (y + c/a)(y - c/b),
///
/// domain -c/a < y < c/b < 1 < x < c/d and lambda^2 = 0. The
/// construction forces a1 + b1 = 0 and a2 + b2 = 0 identically, so the
/// residual constant vanishes with no lambda contribution.
pub fn cgms_family(a: i64, b: i64, c: i64) -> Result<OrthotoricStructure, OrthotoricError> {
    if a <= 0 || b <= 0 || c <= 0 {
        return Err(OrthotoricError::InvalidInput(format!(
            "family parameters must be positive integers, got ({a}, {b}, {c})"
        )));
    }
    let d = -a + b - c;
    if d <= 0 {
        return Err(OrthotoricError::DegenerateD { d: rat(d, 1) });
    }
    if c == d {
        // c/d = 1 collides the roots of A.
        return Err(OrthotoricError::DoubleRoot);
    }
    if c >= b || c < d {
        // needs -c/a < c/b < 1 < c/d.
        return Err(OrthotoricError::RootOrdering);
    }
    // A = -(x - 1)(x - c/d).
    let qa = Quadratic::from_roots(rat(-1, 1), &rat(1, 1), &rat(c, d));
    // B = b0 (y + c/a)(y - c/b) with b0 = -ab/(cd).
    let qb = Quadratic::from_roots(rat(-a * b, c * d), &rat(-c, a), &rat(c, b));
    debug_assert!((&qa.a1 + &qb.a1).is_zero());
    debug_assert!((&qa.a2 + &qb.a2).is_zero());
    OrthotoricStructure::from_quadratics(&qa, &qb, Rational::zero())
}

/// All valid family triples with parameters in 1..=max_param, in
/// lexicographic order. "Valid" means setwise coprime — gcd(a,b,c) = 1,
/// so that scaled copies of the same structure are not re-listed — and
/// constructible by [`cgms_family`].
pub fn cgms_triples(max_param: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for a in 1..=max_param {
        for b in 1..=max_param {
            for c in 1..=max_param {
                if a.gcd(&b).gcd(&c) != 1 {
                    continue;
                }
                if cgms_family(a, b, c).is_ok() {
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}

/// Normalized profile pair of a quadrilateral: A0 vanishing at x1, x2
/// with A0'(x1) = 2, and B0 vanishing at y1, y2 with B0'(y1) = 2.
pub fn normalized_profiles(quad: &LabelledQuadrilateral) -> (Quadratic, Quadratic) {
    let a0 = Quadratic::from_roots(
        rat(-2, 1) / (&quad.x2 - &quad.x1),
        &quad.x1,
        &quad.x2,
    );
    let b0 = Quadratic::from_roots(
        rat(-2, 1) / (&quad.y2 - &quad.y1),
        &quad.y1,
        &quad.y2,
    );
    (a0, b0)
}

/// The two-parameter structure (t1 A0, t2 B0) on a quadrilateral, with
/// lambda^2 determined by the vanishing of the residual constant.
/// Fails with NotAdmissible (carrying the negative witness) when
/// f(t1/t2) < 0.
pub fn legendre_pair(
    quad: &LabelledQuadrilateral,
    t1: &Rational,
    t2: &Rational,
) -> Result<OrthotoricStructure, OrthotoricError> {
    if !t1.is_positive() || !t2.is_positive() {
        return Err(OrthotoricError::NonpositiveLabel);
    }
    let (a0, b0) = normalized_profiles(quad);
    let qa = Quadratic::new(&a0.a0 * t1, &a0.a1 * t1, &a0.a2 * t1);
    let qb = Quadratic::new(&b0.a0 * t2, &b0.a1 * t2, &b0.a2 * t2);
    let lambda_sq = solve_lambda(&qa, &qb)?;
    OrthotoricStructure::from_quadratics(&qa, &qb, lambda_sq)
}

/// Per-facet boundary diagnostics: does the right profile vanish on the
/// facet, and does its derivative there match the label slope
/// (A'(x1) = 2/rx1, A'(x2) = -2/rx2, B'(y1) = 2/py1, B'(y2) = -2/py2)?
#[derive(Clone, Debug, Serialize)]
pub struct FacetCheck {
    pub facet: String,
    pub profile_vanishes: bool,
    pub slope_matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryReport {
    pub facets: Vec<FacetCheck>,
    pub all_match: bool,
}

/// Check the first-order boundary conditions of a structure against a
/// labelled quadrilateral, exactly (all data here is rational). Errors
/// with RootMismatch when the structure's domain rectangle does not
/// sit on the quadrilateral's vertices.
pub fn boundary_check(
    s: &OrthotoricStructure,
    quad: &LabelledQuadrilateral,
) -> Result<BoundaryReport, OrthotoricError> {
    let contains = |enc: &exactalg::RootEnclosure, v: &Rational| -> bool {
        if enc.is_exact() {
            &enc.lo == v
        } else {
            &enc.lo <= v && v <= &enc.hi
        }
    };
    let (x1e, x2e) = s.x_roots();
    let (y1e, y2e) = s.y_roots();
    if !(contains(x1e, &quad.x1)
        && contains(x2e, &quad.x2)
        && contains(y1e, &quad.y1)
        && contains(y2e, &quad.y2))
    {
        return Err(OrthotoricError::RootMismatch);
    }
    let (rx1, rx2, py1, py2) = quad.explicit_labels();
    let da = s.a().derivative();
    let db = s.b().derivative();
    let two = rat(2, 1);
    let checks = [
        (
            "x=x1",
            s.a().eval(&quad.x1),
            da.eval(&quad.x1),
            &two / &rx1,
        ),
        (
            "x=x2",
            s.a().eval(&quad.x2),
            da.eval(&quad.x2),
            -(&two / &rx2),
        ),
        (
            "y=y1",
            s.b().eval(&quad.y1),
            db.eval(&quad.y1),
            &two / &py1,
        ),
        (
            "y=y2",
            s.b().eval(&quad.y2),
            db.eval(&quad.y2),
            -(&two / &py2),
        ),
    ];
    let facets: Vec<FacetCheck> = checks
        .into_iter()
        .map(|(name, value, slope, want)| FacetCheck {
            facet: name.to_string(),
            profile_vanishes: value.is_zero(),
            slope_matches: slope == want,
        })
        .collect();
    let all_match = facets
        .iter()
        .all(|f| f.profile_vanishes && f.slope_matches);
    Ok(BoundaryReport { facets, all_match })
}

/// One admissible integer solution found by enumeration.
#[derive(Clone, Debug, Serialize)]
pub struct EnumeratedSolution {
    pub quadrilateral: LabelledQuadrilateral,
    pub t1: i64,
    pub t2: i64,
    #[serde(with = "exactalg::rational_serde")]
    pub lambda_sq: Rational,
}

impl EnumeratedSolution {
    /// Rebuild the structure this tuple describes.
    pub fn build(&self) -> Result<OrthotoricStructure, OrthotoricError> {
        legendre_pair(&self.quadrilateral, &rat(self.t1, 1), &rat(self.t2, 1))
    }
}

/// Deterministic lexicographic enumeration of integer-vertex
/// quadrilaterals y1 < y2 < x1 < x2 in [-vertex_bound, vertex_bound]
/// with coprime positive integer labels (t1, t2) up to label_bound,
/// keeping tuples with strict admissibility f(t1/t2) > 0 (hence
/// lambda^2 > 0 after the lambda-solve, and a vanishing residual
/// constant by construction). Strict vertex ordering already prevents
/// parallel or proportional facet normals. Stops after max_results.
pub fn enumerate_quadrilateral_solutions(
    vertex_bound: i64,
    label_bound: i64,
    max_results: usize,
) -> Vec<EnumeratedSolution> {
    let mut out = Vec::new();
    if vertex_bound < 0 || label_bound < 1 || max_results == 0 {
        return out;
    }
    let v = vertex_bound;
    for y1 in -v..=v {
        for y2 in (y1 + 1)..=v {
            for x1 in (y2 + 1)..=v {
                for x2 in (x1 + 1)..=v {
                    let quad = match LabelledQuadrilateral::from_integers((y1, y2, x1, x2), 1, 1) {
                        Ok(q) => q,
                        Err(_) => continue,
                    };
                    let (a0, b0) = normalized_profiles(&quad);
                    for t1 in 1..=label_bound {
                        for t2 in 1..=label_bound {
                            if t1.gcd(&t2) != 1 {
                                continue;
                            }
                            let f = admissibility_f(&a0, &b0, &rat(t1, t2));
                            if !f.is_positive() {
                                continue;
                            }
                            let labelled = LabelledQuadrilateral {
                                labels: FacetLabels::TwoParameter {
                                    t1: rat(t1, 1),
                                    t2: rat(t2, 1),
                                },
                                ..quad.clone()
                            };
                            match legendre_pair(&labelled, &rat(t1, 1), &rat(t2, 1)) {
                                Ok(s) => {
                                    debug_assert!(!s.lambda_sq().is_negative());
                                    out.push(EnumeratedSolution {
                                        quadrilateral: labelled,
                                        t1,
                                        t2,
                                        lambda_sq: s.lambda_sq().clone(),
                                    });
                                    if out.len() >= max_results {
                                        return out;
                                    }
                                }
                                Err(_) => continue,
                            }
                        }
                    }
                }
            }
        }
    }
    out
}
