//! Deterministic numerical integration and sampling-node utilities:
//! Gauss-Legendre rules (nodes by Newton iteration on the three-term
//! Legendre recurrence) and strictly interior Chebyshev sampling grids.

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
///
/// Nodes are found by Newton's method from the standard Chebyshev-based
/// initial guesses; each iteration evaluates P_n and P_n' through the
/// three-term recurrence. Exact for polynomials of degree <= 2n - 1.
///
/// Panics if `n == 0`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be at least 1");
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Initial guess for the i-th root of P_n (descending order).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                let (p2, d2) = legendre_with_derivative(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Roots come out descending from the cosine guesses; store
        // ascending and mirror to the other half by symmetry.
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        // Center the middle node exactly.
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// P_n(x) and P_n'(x) via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0; // P_0
    let mut p = x; // P_1
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1).
    let d = (n as f64) * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

/// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Integrate f over the rectangle [ax, bx] x [ay, by] with an n x n
/// tensor Gauss-Legendre rule.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    (ax, bx): (f64, f64),
    (ay, by): (f64, f64),
    n: usize,
) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let midx = 0.5 * (ax + bx);
    let halfx = 0.5 * (bx - ax);
    let midy = 0.5 * (ay + by);
    let halfy = 0.5 * (by - ay);
    let mut acc = 0.0;
    for (x, wx) in nodes.iter().zip(&weights) {
        let px = midx + halfx * x;
        let mut row = 0.0;
        for (y, wy) in nodes.iter().zip(&weights) {
            row += wy * f(px, midy + halfy * y);
        }
        acc += wx * row;
    }
    acc * halfx * halfy
}

/// n Chebyshev points of the first kind mapped to (a, b), ascending.
/// All nodes are strictly interior, so integrand singularities pinned
/// to the boundary are never touched.
pub fn chebyshev_interior(n: usize, a: f64, b: f64) -> Vec<f64> {
    assert!(n >= 1, "need at least one node");
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (0..n)
        .map(|i| {
            // theta descending in i, so cos ascends.
            let theta = std::f64::consts::PI * (2.0 * (n - 1 - i) as f64 + 1.0) / (2.0 * n as f64);
            mid + half * theta.cos()
        })
        .collect()
}
