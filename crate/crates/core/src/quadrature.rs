//! Gaussian quadrature rules.
//!
//! Two families are enough for this crate: Gauss-Legendre on `[-1, 1]` for
//! bounded integrals and Gauss-Hermite for integrals against `exp(-x^2)` on
//! the whole line. Nodes are found by Newton iteration on the classical
//! three-term recurrences; an order-`n` rule integrates polynomials of
//! degree `2n - 1` exactly.

use std::f64::consts::PI;

/// Nodes and weights of a one-dimensional quadrature rule.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Gauss-Legendre rule of the given order on `[-1, 1]`.
    ///
    /// Panics if `order` is zero.
    pub fn gauss_legendre(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be >= 1");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order;
        // Roots come in +/- pairs; solve for the upper half.
        let half = n.div_ceil(2);
        for i in 0..half {
            // Tricomi-style initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() <= 1e-15 * (1.0 + x.abs()) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            // The middle node is exactly zero; the loop above already set it.
            nodes[n / 2] = 0.0;
        }
        QuadratureRule { nodes, weights }
    }

    /// Gauss-Hermite rule of the given order for `\int exp(-x^2) f(x) dx`.
    ///
    /// Panics if `order` is zero.
    pub fn gauss_hermite(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be >= 1");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        let mut x = 0.0_f64;
        for i in 0..half {
            // Stroud & Secrest initial guesses, largest root first.
            x = match i {
                0 => {
                    let an = 2.0 * n as f64 + 1.0;
                    an.sqrt() - 1.85575 * an.powf(-1.0 / 6.0)
                }
                1 => x - 1.14 * (n as f64).powf(0.426) / x,
                2 => 1.86 * x - 0.86 * nodes[0],
                3 => 1.91 * x - 0.91 * nodes[1],
                _ => 2.0 * x - nodes[i - 2],
            };
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (h, d) = hermite_orthonormal_with_derivative(n, x);
                deriv = d;
                let step = h / d;
                x -= step;
                if step.abs() <= 1e-14 * (1.0 + x.abs()) {
                    let (_, d) = hermite_orthonormal_with_derivative(n, x);
                    deriv = d;
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / (deriv * deriv);
            nodes[n - 1 - i] = -x;
            weights[n - 1 - i] = weights[i];
        }
        if n % 2 == 1 {
            let mid = n / 2;
            nodes[mid] = 0.0;
            let (_, d) = hermite_orthonormal_with_derivative(n, 0.0);
            weights[mid] = 2.0 / (d * d);
        }
        // Ascending order to match the Legendre constructor.
        nodes.reverse();
        weights.reverse();
        QuadratureRule { nodes, weights }
    }

    /// Applies the rule as-is: `sum_i w_i f(x_i)`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// The rule affinely mapped from `[-1, 1]` onto `[a, b]`.
    pub fn mapped_to(&self, a: f64, b: f64) -> QuadratureRule {
        let mid = 0.5 * (a + b);
        let scale = 0.5 * (b - a);
        QuadratureRule {
            nodes: self.nodes.iter().map(|&x| mid + scale * x).collect(),
            weights: self.weights.iter().map(|&w| w * scale).collect(),
        }
    }
}

/// `P_n(x)` and its derivative via the Bonnet recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let d = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

/// Orthonormal Hermite polynomial (weight `exp(-x^2)`) and its derivative.
fn hermite_orthonormal_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut h_prev = 0.0;
    let mut h = PI.powf(-0.25);
    for k in 0..n {
        let kf = k as f64;
        let h_next = x * (2.0 / (kf + 1.0)).sqrt() * h - (kf / (kf + 1.0)).sqrt() * h_prev;
        h_prev = h;
        h = h_next;
    }
    let d = (2.0 * n as f64).sqrt() * h_prev;
    (h, d)
}

/// Composite Gauss-Legendre integration of `f` over `[a, b]` with the same
/// order applied on each of `panels` equal subintervals.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    order: usize,
    panels: usize,
) -> f64 {
    assert!(panels >= 1, "need at least one panel");
    let base = QuadratureRule::gauss_legendre(order);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let hi = lo + width;
        let mid = 0.5 * (lo + hi);
        let scale = 0.5 * (hi - lo);
        for (&x, &w) in base.nodes.iter().zip(&base.weights) {
            total += w * scale * f(mid + scale * x);
        }
    }
    total
}

/// Visits every multi-index of the box `0..dims[0] x ... x 0..dims[d-1]`
/// in row-major order.
pub fn for_each_multi_index<F: FnMut(&[usize])>(dims: &[usize], mut visit: F) {
    if dims.is_empty() || dims.iter().any(|&d| d == 0) {
        return;
    }
    let mut index = vec![0usize; dims.len()];
    loop {
        visit(&index);
        let mut axis = dims.len();
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < dims[axis] {
                break;
            }
            index[axis] = 0;
        }
    }
}
