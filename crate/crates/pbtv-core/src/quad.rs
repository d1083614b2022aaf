//! Gauss-Legendre quadrature on `[0, 1]`.
//!
//! Nodes are Legendre roots found by Newton iteration from the Chebyshev
//! initial guess. An `m`-node rule integrates polynomials of degree up to
//! `2m - 1` exactly, which turns the interpolation checks in the oracle
//! into exact identities rather than approximations.

use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;

/// Legendre polynomial `P_m` and its derivative at `x`, by the three-term
/// recurrence.
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0; // P_0
    let mut p = x; // P_1
    for k in 1..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    let dp = m as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Nodes and weights of the `m`-point rule on `[0, 1]`, nodes ascending.
pub fn gauss_legendre_unit(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1, "quadrature needs at least one node");
    if m == 1 {
        return (vec![0.5], vec![1.0]);
    }
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (m as f64 + 0.5));
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th root from the +1 end; mirror for the other half.
        nodes[m - 1 - i] = 0.5 * (1.0 + x);
        weights[m - 1 - i] = 0.5 * w;
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 0.5 * w;
    }
    (nodes, weights)
}

/// Integrate `f` over `[0, 1]` with the `m`-point rule.
pub fn integrate_unit<F: Fn(f64) -> f64>(m: usize, f: F) -> f64 {
    let (nodes, weights) = gauss_legendre_unit(m);
    let mut acc = crate::sum::Accumulator::new();
    for (x, w) in nodes.iter().zip(&weights) {
        acc.add(w * f(*x));
    }
    acc.total()
}
