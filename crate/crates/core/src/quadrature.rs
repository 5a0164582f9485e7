//! Gauss-Legendre and periodic trapezoid rules.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let m = order;
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if m == 1 {
            x = 0.0;
            dp = 1.0;
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m == 1 {
        weights[0] = 2.0;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre rule: `panels` equal panels with `order` nodes each.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(lo + 0.5 * h * (xi + 1.0));
                weights.push(0.5 * h * wi);
            }
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_c<F: FnMut(f64) -> C64>(&self, mut f: F) -> C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }
}

/// Convergence control for periodic trapezoid sums.
#[derive(Debug, Clone, Copy)]
pub struct DoublingControl {
    pub initial_nodes: usize,
    pub max_nodes: usize,
    /// Stop once a doubling changes the result by at most `tol * max(1, |value|)`.
    pub tol: f64,
    /// At `max_nodes`, a last change above this is reported as an accuracy error.
    pub fail_above: f64,
}

impl Default for DoublingControl {
    fn default() -> Self {
        Self {
            initial_nodes: 64,
            max_nodes: 1 << 15,
            tol: 1e-14,
            fail_above: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome {
    pub value: C64,
    pub nodes: usize,
    pub last_change: f64,
}

/// Mean of a `2π`-periodic function, `(1/2π) ∫_0^{2π} f(θ) dθ`, by trapezoid
/// sums with node doubling. Nested: each doubling only evaluates midpoints.
pub fn periodic_mean<F: Fn(f64) -> C64>(
    f: F,
    ctl: DoublingControl,
    what: &str,
) -> Result<QuadOutcome> {
    let tau = std::f64::consts::TAU;
    let mut n = ctl.initial_nodes.max(2);
    let mut sum: C64 = (0..n).map(|k| f(tau * k as f64 / n as f64)).sum();
    let mut value = sum / n as f64;
    loop {
        let h = tau / n as f64;
        let mid: C64 = (0..n).map(|k| f(h * (k as f64 + 0.5))).sum();
        sum += mid;
        n *= 2;
        let next = sum / n as f64;
        let change = (next - value).norm();
        value = next;
        if change <= ctl.tol * value.norm().max(1.0) {
            return Ok(QuadOutcome {
                value,
                nodes: n,
                last_change: change,
            });
        }
        if n >= ctl.max_nodes {
            if change > ctl.fail_above {
                return Err(Error::Accuracy {
                    what: what.to_string(),
                    change,
                });
            }
            return Ok(QuadOutcome {
                value,
                nodes: n,
                last_change: change,
            });
        }
    }
}
