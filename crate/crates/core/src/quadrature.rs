//! Gauss–Legendre rules and an adaptive bisection driver.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Maximum bisection depth of [`adaptive`].
pub const MAX_DEPTH: usize = 30;

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> GaussLegendre {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Chebyshev-like initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Nodes mapped to `[a, b]` with correspondingly scaled weights.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (m + r * x, r * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.on(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The 10- and 20-point rules used by [`adaptive`].
pub fn rule_pair() -> &'static (GaussLegendre, GaussLegendre) {
    static RULES: OnceLock<(GaussLegendre, GaussLegendre)> = OnceLock::new();
    RULES.get_or_init(|| (GaussLegendre::new(10), GaussLegendre::new(20)))
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol` by comparing the
/// 10- and 20-point rules and bisecting where they disagree.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn rec<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, tol: f64, depth: usize, top: f64) -> Result<f64> {
        let (lo, hi) = rule_pair();
        let q1 = lo.integrate(a, b, &mut *f);
        let q2 = hi.integrate(a, b, &mut *f);
        if (q2 - q1).abs() <= tol.max(4.0 * f64::EPSILON * q2.abs()) {
            return Ok(q2);
        }
        if depth >= MAX_DEPTH {
            return Err(Error::QuadratureFailure { tol: top, depth: MAX_DEPTH });
        }
        let m = 0.5 * (a + b);
        Ok(rec(f, a, m, 0.5 * tol, depth + 1, top)? + rec(f, m, b, 0.5 * tol, depth + 1, top)?)
    }
    if b <= a {
        return Ok(0.0);
    }
    rec(&mut f, a, b, tol, 0, tol)
}
