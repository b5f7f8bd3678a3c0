//! Edge-length, vertex-balance and one-edge Poincaré checks.

use std::f64::consts::PI;

use nalgebra::Vector3;

use super::MetricGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StructuralReport {
    pub ratio: f64,
    /// `min_e (R/r - tan(l_e/2))`.
    pub worst_tan_margin: f64,
    pub tan_violations: usize,
    /// `max_F |Σ w n_{F->F'}| / Σ w`.
    pub worst_balance: f64,
    pub balance_violations: usize,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.tan_violations == 0 && self.balance_violations == 0
    }
}

/// `tan(l/2) <= R/r` on every edge and `Σ_{F'} w n_{F->F'} = 0` at every vertex.
pub fn structural_checks(g: &MetricGraph, r: f64, big_r: f64) -> StructuralReport {
    let ratio = big_r / r;
    let mut worst_tan_margin = f64::INFINITY;
    let mut tan_violations = 0;
    for e in &g.edges {
        let margin = ratio - (0.5 * e.length).tan();
        worst_tan_margin = worst_tan_margin.min(margin);
        if margin < -1e-9 {
            tan_violations += 1;
        }
    }
    let total = g.total_weight();
    let mut worst_balance: f64 = 0.0;
    let mut balance_violations = 0;
    for inc in &g.incidence {
        let s: Vector3<f64> = inc.iter().map(|i| i.tangent.into_inner() * g.edges[i.edge].weight).sum();
        let b = s.norm() / total;
        worst_balance = worst_balance.max(b);
        if b > 1e-9 {
            balance_violations += 1;
        }
    }
    StructuralReport { ratio, worst_tan_margin, tan_violations, worst_balance, balance_violations }
}

/// Both sides of the one-edge Poincaré inequality and, given `(r, R)`, of its
/// consequence `∫(f'^2 - f^2) >= r^2/(2R^2) ∫f^2 - 4R^2/r^2 l (f(0)^2 + f(l)^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoincareReport {
    pub poincare_lhs: f64,
    pub poincare_rhs: f64,
    pub radial_bound: Option<(f64, f64)>,
    /// Whether `tan(l/2) <= R/r`, the hypothesis of that consequence.
    pub radial_bound_applicable: bool,
    pub holds: bool,
}

/// `samples` are values of a piecewise-linear `f` at equally spaced points of `[0, l]`.
pub fn edge_poincare_check(samples: &[f64], l: f64, eps: f64, radii: Option<(f64, f64)>) -> Result<PoincareReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::BadParam(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if !(l > 0.0 && l < PI) {
        return Err(Error::BadParam(format!("edge length must lie in (0, pi), got {l}")));
    }
    if samples.len() < 2 {
        return Err(Error::BadParam("need at least two samples".into()));
    }
    let h = l / (samples.len() - 1) as f64;
    let (mut f2, mut d2) = (0.0, 0.0);
    for w in samples.windows(2) {
        let (a, b) = (w[0], w[1]);
        f2 += h * (a * a + a * b + b * b) / 3.0;
        d2 += (b - a) * (b - a) / h;
    }
    let ends = samples[0].powi(2) + samples[samples.len() - 1].powi(2);
    let poincare_lhs = l * l * d2;
    let poincare_rhs = (1.0 - eps).powi(2) * PI * PI * f2 - 2.0 / eps * l * ends;
    let slack = |a: f64, b: f64| 1e-9 * a.abs().max(b.abs()).max(1.0);
    let mut holds = poincare_lhs >= poincare_rhs - slack(poincare_lhs, poincare_rhs);
    let mut radial_bound_applicable = false;
    let radial_bound = radii.map(|(r, big_r)| {
        let lhs = d2 - f2;
        let rhs = r * r / (2.0 * big_r * big_r) * f2 - 4.0 * big_r * big_r / (r * r) * l * ends;
        radial_bound_applicable = (0.5 * l).tan() <= big_r / r;
        if radial_bound_applicable {
            holds &= lhs >= rhs - slack(lhs, rhs);
        }
        (lhs, rhs)
    });
    Ok(PoincareReport { poincare_lhs, poincare_rhs, radial_bound, radial_bound_applicable, holds })
}
