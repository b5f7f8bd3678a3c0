//! Equality certificates, weak stability and rigidity for Minkowski's
//! quadratic inequality `V(K,L,M)^2 >= V(K,K,M) V(L,L,M)`.

use nalgebra::{Matrix3, Vector3};

use crate::arcs::{arc_nodes, integrate_profiles};
use crate::error::{Error, Result};
use crate::geometry::{classify_trivial, enclosing_radii, Body, Polytope, SupportEvaluator, Vec3};
use crate::graph::{build_graph, sbm_and_mu, MetricGraph};
use crate::mixed::{mixed_volume, DeficitReport};

/// Relative thresholds for the deficit and the support residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Deficit tolerance relative to `V(K,K,M) V(L,L,M)`.
    pub eps_d: f64,
    /// Residual tolerance relative to the diameter.
    pub eps_s: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { eps_d: 1e-9, eps_s: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equality,
    Strict,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Equality => "equality",
            Verdict::Strict => "strict",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// Equality when both quantities are below their thresholds, strict when
    /// both exceed ten times their thresholds.
    pub fn decide(deficit: f64, deficit_tol: f64, residual: f64, residual_tol: f64) -> Verdict {
        if deficit <= deficit_tol && residual <= residual_tol {
            Verdict::Equality
        } else if deficit > 10.0 * deficit_tol && residual > 10.0 * residual_tol {
            Verdict::Strict
        } else {
            Verdict::Inconclusive
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EqualityCertificate {
    pub deficit: DeficitReport,
    /// Scaling factor `V(K,L,M) / V(L,L,M)`.
    pub a: f64,
    /// Translation part of the fit (zero for the lower dimensional criterion).
    pub v: Vec3,
    /// Largest residual over the quadrature nodes of `supp S_{B,M}`.
    pub sup_residual: f64,
    /// `∫ residual^2 dS_{B,M}`, when computed.
    pub l2_residual: Option<f64>,
    pub diam: f64,
    pub thresholds: Thresholds,
    pub verdict: Verdict,
}

impl EqualityCertificate {
    pub fn deficit_ok(&self) -> bool {
        self.deficit.deficit <= self.thresholds.eps_d * self.deficit.scale
    }
}

fn require_nontrivial(k: &Polytope, l: &Polytope, m: &Polytope) -> Result<()> {
    let c = classify_trivial(&Body::from(k.clone()), &Body::from(l.clone()), &Body::from(m.clone()));
    if c.vll_vanishes {
        return Err(Error::DegenerateInput(format!(
            "V(L,L,M) = 0 (dim L = {}, dim M = {}, dim(L+M) = {}); degenerate case",
            c.dim_l, c.dim_m, c.dim_lm
        )));
    }
    Ok(())
}

/// Nodes `(u, weight)` of a fixed Gauss rule for `S_{B,M}`, split at the
/// breakpoints of `f`, together with the arc endpoints (weight zero).
fn sbm_nodes(g: &MetricGraph, f: &SupportEvaluator) -> Vec<(Vec3, f64, f64)> {
    let mut out = Vec::new();
    for e in &g.edges {
        let prof = f.profile(&e.arc);
        for (t, w) in arc_nodes(&[&prof], e.length) {
            out.push((e.arc.point(t), 0.5 * e.weight * w, prof.value(t)));
        }
        for t in [0.0, e.length] {
            out.push((e.arc.point(t), 0.0, prof.value(t)));
        }
    }
    out
}

/// Certify or refute equality for full-dimensional `M`.
pub fn certify_equality_fulldim(
    k: &Polytope,
    l: &Polytope,
    m: &Polytope,
    quad_tol: f64,
    thresholds: Thresholds,
) -> Result<EqualityCertificate> {
    require_nontrivial(k, l, m)?;
    let g = build_graph(m)?;
    let deficit = DeficitReport::from_values(mixed_volume(k, l, m), mixed_volume(k, k, m), mixed_volume(l, l, m));
    let a = deficit.vkl / deficit.vll;
    let d = SupportEvaluator::of(k.clone()).plus(-a, l.clone());
    let nodes = sbm_nodes(&g, &d);
    let mut gram = Matrix3::zeros();
    let mut rhs = Vector3::zeros();
    for (u, w, val) in &nodes {
        gram += u * u.transpose() * *w;
        rhs += u * (*w * val);
    }
    let v =
        gram.cholesky().ok_or_else(|| Error::NumericalFailure("S_{B,M} nodes do not span space".into()))?.solve(&rhs);
    let sup_residual = nodes.iter().map(|(u, _, val)| (val - v.dot(u)).abs()).fold(0.0, f64::max);
    let fit = d.clone().plus_linear(-v);
    let total_w = g.total_weight();
    let mut l2 = 0.0;
    for e in &g.edges {
        let prof = fit.profile(&e.arc);
        l2 += 0.5 * e.weight * integrate_profiles(&[&prof], quad_tol / total_w, |t, p| p[0].value(t).powi(2))?;
    }
    let diam = k.diameter().max(a.abs() * l.diameter());
    let verdict =
        Verdict::decide(deficit.deficit, thresholds.eps_d * deficit.scale, sup_residual, thresholds.eps_s * diam);
    Ok(EqualityCertificate { deficit, a, v, sup_residual, l2_residual: Some(l2), diam, thresholds, verdict })
}

/// The explicit decomposition `h_K - a h_L = <v, .> + δ` on the facet normals of `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityWitness {
    pub a: f64,
    pub v: Vec3,
    /// `Σ_F (area_F / h_M(n_F)) n_F n_F^T`, `M` centered at its vertex centroid.
    pub g_m: Matrix3<f64>,
    pub r: f64,
    pub big_r: f64,
    /// `r^2 / (18 R^2)`.
    pub c_m: f64,
    /// `Σ_F δ(n_F)^2 area_F / h_M(n_F)`.
    pub residual: f64,
}

/// Facet normals, areas and centered support values of `M`.
fn facet_weights(m: &Polytope) -> Vec<(Vec3, f64)> {
    let c = m.centroid();
    m.facets().iter().map(|f| (f.normal.into_inner(), f.area / (f.offset - f.normal.dot(&c)))).collect()
}

/// Weighted residual of `h_K - a h_L - <v, .>` over the facet normals of `M`.
pub fn witness_residual(k: &Polytope, l: &Polytope, m: &Polytope, a: f64, v: &Vec3) -> f64 {
    facet_weights(m).iter().map(|(n, w)| w * (k.support(n) - a * l.support(n) - v.dot(n)).powi(2)).sum()
}

pub fn stability_witness(k: &Polytope, l: &Polytope, m: &Polytope) -> Result<StabilityWitness> {
    let (r, big_r) = enclosing_radii(m)?;
    let vkmm = mixed_volume(k, m, m);
    let vlmm = mixed_volume(l, m, m);
    if vlmm <= 1e-14 * l.scale() * m.scale() * m.scale() {
        return Err(Error::ZeroDenominator(format!("V(L,M,M) = {vlmm}")));
    }
    let a = vkmm / vlmm;
    let fw = facet_weights(m);
    let mut g_m = Matrix3::zeros();
    let mut rhs = Vector3::zeros();
    for (n, w) in &fw {
        g_m += n * n.transpose() * *w;
        rhs += n * (w * (k.support(n) - a * l.support(n)));
    }
    let v = g_m.cholesky().ok_or(Error::SingularGM)?.solve(&rhs);
    let residual = witness_residual(k, l, m, a, &v);
    Ok(StabilityWitness { a, v, g_m, r, big_r, c_m: r * r / (18.0 * big_r * big_r), residual })
}

/// Both sides of `V(K,L,M)^2 >= V(K,K,M) V(L,L,M) + C_M V(L,L,M) residual`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakStabilityReport {
    pub witness: StabilityWitness,
    pub deficit: DeficitReport,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`.
    pub margin: f64,
    pub holds: bool,
}

pub fn weak_stability_check(k: &Polytope, l: &Polytope, m: &Polytope) -> Result<WeakStabilityReport> {
    let witness = stability_witness(k, l, m)?;
    let deficit = DeficitReport::from_values(mixed_volume(k, l, m), mixed_volume(k, k, m), mixed_volume(l, l, m));
    let lhs = deficit.vkl * deficit.vkl;
    let rhs = deficit.scale + witness.c_m * deficit.vll * witness.residual;
    let margin = lhs - rhs;
    let holds = margin >= -1e-9 * lhs.max(deficit.scale);
    Ok(WeakStabilityReport { witness, deficit, lhs, rhs, margin, holds })
}

/// Both sides of the quantitative rigidity inequality for polytopal `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidityReport {
    pub deficit: DeficitReport,
    pub r: f64,
    pub big_r: f64,
    /// `∫ (h_K - h_L)^2 dS_{B,M}`.
    pub sbm_integral: f64,
    /// `∫ (h_K - h_L)^2 dμ_M`.
    pub mu_integral: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
}

pub fn rigidity_check(k: &Polytope, l: &Polytope, m: &Polytope, quad_tol: f64) -> Result<RigidityReport> {
    let (r, big_r) = enclosing_radii(m)?;
    let g = build_graph(m)?;
    let (_, mu) = sbm_and_mu(&g);
    let diff = SupportEvaluator::of(k.clone()).plus(-1.0, l.clone());
    let total_w = g.total_weight();
    let mut sbm_integral = 0.0;
    for e in &g.edges {
        let prof = diff.profile(&e.arc);
        sbm_integral +=
            0.5 * e.weight * integrate_profiles(&[&prof], quad_tol / total_w, |t, p| p[0].value(t).powi(2))?;
    }
    let mu_integral: f64 = mu.atoms.iter().map(|(u, c)| c * diff.eval_unit(u).powi(2)).sum();
    let deficit = DeficitReport::from_values(mixed_volume(k, l, m), mixed_volume(k, k, m), mixed_volume(l, l, m));
    let (r2, big_r2) = (r * r, big_r * big_r);
    let correction = r2 / (6.0 * big_r2) * sbm_integral - 4.0 * big_r2 / (3.0 * r2) * mu_integral;
    let lhs = deficit.vkl * deficit.vkl;
    let rhs = deficit.scale + deficit.vll * correction;
    let margin = lhs - rhs;
    let holds = margin >= -1e-9 * lhs.max(deficit.scale);
    Ok(RigidityReport { deficit, r, big_r, sbm_integral, mu_integral, lhs, rhs, margin, holds })
}
