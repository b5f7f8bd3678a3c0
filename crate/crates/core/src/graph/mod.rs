//! The metric graph of a polytope and the quadratic form it carries.
//!
//! Vertices are the facet normals of `M`, edges the great-circle arcs between
//! normals of adjacent facets, weighted by the length of the shared ridge. On
//! this graph `V(K, L, M) = (1/6) Σ_e w_e ∫_e (h_K h_L - h_K' h_L')`.

mod checks;
mod fem;
mod spectrum;

pub use checks::{edge_poincare_check, structural_checks, PoincareReport, StructuralReport};
pub use fem::{
    assemble, assemble_edges, assemble_with_counts, element_counts, DiscretizedForm, GraphFunction, MeshEdge,
};
pub use spectrum::{kernel_analysis, spectrum, KernelReport, SpectrumResult};

use crate::arcs::{integrate_profiles, Arc};
use crate::error::{Error, Result};
use crate::geometry::{Polytope, SupportEvaluator, UnitVector};
use crate::mixed::{integrate_against_measure, SphericalMeasure};

#[derive(Debug, Clone, PartialEq)]
pub struct GraphVertex {
    pub facet: usize,
    pub normal: UnitVector,
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphEdge {
    /// Lower facet index.
    pub from: usize,
    pub to: usize,
    /// Geodesic distance between the two normals.
    pub length: f64,
    /// Length of the ridge shared by the two facets.
    pub weight: f64,
    pub arc: Arc,
}

/// An edge leaving a vertex, with the unit tangent pointing along it.
#[derive(Debug, Clone, PartialEq)]
pub struct Incidence {
    pub edge: usize,
    pub neighbor: usize,
    pub tangent: UnitVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge>,
    pub incidence: Vec<Vec<Incidence>>,
}

impl MetricGraph {
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn mesh_edges(&self) -> Vec<MeshEdge> {
        self.edges.iter().map(|e| MeshEdge { from: e.from, to: e.to, arc: e.arc, weight: e.weight }).collect()
    }
}

pub fn build_graph(m: &Polytope) -> Result<MetricGraph> {
    if !m.is_full_dimensional() {
        return Err(Error::DegenerateInput(format!("affine dimension {}", m.dim())));
    }
    let vertices: Vec<GraphVertex> =
        m.facets().iter().enumerate().map(|(i, f)| GraphVertex { facet: i, normal: f.normal, area: f.area }).collect();
    let mut edges = Vec::with_capacity(m.edges().len());
    let mut incidence = vec![Vec::new(); vertices.len()];
    for e in m.edges() {
        let [a, b] = e.facets;
        let (na, nb) = (&vertices[a].normal, &vertices[b].normal);
        let arc = Arc::between(na, nb)?;
        let k = edges.len();
        incidence[a].push(Incidence { edge: k, neighbor: b, tangent: arc.tangent() });
        let back = na.into_inner() - nb.into_inner() * na.dot(nb);
        incidence[b].push(Incidence { edge: k, neighbor: a, tangent: UnitVector::new_normalize(back) });
        edges.push(GraphEdge { from: a, to: b, length: arc.length(), weight: e.length, arc });
    }
    Ok(MetricGraph { vertices, edges, incidence })
}

/// `S_{B,M}` (arcs with density `w/2`) and `μ_M` (atoms `(1/2) Σ w l` at
/// each facet normal).
pub fn sbm_and_mu(g: &MetricGraph) -> (SphericalMeasure, SphericalMeasure) {
    let sbm = SphericalMeasure {
        atoms: Vec::new(),
        arcs: g.edges.iter().map(|e| (e.arc, 0.5 * e.weight)).collect(),
        nonnegative: true,
    };
    let atoms = g
        .vertices
        .iter()
        .zip(&g.incidence)
        .map(|(v, inc)| {
            let m: f64 = inc.iter().map(|i| 0.5 * g.edges[i.edge].weight * g.edges[i.edge].length).sum();
            (v.normal, m)
        })
        .collect();
    (sbm, SphericalMeasure { atoms, arcs: Vec::new(), nonnegative: true })
}

/// `∫ f dS_{B,M}`.
pub fn integrate_on_arcs(f: &SupportEvaluator, g: &MetricGraph, quad_tol: f64) -> Result<f64> {
    integrate_against_measure(f, &sbm_and_mu(g).0, quad_tol)
}

/// `E(f, g) = (1/6) Σ_e w_e ∫_e (f g - f' g')`, with exact arc derivatives.
pub fn form_value(graph: &MetricGraph, f: &SupportEvaluator, g: &SupportEvaluator, quad_tol: f64) -> Result<f64> {
    let tol = quad_tol / graph.total_weight();
    let mut sum = 0.0;
    for e in &graph.edges {
        let (pf, pg) = (f.profile(&e.arc), g.profile(&e.arc));
        let val = integrate_profiles(&[&pf, &pg], tol, |t, p| {
            p[0].value(t) * p[1].value(t) - p[0].derivative(t) * p[1].derivative(t)
        })?;
        sum += e.weight * val;
    }
    Ok(sum / 6.0)
}
