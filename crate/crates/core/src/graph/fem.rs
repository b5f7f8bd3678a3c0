//! Piecewise-linear Galerkin discretization of the graph form.
//!
//! Each edge is split into equal elements; graph vertices are shared degrees
//! of freedom, so continuity holds by construction and the vertex flux
//! conditions arise weakly.

use nalgebra::{DMatrix, DVector};

use super::MetricGraph;
use crate::arcs::Arc;
use crate::error::{Error, Result};
use crate::geometry::{SupportEvaluator, Vec3};

/// An edge to be meshed: endpoints are vertex degrees of freedom.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshEdge {
    pub from: usize,
    pub to: usize,
    pub arc: Arc,
    pub weight: f64,
}

/// Stiffness-type matrix of `E` and the mass matrix, on a node layout.
#[derive(Debug, Clone)]
pub struct DiscretizedForm {
    /// `(1/6) Σ w ∫ (f g - f' g')`.
    pub e: DMatrix<f64>,
    /// `(1/2) Σ w ∫ f g`.
    pub mass: DMatrix<f64>,
    /// Position of every node on the sphere; vertices come first.
    pub nodes: Vec<Vec3>,
    pub vertex_count: usize,
    /// Node ids along each edge, endpoints included.
    pub edge_nodes: Vec<Vec<usize>>,
    /// Arc parameter of each entry of `edge_nodes`.
    pub edge_params: Vec<Vec<f64>>,
}

impl DiscretizedForm {
    pub fn dof(&self) -> usize {
        self.nodes.len()
    }

    pub fn e_value(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.e * y))
    }

    pub fn mass_value(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.mass * y))
    }
}

/// Nodal values of a continuous function on the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFunction {
    pub values: DVector<f64>,
}

impl GraphFunction {
    /// Nodal interpolant of a support-function combination.
    pub fn sample(form: &DiscretizedForm, f: &SupportEvaluator) -> GraphFunction {
        GraphFunction { values: DVector::from_iterator(form.dof(), form.nodes.iter().map(|u| f.eval(u))) }
    }

    /// Interpolant of the coordinate function `x_i`.
    pub fn coordinate(form: &DiscretizedForm, i: usize) -> GraphFunction {
        GraphFunction { values: DVector::from_iterator(form.dof(), form.nodes.iter().map(|u| u[i])) }
    }

    pub fn constant(form: &DiscretizedForm, c: f64) -> GraphFunction {
        GraphFunction { values: DVector::from_element(form.dof(), c) }
    }

    /// `(t, value)` pairs along one edge.
    pub fn edge_samples(&self, form: &DiscretizedForm, edge: usize) -> Vec<(f64, f64)> {
        form.edge_nodes[edge].iter().zip(&form.edge_params[edge]).map(|(&n, &t)| (t, self.values[n])).collect()
    }
}

/// `ceil(l / h)` elements per edge, rejecting meshes with fewer than two.
pub fn element_counts(edges: &[MeshEdge], h: f64) -> Result<Vec<usize>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::BadMesh(format!("mesh size must be positive, got {h}")));
    }
    edges
        .iter()
        .map(|e| {
            let n = (e.arc.length() / h * (1.0 - 1e-12)).ceil() as usize;
            if n < 2 {
                Err(Error::BadMesh(format!("edge of length {} gets {n} element(s) at h = {h}", e.arc.length())))
            } else {
                Ok(n)
            }
        })
        .collect()
}

pub fn assemble_edges(vertex_points: &[Vec3], edges: &[MeshEdge], counts: &[usize]) -> Result<DiscretizedForm> {
    if let Some(&n) = counts.iter().find(|&&n| n < 2) {
        return Err(Error::BadMesh(format!("edge with {n} element(s)")));
    }
    let nv = vertex_points.len();
    let dof = nv + counts.iter().map(|n| n - 1).sum::<usize>();
    let mut nodes = vertex_points.to_vec();
    nodes.reserve(dof - nv);
    let mut e = DMatrix::zeros(dof, dof);
    let mut mass = DMatrix::zeros(dof, dof);
    let mut edge_nodes = Vec::with_capacity(edges.len());
    let mut edge_params = Vec::with_capacity(edges.len());
    for (edge, &n) in edges.iter().zip(counts) {
        let h = edge.arc.length() / n as f64;
        let mut ids = vec![edge.from];
        let mut ts = vec![0.0];
        for j in 1..n {
            let t = j as f64 * h;
            ids.push(nodes.len());
            ts.push(t);
            nodes.push(edge.arc.point(t));
        }
        ids.push(edge.to);
        ts.push(edge.arc.length());
        let w = edge.weight;
        // ∫ fg = h/6 [2 1; 1 2], ∫ f'g' = 1/h [1 -1; -1 1] per element.
        let (m_diag, m_off) = (h / 3.0, h / 6.0);
        let (k_diag, k_off) = (1.0 / h, -1.0 / h);
        for el in ids.windows(2) {
            let (a, b) = (el[0], el[1]);
            for (i, j, m, k) in
                [(a, a, m_diag, k_diag), (b, b, m_diag, k_diag), (a, b, m_off, k_off), (b, a, m_off, k_off)]
            {
                mass[(i, j)] += 0.5 * w * m;
                e[(i, j)] += w * (m - k) / 6.0;
            }
        }
        edge_nodes.push(ids);
        edge_params.push(ts);
    }
    Ok(DiscretizedForm { e, mass, nodes, vertex_count: nv, edge_nodes, edge_params })
}

/// Discretize the form of `g` with mesh size `h`.
pub fn assemble(g: &MetricGraph, h: f64) -> Result<DiscretizedForm> {
    let edges = g.mesh_edges();
    let counts = element_counts(&edges, h)?;
    assemble_edges(&vertex_points(g), &edges, &counts)
}

/// Discretize with an explicit element count per edge (for nested meshes).
pub fn assemble_with_counts(g: &MetricGraph, counts: &[usize]) -> Result<DiscretizedForm> {
    if counts.len() != g.edges.len() {
        return Err(Error::BadMesh(format!("{} counts for {} edges", counts.len(), g.edges.len())));
    }
    assemble_edges(&vertex_points(g), &g.mesh_edges(), counts)
}

fn vertex_points(g: &MetricGraph) -> Vec<Vec3> {
    g.vertices.iter().map(|v| v.normal.into_inner()).collect()
}
