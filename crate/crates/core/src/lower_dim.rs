//! Reference bodies `M` lying in a plane `w^⊥`.
//!
//! Here `S_{B,M}` lives on the half great circles from `w` to `-w` through
//! the edge normals `z_j` of `M`, each weighted by half the edge length. The
//! metric graph degenerates to two poles joined by `m` edges of length `π`.

use std::f64::consts::PI;

use crate::arcs::{arc_nodes, Arc};
use crate::error::{Error, Result};
use crate::extremal::{EqualityCertificate, Thresholds, Verdict};
use crate::geometry::{classify_trivial, cylinder, Body, Polytope, SupportEvaluator, UnitVector, Vec3};
use crate::graph::{
    assemble_edges, build_graph, element_counts, integrate_on_arcs, kernel_analysis, spectrum, DiscretizedForm,
    KernelReport, MeshEdge,
};
use crate::mixed::{integrate_against_measure, mixed_volume, DeficitReport, SphericalMeasure};

#[derive(Debug, Clone, PartialEq)]
pub struct LowerDimProblem {
    pub w: UnitVector,
    pub m: Polytope,
    /// Edge normals in `w^⊥` with edge lengths.
    pub atoms: Vec<(UnitVector, f64)>,
}

impl LowerDimProblem {
    /// `ι(θ, z_j) = w cos θ + z_j sin θ` for `θ ∈ [0, π]`.
    pub fn arc(&self, j: usize) -> Arc {
        Arc::from_tangent(self.w, &self.atoms[j].0, PI)
    }

    /// `S_{B,M}` as arcs of density `mass_j / 2`.
    pub fn sbm(&self) -> SphericalMeasure {
        SphericalMeasure {
            atoms: Vec::new(),
            arcs: (0..self.atoms.len()).map(|j| (self.arc(j), 0.5 * self.atoms[j].1)).collect(),
            nonnegative: true,
        }
    }

    pub fn total_atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }
}

pub fn lowerdim_setup(m: &Polytope, w: &UnitVector) -> Result<LowerDimProblem> {
    if !(1..=2).contains(&m.dim()) {
        return Err(Error::DimensionError(format!("M has affine dimension {}, need 1 or 2", m.dim())));
    }
    let verts = m.vertices();
    let tol = 1e-9 * m.scale();
    if verts.iter().any(|v| (v - verts[0]).dot(w).abs() > tol) {
        return Err(Error::DimensionError("M is not contained in a translate of w^⊥".into()));
    }
    let wv = w.into_inner();
    let atoms = if m.dim() == 1 {
        let d = verts[1] - verts[0];
        let z = UnitVector::new_normalize(wv.cross(&d));
        vec![(z, d.norm()), (-z, d.norm())]
    } else {
        // Orient the cycle counter-clockwise around w; outward normals are d x w.
        let n = m.plane_normal().expect("planar polytope");
        let sign = n.dot(&wv).signum();
        (0..verts.len())
            .map(|k| {
                let d = verts[(k + 1) % verts.len()] - verts[k];
                (UnitVector::new_normalize(d.cross(&wv) * sign), d.norm())
            })
            .collect()
    };
    let p = LowerDimProblem { w: *w, m: m.clone(), atoms };
    let balance: Vec3 = p.atoms.iter().map(|(z, c)| z.into_inner() * *c).sum();
    if balance.norm() > 1e-12 * p.total_atom_mass() {
        return Err(Error::NumericalFailure(format!("edge normals do not balance: {}", balance.norm())));
    }
    Ok(p)
}

/// `∫ f dS_{B,M} = (1/2) Σ_j mass_j ∫_0^π f(ι(θ, z_j)) dθ`.
pub fn sbm_lowerdim(p: &LowerDimProblem, f: &SupportEvaluator, quad_tol: f64) -> Result<f64> {
    integrate_against_measure(f, &p.sbm(), quad_tol)
}

/// Galerkin discretization with one shared degree of freedom at each pole.
pub fn assemble_lowerdim(p: &LowerDimProblem, h: f64) -> Result<DiscretizedForm> {
    let edges: Vec<MeshEdge> =
        (0..p.atoms.len()).map(|j| MeshEdge { from: 0, to: 1, arc: p.arc(j), weight: p.atoms[j].1 }).collect();
    let counts = element_counts(&edges, h)?;
    assemble_edges(&[p.w.into_inner(), -p.w.into_inner()], &edges, &counts)
}

/// Eigenvalue `(1 - k^2) / 3` of multiplicity 1 for `k = 0`, `m` otherwise.
pub fn explicit_spectrum(m: usize, k_max: usize) -> Vec<(usize, f64, usize)> {
    (0..=k_max).map(|k| (k, (1.0 - (k * k) as f64) / 3.0, if k == 0 { 1 } else { m })).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport {
    pub k: usize,
    pub expected: f64,
    pub multiplicity: usize,
    /// Computed eigenvalues within `tol` of `expected`.
    pub found: usize,
    pub worst_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerSpectrumReport {
    pub clusters: Vec<ClusterReport>,
    pub eigenvalues: Vec<f64>,
    pub worst_deviation: f64,
    pub kernel: KernelReport,
    pub passed: bool,
}

pub fn verify_spectrum(p: &LowerDimProblem, k_max: usize, h: f64, tol: f64) -> Result<LowerSpectrumReport> {
    let m = p.atoms.len();
    if m < 2 {
        return Err(Error::InsufficientSpectrum(format!("{m} atom(s)")));
    }
    let form = assemble_lowerdim(p, h)?;
    let want = 1 + m * k_max;
    if form.dof() <= want {
        return Err(Error::InsufficientSpectrum(format!("{} degrees of freedom for {want} eigenvalues", form.dof())));
    }
    let spec = spectrum(&form, want + 1)?;
    let mut clusters = Vec::new();
    let mut worst_deviation: f64 = 0.0;
    let mut start = 0;
    let mut passed = true;
    for (k, expected, multiplicity) in explicit_spectrum(m, k_max) {
        let found = spec.values.iter().filter(|v| (*v - expected).abs() <= tol).count();
        let block = &spec.values[start..start + multiplicity];
        let dev = block.iter().map(|v| (v - expected).abs()).fold(0.0, f64::max);
        worst_deviation = worst_deviation.max(dev);
        passed &= found == multiplicity && dev <= tol;
        clusters.push(ClusterReport { k, expected, multiplicity, found, worst_deviation: dev });
        start += multiplicity;
    }
    let kernel = kernel_analysis(&spec, &form, tol)?;
    Ok(LowerSpectrumReport { clusters, eigenvalues: spec.values, worst_deviation, kernel, passed })
}

/// Certify or refute equality through the face criterion
/// `h_K + h_{F(L~, w)} = h_{L~} + h_{F(K, w)}` on `supp S_{B,M}`, `L~ = c L`.
pub fn certify_equality_lowerdim(
    k: &Polytope,
    l: &Polytope,
    m: &Polytope,
    w: &UnitVector,
    thresholds: Thresholds,
) -> Result<EqualityCertificate> {
    let p = lowerdim_setup(m, w)?;
    let cls = classify_trivial(&Body::from(k.clone()), &Body::from(l.clone()), &Body::from(m.clone()));
    if cls.vll_vanishes {
        return Err(Error::DegenerateInput(format!(
            "V(L,L,M) = 0 (dim L = {}, dim(L+M) = {}); degenerate case",
            cls.dim_l, cls.dim_lm
        )));
    }
    let deficit = DeficitReport::from_values(mixed_volume(k, l, m), mixed_volume(k, k, m), mixed_volume(l, l, m));
    let c = deficit.vkl / deficit.vll;
    if !(c > 0.0) {
        return Err(Error::ZeroDenominator(format!("V(K,L,M) / V(L,L,M) = {c}")));
    }
    let lt = l.scaled(c);
    let crit = SupportEvaluator::of(k.clone()).plus(1.0, lt.face(w)).plus(-1.0, lt.clone()).plus(-1.0, k.face(w));
    let mut sup_residual: f64 = 0.0;
    for j in 0..p.atoms.len() {
        let arc = p.arc(j);
        let prof = crit.profile(&arc);
        let ts = arc_nodes(&[&prof], PI).into_iter().map(|(t, _)| t).chain([0.0, PI]);
        for t in ts {
            sup_residual = sup_residual.max(prof.value(t).abs());
        }
    }
    let diam = k.diameter().max(lt.diameter());
    let verdict =
        Verdict::decide(deficit.deficit, thresholds.eps_d * deficit.scale, sup_residual, thresholds.eps_s * diam);
    Ok(EqualityCertificate {
        deficit,
        a: c,
        v: Vec3::zeros(),
        sup_residual,
        l2_residual: None,
        diam,
        thresholds,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CylinderRow {
    pub eps: f64,
    /// `∫ f dS_{B, M + ε[0,w]}` on the metric graph of the prism.
    pub graph_value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CylinderReport {
    /// `∫ f dS_{B,M}` from the planar formula.
    pub limit: f64,
    pub rows: Vec<CylinderRow>,
    /// `error_i / error_{i+1}`.
    pub ratios: Vec<f64>,
}

pub fn cylinder_limit_check(
    p: &LowerDimProblem,
    eps: &[f64],
    f: &SupportEvaluator,
    quad_tol: f64,
) -> Result<CylinderReport> {
    let limit = sbm_lowerdim(p, f, quad_tol)?;
    let mut rows = Vec::with_capacity(eps.len());
    for &e in eps {
        if !(e > 0.0) {
            return Err(Error::DimensionError(format!("cylinder height {e} leaves M lower dimensional")));
        }
        let g = build_graph(&cylinder(&p.m, e, &p.w))?;
        let graph_value = integrate_on_arcs(f, &g, quad_tol)?;
        rows.push(CylinderRow { eps: e, graph_value, error: (graph_value - limit).abs() });
    }
    let ratios = rows.windows(2).map(|r| r[0].error / r[1].error).collect();
    Ok(CylinderReport { limit, rows, ratios })
}
