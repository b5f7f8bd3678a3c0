//! Mixed volumes and area measures.
//!
//! Two independent routes are provided: polarization of volumes of
//! Minkowski sums, and integration of support functions against (mixed) area
//! measures.

use std::f64::consts::PI;

use crate::arcs::{integrate_profiles, Arc};
use crate::error::{Error, Result};
use crate::geometry::{angle_between, minkowski_sum, Body, Polytope, SupportEvaluator, UnitVector, Vec3};
use crate::graph::{build_graph, sbm_and_mu};

/// Angular tolerance for identifying atoms.
pub const ATOM_MERGE_ANGLE: f64 = 1e-9;

pub fn volume(p: &Polytope) -> f64 {
    let v: f64 = p.facets().iter().map(|f| f.offset * f.area).sum::<f64>() / 3.0;
    v.max(0.0)
}

/// `V(K, L, M)` by polarization of the volume polynomial.
pub fn mixed_volume(k: &Polytope, l: &Polytope, m: &Polytope) -> f64 {
    let kl = minkowski_sum(k, l);
    let km = minkowski_sum(k, m);
    let lm = minkowski_sum(l, m);
    let klm = minkowski_sum(&kl, m);
    (volume(&klm) - volume(&kl) - volume(&km) - volume(&lm) + volume(k) + volume(l) + volume(m)) / 6.0
}

/// Measure on the sphere made of point masses and uniform densities on arcs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SphericalMeasure {
    pub atoms: Vec<(UnitVector, f64)>,
    /// Arcs carrying `weight * H^1`.
    pub arcs: Vec<(Arc, f64)>,
    pub nonnegative: bool,
}

impl SphericalMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum::<f64>() + self.arcs.iter().map(|(a, w)| w * a.length()).sum::<f64>()
    }

    /// Total variation, the scale for relative checks.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.1.abs()).sum::<f64>()
            + self.arcs.iter().map(|(a, w)| w.abs() * a.length()).sum::<f64>()
    }

    /// `∫ u dμ(u)`; vanishes for area measures.
    pub fn first_moment(&self) -> Vec3 {
        let mut m = Vec3::zeros();
        for (u, c) in &self.atoms {
            m += u.into_inner() * *c;
        }
        for (a, w) in &self.arcs {
            m += a.moment() * *w;
        }
        m
    }

    fn push_atom(&mut self, u: UnitVector, mass: f64) {
        match self.atoms.iter_mut().find(|(v, _)| angle_between(v, &u) <= ATOM_MERGE_ANGLE) {
            Some(slot) => slot.1 += mass,
            None => self.atoms.push((u, mass)),
        }
    }
}

/// Atoms of the area measure of `p` in any dimension: a planar polygon
/// counts both of its sides, lower dimensional bodies carry no area.
fn area_atoms(p: &Polytope) -> Vec<(UnitVector, f64)> {
    match p.dim() {
        3 => p.facets().iter().map(|f| (f.normal, f.area)).collect(),
        2 => {
            let n = p.plane_normal().expect("planar polytope has a normal");
            let v = p.vertices();
            let mut a = Vec3::zeros();
            for k in 0..v.len() {
                a += v[k].cross(&v[(k + 1) % v.len()]);
            }
            let area = 0.5 * a.dot(&n).abs();
            vec![(n, area), (-n, area)]
        }
        _ => Vec::new(),
    }
}

pub fn area_measure(p: &Polytope) -> Result<SphericalMeasure> {
    if !p.is_full_dimensional() {
        return Err(Error::DegenerateInput(format!("affine dimension {}", p.dim())));
    }
    Ok(SphericalMeasure { atoms: area_atoms(p), arcs: Vec::new(), nonnegative: true })
}

/// `S_{L,M} = (S(L+M) - S(L) - S(M)) / 2`, merged and validated nonnegative.
pub fn mixed_area_measure(l: &Polytope, m: &Polytope) -> Result<SphericalMeasure> {
    let lm = minkowski_sum(l, m);
    if !lm.is_full_dimensional() {
        return Err(Error::DegenerateInput(format!("L + M has affine dimension {}", lm.dim())));
    }
    let mut out = SphericalMeasure::default();
    for (u, a) in area_atoms(&lm) {
        out.push_atom(u, 0.5 * a);
    }
    for (u, a) in area_atoms(l).into_iter().chain(area_atoms(m)) {
        out.push_atom(u, -0.5 * a);
    }
    let total = out.total_variation();
    if let Some(&(_, mass)) = out.atoms.iter().find(|a| a.1 < -1e-9 * total) {
        return Err(Error::NegativeMass { mass, total });
    }
    out.atoms.retain(|a| a.1.abs() > 1e-14 * total);
    out.nonnegative = true;
    Ok(out)
}

/// `∫ f dμ` with atoms summed exactly and arcs integrated to `quad_tol`.
pub fn integrate_against_measure(f: &SupportEvaluator, mu: &SphericalMeasure, quad_tol: f64) -> Result<f64> {
    let mut sum: f64 = mu.atoms.iter().map(|(u, c)| c * f.eval_unit(u)).sum();
    let total_w: f64 = mu.arcs.iter().map(|a| a.1.abs()).sum();
    for (arc, w) in &mu.arcs {
        let prof = f.profile(arc);
        let tol = quad_tol / total_w.max(f64::MIN_POSITIVE);
        sum += w * integrate_profiles(&[&prof], tol, |t, p| p[0].value(t))?;
    }
    Ok(sum)
}

/// `(1/3) ∫ f dS_{L,M}` for a polytope or ball `L` and a polytope `M`.
pub fn mixed_volume_via_measure(f: &SupportEvaluator, l: &Body, m: &Polytope, quad_tol: f64) -> Result<f64> {
    match l {
        Body::Polytope(l) => Ok(integrate_against_measure(f, &mixed_area_measure(l, m)?, quad_tol)? / 3.0),
        Body::Ball { radius, .. } => {
            let (sbm, _) = sbm_and_mu(&build_graph(m)?);
            Ok(radius * integrate_against_measure(f, &sbm, quad_tol)? / 3.0)
        }
    }
}

/// `V(A, B, M)` for bodies `A`, `B` and a polytope `M`.
pub fn mixed_volume_bodies(a: &Body, b: &Body, m: &Polytope, quad_tol: f64) -> Result<f64> {
    match (a, b) {
        (Body::Polytope(a), Body::Polytope(b)) => Ok(mixed_volume(a, b, m)),
        (Body::Ball { .. }, Body::Polytope(_)) => {
            mixed_volume_via_measure(&SupportEvaluator::of(a.clone()), b, m, quad_tol)
        }
        _ => mixed_volume_via_measure(&SupportEvaluator::of(b.clone()), a, m, quad_tol),
    }
}

/// The three mixed volumes entering Minkowski's quadratic inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeficitReport {
    pub vkl: f64,
    pub vkk: f64,
    pub vll: f64,
    /// `vkl^2 - vkk * vll`.
    pub deficit: f64,
    /// `vkk * vll`.
    pub scale: f64,
}

impl DeficitReport {
    pub fn from_values(vkl: f64, vkk: f64, vll: f64) -> DeficitReport {
        DeficitReport { vkl, vkk, vll, deficit: vkl * vkl - vkk * vll, scale: vkk * vll }
    }

    /// The inequality holds up to `1e-9` relative round-off.
    pub fn holds(&self) -> bool {
        self.deficit >= -1e-9 * (self.vkl * self.vkl).max(self.scale)
    }
}

pub fn quadratic_deficit(k: &Body, l: &Body, m: &Polytope, quad_tol: f64) -> Result<DeficitReport> {
    let vkl = mixed_volume_bodies(k, l, m, quad_tol)?;
    let vkk = mixed_volume_bodies(k, k, m, quad_tol)?;
    let vll = mixed_volume_bodies(l, l, m, quad_tol)?;
    Ok(DeficitReport::from_values(vkl, vkk, vll))
}

/// Volume, surface area and mean width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalFunctionals {
    pub volume: f64,
    pub surface_area: f64,
    pub mean_width: f64,
}

pub fn classical_functionals(k: &Polytope, quad_tol: f64) -> Result<ClassicalFunctionals> {
    let s = integrate_against_measure(&SupportEvaluator::one(), &area_measure(k)?, quad_tol)?;
    let (sbm, _) = sbm_and_mu(&build_graph(k)?);
    let vbbk = sbm.total_mass() / 3.0;
    Ok(ClassicalFunctionals { volume: volume(k), surface_area: s, mean_width: 3.0 / (2.0 * PI) * vbbk })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{hull, segment, standard_simplex, unit_cube};

    #[test]
    fn basic_volumes() {
        assert!((volume(&unit_cube()) - 1.0).abs() < 1e-15);
        assert!((volume(&standard_simplex()) - 1.0 / 6.0).abs() < 1e-15);
        assert!((volume(&unit_cube().scaled(2.0)) - 8.0).abs() < 1e-14);
    }

    #[test]
    fn cube_mixed_volumes() {
        let c = unit_cube();
        assert!((mixed_volume(&c, &c, &c) - 1.0).abs() < 1e-14);
        assert!((mixed_volume(&c.scaled(2.0), &c, &c) - 2.0).abs() < 1e-13);
        let s = segment(Vec3::zeros(), Vec3::x());
        assert!((mixed_volume(&c, &c, &s) - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn cube_segment_area_measure() {
        let c = unit_cube();
        let s = segment(Vec3::zeros(), Vec3::x());
        let mu = mixed_area_measure(&c, &s).unwrap();
        assert_eq!(mu.atoms.len(), 4);
        assert!(mu.atoms.iter().all(|a| (a.1 - 0.5).abs() < 1e-14 && a.0.x.abs() < 1e-14));
        let v = integrate_against_measure(&SupportEvaluator::of(c), &mu, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn area_measure_is_balanced() {
        let p = hull(&[
            Vec3::new(0.3, -1.0, 0.2),
            Vec3::new(1.0, 0.4, -0.5),
            Vec3::new(-0.7, 0.8, 0.1),
            Vec3::new(0.1, 0.2, 1.3),
            Vec3::new(-0.2, -0.3, -0.9),
        ])
        .unwrap();
        let mu = area_measure(&p).unwrap();
        assert!(mu.first_moment().norm() < 1e-12 * mu.total_mass());
        let lin = SupportEvaluator::linear(Vec3::new(0.4, -2.0, 1.0));
        assert!(integrate_against_measure(&lin, &mu, 1e-12).unwrap().abs() < 1e-12 * 3.0 * mu.total_mass());
    }

    #[test]
    fn flat_body_rejected() {
        assert!(area_measure(&crate::geometry::unit_square()).is_err());
    }

    #[test]
    fn deficit_vanishes_at_k_equal_l() {
        let c = Body::from(unit_cube());
        let d = quadratic_deficit(&c, &c, &unit_cube(), 1e-12).unwrap();
        assert!(d.deficit.abs() < 1e-13 && d.holds());
    }
}
