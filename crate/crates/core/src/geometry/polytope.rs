use std::collections::HashMap;

use nalgebra::{Matrix3, Unit};

use super::hull::{affine_frame, convex_hull_2d, hull_facets_3d};
use super::{orthogonal_unit, UnitVector, Vec3, GEOM_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    /// Outward unit normal.
    pub normal: UnitVector,
    /// Support value in the normal direction.
    pub offset: f64,
    /// Vertex indices, counter-clockwise seen from outside.
    pub cycle: Vec<usize>,
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// Adjacent facets, lower index first.
    pub facets: [usize; 2],
    pub vertices: [usize; 2],
    pub length: f64,
}

/// A convex polytope given by its extreme points.
///
/// Full-dimensional polytopes carry facet and edge combinatorics. Lower
/// dimensional ones carry only their extreme points; planar polygons keep them
/// in counter-clockwise order around `plane_normal`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    vertices: Vec<Vec3>,
    facets: Vec<Facet>,
    edges: Vec<Edge>,
    centroid: Vec3,
    dim: usize,
    plane_normal: Option<UnitVector>,
}

/// Full-dimensional convex hull of `points`.
pub fn hull(points: &[Vec3]) -> Result<Polytope> {
    let p = Polytope::from_points(points)?;
    if p.dim < 3 {
        return Err(Error::DegenerateInput(format!("affine dimension {}", p.dim)));
    }
    Ok(p)
}

/// Minkowski sum as the hull of all pairwise vertex sums.
pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Polytope {
    let mut pts = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            pts.push(a + b);
        }
    }
    Polytope::from_points(&pts).expect("sums of finite vertices are finite")
}

/// Radii `r`, `R` with `rB ⊆ M - c ⊆ RB` about the vertex centroid `c`.
pub fn enclosing_radii(m: &Polytope) -> Result<(f64, f64)> {
    if !m.is_full_dimensional() {
        return Err(Error::DegenerateInput(format!("affine dimension {}", m.dim)));
    }
    let c = m.centroid;
    let r = m.facets.iter().map(|f| f.offset - f.normal.dot(&c)).fold(f64::INFINITY, f64::min);
    let big_r = m.vertices.iter().map(|v| (v - c).norm()).fold(0.0, f64::max);
    Ok((r, big_r))
}

impl Polytope {
    /// Convex hull of `points` in whatever dimension they span.
    pub fn from_points(points: &[Vec3]) -> Result<Polytope> {
        if points.is_empty() {
            return Err(Error::DegenerateInput("no points".into()));
        }
        if points.iter().any(|p| !p.iter().all(|x| x.is_finite())) {
            return Err(Error::DegenerateInput("non-finite coordinate".into()));
        }
        let extent = points.iter().map(|p| (p - points[0]).norm()).fold(0.0, f64::max);
        let scale = extent.max(points[0].norm()).max(f64::MIN_POSITIVE);
        let tol = GEOM_TOL * extent.max(f64::MIN_POSITIVE);
        let frame = affine_frame(points, tol);
        match frame.dim {
            0 => Ok(Self::lower(vec![points[0]], 0, None)),
            1 => {
                let a = points[frame.ids[0]];
                let dir = (points[frame.ids[1]] - a).normalize();
                let t = |p: &Vec3| (p - a).dot(&dir);
                let lo = points.iter().min_by(|p, q| t(p).total_cmp(&t(q))).unwrap();
                let hi = points.iter().max_by(|p, q| t(p).total_cmp(&t(q))).unwrap();
                Ok(Self::lower(vec![*lo, *hi], 1, None))
            }
            2 => {
                let [i0, i1, i2] = [frame.ids[0], frame.ids[1], frame.ids[2]];
                let n = Unit::new_normalize((points[i1] - points[i0]).cross(&(points[i2] - points[i0])));
                let e1 = orthogonal_unit(&n);
                let e2 = n.cross(&e1);
                let o = points[i0];
                let flat: Vec<[f64; 2]> = points.iter().map(|p| [(p - o).dot(&e1), (p - o).dot(&e2)]).collect();
                let corners = convex_hull_2d(&flat, tol);
                let verts = corners.iter().map(|&i| points[i]).collect();
                Ok(Self::lower(verts, 2, Some(n)))
            }
            _ => Self::full(points, &frame, tol, scale),
        }
    }

    fn lower(vertices: Vec<Vec3>, dim: usize, plane_normal: Option<UnitVector>) -> Polytope {
        let centroid = vertices.iter().sum::<Vec3>() / vertices.len() as f64;
        Polytope { vertices, facets: Vec::new(), edges: Vec::new(), centroid, dim, plane_normal }
    }

    fn full(points: &[Vec3], frame: &super::hull::AffineFrame, tol: f64, scale: f64) -> Result<Polytope> {
        let groups = hull_facets_3d(points, frame, tol)?;

        // Corners of each facet polygon are exactly the extreme points.
        let mut extreme = vec![false; points.len()];
        let mut planes: Vec<(Vec3, f64, Vec<usize>)> = Vec::with_capacity(groups.len());
        for g in &groups {
            let n = g.normal;
            let offset = g.vertex_ids.iter().map(|&i| n.dot(&points[i])).fold(f64::NEG_INFINITY, f64::max);
            // Every input point on the plane, not only those the triangulation
            // happened to attach to this group, so neighbors agree on corners.
            let members: Vec<usize> =
                (0..points.len()).filter(|&i| (n.dot(&points[i]) - offset).abs() <= tol).collect();
            let e1 = orthogonal_unit(&n).into_inner();
            let e2 = n.cross(&e1);
            let o = points[g.vertex_ids[0]];
            let flat: Vec<[f64; 2]> =
                members.iter().map(|&i| [(points[i] - o).dot(&e1), (points[i] - o).dot(&e2)]).collect();
            let corners: Vec<usize> = convex_hull_2d(&flat, tol).into_iter().map(|k| members[k]).collect();
            if corners.len() < 3 {
                return Err(Error::HullFailure("facet polygon with fewer than 3 corners".into()));
            }
            let mut key = corners.clone();
            key.sort_unstable();
            if planes.iter().any(|(_, _, c)| {
                let mut other = c.clone();
                other.sort_unstable();
                other == key
            }) {
                continue;
            }
            for &c in &corners {
                extreme[c] = true;
            }
            planes.push((n, offset, corners));
        }
        let extreme_ids: Vec<usize> = (0..points.len()).filter(|&i| extreme[i]).collect();
        let remap: HashMap<usize, usize> = extreme_ids.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let vertices: Vec<Vec3> = extreme_ids.iter().map(|&i| points[i]).collect();

        let mut facets = Vec::with_capacity(planes.len());
        for (n, offset, corners) in &planes {
            let on_plane: Vec<usize> =
                extreme_ids.iter().copied().filter(|&i| (n.dot(&points[i]) - offset).abs() <= tol).collect();
            let mut cycle = Vec::new();
            for k in 0..corners.len() {
                let (a, b) = (points[corners[k]], points[corners[(k + 1) % corners.len()]]);
                let len = (b - a).norm();
                let dir = (b - a) / len;
                cycle.push(remap[&corners[k]]);
                let mut inner: Vec<(f64, usize)> = on_plane
                    .iter()
                    .filter(|i| !corners.contains(i))
                    .filter_map(|&i| {
                        let q = points[i] - a;
                        let t = q.dot(&dir);
                        let off = (q - dir * t).norm();
                        (off <= tol && t > tol && t < len - tol).then_some((t, i))
                    })
                    .collect();
                inner.sort_by(|x, y| x.0.total_cmp(&y.0));
                cycle.extend(inner.into_iter().map(|(_, i)| remap[&i]));
            }
            facets.push(Self::facet_from_cycle(&vertices, cycle));
        }

        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (fi, f) in facets.iter().enumerate() {
            for k in 0..f.cycle.len() {
                let e = (f.cycle[k], f.cycle[(k + 1) % f.cycle.len()]);
                if directed.insert(e, fi).is_some() {
                    return Err(Error::HullFailure("edge used twice in one orientation".into()));
                }
            }
        }
        let mut edges = Vec::new();
        for (&(a, b), &f) in &directed {
            let g = *directed.get(&(b, a)).ok_or_else(|| Error::HullFailure("unmatched facet edge".into()))?;
            if a < b {
                edges.push(Edge {
                    facets: [f.min(g), f.max(g)],
                    vertices: [a, b],
                    length: (vertices[b] - vertices[a]).norm(),
                });
            }
        }
        edges.sort_by_key(|e| (e.facets, e.vertices));

        let centroid = vertices.iter().sum::<Vec3>() / vertices.len() as f64;
        let p = Polytope { vertices, facets, edges, centroid, dim: 3, plane_normal: None };
        if p.vertices.len() + p.facets.len() != p.edges.len() + 2 {
            return Err(Error::HullFailure(format!(
                "Euler relation violated: V={} E={} F={}",
                p.vertices.len(),
                p.edges.len(),
                p.facets.len()
            )));
        }
        let slack = 1e-9 * scale;
        for f in &p.facets {
            if p.vertices.iter().any(|v| f.normal.dot(v) > f.offset + slack) {
                return Err(Error::HullFailure("vertex beyond a facet plane".into()));
            }
        }
        Ok(p)
    }

    fn facet_from_cycle(vertices: &[Vec3], cycle: Vec<usize>) -> Facet {
        let c = cycle.iter().map(|&i| vertices[i]).sum::<Vec3>() / cycle.len() as f64;
        let mut newell = Vec3::zeros();
        for k in 0..cycle.len() {
            let a = vertices[cycle[k]] - c;
            let b = vertices[cycle[(k + 1) % cycle.len()]] - c;
            newell += a.cross(&b);
        }
        let area = 0.5 * newell.norm();
        let normal = Unit::new_normalize(newell);
        let offset = cycle.iter().map(|&i| normal.dot(&vertices[i])).sum::<f64>() / cycle.len() as f64;
        Facet { normal, offset, cycle, area }
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Vertex centroid; strictly interior for full-dimensional polytopes.
    pub fn centroid(&self) -> Vec3 {
        self.centroid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == 3
    }

    /// Normal of the supporting plane of a planar polygon.
    pub fn plane_normal(&self) -> Option<UnitVector> {
        self.plane_normal
    }

    /// Support function `h(u) = max <v, u>` over the vertices.
    pub fn support(&self, u: &Vec3) -> f64 {
        self.vertices.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest distance of a vertex from the origin (at least `MIN_POSITIVE`).
    pub fn scale(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(f64::MIN_POSITIVE, f64::max)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    pub fn surface_area(&self) -> f64 {
        self.facets.iter().map(|f| f.area).sum()
    }

    /// The face `F(P, u)` of maximizers of `<., u>`.
    pub fn face(&self, u: &Vec3) -> Polytope {
        let h = self.support(u);
        let tol = 1e-12 * self.scale() * u.norm();
        let pts: Vec<Vec3> = self.vertices.iter().copied().filter(|v| v.dot(u) >= h - tol).collect();
        Polytope::from_points(&pts).expect("face of a nonempty polytope is nonempty")
    }

    /// Image under the affine map `x -> A x + b`, re-hulled.
    pub fn map_affine(&self, a: &Matrix3<f64>, b: &Vec3) -> Result<Polytope> {
        let pts: Vec<Vec3> = self.vertices.iter().map(|v| a * v + b).collect();
        Polytope::from_points(&pts)
    }

    /// Translate by `v`, keeping the combinatorics.
    pub fn translated(&self, v: &Vec3) -> Polytope {
        let mut p = self.clone();
        for x in &mut p.vertices {
            *x += v;
        }
        for f in &mut p.facets {
            f.offset += f.normal.dot(v);
        }
        p.centroid += v;
        p
    }

    /// Dilate about the origin by `c > 0`.
    pub fn scaled(&self, c: f64) -> Polytope {
        assert!(c > 0.0, "dilation factor must be positive");
        let mut p = self.clone();
        for x in &mut p.vertices {
            *x *= c;
        }
        for f in &mut p.facets {
            f.offset *= c;
            f.area *= c * c;
        }
        for e in &mut p.edges {
            e.length *= c;
        }
        p.centroid *= c;
        p
    }

    /// Translate so the vertex centroid sits at the origin.
    pub fn centered(&self) -> Polytope {
        self.translated(&-self.centroid)
    }
}
