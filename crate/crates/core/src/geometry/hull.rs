//! Convex hull machinery: affine frames, planar hulls and an incremental
//! triangulated hull followed by coplanar facet merging.

use std::collections::HashMap;

use super::Vec3;
use crate::error::{Error, Result};

/// Affinely independent subset spanning the input, with its dimension.
pub(crate) struct AffineFrame {
    pub dim: usize,
    pub ids: Vec<usize>,
}

pub(crate) fn affine_frame(points: &[Vec3], tol: f64) -> AffineFrame {
    let p0 = points[0];
    let far = |f: &dyn Fn(&Vec3) -> f64| -> (usize, f64) {
        points.iter().enumerate().map(|(i, p)| (i, f(p))).fold((0, f64::NEG_INFINITY), |acc, x| {
            if x.1 > acc.1 {
                x
            } else {
                acc
            }
        })
    };
    let (i1, d1) = far(&|p| (p - p0).norm());
    if d1 <= tol {
        return AffineFrame { dim: 0, ids: vec![0] };
    }
    let dir = (points[i1] - p0) / d1;
    let (i2, d2) = far(&|p| {
        let q = p - p0;
        (q - dir * q.dot(&dir)).norm()
    });
    if d2 <= tol {
        return AffineFrame { dim: 1, ids: vec![0, i1] };
    }
    let n = dir.cross(&(points[i2] - p0)).normalize();
    let (i3, d3) = far(&|p| (p - p0).dot(&n).abs());
    if d3 <= tol {
        return AffineFrame { dim: 2, ids: vec![0, i1, i2] };
    }
    AffineFrame { dim: 3, ids: vec![0, i1, i2, i3] }
}

fn cross2(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Strict counter-clockwise hull of planar points (monotone chain).
///
/// Returns indices into `pts`. Points within `tol` of a hull edge line are not
/// reported as corners. Fewer than three indices are returned for degenerate
/// inputs (a single point or a segment).
pub fn convex_hull_2d(pts: &[[f64; 2]], tol: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    // `+ 0.0` folds -0.0 into 0.0; `total_cmp` alone would order them apart.
    order.sort_by(|&i, &j| {
        (pts[i][0] + 0.0).total_cmp(&(pts[j][0] + 0.0)).then((pts[i][1] + 0.0).total_cmp(&(pts[j][1] + 0.0)))
    });
    order.dedup_by(|a, b| {
        let (p, q) = (pts[*a], pts[*b]);
        (p[0] - q[0]).hypot(p[1] - q[1]) <= tol
    });
    if order.len() < 3 {
        return order;
    }
    let keep_left = |chain: &mut Vec<usize>, i: usize| {
        while chain.len() >= 2 {
            let o = pts[chain[chain.len() - 2]];
            let a = pts[chain[chain.len() - 1]];
            let b = pts[i];
            let base = (b[0] - o[0]).hypot(b[1] - o[1]);
            if cross2(o, a, b) <= tol * base {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(i);
    };
    let mut lower = Vec::new();
    for &i in &order {
        keep_left(&mut lower, i);
    }
    let mut upper = Vec::new();
    for &i in order.iter().rev() {
        keep_left(&mut upper, i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

#[derive(Debug, Clone)]
struct Tri {
    v: [usize; 3],
    n: Vec3,
    d: f64,
    area2: f64,
    alive: bool,
}

impl Tri {
    fn new(points: &[Vec3], v: [usize; 3]) -> Tri {
        let c = (points[v[1]] - points[v[0]]).cross(&(points[v[2]] - points[v[0]]));
        let area2 = c.norm();
        let n = if area2 > 0.0 { c / area2 } else { Vec3::zeros() };
        let d = n.dot(&((points[v[0]] + points[v[1]] + points[v[2]]) / 3.0));
        Tri { v, n, d, area2, alive: true }
    }

    fn dist(&self, p: &Vec3) -> f64 {
        self.n.dot(p) - self.d
    }

    fn edges(&self) -> [(usize, usize); 3] {
        let [a, b, c] = self.v;
        [(a, b), (b, c), (c, a)]
    }
}

/// One merged facet of a full-dimensional hull, before vertex filtering.
pub(crate) struct FacetGroup {
    pub normal: Vec3,
    pub vertex_ids: Vec<usize>,
}

/// Incremental hull of full-dimensional input, merged into planar facets.
pub(crate) fn hull_facets_3d(points: &[Vec3], frame: &AffineFrame, tol: f64) -> Result<Vec<FacetGroup>> {
    let ids = &frame.ids;
    let inside = (points[ids[0]] + points[ids[1]] + points[ids[2]] + points[ids[3]]) / 4.0;
    let mut tris: Vec<Tri> = Vec::new();
    for skip in 0..4 {
        let f: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| ids[k]).collect();
        let mut t = Tri::new(points, [f[0], f[1], f[2]]);
        if t.dist(&inside) > 0.0 {
            t = Tri::new(points, [f[0], f[2], f[1]]);
        }
        tris.push(t);
    }
    let mut edge_map: HashMap<(usize, usize), usize> = HashMap::new();
    for (k, t) in tris.iter().enumerate() {
        for e in t.edges() {
            edge_map.insert(e, k);
        }
    }

    let mut order: Vec<usize> = (0..points.len()).filter(|i| !ids.contains(i)).collect();
    order.sort_by(|&i, &j| {
        (points[j] - inside).norm_squared().total_cmp(&(points[i] - inside).norm_squared()).then(i.cmp(&j))
    });

    let mut visible = Vec::new();
    for &p in &order {
        let pt = points[p];
        let mut best = (usize::MAX, tol);
        for (k, t) in tris.iter().enumerate() {
            if t.alive {
                let d = t.dist(&pt);
                if d > best.1 {
                    best = (k, d);
                }
            }
        }
        if best.0 == usize::MAX {
            continue;
        }
        visible.clear();
        visible.resize(tris.len(), false);
        let mut stack = vec![best.0];
        visible[best.0] = true;
        let mut region = Vec::new();
        while let Some(k) = stack.pop() {
            region.push(k);
            for (a, b) in tris[k].edges() {
                let nb = *edge_map.get(&(b, a)).ok_or_else(|| Error::HullFailure("open triangulation".into()))?;
                if !visible[nb] && tris[nb].dist(&pt) > tol {
                    visible[nb] = true;
                    stack.push(nb);
                }
            }
        }
        let mut horizon = Vec::new();
        for &k in &region {
            for (a, b) in tris[k].edges() {
                let nb = edge_map[&(b, a)];
                if !visible[nb] {
                    horizon.push((a, b));
                }
            }
        }
        for &k in &region {
            tris[k].alive = false;
            for e in tris[k].edges() {
                edge_map.remove(&e);
            }
        }
        for (a, b) in horizon {
            let t = Tri::new(points, [a, b, p]);
            let k = tris.len();
            for e in t.edges() {
                if edge_map.insert(e, k).is_some() {
                    return Err(Error::HullFailure("non-manifold horizon".into()));
                }
            }
            tris.push(t);
        }
    }

    // Union adjacent triangles whose shared edge is not a convex crease.
    let mut parent: Vec<usize> = (0..tris.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (k, t) in tris.iter().enumerate() {
        if !t.alive {
            continue;
        }
        for (a, b) in t.edges() {
            let g = edge_map[&(b, a)];
            if g < k {
                continue;
            }
            let opp_g = tris[g].v.iter().copied().find(|&x| x != a && x != b).unwrap();
            let opp_k = t.v.iter().copied().find(|&x| x != a && x != b).unwrap();
            let coplanar = t.dist(&points[opp_g]) > -tol
                || tris[g].dist(&points[opp_k]) > -tol
                || (t.n - tris[g].n).norm() <= super::GEOM_TOL;
            if coplanar {
                let (ra, rb) = (find(&mut parent, k), find(&mut parent, g));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<(usize, FacetGroup)> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (k, t) in tris.iter().enumerate() {
        if !t.alive {
            continue;
        }
        let r = find(&mut parent, k);
        let idx = *slot.entry(r).or_insert_with(|| {
            groups.push((r, FacetGroup { normal: Vec3::zeros(), vertex_ids: Vec::new() }));
            groups.len() - 1
        });
        let g = &mut groups[idx].1;
        g.normal += tris[k].n * tris[k].area2;
        g.vertex_ids.extend_from_slice(&tris[k].v);
    }
    let mut out = Vec::with_capacity(groups.len());
    for (_, mut g) in groups {
        let norm = g.normal.norm();
        if norm == 0.0 {
            return Err(Error::HullFailure("facet with zero area".into()));
        }
        g.normal /= norm;
        g.vertex_ids.sort_unstable();
        g.vertex_ids.dedup();
        out.push(g);
    }
    Ok(out)
}
