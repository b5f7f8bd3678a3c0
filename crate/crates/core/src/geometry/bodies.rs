//! Constructors for the standard test bodies.

use std::collections::HashMap;

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{hull, minkowski_sum, Polytope, UnitVector, Vec3};
use crate::error::{Error, Result};

/// Recipe for a derived test polytope.
#[derive(Debug, Clone, PartialEq)]
pub enum TestBody {
    /// Cut `base` by `{<x,u> <= h(u) - depth}` where `u` points out of the
    /// corner at `vertex`. With `vertex_only` the cut may not reach any other
    /// vertex.
    TruncateVertex { base: Polytope, vertex: Vec3, depth: f64, vertex_only: bool },
    /// Apply `x -> x + amount * <x, height> * axis`.
    Shear { base: Polytope, axis: Vec3, height: Vec3, amount: f64 },
    /// Icosahedron refined `level` times and pushed to the unit sphere.
    ApproximateBall { level: usize },
    /// Hull of `count` uniform points in `[-1, 1]^3`.
    RandomHull { count: usize, seed: u64 },
}

pub fn build_test_body(spec: &TestBody) -> Result<Polytope> {
    match spec {
        TestBody::TruncateVertex { base, vertex, depth, vertex_only } => {
            truncate_vertex(base, vertex, *depth, *vertex_only)
        }
        TestBody::Shear { base, axis, height, amount } => {
            let a = Matrix3::identity() + axis * height.transpose() * *amount;
            let p = base.map_affine(&a, &Vec3::zeros())?;
            if p.dim() != base.dim() {
                return Err(Error::BadSpec(format!("shear collapses dimension to {}", p.dim())));
            }
            Ok(p)
        }
        TestBody::ApproximateBall { level } => Ok(icosphere(*level)),
        TestBody::RandomHull { count, seed } => {
            if *count < 4 {
                return Err(Error::BadSpec(format!("random hull needs at least 4 points, got {count}")));
            }
            random_hull(&mut ChaCha8Rng::seed_from_u64(*seed), *count)
        }
    }
}

/// Hull of `count` uniform samples in `[-1, 1]^3` drawn from `rng`.
pub fn random_hull<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Result<Polytope> {
    let pts: Vec<Vec3> = (0..count)
        .map(|_| Vec3::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
        .collect();
    hull(&pts)
}

fn truncate_vertex(p: &Polytope, vertex: &Vec3, depth: f64, vertex_only: bool) -> Result<Polytope> {
    if !p.is_full_dimensional() {
        return Err(Error::BadSpec("truncation needs a full-dimensional polytope".into()));
    }
    if !(depth > 0.0) {
        return Err(Error::BadSpec(format!("truncation depth must be positive, got {depth}")));
    }
    let tol = 1e-9 * p.scale();
    let vid = p
        .vertices()
        .iter()
        .position(|v| (v - vertex).norm() <= tol)
        .ok_or_else(|| Error::BadSpec(format!("{vertex:?} is not a vertex")))?;
    let v = p.vertices()[vid];
    let mut dir = Vec3::zeros();
    for e in p.edges() {
        if let Some(k) = e.vertices.iter().position(|&i| i == vid) {
            let nb = p.vertices()[e.vertices[1 - k]];
            dir += (v - nb).normalize();
        }
    }
    let unique_max = |d: &Vec3| {
        let top = v.dot(d);
        p.vertices().iter().enumerate().all(|(i, x)| i == vid || x.dot(d) < top - tol)
    };
    if dir.norm() == 0.0 || !unique_max(&dir) {
        dir = p.facets().iter().filter(|f| f.cycle.contains(&vid)).map(|f| f.normal.into_inner()).sum();
    }
    let u = UnitVector::new_normalize(dir);
    let cut = v.dot(&u) - depth;
    let below = |x: &Vec3| x.dot(&u) <= cut + tol;
    if vertex_only {
        if let Some(x) = p.vertices().iter().enumerate().find(|(i, x)| *i != vid && !below(x)) {
            return Err(Error::BadSpec(format!("depth {depth} also removes vertex {:?}", x.1)));
        }
    }
    let mut pts: Vec<Vec3> = p.vertices().iter().copied().filter(|x| below(x)).collect();
    for e in p.edges() {
        let (a, b) = (p.vertices()[e.vertices[0]], p.vertices()[e.vertices[1]]);
        let (da, db) = (a.dot(&u) - cut, b.dot(&u) - cut);
        if (da > 0.0) != (db > 0.0) {
            pts.push(a + (b - a) * (da / (da - db)));
        }
    }
    hull(&pts).map_err(|e| Error::BadSpec(format!("truncation leaves a degenerate body: {e}")))
}

fn icosphere(level: usize) -> Polytope {
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Vec3> = [
        (-1.0, g, 0.0),
        (1.0, g, 0.0),
        (-1.0, -g, 0.0),
        (1.0, -g, 0.0),
        (0.0, -1.0, g),
        (0.0, 1.0, g),
        (0.0, -1.0, -g),
        (0.0, 1.0, -g),
        (g, 0.0, -1.0),
        (g, 0.0, 1.0),
        (-g, 0.0, -1.0),
        (-g, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Vec3>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                verts.push(((verts[a] + verts[b]) * 0.5).normalize());
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(4 * faces.len());
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    hull(&verts).expect("icosphere vertices span space")
}

/// The unit cube `[0, 1]^3`.
pub fn unit_cube() -> Polytope {
    box_polytope(Vec3::zeros(), Vec3::new(1.0, 1.0, 1.0))
}

/// The axis-parallel box with opposite corners `lo` and `hi`.
pub fn box_polytope(lo: Vec3, hi: Vec3) -> Polytope {
    let pts: Vec<Vec3> = (0..8)
        .map(|i| {
            Vec3::new(
                if i & 1 == 0 { lo.x } else { hi.x },
                if i & 2 == 0 { lo.y } else { hi.y },
                if i & 4 == 0 { lo.z } else { hi.z },
            )
        })
        .collect();
    Polytope::from_points(&pts).expect("box corners are finite")
}

/// `conv{0, e1, e2, e3}`.
pub fn standard_simplex() -> Polytope {
    hull(&[Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z()]).expect("simplex")
}

/// Regular tetrahedron with circumradius 1 centered at the origin.
pub fn regular_simplex() -> Polytope {
    let s = 1.0 / 3f64.sqrt();
    hull(&[Vec3::new(s, s, s), Vec3::new(s, -s, -s), Vec3::new(-s, s, -s), Vec3::new(-s, -s, s)]).expect("tetrahedron")
}

pub fn segment(a: Vec3, b: Vec3) -> Polytope {
    Polytope::from_points(&[a, b]).expect("finite endpoints")
}

/// `[0, 1]^2 x {0}`.
pub fn unit_square() -> Polytope {
    Polytope::from_points(&[Vec3::zeros(), Vec3::x(), Vec3::new(1.0, 1.0, 0.0), Vec3::y()]).expect("square")
}

/// Regular `m`-gon with side `side` in the plane `z = 0`, centered at the origin.
pub fn regular_polygon(m: usize, side: f64) -> Result<Polytope> {
    if m < 3 || !(side > 0.0) {
        return Err(Error::BadSpec(format!("regular polygon needs m >= 3 and side > 0, got {m}, {side}")));
    }
    let rho = side / (2.0 * (std::f64::consts::PI / m as f64).sin());
    let pts: Vec<Vec3> = (0..m)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / m as f64;
            Vec3::new(rho * t.cos(), rho * t.sin(), 0.0)
        })
        .collect();
    Polytope::from_points(&pts)
}

/// The prism `M + eps [0, w]`.
pub fn cylinder(m: &Polytope, eps: f64, w: &Vec3) -> Polytope {
    minkowski_sum(m, &segment(Vec3::zeros(), w * eps))
}
