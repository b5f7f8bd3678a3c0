//! Polytope geometry in three dimensions: hulls, support functions, faces,
//! Minkowski sums, enclosing radii and the constructed test bodies.

mod bodies;
mod classify;
mod hull;
mod polytope;
mod support;

pub use bodies::{
    box_polytope, build_test_body, cylinder, random_hull, regular_polygon, regular_simplex, segment, standard_simplex,
    unit_cube, unit_square, TestBody,
};
pub use classify::{affine_dimension, classify_trivial, TrivialClassification};
pub use hull::convex_hull_2d;
pub use polytope::{enclosing_radii, hull, minkowski_sum, Edge, Facet, Polytope};
pub use support::{support_data, Body, SupportEvaluator};

use nalgebra::{Unit, Vector3};

pub type Vec3 = Vector3<f64>;

/// Direction on the unit sphere.
pub type UnitVector = Unit<Vector3<f64>>;

/// Tolerance on coplanarity and point coincidence, relative to the body scale.
pub const GEOM_TOL: f64 = 1e-9;

pub fn unit(x: f64, y: f64, z: f64) -> UnitVector {
    Unit::new_normalize(Vector3::new(x, y, z))
}

/// Some unit vector orthogonal to `n`.
pub fn orthogonal_unit(n: &Vec3) -> UnitVector {
    let a = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
        Vec3::x()
    } else if n.y.abs() <= n.z.abs() {
        Vec3::y()
    } else {
        Vec3::z()
    };
    Unit::new_normalize(n.cross(&a))
}

/// Geodesic distance between two unit vectors, accurate near 0 and near pi.
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}
