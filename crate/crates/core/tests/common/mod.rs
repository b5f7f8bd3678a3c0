//! Independent oracles. Nothing here calls the quadrature, graph or measure
//! code of the library; polytopes are used only for their vertex and facet
//! lists.

#![allow(dead_code)]

use mqi_core::geometry::{Polytope, Vec3};
use nalgebra::{DMatrix, SymmetricEigen};

/// Gauss–Legendre rule on `[-1, 1]` by the Golub–Welsch eigenvalue method.
pub fn golub_welsch(n: usize) -> Vec<(f64, f64)> {
    let mut j = DMatrix::zeros(n, n);
    for k in 1..n {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    let e = SymmetricEigen::new(j);
    let mut out: Vec<(f64, f64)> = (0..n).map(|i| (e.eigenvalues[i], 2.0 * e.eigenvectors[(0, i)].powi(2))).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn integrate_1d(rule: &[(f64, f64)], a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    rule.iter().map(|(x, w)| r * w * f(m + r * x)).sum()
}

/// `∫` of `⟨y, u⟩` over the spherical triangle with corners `a, b, c`.
fn spherical_triangle_integral(y: &Vec3, a: Vec3, b: Vec3, c: Vec3, rule: &[(f64, f64)], depth: usize) -> f64 {
    if depth > 0 {
        let (ab, bc, ca) = ((a + b).normalize(), (b + c).normalize(), (c + a).normalize());
        return spherical_triangle_integral(y, a, ab, ca, rule, depth - 1)
            + spherical_triangle_integral(y, ab, b, bc, rule, depth - 1)
            + spherical_triangle_integral(y, ca, bc, c, rule, depth - 1)
            + spherical_triangle_integral(y, ab, bc, ca, rule, depth - 1);
    }
    // Central projection of the flat triangle; Duffy map of the unit square.
    let jac = a.dot(&(b - a).cross(&(c - a))).abs();
    let mut sum = 0.0;
    for &(x1, w1) in rule {
        let s = 0.5 * (x1 + 1.0);
        for &(x2, w2) in rule {
            let t = 0.5 * (x2 + 1.0) * (1.0 - s);
            let p = a + (b - a) * s + (c - a) * t;
            let n = p.norm();
            sum += 0.25 * w1 * w2 * (1.0 - s) * jac / (n * n * n) * y.dot(&(p / n));
        }
    }
    sum
}

/// `V(B, B, M) = (1/3) ∫_{S^2} h_M dσ`, integrating `⟨v, u⟩` over the normal
/// cone of every vertex `v` of `M`.
pub fn vbb_sphere_oracle(m: &Polytope) -> f64 {
    let rule = golub_welsch(12);
    let mut total = 0.0;
    for (vi, v) in m.vertices().iter().enumerate() {
        let normals: Vec<Vec3> =
            m.facets().iter().filter(|f| f.cycle.contains(&vi)).map(|f| f.normal.into_inner()).collect();
        let axis = normals.iter().sum::<Vec3>().normalize();
        let e1 = (normals[0] - axis * axis.dot(&normals[0])).normalize();
        let e2 = axis.cross(&e1);
        let mut ordered = normals.clone();
        ordered.sort_by(|p, q| {
            let ang = |x: &Vec3| x.dot(&e2).atan2(x.dot(&e1));
            ang(p).total_cmp(&ang(q))
        });
        for k in 1..ordered.len() - 1 {
            total += spherical_triangle_integral(v, ordered[0], ordered[k], ordered[k + 1], &rule, 2);
        }
    }
    total / 3.0
}

/// Area of the slice at height `z` of `[0,1]^3 + tB`.
fn cube_ball_slice(z: f64, t: f64) -> f64 {
    let rho = if (0.0..=1.0).contains(&z) { t } else { (t * t - (z.min(1.0 - z)).powi(2)).max(0.0).sqrt() };
    1.0 + 4.0 * rho + std::f64::consts::PI * rho * rho
}

/// `Vol([0,1]^3 + tB)` by integrating slice areas; the caps use
/// `d = t sin φ` to remove the square-root endpoint singularity.
pub fn cube_ball_volume(t: f64) -> f64 {
    let rule = golub_welsch(40);
    let middle = integrate_1d(&rule, 0.0, 1.0, |z| cube_ball_slice(z, t));
    let cap = integrate_1d(&rule, 0.0, std::f64::consts::FRAC_PI_2, |phi| {
        let d = t * phi.sin();
        cube_ball_slice(-d, t) * t * phi.cos()
    });
    middle + 2.0 * cap
}

/// Coefficients of the cubic `Vol(C + tB)` recovered from four samples.
pub fn cube_steiner_coefficients() -> [f64; 4] {
    let ts: [f64; 4] = [0.05, 0.1, 0.15, 0.2];
    let a = DMatrix::from_fn(4, 4, |i, j| ts[i].powi(j as i32));
    let b = nalgebra::DVector::from_iterator(4, ts.iter().map(|&t| cube_ball_volume(t)));
    let c = a.lu().solve(&b).expect("Vandermonde system");
    [c[0], c[1], c[2], c[3]]
}

/// Direct support value: maximum over a point list.
pub fn brute_support(points: &[Vec3], u: &Vec3) -> f64 {
    points.iter().map(|p| p.dot(u)).fold(f64::NEG_INFINITY, f64::max)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

/// Deterministic quasi-uniform directions (Fibonacci lattice).
pub fn fibonacci_directions(n: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}
