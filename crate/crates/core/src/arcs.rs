//! Great-circle arcs and the exact piecewise structure of support functions
//! along them.
//!
//! Along `u(t) = a cos t + b sin t` the support function of a polytope is
//! `max_i <y_i, u(t)>`, a maximum of sinusoids. The active vertex only changes
//! at the outer normal angles of the polygon obtained by projecting the
//! polytope onto `span{a, b}`, so every term of a [`SupportEvaluator`] is an
//! exact sinusoid `A cos t + B sin t + C` between those breakpoints.

use nalgebra::Unit;

use crate::error::{Error, Result};
use crate::geometry::{angle_between, convex_hull_2d, Body, SupportEvaluator, UnitVector, Vec3};
use crate::quadrature;

/// Arc-length parametrized geodesic segment `t -> start cos t + tangent sin t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    start: UnitVector,
    tangent: UnitVector,
    length: f64,
}

impl Arc {
    /// Shortest geodesic from `a` to `b`; requires `0 < angle < pi`.
    pub fn between(a: &UnitVector, b: &UnitVector) -> Result<Arc> {
        let length = angle_between(a, b);
        let t = b.into_inner() - a.into_inner() * a.dot(b);
        if !(length > 0.0 && length < std::f64::consts::PI) || t.norm() == 0.0 {
            return Err(Error::DegenerateInput(format!("arc endpoints at angle {length}")));
        }
        Ok(Arc { start: *a, tangent: Unit::new_normalize(t), length })
    }

    /// Arc leaving `start` in direction `tangent` (made orthogonal to `start`).
    pub fn from_tangent(start: UnitVector, tangent: &Vec3, length: f64) -> Arc {
        let t = tangent - start.into_inner() * start.dot(tangent);
        Arc { start, tangent: Unit::new_normalize(t), length }
    }

    pub fn start(&self) -> UnitVector {
        self.start
    }

    pub fn tangent(&self) -> UnitVector {
        self.tangent
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn point(&self, t: f64) -> Vec3 {
        self.start.into_inner() * t.cos() + self.tangent.into_inner() * t.sin()
    }

    pub fn velocity(&self, t: f64) -> Vec3 {
        self.tangent.into_inner() * t.cos() - self.start.into_inner() * t.sin()
    }

    pub fn end(&self) -> UnitVector {
        Unit::new_normalize(self.point(self.length))
    }

    /// `∫ u dH¹` over the arc.
    pub fn moment(&self) -> Vec3 {
        let l = self.length;
        self.start.into_inner() * l.sin() + self.tangent.into_inner() * (1.0 - l.cos())
    }
}

/// `A cos t + B sin t + C`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Sinusoid {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Sinusoid {
    pub fn value(&self, t: f64) -> f64 {
        self.a * t.cos() + self.b * t.sin() + self.c
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.b * t.cos() - self.a * t.sin()
    }

    fn add(&mut self, k: f64, o: Sinusoid) {
        self.a += k * o.a;
        self.b += k * o.b;
        self.c += k * o.c;
    }
}

/// Exact piecewise-sinusoid restriction of a support-function combination to an arc.
#[derive(Debug, Clone)]
pub struct ArcProfile {
    /// Sorted breakpoints, starting at 0 and ending at the arc length.
    breaks: Vec<f64>,
    pieces: Vec<Sinusoid>,
}

impl ArcProfile {
    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Sinusoid] {
        &self.pieces
    }

    /// Piece active at `t` (the left one at a breakpoint).
    pub fn piece_at(&self, t: f64) -> Sinusoid {
        let k = self.breaks[1..self.breaks.len() - 1].partition_point(|&b| b < t);
        self.pieces[k]
    }

    pub fn value(&self, t: f64) -> f64 {
        self.piece_at(t).value(t)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.piece_at(t).derivative(t)
    }
}

/// Projection of a polytope's vertices onto the arc plane, with the polygon
/// normal angles where the maximizing vertex changes.
struct Projected {
    pts: Vec<[f64; 2]>,
    breaks: Vec<f64>,
}

fn project(verts: &[Vec3], arc: &Arc) -> Projected {
    let (a, b) = (arc.start.into_inner(), arc.tangent.into_inner());
    let all: Vec<[f64; 2]> = verts.iter().map(|v| [v.dot(&a), v.dot(&b)]).collect();
    let scale = all.iter().map(|p| p[0].hypot(p[1])).fold(f64::MIN_POSITIVE, f64::max);
    let idx = convex_hull_2d(&all, 1e-13 * scale);
    let pts: Vec<[f64; 2]> = idx.iter().map(|&i| all[i]).collect();
    let mut breaks = Vec::new();
    if pts.len() >= 2 {
        let tau = std::f64::consts::TAU;
        for k in 0..pts.len() {
            let (p, q) = (pts[k], pts[(k + 1) % pts.len()]);
            let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
            let phi = (-dx).atan2(dy).rem_euclid(tau);
            if phi > 1e-12 && phi < arc.length - 1e-12 {
                breaks.push(phi);
            }
        }
    }
    Projected { pts, breaks }
}

impl SupportEvaluator {
    /// Exact piecewise representation of this function along `arc`.
    pub fn profile(&self, arc: &Arc) -> ArcProfile {
        let (sa, ta) = (arc.start.into_inner(), arc.tangent.into_inner());
        let mut fixed = Sinusoid { a: self.shift().dot(&sa), b: self.shift().dot(&ta), c: 0.0 };
        let mut projected = Vec::new();
        for (k, body) in self.terms() {
            match body {
                Body::Ball { center, radius } => {
                    fixed.add(*k, Sinusoid { a: center.dot(&sa), b: center.dot(&ta), c: *radius })
                }
                Body::Polytope(p) => projected.push((*k, project(p.vertices(), arc))),
            }
        }
        let mut breaks: Vec<f64> = projected.iter().flat_map(|(_, p)| p.breaks.iter().copied()).collect();
        breaks.push(0.0);
        breaks.push(arc.length);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|x, y| (*x - *y).abs() <= 1e-13);
        if let Some(last) = breaks.last_mut() {
            *last = arc.length;
        }
        let pieces = breaks
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let (c, s) = (mid.cos(), mid.sin());
                let mut sum = fixed;
                for (k, proj) in &projected {
                    let best =
                        proj.pts.iter().max_by(|p, q| (p[0] * c + p[1] * s).total_cmp(&(q[0] * c + q[1] * s))).unwrap();
                    sum.add(*k, Sinusoid { a: best[0], b: best[1], c: 0.0 });
                }
                sum
            })
            .collect();
        ArcProfile { breaks, pieces }
    }
}

/// Union of the breakpoints of several profiles on the same arc.
pub fn merged_breaks(profiles: &[&ArcProfile]) -> Vec<f64> {
    let mut all: Vec<f64> = profiles.iter().flat_map(|p| p.breaks.iter().copied()).collect();
    all.sort_by(f64::total_cmp);
    all.dedup_by(|x, y| (*x - *y).abs() <= 1e-13);
    all
}

/// Integrate `integrand(t, active pieces)` along an arc shared by `profiles`,
/// splitting at every breakpoint first, to absolute tolerance `tol`.
pub fn integrate_profiles<F>(profiles: &[&ArcProfile], tol: f64, mut integrand: F) -> Result<f64>
where
    F: FnMut(f64, &[Sinusoid]) -> f64,
{
    let breaks = merged_breaks(profiles);
    let total = breaks.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let mut active = vec![Sinusoid::default(); profiles.len()];
    let mut sum = 0.0;
    for w in breaks.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        for (slot, p) in active.iter_mut().zip(profiles) {
            *slot = p.piece_at(mid);
        }
        let share = tol * (w[1] - w[0]) / total;
        sum += quadrature::adaptive(|t| integrand(t, &active), w[0], w[1], share)?;
    }
    Ok(sum)
}

/// Fixed-rule quadrature nodes `(t, weight)` on an arc, respecting breakpoints.
pub fn arc_nodes(profiles: &[&ArcProfile], length: f64) -> Vec<(f64, f64)> {
    let mut breaks = merged_breaks(profiles);
    if breaks.is_empty() {
        breaks = vec![0.0, length];
    }
    let (_, rule) = quadrature::rule_pair();
    breaks.windows(2).flat_map(|w| rule.on(w[0], w[1]).collect::<Vec<_>>()).collect()
}
