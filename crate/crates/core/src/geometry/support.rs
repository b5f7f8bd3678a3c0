use super::{Polytope, UnitVector, Vec3};
use crate::error::{Error, Result};

/// A convex body: a polytope or a Euclidean ball.
#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Polytope(Polytope),
    Ball { center: Vec3, radius: f64 },
}

impl Body {
    pub fn unit_ball() -> Body {
        Body::Ball { center: Vec3::zeros(), radius: 1.0 }
    }

    pub fn ball(center: Vec3, radius: f64) -> Result<Body> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::BadParam(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Body::Ball { center, radius })
    }

    /// Support function; positively homogeneous of degree one in `u`.
    pub fn support(&self, u: &Vec3) -> f64 {
        match self {
            Body::Polytope(p) => p.support(u),
            Body::Ball { center, radius } => center.dot(u) + radius * u.norm(),
        }
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match self {
            Body::Polytope(p) => Some(p),
            Body::Ball { .. } => None,
        }
    }
}

impl From<Polytope> for Body {
    fn from(p: Polytope) -> Body {
        Body::Polytope(p)
    }
}

/// Support value `h_K(u)` and the face `F(K, u)`.
pub fn support_data(body: &Body, u: &UnitVector) -> (f64, Polytope) {
    match body {
        Body::Polytope(p) => (p.support(u), p.face(u)),
        Body::Ball { center, radius } => {
            let x = center + u.into_inner() * *radius;
            let face = Polytope::from_points(&[x]).expect("single finite point");
            (body.support(u), face)
        }
    }
}

/// A formal combination `sum_i c_i h_{K_i} + <v, .>` of support functions.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SupportEvaluator {
    terms: Vec<(f64, Body)>,
    shift: Vec3,
}

impl SupportEvaluator {
    pub fn zero() -> SupportEvaluator {
        SupportEvaluator::default()
    }

    /// The support function of a single body.
    pub fn of(body: impl Into<Body>) -> SupportEvaluator {
        SupportEvaluator { terms: vec![(1.0, body.into())], shift: Vec3::zeros() }
    }

    /// The linear function `<v, .>`.
    pub fn linear(v: Vec3) -> SupportEvaluator {
        SupportEvaluator { terms: Vec::new(), shift: v }
    }

    /// The constant function 1 (support function of the unit ball on the sphere).
    pub fn one() -> SupportEvaluator {
        SupportEvaluator::of(Body::unit_ball())
    }

    pub fn plus(mut self, c: f64, body: impl Into<Body>) -> SupportEvaluator {
        self.terms.push((c, body.into()));
        self
    }

    pub fn plus_linear(mut self, v: Vec3) -> SupportEvaluator {
        self.shift += v;
        self
    }

    /// `self + c * other`.
    pub fn add_scaled(mut self, c: f64, other: &SupportEvaluator) -> SupportEvaluator {
        self.terms.extend(other.terms.iter().map(|(k, b)| (c * k, b.clone())));
        self.shift += other.shift * c;
        self
    }

    pub fn terms(&self) -> &[(f64, Body)] {
        &self.terms
    }

    pub fn shift(&self) -> Vec3 {
        self.shift
    }

    pub fn eval(&self, u: &Vec3) -> f64 {
        self.terms.iter().map(|(c, b)| c * b.support(u)).sum::<f64>() + self.shift.dot(u)
    }

    pub fn eval_unit(&self, u: &UnitVector) -> f64 {
        self.eval(u.as_ref())
    }
}
