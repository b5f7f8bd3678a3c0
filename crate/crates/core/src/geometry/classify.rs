//! Affine dimensions and the degenerate cases of the quadratic inequality.

use super::{minkowski_sum, Body, Polytope};

/// Dimension of the affine hull; balls are full-dimensional.
pub fn affine_dimension(body: &Body) -> usize {
    match body {
        Body::Polytope(p) => p.dim(),
        Body::Ball { .. } => 3,
    }
}

fn sum_dimension(bodies: &[&Body]) -> usize {
    let mut acc: Option<Polytope> = None;
    for b in bodies {
        match b {
            Body::Ball { .. } => return 3,
            Body::Polytope(p) => {
                acc = Some(match acc {
                    None => p.clone(),
                    Some(q) => minkowski_sum(&q, p),
                })
            }
        }
    }
    acc.map_or(0, |p| p.dim())
}

/// Dimensions of `K, L, M` and their sums, with the resulting verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialClassification {
    pub dim_k: usize,
    pub dim_l: usize,
    pub dim_m: usize,
    pub dim_kl: usize,
    pub dim_km: usize,
    pub dim_lm: usize,
    pub dim_klm: usize,
    /// `V(L, L, M) = 0`.
    pub vll_vanishes: bool,
    /// `V(K, L, M) = 0`, which in the degenerate case is exactly equality.
    pub vkl_vanishes: bool,
}

impl TrivialClassification {
    /// `None` if `V(L, L, M) > 0`; otherwise whether equality holds.
    pub fn trivial_equality(&self) -> Option<bool> {
        self.vll_vanishes.then_some(self.vkl_vanishes)
    }
}

pub fn classify_trivial(k: &Body, l: &Body, m: &Body) -> TrivialClassification {
    let c = TrivialClassification {
        dim_k: affine_dimension(k),
        dim_l: affine_dimension(l),
        dim_m: affine_dimension(m),
        dim_kl: sum_dimension(&[k, l]),
        dim_km: sum_dimension(&[k, m]),
        dim_lm: sum_dimension(&[l, m]),
        dim_klm: sum_dimension(&[k, l, m]),
        vll_vanishes: false,
        vkl_vanishes: false,
    };
    // V(A1, A2, A3) > 0 iff every subfamily of j bodies has a sum of dimension >= j.
    let vll_vanishes = c.dim_l <= 1 || c.dim_m == 0 || c.dim_lm <= 2;
    let vkl_vanishes = c.dim_k == 0
        || c.dim_l == 0
        || c.dim_m == 0
        || c.dim_kl <= 1
        || c.dim_km <= 1
        || c.dim_lm <= 1
        || c.dim_klm <= 2;
    TrivialClassification { vll_vanishes, vkl_vanishes, ..c }
}
