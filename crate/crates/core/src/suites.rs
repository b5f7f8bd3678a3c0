//! Seeded randomized suites. Instance `i` of suite `s` under seed `x` is a
//! pure function of `(x, s, i)`, so any failure can be replayed alone.

use rand::Rng;

use crate::error::{Error, Result};
use crate::extremal::{certify_equality_fulldim, rigidity_check, weak_stability_check, Thresholds, Verdict};
use crate::geometry::{
    build_test_body, enclosing_radii, minkowski_sum, random_hull, unit_cube, Body, Polytope, SupportEvaluator,
    TestBody, UnitVector, Vec3,
};
use crate::graph::{build_graph, form_value, sbm_and_mu, structural_checks};
use crate::lower_dim::certify_equality_lowerdim;
use crate::mixed::{classical_functionals, mixed_volume, mixed_volume_via_measure, volume};
use crate::rng::instance_rng;

pub const SUITES: &[&str] = &[
    "mixvol",
    "graph",
    "form",
    "certify",
    "certify-constructed",
    "stability",
    "rigidity",
    "classical",
    "brunn-minkowski",
    "lower-certify",
];

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceResult {
    pub index: u64,
    pub passed: bool,
    pub values: Vec<(String, f64)>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub instances: Vec<InstanceResult>,
}

impl SuiteReport {
    pub fn passed_count(&self) -> usize {
        self.instances.iter().filter(|i| i.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.instances.iter().all(|i| i.passed)
    }
}

/// Hull of between `lo` and `hi` uniform points in `[-1, 1]^3`.
pub fn random_body<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> Polytope {
    loop {
        let count = rng.random_range(lo..=hi);
        if let Ok(p) = random_hull(rng, count) {
            return p;
        }
    }
}

pub fn random_triple(seed: u64, suite: &str, index: u64) -> [Polytope; 3] {
    let mut rng = instance_rng(seed, suite, index);
    [random_body(&mut rng, 6, 20), random_body(&mut rng, 6, 20), random_body(&mut rng, 6, 20)]
}

/// Instance `i` pairs `(K, L)` number `i / 10` with centered `M` number `i % 10`.
pub fn stability_instance(seed: u64, index: u64) -> [Polytope; 3] {
    let mut rng = instance_rng(seed, "stability-pair", index / 10);
    let k = random_body(&mut rng, 6, 16);
    let l = random_body(&mut rng, 6, 16);
    let m = random_body(&mut instance_rng(seed, "stability-m", index % 10), 6, 16).centered();
    [k, l, m]
}

/// Twenty equality instances: vertex truncations of the cube, homotheties
/// and translates.
pub fn constructed_equality(seed: u64, index: u64) -> Result<[Polytope; 3]> {
    let cube = unit_cube();
    let corner = |i: u64| Vec3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64);
    match index {
        0..=11 => {
            let depth = if index < 8 { 0.1 } else { 0.05 };
            let k = build_test_body(&TestBody::TruncateVertex {
                base: cube.clone(),
                vertex: corner(index % 8),
                depth,
                vertex_only: true,
            })?;
            Ok([k, cube.clone(), cube])
        }
        12..=19 => {
            let mut rng = instance_rng(seed, "certify-constructed", index);
            let l = random_body(&mut rng, 6, 16);
            let m = random_body(&mut rng, 6, 16);
            let shift =
                Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let a = if index < 16 { rng.random_range(0.3..3.0) } else { 1.0 };
            Ok([l.scaled(a).translated(&shift), l, m])
        }
        _ => Err(Error::BadParam(format!("constructed instances are numbered 0..20, got {index}"))),
    }
}

/// `(K, L, M, w)` with `M` a random polygon or segment in `e3^⊥`; every
/// fourth instance is an equality pair `L = K + t w`.
pub fn lower_triple(seed: u64, index: u64) -> (Polytope, Polytope, Polytope, UnitVector) {
    let mut rng = instance_rng(seed, "lower-certify", index);
    let w = Vec3::z_axis();
    let m = loop {
        let count = if rng.random_bool(0.25) { 2 } else { rng.random_range(3..=8) };
        let pts: Vec<Vec3> =
            (0..count).map(|_| Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), 0.0)).collect();
        if let Ok(p) = Polytope::from_points(&pts) {
            if p.dim() >= 1 {
                break p;
            }
        }
    };
    let k = random_body(&mut rng, 6, 14);
    let l = if index.is_multiple_of(4) {
        k.translated(&(w.into_inner() * rng.random_range(-1.0..1.0)))
    } else {
        random_body(&mut rng, 6, 14)
    };
    (k, l, m, w)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn result(index: u64, passed: bool, values: &[(&str, f64)], note: Option<String>) -> InstanceResult {
    InstanceResult { index, passed, values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(), note }
}

/// Run one instance; numerical errors become failed instances.
pub fn run_instance(suite: &str, seed: u64, index: u64, quad_tol: f64) -> Result<InstanceResult> {
    if !SUITES.contains(&suite) {
        return Err(Error::BadParam(format!("unknown suite {suite:?}; expected one of {}", SUITES.join(", "))));
    }
    match instance(suite, seed, index, quad_tol) {
        Ok(r) => Ok(r),
        Err(Error::BadParam(m)) => Err(Error::BadParam(m)),
        Err(e) => Ok(result(index, false, &[], Some(e.to_string()))),
    }
}

fn instance(suite: &str, seed: u64, index: u64, quad_tol: f64) -> Result<InstanceResult> {
    Ok(match suite {
        "mixvol" => {
            let [k, l, m] = random_triple(seed, suite, index);
            let vp = mixed_volume(&k, &l, &m);
            let vm = mixed_volume_via_measure(&SupportEvaluator::of(k), &Body::from(l), &m, quad_tol)?;
            let r = rel(vp, vm);
            result(index, r <= 1e-9, &[("polarization", vp), ("measure", vm), ("rel_diff", r)], None)
        }
        "graph" => {
            let [m, _, _] = random_triple(seed, suite, index);
            let g = build_graph(&m)?;
            let (sbm, mu) = sbm_and_mu(&g);
            let (r, big_r) = enclosing_radii(&m)?;
            let s = structural_checks(&g, r, big_r);
            let mass_rel = rel(mu.total_mass(), 2.0 * sbm.total_mass());
            result(
                index,
                mass_rel <= 1e-12 && s.passed(),
                &[
                    ("sbm_mass", sbm.total_mass()),
                    ("mu_mass", mu.total_mass()),
                    ("mass_rel", mass_rel),
                    ("worst_balance", s.worst_balance),
                    ("worst_tan_margin", s.worst_tan_margin),
                ],
                None,
            )
        }
        "form" => {
            let [k, l, m] = random_triple(seed, suite, index);
            let g = build_graph(&m)?;
            let vp = mixed_volume(&k, &l, &m);
            let vf = form_value(&g, &SupportEvaluator::of(k), &SupportEvaluator::of(l), quad_tol)?;
            let r = rel(vp, vf);
            result(index, r <= 1e-6, &[("polarization", vp), ("form", vf), ("rel_diff", r)], None)
        }
        "certify" | "certify-constructed" => {
            let [k, l, m] =
                if suite == "certify" { random_triple(seed, suite, index) } else { constructed_equality(seed, index)? };
            let c = certify_equality_fulldim(&k, &l, &m, quad_tol, Thresholds::default())?;
            let agree = (c.verdict == Verdict::Equality) == c.deficit_ok() && c.verdict != Verdict::Inconclusive;
            let passed = agree && (suite == "certify" || c.verdict == Verdict::Equality);
            result(
                index,
                passed,
                &[
                    ("deficit", c.deficit.deficit),
                    ("scale", c.deficit.scale),
                    ("sup_residual", c.sup_residual),
                    ("diam", c.diam),
                    ("a", c.a),
                ],
                Some(c.verdict.as_str().to_string()),
            )
        }
        "stability" => {
            let [k, l, m] = stability_instance(seed, index);
            let s = weak_stability_check(&k, &l, &m)?;
            result(
                index,
                s.holds,
                &[("lhs", s.lhs), ("rhs", s.rhs), ("margin", s.margin), ("residual", s.witness.residual)],
                None,
            )
        }
        "rigidity" => {
            let [k, l, m] = random_triple(seed, suite, index);
            let s = rigidity_check(&k, &l, &m.centered(), quad_tol)?;
            result(
                index,
                s.holds,
                &[
                    ("lhs", s.lhs),
                    ("rhs", s.rhs),
                    ("margin", s.margin),
                    ("sbm_integral", s.sbm_integral),
                    ("mu_integral", s.mu_integral),
                ],
                None,
            )
        }
        "classical" => {
            let [k, _, _] = random_triple(seed, suite, index);
            let f = classical_functionals(&k, quad_tol)?;
            let (v, s, w) = (f.volume, f.surface_area, f.mean_width);
            let pi = std::f64::consts::PI;
            let m1 = s * s - 6.0 * pi * w * v;
            let m2 = pi * w * w - s;
            let ok = m1 >= -1e-9 * s * s && m2 >= -1e-9 * pi * w * w;
            result(
                index,
                ok,
                &[("volume", v), ("surface", s), ("mean_width", w), ("margin_sw", m1), ("margin_ws", m2)],
                None,
            )
        }
        "brunn-minkowski" => {
            let [k, l, _] = random_triple(seed, suite, index);
            let f: Vec<f64> = (0..=10)
                .map(|i| {
                    let t = i as f64 / 10.0;
                    let body = match i {
                        0 => k.clone(),
                        10 => l.clone(),
                        _ => minkowski_sum(&k.scaled(1.0 - t), &l.scaled(t)),
                    };
                    volume(&body).cbrt()
                })
                .collect();
            let worst = f.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).fold(f64::NEG_INFINITY, f64::max);
            result(index, worst <= 1e-9, &[("max_second_difference", worst)], None)
        }
        "lower-certify" => {
            let (k, l, m, w) = lower_triple(seed, index);
            let c = certify_equality_lowerdim(&k, &l, &m, &w, Thresholds::default())?;
            let agree = (c.verdict == Verdict::Equality) == c.deficit_ok() && c.verdict != Verdict::Inconclusive;
            result(
                index,
                agree,
                &[("deficit", c.deficit.deficit), ("scale", c.deficit.scale), ("criterion_residual", c.sup_residual)],
                Some(c.verdict.as_str().to_string()),
            )
        }
        _ => unreachable!("checked by run_instance"),
    })
}

pub fn run_suite(suite: &str, n: u64, seed: u64, quad_tol: f64) -> Result<SuiteReport> {
    let instances = (0..n).map(|i| run_instance(suite, seed, i, quad_tol)).collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport { suite: suite.to_string(), seed, instances })
}
