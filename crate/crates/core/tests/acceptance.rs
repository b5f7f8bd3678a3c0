//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::{cube_steiner_coefficients, rel, vbb_sphere_oracle};
use mqi_core::extremal::{certify_equality_fulldim, Thresholds, Verdict};
use mqi_core::geometry::{
    build_test_body, enclosing_radii, minkowski_sum, regular_polygon, segment, unit_cube, unit_square, Body,
    SupportEvaluator, TestBody, Vec3,
};
use mqi_core::graph::{assemble, build_graph, kernel_analysis, sbm_and_mu, spectrum, structural_checks};
use mqi_core::lower_dim::{certify_equality_lowerdim, cylinder_limit_check, lowerdim_setup, verify_spectrum};
use mqi_core::mixed::{mixed_volume, mixed_volume_via_measure, volume};
use mqi_core::suites::{random_triple, run_suite, SuiteReport};

const SEED: u64 = 1;
const QUAD_TOL: f64 = 1e-10;

type Outcome = Result<(bool, String), mqi_core::Error>;
type Criterion = (&'static str, fn() -> Outcome);

fn suite_line(r: &SuiteReport) -> String {
    let failed: Vec<u64> = r.instances.iter().filter(|i| !i.passed).map(|i| i.index).take(5).collect();
    format!("{} {}/{} (failed {:?})", r.suite, r.passed_count(), r.instances.len(), failed)
}

fn mixvol_agreement() -> Outcome {
    let r = run_suite("mixvol", 100, SEED, QUAD_TOL)?;
    let worst =
        r.instances.iter().filter_map(|i| i.values.iter().find(|v| v.0 == "rel_diff")).map(|v| v.1).fold(0.0, f64::max);
    Ok((r.all_passed(), format!("{}, worst rel diff {worst:.2e} (tol 1e-9)", suite_line(&r))))
}

fn cube_constants() -> Outcome {
    let cube = unit_cube();
    let vol = volume(&cube);
    let vbcc =
        mixed_volume_via_measure(&SupportEvaluator::of(Body::unit_ball()), &Body::from(cube.clone()), &cube, QUAD_TOL)?;
    let (sbm, _) = sbm_and_mu(&build_graph(&cube)?);
    let vbbc_graph = sbm.total_mass() / 3.0;
    let vbbc_steiner = cube_steiner_coefficients()[2] / 3.0;
    let ok = (vol - 1.0).abs() <= 1e-14
        && (3.0 * vbcc - 6.0).abs() <= 1e-9
        && (vbbc_graph - PI).abs() <= 1e-6
        && (vbbc_steiner - PI).abs() <= 1e-6;
    Ok((
        ok,
        format!(
            "Vol-1 = {:.1e}, 3V(B,C,C)-6 = {:.1e}, V(B,B,C)-pi graph {:.1e} steiner {:.1e}",
            vol - 1.0,
            3.0 * vbcc - 6.0,
            vbbc_graph - PI,
            vbbc_steiner - PI
        ),
    ))
}

fn graph_identities() -> Outcome {
    let (mut worst_sphere, mut worst_mu, mut fails) = (0.0f64, 0.0f64, 0);
    let mut worst_balance = 0.0f64;
    for i in 0..100 {
        let [m, _, _] = random_triple(SEED, "graph", i);
        let g = build_graph(&m)?;
        let (sbm, mu) = sbm_and_mu(&g);
        let (r, big_r) = enclosing_radii(&m)?;
        let s = structural_checks(&g, r, big_r);
        let e_sphere = rel(sbm.total_mass(), 3.0 * vbb_sphere_oracle(&m));
        let e_mu = rel(mu.total_mass(), 2.0 * sbm.total_mass());
        worst_sphere = worst_sphere.max(e_sphere);
        worst_mu = worst_mu.max(e_mu);
        worst_balance = worst_balance.max(s.worst_balance / g.total_weight());
        if e_sphere > 1e-6 || e_mu > 1e-12 || !s.passed() {
            fails += 1;
        }
    }
    Ok((
        fails == 0,
        format!(
            "100 hulls, {fails} failures; mass vs sphere oracle {worst_sphere:.1e}, mu/2S {worst_mu:.1e}, balance/sum w {worst_balance:.1e}"
        ),
    ))
}

fn form_consistency() -> Outcome {
    let r = run_suite("form", 50, SEED, QUAD_TOL)?;
    let worst =
        r.instances.iter().filter_map(|i| i.values.iter().find(|v| v.0 == "rel_diff")).map(|v| v.1).fold(0.0, f64::max);
    Ok((r.all_passed(), format!("{}, worst rel err {worst:.2e} (tol 1e-6)", suite_line(&r))))
}

fn cube_spectrum() -> Outcome {
    let g = build_graph(&unit_cube())?;
    let h = PI / 100.0;
    let form = assemble(&g, h)?;
    let spec = spectrum(&form, form.dof())?;
    let tau = 10.0 * h * h;
    let kernel = kernel_analysis(&spec, &form, tau)?;
    let l1 = spec.values[0];
    let simple = spec.values[1] < 1.0 / 3.0 - 0.1;
    let rest = spec.values[1..].iter().filter(|v| v.abs() >= tau).fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let mut ok = (l1 - 1.0 / 3.0).abs() <= 2e-3
        && simple
        && kernel.dimension == 3
        && kernel.indices == vec![1, 2, 3]
        && kernel.principal_angle_residual <= 1e-3
        && rest <= -0.05;

    let levels: Vec<Vec<f64>> = [50.0, 100.0, 200.0]
        .iter()
        .map(|d| spectrum(&assemble(&g, PI / d)?, 12).map(|s| s.values))
        .collect::<Result<_, _>>()?;
    // Eigenvalues that are exact at every mesh (here the constant mode) carry no drift.
    let mut ratios = Vec::new();
    for j in 0..12 {
        let d1 = (levels[0][j] - levels[1][j]).abs();
        let d2 = (levels[1][j] - levels[2][j]).abs();
        if d1 > 1e-10 {
            ratios.push(d1 / d2);
        }
    }
    let min_ratio = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    ok &= !ratios.is_empty() && min_ratio >= 3.5;
    Ok((
        ok,
        format!(
            "lambda1-1/3 = {:.1e}, kernel dim {} residual {:.1e}, max remaining {rest:.4}, drift ratio min {min_ratio:.2} over {} eigenvalues",
            l1 - 1.0 / 3.0,
            kernel.dimension,
            kernel.principal_angle_residual,
            ratios.len()
        ),
    ))
}

fn fulldim_certification() -> Outcome {
    let cube = unit_cube();
    let thr = Thresholds::default();
    let shallow = build_test_body(&TestBody::TruncateVertex {
        base: cube.clone(),
        vertex: Vec3::new(1.0, 1.0, 1.0),
        depth: 0.1,
        vertex_only: true,
    })?;
    let c = certify_equality_fulldim(&shallow, &cube, &cube, QUAD_TOL, thr)?;
    let shallow_ok = c.deficit.deficit.abs() <= 1e-10 * c.deficit.scale
        && c.sup_residual <= 1e-8 * c.diam
        && c.verdict == Verdict::Equality;
    let deep = build_test_body(&TestBody::TruncateVertex {
        base: cube.clone(),
        vertex: Vec3::new(1.0, 1.0, 1.0),
        depth: 0.8,
        vertex_only: false,
    })?;
    let d = certify_equality_fulldim(&deep, &cube, &cube, QUAD_TOL, thr)?;
    let random = run_suite("certify", 200, SEED, QUAD_TOL)?;
    let constructed = run_suite("certify-constructed", 20, SEED, QUAD_TOL)?;
    let ok = shallow_ok && d.verdict == Verdict::Strict && random.all_passed() && constructed.all_passed();
    Ok((
        ok,
        format!(
            "truncated: deficit {:.1e}, residual {:.1e}, {}; deep: {}; {}; {}",
            c.deficit.deficit,
            c.sup_residual,
            c.verdict.as_str(),
            d.verdict.as_str(),
            suite_line(&random),
            suite_line(&constructed)
        ),
    ))
}

fn min_margin(r: &SuiteReport) -> f64 {
    r.instances
        .iter()
        .filter_map(|i| i.values.iter().find(|v| v.0 == "margin"))
        .map(|v| v.1)
        .fold(f64::INFINITY, f64::min)
}

fn weak_stability() -> Outcome {
    let r = run_suite("stability", 1000, SEED, QUAD_TOL)?;
    Ok((r.all_passed(), format!("{}, min margin {:.3e}", suite_line(&r), min_margin(&r))))
}

fn rigidity() -> Outcome {
    let r = run_suite("rigidity", 100, SEED, QUAD_TOL)?;
    Ok((r.all_passed(), format!("{}, min margin {:.3e}", suite_line(&r), min_margin(&r))))
}

fn lower_spectrum() -> Outcome {
    let h = PI / 200.0;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, m, mult) in [("square", unit_square(), 4), ("hexagon", regular_polygon(6, 1.0)?, 6)] {
        let p = lowerdim_setup(&m, &Vec3::z_axis())?;
        let rep = verify_spectrum(&p, 2, h, 5e-3)?;
        let found: Vec<usize> = rep.clusters.iter().map(|c| c.found).collect();
        ok &= rep.passed && found == vec![1, mult, mult];
        parts.push(format!("{name} multiplicities {found:?} deviation {:.1e}", rep.worst_deviation));
    }
    Ok((ok, parts.join("; ")))
}

fn lower_equality() -> Outcome {
    let cube = unit_cube();
    let w = Vec3::z_axis();
    let thr = Thresholds::default();
    let m = segment(Vec3::zeros(), Vec3::x());
    let shear =
        build_test_body(&TestBody::Shear { base: cube.clone(), axis: Vec3::x(), height: Vec3::z(), amount: 0.3 })?;
    let s = certify_equality_lowerdim(&cube, &shear, &m, &w, thr)?;
    let shear_ok =
        s.deficit.deficit.abs() <= 1e-10 * s.deficit.scale && s.sup_residual <= 1e-8 && s.verdict == Verdict::Equality;
    // V(K,N,M) for the unit cube and two orthogonal unit segments: the
    // coefficient of λ₁λ₂λ₃ in Vol(λ₁K + λ₂N + λ₃M) = λ₁(λ₁+λ₂)(λ₁+λ₃) is 1 = 6V.
    let n = segment(Vec3::zeros(), Vec3::y());
    let vknm = 1.0 / 6.0;
    let c = certify_equality_lowerdim(&cube, &minkowski_sum(&cube, &n), &m, &w, thr)?;
    let counter_ok = rel(c.deficit.deficit, vknm * vknm) <= 1e-8
        && c.sup_residual > 10.0 * thr.eps_s * c.diam
        && c.verdict == Verdict::Strict;
    let poly = mixed_volume(&cube, &n, &m);
    Ok((
        shear_ok && counter_ok,
        format!(
            "shear: deficit {:.1e} residual {:.1e} {}; K+N: deficit {:.6} vs V(K,N,M)^2 {:.6} (polarization V {:.6}), residual {:.3} {}",
            s.deficit.deficit,
            s.sup_residual,
            s.verdict.as_str(),
            c.deficit.deficit,
            vknm * vknm,
            poly,
            c.sup_residual,
            c.verdict.as_str()
        ),
    ))
}

fn cylinder_limit() -> Outcome {
    let p = lowerdim_setup(&unit_square(), &Vec3::z_axis())?;
    let rep = cylinder_limit_check(&p, &[0.2, 0.1, 0.05, 0.025], &SupportEvaluator::one(), QUAD_TOL)?;
    let ok = (rep.limit - 2.0 * PI).abs() <= 1e-12 && rep.ratios.iter().all(|r| (1.7..=2.3).contains(r));
    let ratios: Vec<String> = rep.ratios.iter().map(|r| format!("{r:.3}")).collect();
    Ok((ok, format!("limit {:.12}, ratios [{}]", rep.limit, ratios.join(", "))))
}

fn classical_chain() -> Outcome {
    let c = run_suite("classical", 100, SEED, QUAD_TOL)?;
    let b = run_suite("brunn-minkowski", 50, SEED, QUAD_TOL)?;
    Ok((c.all_passed() && b.all_passed(), format!("{}; {}", suite_line(&c), suite_line(&b))))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("mixed-volume oracle agreement", mixvol_agreement),
        ("cube constants", cube_constants),
        ("graph identities", graph_identities),
        ("form/volume consistency", form_consistency),
        ("cube operator spectrum", cube_spectrum),
        ("full-dimensional equality certification", fulldim_certification),
        ("weak stability", weak_stability),
        ("rigidity", rigidity),
        ("lower-dimensional spectrum", lower_spectrum),
        ("lower-dimensional equality", lower_equality),
        ("cylinder limit", cylinder_limit),
        ("classical chain", classical_chain),
    ];
    let total = Instant::now();
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (passed, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {:>2}: {} {name}: {detail} [{:.2}s]",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/12 passed in {:.1}s", 12 - failures, total.elapsed().as_secs_f64());
    if failures > 0 {
        std::process::exit(1);
    }
}
