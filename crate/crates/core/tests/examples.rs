//! Worked examples for each operation, checked against closed forms and the
//! independent oracles in `common`.

mod common;

use std::f64::consts::PI;

use common::{cube_steiner_coefficients, fibonacci_directions, rel, vbb_sphere_oracle};
use mqi_core::extremal::{
    certify_equality_fulldim, rigidity_check, stability_witness, weak_stability_check, Thresholds, Verdict,
};
use mqi_core::geometry::{
    box_polytope, build_test_body, classify_trivial, enclosing_radii, hull, minkowski_sum, segment, standard_simplex,
    unit_cube, unit_square, Body, SupportEvaluator, TestBody, Vec3,
};
use mqi_core::graph::{
    assemble, assemble_with_counts, build_graph, integrate_on_arcs, kernel_analysis, sbm_and_mu, spectrum,
    structural_checks, GraphFunction,
};
use mqi_core::lower_dim::{
    assemble_lowerdim, certify_equality_lowerdim, cylinder_limit_check, lowerdim_setup, sbm_lowerdim, verify_spectrum,
};
use mqi_core::mixed::{
    area_measure, classical_functionals, integrate_against_measure, mixed_area_measure, mixed_volume,
    quadratic_deficit, volume,
};
use mqi_core::suites::{constructed_equality, random_triple, run_suite};

fn ball_in_cube(level: usize) -> mqi_core::geometry::Polytope {
    build_test_body(&TestBody::ApproximateBall { level }).unwrap().scaled(0.5).translated(&Vec3::new(0.5, 0.5, 0.5))
}

#[test]
fn simplex_plus_reflection() {
    let s = standard_simplex();
    let neg = s.map_affine(&-nalgebra::Matrix3::identity(), &Vec3::zeros()).unwrap();
    let sum = minkowski_sum(&s, &neg);
    // A cuboctahedron: vertices are the differences v_i - v_j, i != j.
    assert_eq!(sum.vertices().len(), 12);
    assert_eq!(sum.facets().len(), 14);
    for a in s.vertices() {
        for b in s.vertices() {
            if a != b {
                assert!(sum.vertices().iter().any(|v| (v - (a - b)).norm() < 1e-15));
            }
        }
    }
    for u in fibonacci_directions(100) {
        assert!((sum.support(&u) - s.support(&u) - neg.support(&u)).abs() <= 1e-12);
        assert!((sum.support(&u) - sum.support(&-u)).abs() <= 1e-12);
    }
}

#[test]
fn cube_plus_segment_is_a_box() {
    let sum = minkowski_sum(&unit_cube(), &segment(Vec3::zeros(), Vec3::x()));
    let target = box_polytope(Vec3::zeros(), Vec3::new(2.0, 1.0, 1.0));
    assert_eq!(sum.vertices().len(), 8);
    for u in fibonacci_directions(200) {
        assert!((sum.support(&u) - target.support(&u)).abs() <= 1e-14);
    }
}

#[test]
fn cube_segment_mixed_volume() {
    // Vol(C + t S) = 1 + t for the unit segment along e1, so 3 V(C,C,S) = 1.
    let t = 0.25;
    let box_volume = |t: f64| (1.0 + t) * 1.0 * 1.0;
    let oracle = (box_volume(t) - box_volume(0.0)) / t / 3.0;
    let s = segment(Vec3::zeros(), Vec3::x());
    let c = unit_cube();
    assert!((mixed_volume(&c, &c, &s) - oracle).abs() <= 1e-14);
    assert!((mixed_volume(&c.scaled(2.0), &c, &c) - 2.0).abs() <= 1e-13);
    let slm = mixed_area_measure(&c, &s).unwrap();
    assert!((slm.total_mass() - 2.0).abs() <= 1e-14);
    let ih = integrate_against_measure(&SupportEvaluator::of(c.clone()), &slm, 1e-12).unwrap();
    assert!((ih - 1.0).abs() <= 1e-14);
}

#[test]
fn cube_measure_integrals() {
    let c = unit_cube();
    let s = area_measure(&c).unwrap();
    assert!((integrate_against_measure(&SupportEvaluator::one(), &s, 1e-12).unwrap() - 6.0).abs() <= 1e-14);
    assert!((integrate_against_measure(&SupportEvaluator::of(c.clone()), &s, 1e-12).unwrap() - 3.0).abs() <= 1e-14);
    let lin = integrate_against_measure(&SupportEvaluator::linear(Vec3::new(0.3, -2.0, 1.0)), &s, 1e-12).unwrap();
    assert!(lin.abs() <= 1e-9 * 6.0 * 2.2);
    assert!((volume(&c.scaled(2.0)) - 8.0).abs() <= 1e-13);
    assert!((volume(&standard_simplex()) - 1.0 / 6.0).abs() <= 1e-15);
}

#[test]
fn sbm_mass_matches_sphere_oracle() {
    for i in 0..50 {
        let [m, _, _] = random_triple(3, "sbm-oracle", i);
        let (sbm, _) = sbm_and_mu(&build_graph(&m).unwrap());
        assert!(rel(sbm.total_mass(), 3.0 * vbb_sphere_oracle(&m)) <= 1e-9, "instance {i}");
    }
}

#[test]
fn cube_arc_integrals() {
    let c = unit_cube();
    let g = build_graph(&c).unwrap();
    assert!((integrate_on_arcs(&SupportEvaluator::one(), &g, 1e-12).unwrap() - 3.0 * PI).abs() <= 1e-12);
    assert!(integrate_on_arcs(&SupportEvaluator::linear(Vec3::z()), &g, 1e-12).unwrap().abs() <= 1e-12);
    let (_, mu) = sbm_and_mu(&g);
    assert_eq!(mu.atoms.len(), 6);
    assert!(mu.atoms.iter().all(|a| (a.1 - PI).abs() <= 1e-14));
    let simplex = standard_simplex();
    let (_, mu) = sbm_and_mu(&build_graph(&simplex).unwrap());
    assert_eq!(mu.atoms.len(), 4);
    for (u, _) in &mu.atoms {
        assert!(simplex.facets().iter().any(|f| (f.normal.into_inner() - u.into_inner()).norm() < 1e-14));
    }
}

#[test]
fn classical_functionals_of_cubes() {
    let steiner = cube_steiner_coefficients();
    // Vol(C + tB) = Vol + S t + 2π W t^2 + (4π/3) t^3.
    let w_oracle = steiner[2] / (2.0 * PI);
    let f = classical_functionals(&unit_cube(), 1e-12).unwrap();
    assert!((f.volume - 1.0).abs() <= 1e-14);
    assert!((f.surface_area - steiner[1]).abs() <= 1e-9);
    assert!((f.mean_width - w_oracle).abs() <= 1e-9);
    assert!((f.mean_width - 1.5).abs() <= 1e-12);
    let g = classical_functionals(&unit_cube().scaled(2.0), 1e-12).unwrap();
    assert!(
        (g.volume - 8.0).abs() <= 1e-12
            && (g.surface_area - 24.0).abs() <= 1e-12
            && (g.mean_width - 3.0).abs() <= 1e-12
    );
}

#[test]
fn deficits_of_cube_instances() {
    let c = unit_cube();
    let cube = Body::from(c.clone());
    let same = quadratic_deficit(&cube, &cube, &c, 1e-12).unwrap();
    assert!(same.deficit.abs() <= 1e-14);
    let trunc = build_test_body(&TestBody::TruncateVertex {
        base: c.clone(),
        vertex: Vec3::new(1.0, 1.0, 1.0),
        depth: 0.1,
        vertex_only: true,
    })
    .unwrap();
    let d = quadratic_deficit(&Body::from(trunc), &cube, &c, 1e-12).unwrap();
    assert!(d.deficit.abs() <= 1e-10 * d.scale);
    let d = quadratic_deficit(&Body::from(ball_in_cube(2)), &cube, &c, 1e-12).unwrap();
    assert!(d.deficit > 1e-6 * d.scale);
    let ball = quadratic_deficit(&Body::unit_ball(), &cube, &c, 1e-12).unwrap();
    assert!(ball.deficit > 1e-6 * ball.scale);
}

#[test]
fn trivial_classification_examples() {
    let cube = Body::from(unit_cube());
    assert_eq!(classify_trivial(&cube, &cube, &cube).trivial_equality(), None);
    let seg = Body::from(segment(Vec3::zeros(), Vec3::x()));
    assert!(classify_trivial(&cube, &seg, &cube).vll_vanishes);
    let flat = Body::from(unit_square());
    assert_eq!(classify_trivial(&flat, &flat, &flat).trivial_equality(), Some(true));
}

#[test]
fn radii_examples() {
    let (r, big_r) = enclosing_radii(&unit_cube()).unwrap();
    assert!((r - 0.5).abs() < 1e-15 && (big_r - 0.75f64.sqrt()).abs() < 1e-15);
    let ratios: Vec<f64> = (0..4)
        .map(|level| {
            let (r, big_r) = enclosing_radii(&build_test_body(&TestBody::ApproximateBall { level }).unwrap()).unwrap();
            big_r / r
        })
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] < w[0]));
    assert!(ratios[3] - 1.0 < 1e-2);
}

#[test]
fn flattened_octahedra_keep_the_tangent_bound() {
    // tan(l/2) / (R/r) grows towards 1/√2 as the octahedron flattens.
    let mut last = 0.0;
    for t in [1.0, 0.5, 0.25, 0.1, 0.05] {
        let pts = [Vec3::x(), -Vec3::x(), Vec3::y(), -Vec3::y(), Vec3::z() * t, -Vec3::z() * t];
        let m = hull(&pts).unwrap();
        let (r, big_r) = enclosing_radii(&m).unwrap();
        let g = build_graph(&m).unwrap();
        let s = structural_checks(&g, r, big_r);
        assert!(s.passed());
        let worst = g.edges.iter().map(|e| (0.5 * e.length).tan()).fold(0.0, f64::max) / (big_r / r);
        let expected = 1.0 / (2.0 * (2.0 * t * t + 1.0)).sqrt();
        let expected = if t >= 1.0 / 2f64.sqrt() { worst } else { expected };
        assert!((worst - expected).abs() < 1e-12 && worst > last && worst <= 1.0);
        last = worst;
    }
}

#[test]
fn cube_operator_details() {
    let g = build_graph(&unit_cube()).unwrap();
    let h = PI / 100.0;
    let form = assemble(&g, h).unwrap();
    assert_eq!(assemble(&g, PI / 40.0).unwrap().dof(), 234);
    let spec = spectrum(&form, 12).unwrap();
    let v = &spec.values;
    assert!((v[0] - 1.0 / 3.0).abs() <= 2e-3);
    assert!(v[1..4].iter().all(|x| x.abs() <= 2e-3));
    assert!(v[4] <= -0.1);
    let tau = 10.0 * h * h;
    assert!(!v.iter().any(|x| *x > tau && *x < 1.0 / 3.0 - tau));
    let f = spec.eigenfunction(0).values;
    let mean = f.mean();
    assert!(f.iter().all(|x| ((x - mean) / mean).abs() <= 1e-3));
    // The kernel keeps its dimension when τ tracks h².
    for d in [50.0, 100.0, 200.0] {
        let h = PI / d;
        let form = assemble(&g, h).unwrap();
        let s = spectrum(&form, 8).unwrap();
        assert_eq!(kernel_analysis(&s, &form, 10.0 * h * h).unwrap().dimension, 3);
    }
    let coarse = assemble(&g, PI / 400.0).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                let (x, y) =
                    (GraphFunction::coordinate(&coarse, i).values, GraphFunction::coordinate(&coarse, j).values);
                assert!(coarse.e_value(&x, &y).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn constant_residual_is_second_order() {
    let g = build_graph(&unit_cube()).unwrap();
    let res: Vec<f64> = [10.0, 20.0, 40.0]
        .iter()
        .map(|d| {
            let f = assemble(&g, PI / d).unwrap();
            let one = GraphFunction::constant(&f, 1.0).values;
            (&f.e * &one - &f.mass * &one / 3.0).amax()
        })
        .collect();
    assert!(res.iter().all(|r| *r <= 1e-12), "{res:?}");
}

#[test]
fn random_hull_kernel_is_three_dimensional() {
    let [m, _, _] = random_triple(7, "kernel", 0);
    let g = build_graph(&m).unwrap();
    let h = PI / 100.0;
    let counts: Vec<usize> = g.edges.iter().map(|e| ((e.length / h).ceil() as usize).max(2)).collect();
    let form = assemble_with_counts(&g, &counts).unwrap();
    let s = spectrum(&form, form.dof()).unwrap();
    let k = kernel_analysis(&s, &form, 10.0 * h * h).unwrap();
    assert_eq!(k.dimension, 3);
    assert!(k.principal_angle_residual <= 1e-3);
}

#[test]
fn witness_examples() {
    let c = unit_cube().centered();
    let w = stability_witness(&c, &c, &c).unwrap();
    assert!((w.a - 1.0).abs() <= 1e-14 && w.v.norm() <= 1e-14 && w.residual <= 1e-28);
    let trunc = build_test_body(&TestBody::TruncateVertex {
        base: unit_cube(),
        vertex: Vec3::new(1.0, 1.0, 1.0),
        depth: 0.1,
        vertex_only: true,
    })
    .unwrap();
    let w = stability_witness(&trunc, &unit_cube(), &c).unwrap();
    assert!(w.residual <= 1e-12);
    assert!((w.c_m - (0.25 / 0.75) / 18.0).abs() <= 1e-15);
    let s = weak_stability_check(&ball_in_cube(2), &unit_cube(), &c).unwrap();
    assert!(s.holds && s.margin > 0.0 && s.witness.residual > 0.0);
}

#[test]
fn rigidity_dominance_on_equality_instances() {
    for i in 0..20 {
        let [k, l, m] = constructed_equality(5, i).unwrap();
        let m = m.centered();
        let cert = certify_equality_fulldim(&k, &l, &m, 1e-10, Thresholds::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Equality, "instance {i}");
        let r = rigidity_check(&k, &l, &m, 1e-10).unwrap();
        let bound = 8.0 * r.big_r.powi(4) / r.r.powi(4) * r.mu_integral + 1e-9;
        assert!(r.sbm_integral <= bound, "instance {i}: {} > {}", r.sbm_integral, bound);
    }
}

#[test]
fn segment_spectrum_clusters() {
    let p = lowerdim_setup(&segment(Vec3::zeros(), Vec3::x()), &Vec3::z_axis()).unwrap();
    let rep = verify_spectrum(&p, 2, PI / 100.0, 5e-3).unwrap();
    assert!(rep.passed);
    assert_eq!(rep.clusters.iter().map(|c| c.found).collect::<Vec<_>>(), vec![1, 2, 2]);
}

#[test]
fn square_kernel_contains_linear_functions() {
    let p = lowerdim_setup(&unit_square(), &Vec3::z_axis()).unwrap();
    let rep = verify_spectrum(&p, 2, PI / 100.0, 5e-3).unwrap();
    assert_eq!(rep.kernel.dimension, 4);
    assert!(rep.kernel.coordinate_residual <= 1e-3);
}

#[test]
fn lowerdim_integrals() {
    let p = lowerdim_setup(&unit_square(), &Vec3::z_axis()).unwrap();
    assert!(sbm_lowerdim(&p, &SupportEvaluator::linear(Vec3::z()), 1e-12).unwrap().abs() <= 1e-12);
    // The graph mass of the prism is affine in its height; Richardson extrapolation recovers the limit.
    for f in [SupportEvaluator::one(), SupportEvaluator::of(unit_cube())] {
        let rep = cylinder_limit_check(&p, &[0.05, 0.025], &f, 1e-12).unwrap();
        let extrapolated = 2.0 * rep.rows[1].graph_value - rep.rows[0].graph_value;
        assert!(rel(extrapolated, rep.limit) <= 1e-6, "{extrapolated} vs {}", rep.limit);
    }
    let rep = cylinder_limit_check(&p, &[0.2, 0.1, 0.05, 0.025], &SupportEvaluator::of(unit_cube()), 1e-12).unwrap();
    assert!(rep.ratios.iter().all(|r| (1.7..=2.3).contains(r)), "{:?}", rep.ratios);
    assert!(cylinder_limit_check(&p, &[0.0], &SupportEvaluator::one(), 1e-12).is_err());
}

#[test]
fn cos_theta_is_nearly_null() {
    let p = lowerdim_setup(&unit_square(), &Vec3::z_axis()).unwrap();
    let rq: Vec<f64> = [25.0, 50.0, 100.0]
        .iter()
        .map(|d| {
            let f = assemble_lowerdim(&p, PI / d).unwrap();
            let x = GraphFunction::sample(&f, &SupportEvaluator::linear(Vec3::z())).values;
            f.e_value(&x, &x) / f.mass_value(&x, &x)
        })
        .collect();
    assert!(rq[0].abs() > rq[1].abs() && rq[1].abs() > rq[2].abs());
    assert!(rq[1].abs() / rq[2].abs() >= 3.5, "{rq:?}");
}

#[test]
fn lowerdim_translate_is_equality() {
    let k = random_triple(11, "translate", 0)[0].clone();
    let l = k.translated(&Vec3::new(0.0, 0.0, 0.4));
    let c = certify_equality_lowerdim(&k, &l, &unit_square(), &Vec3::z_axis(), Thresholds::default()).unwrap();
    assert_eq!(c.verdict, Verdict::Equality);
    assert!(c.sup_residual <= 1e-12);
}

#[test]
fn lowerdim_verdicts_follow_the_deficit() {
    let r = run_suite("lower-certify", 100, 2, 1e-10).unwrap();
    assert!(r.all_passed(), "{:?}", r.instances.iter().filter(|i| !i.passed).collect::<Vec<_>>());
}

#[test]
fn ball_meshes_plus_cube() {
    let c = unit_cube();
    for level in 0..4 {
        let b = ball_in_cube(level);
        let s = minkowski_sum(&b, &c);
        assert_eq!(s.vertices().len() + s.facets().len(), s.edges().len() + 2);
        for u in fibonacci_directions(300) {
            assert!((s.support(&u) - b.support(&u) - c.support(&u)).abs() <= 1e-12 * s.scale());
        }
    }
}
