//! One function per subcommand, each producing a `RunReport`.

use std::f64::consts::PI;

use mqi_core::extremal::{
    certify_equality_fulldim, rigidity_check, weak_stability_check, EqualityCertificate, Thresholds, Verdict,
};
use mqi_core::geometry::{
    build_test_body, enclosing_radii, hull, unit_cube, unit_square, Body, Polytope, SupportEvaluator, TestBody,
    UnitVector, Vec3,
};
use mqi_core::graph::{assemble, build_graph, kernel_analysis, sbm_and_mu, spectrum, structural_checks};
use mqi_core::lower_dim::{certify_equality_lowerdim, lowerdim_setup, verify_spectrum};
use mqi_core::mixed::{classical_functionals, mixed_volume, mixed_volume_via_measure, quadratic_deficit, volume};
use mqi_core::suites::{run_suite, SUITES};

use crate::bodies::{require_full, require_polytope, resolve};
use crate::error::CliError;
use crate::export::export_graph;
use crate::report::{format_f64, Row, RunReport};
use crate::{write_or_print, Command, Expect, Options};

pub fn dispatch(cmd: &Command, o: &Options) -> Result<RunReport, CliError> {
    check_options(o)?;
    let mut r = RunReport::new(cmd.name(), o.seed);
    match cmd {
        Command::Mixvol => mixvol(o, &mut r)?,
        Command::Deficit => deficit(o, &mut r)?,
        Command::Graph { export, graph_out } => {
            let m = graph(o, &mut r)?;
            if let Some(format) = export {
                r.param("export", format!("{format:?}").to_lowercase());
                write_or_print(graph_out.as_ref(), &export_graph(&build_graph(&m)?, *format))?;
            }
        }
        Command::Spectrum => spectrum_cmd(o, &mut r)?,
        Command::CertifyFull { expect } => certify(o, &mut r, false, *expect)?,
        Command::CertifyLower { expect } => certify(o, &mut r, true, *expect)?,
        Command::Stability => stability(o, &mut r)?,
        Command::Rigidity => rigidity(o, &mut r)?,
        Command::LowerSpectrum => lower_spectrum(o, &mut r)?,
        Command::Randtest { suite, n } => randtest(o, &mut r, suite, *n)?,
        Command::Demo => demo(o, &mut r)?,
    }
    Ok(r)
}

fn check_options(o: &Options) -> Result<(), CliError> {
    let positive = |name: &str, v: Option<f64>| match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(CliError::input(format!("--{name} must be positive, got {x}"))),
        _ => Ok(()),
    };
    positive("tol", o.tol)?;
    positive("quad-tol", Some(o.quad_tol))?;
    positive("mesh-h", o.mesh_h)?;
    if o.mesh_h.is_some_and(|h| h > PI) {
        return Err(CliError::input("--mesh-h must not exceed pi"));
    }
    if o.kmax == Some(0) {
        return Err(CliError::input("--kmax must be at least 1"));
    }
    Ok(())
}

fn body(o: &Options, slot: &str) -> Result<(String, Body), CliError> {
    let spec = match slot {
        "K" => &o.k,
        "L" => &o.l,
        _ => &o.m,
    };
    let spec = spec.as_deref().ok_or_else(|| CliError::input(format!("--{slot} is required")))?;
    Ok((spec.to_string(), resolve(spec, slot, o.seed)?))
}

fn polytope(o: &Options, r: &mut RunReport, slot: &str) -> Result<Polytope, CliError> {
    let (spec, b) = body(o, slot)?;
    r.param(slot, spec);
    require_polytope(b, slot)
}

fn full(o: &Options, r: &mut RunReport, slot: &str) -> Result<Polytope, CliError> {
    let p = polytope(o, r, slot)?;
    require_full(&p, slot)?;
    Ok(p)
}

fn parse_w(s: &str) -> Result<UnitVector, CliError> {
    let v = match s {
        "e1" => Vec3::x(),
        "e2" => Vec3::y(),
        "e3" => Vec3::z(),
        _ => {
            let c: Vec<f64> = s
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::input(format!("--w: expected x,y,z or e1/e2/e3, got `{s}`")))?;
            if c.len() != 3 {
                return Err(CliError::input(format!("--w: expected three components, got {}", c.len())));
            }
            Vec3::new(c[0], c[1], c[2])
        }
    };
    UnitVector::try_new(v, 1e-12)
        .filter(|u| u.iter().all(|x| x.is_finite()))
        .ok_or_else(|| CliError::input("--w must be a nonzero finite vector"))
}

/// `--w`, else the plane normal of `M` oriented so its largest component is
/// positive, else `e3`.
fn normal_for(o: &Options, m: &Polytope) -> Result<UnitVector, CliError> {
    if let Some(s) = &o.w {
        return parse_w(s);
    }
    Ok(match m.plane_normal() {
        Some(n) => {
            let i = n.iamax();
            if n[i] < 0.0 {
                -n
            } else {
                n
            }
        }
        None => Vec3::z_axis(),
    })
}

fn w_string(w: &UnitVector) -> String {
    // `+ 0.0` prints -0.0 as 0.
    format!("{},{},{}", format_f64(w.x + 0.0), format_f64(w.y + 0.0), format_f64(w.z + 0.0))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn mixvol(o: &Options, r: &mut RunReport) -> Result<(), CliError> {
    let k = polytope(o, r, "K")?;
    let l = polytope(o, r, "L")?;
    let m = polytope(o, r, "M")?;
    r.param_f64("quad_tol", o.quad_tol);
    let vp = mixed_volume(&k, &l, &m);
    let mut row = Row::new("V(K,L,M)", true).value("polarization", vp);
    match mixed_volume_via_measure(&SupportEvaluator::of(k.clone()), &Body::from(l.clone()), &m, o.quad_tol) {
        Ok(vm) => {
            let d = rel(vp, vm);
            row = row.value("measure", vm).value("rel_diff", d);
            row.passed = d <= 1e-9 || (vp.abs() <= 1e-14 && vm.abs() <= 1e-14);
        }
        Err(e) => row = row.note(format!("measure route unavailable: {e}")),
    }
    r.push(row);
    r.push(Row::new("volumes", true).value("vol_K", volume(&k)).value("vol_L", volume(&l)).value("vol_M", volume(&m)));
    Ok(())
}

fn deficit(o: &Options, r: &mut RunReport) -> Result<(), CliError> {
    let (ks, k) = body(o, "K")?;
    let (ls, l) = body(o, "L")?;
    r.param("K", ks);
    r.param("L", ls);
    let m = full(o, r, "M")?;
    r.param_f64("quad_tol", o.quad_tol);
    let d = quadratic_deficit(&k, &l, &m, o.quad_tol)?;
    r.push(
        Row::new("deficit", d.holds())
            .value("V(K,L,M)", d.vkl)
            .value("V(K,K,M)", d.vkk)
            .value("V(L,L,M)", d.vll)
            .value("deficit", d.deficit)
            .value("relative", d.deficit / d.scale),
    );
    Ok(())
}

fn graph(o: &Options, r: &mut RunReport) -> Result<Polytope, CliError> {
    let m = full(o, r, "M")?;
    let g = build_graph(&m)?;
    let (rad, big_r) = enclosing_radii(&m)?;
    let s = structural_checks(&g, rad, big_r);
    let (sbm, mu) = sbm_and_mu(&g);
    r.push(
        Row::new("graph", true)
            .value("vertices", g.vertices.len() as f64)
            .value("edges", g.edges.len() as f64)
            .value("total_weight", g.total_weight())
            .value("sbm_mass", sbm.total_mass())
            .value("V(B,B,M)", sbm.total_mass() / 3.0)
            .value("mu_mass", mu.total_mass())
            .value("mu_over_sbm", mu.total_mass() / sbm.total_mass()),
    );
    r.push(
        Row::new("structure", s.passed())
            .value("r", rad)
            .value("R", big_r)
            .value("worst_tan_margin", s.worst_tan_margin)
            .value("tan_violations", s.tan_violations as f64)
            .value("worst_balance", s.worst_balance)
            .value("balance_violations", s.balance_violations as f64),
    );
    Ok(m)
}

fn spectrum_cmd(o: &Options, r: &mut RunReport) -> Result<(), CliError> {
    let m = full(o, r, "M")?;
    let h = o.mesh_h.unwrap_or(PI / 100.0);
    let tau = o.tol.unwrap_or(10.0 * h * h);
    let shown = o.kmax.unwrap_or(12);
    r.param_f64("mesh_h", h);
    r.param_f64("tau", tau);
    r.param("kmax", shown);
    let form = assemble(&build_graph(&m)?, h).map_err(|e| match CliError::from(e) {
        CliError::Input(msg) => CliError::Input(format!("{msg}; choose a smaller --mesh-h")),
        other => other,
    })?;
    let spec = spectrum(&form, form.dof())?;
    let kernel = kernel_analysis(&spec, &form, tau)?;
    let positive = spec.values.iter().filter(|v| **v >= tau).count();
    let mut row = Row::new("eigenvalues", true).value("dof", form.dof() as f64);
    for (i, v) in spec.values.iter().take(shown).enumerate() {
        row = row.value(&format!("lambda_{}", i + 1), *v);
    }
    r.push(row);
    r.push(Row::new("positive part", positive == 1).value("count", positive as f64));
    r.push(
        Row::new("kernel", kernel.dimension == 3 && kernel.principal_angle_residual <= 1e-3)
            .value("dimension", kernel.dimension as f64)
            .value("principal_angle_residual", kernel.principal_angle_residual)
            .value("coordinate_residual", kernel.coordinate_residual),
    );
    Ok(())
}

fn certificate_row(c: &EqualityCertificate, expect: Option<Expect>) -> Row {
    let matches = match expect {
        None => c.verdict != Verdict::Inconclusive,
        Some(Expect::Equality) => c.verdict == Verdict::Equality,
        Some(Expect::Strict) => c.verdict == Verdict::Strict,
    };
    let mut row = Row::new("certificate", matches)
        .value("V(K,L,M)", c.deficit.vkl)
        .value("V(K,K,M)", c.deficit.vkk)
        .value("V(L,L,M)", c.deficit.vll)
        .value("deficit", c.deficit.deficit)
        .value("deficit_tol", c.thresholds.eps_d * c.deficit.scale)
        .value("a", c.a)
        .value("v_x", c.v.x)
        .value("v_y", c.v.y)
        .value("v_z", c.v.z)
        .value("sup_residual", c.sup_residual)
        .value("residual_tol", c.thresholds.eps_s * c.diam);
    if let Some(l2) = c.l2_residual {
        row = row.value("l2_residual", l2);
    }
    row.verdict(c.verdict.as_str())
}

fn certify(o: &Options, r: &mut RunReport, lower: bool, expect: Option<Expect>) -> Result<(), CliError> {
    let k = polytope(o, r, "K")?;
    let l = polytope(o, r, "L")?;
    let thr = Thresholds::default();
    let cert = if lower {
        let m = polytope(o, r, "M")?;
        let w = normal_for(o, &m)?;
        r.param("w", w_string(&w));
        certify_equality_lowerdim(&k, &l, &m, &w, thr)?
    } else {
        let m = full(o, r, "M")?;
        r.param_f64("quad_tol", o.quad_tol);
        certify_equality_fulldim(&k, &l, &m, o.quad_tol, thr)?
    };
    if let Some(e) = expect {
        r.param("expect", format!("{e:?}").to_lowercase());
    }
    r.push(certificate_row(&cert, expect));
    Ok(())
}

fn stability(o: &Options, r: &mut RunReport) -> Result<(), CliError> {
    let k = polytope(o, r, "K")?;
    let l = polytope(o, r, "L")?;
    let m = full(o, r, "M")?;
    let s = weak_stability_check(&k, &l, &m)?;
    let w = &s.witness;
    r.push(
        Row::new("weak stability", s.holds)
            .value("a", w.a)
            .value("v_x", w.v.x)
            .value("v_y", w.v.y)
            .value("v_z", w.v.z)
            .value("residual", w.residual)
            .value("r", w.r)
            .value("R", w.big_r)
            .value("C_M", w.c_m)
            .value("lhs", s.lhs)
            .value("rhs", s.rhs)
            .value("margin", s.margin),
    );
    Ok(())
}

fn rigidity(o: &Options, r: &mut RunReport) -> Result<(), CliError> {
    let k = polytope(o, r, "K")?;
    let l = polytope(o, r, "L")?;
    let m = full(o, r, "M")?;
    r.param_f64("quad_tol", o.quad_tol);
    let g = rigidity_check(&k, &l, &m, o.quad_tol)?;
    r.push(
        Row::new("rigidity", g.holds)
            .value("sbm_integral", g.sbm_integral)
            .value("mu_integral", g.mu_integral)
            .value("r", g.r)
            .value("R", g.big_r)
            .value("lhs", g.lhs)
            .value("rhs", g.rhs)
            .value("margin", g.margin),
    );
    Ok(())
}

fn lower_spectrum(o: &Options, r: &mut RunReport) -> Result<(), CliError> {
    let m = polytope(o, r, "M")?;
    let w = normal_for(o, &m)?;
    let h = o.mesh_h.unwrap_or(PI / 100.0);
    let tol = o.tol.unwrap_or(5e-3);
    let k_max = o.kmax.unwrap_or(2);
    r.param("w", w_string(&w));
    r.param_f64("mesh_h", h);
    r.param_f64("tol", tol);
    r.param("kmax", k_max);
    let rep = verify_spectrum(&lowerdim_setup(&m, &w)?, k_max, h, tol)?;
    for c in &rep.clusters {
        r.push(
            Row::new(format!("k={}", c.k), c.found == c.multiplicity && c.worst_deviation <= tol)
                .value("expected", c.expected)
                .value("multiplicity", c.multiplicity as f64)
                .value("found", c.found as f64)
                .value("worst_deviation", c.worst_deviation),
        );
    }
    r.push(
        Row::new("kernel", rep.kernel.coordinate_residual <= 1e-3)
            .value("dimension", rep.kernel.dimension as f64)
            .value("coordinate_residual", rep.kernel.coordinate_residual),
    );
    Ok(())
}

fn randtest(o: &Options, r: &mut RunReport, suite: &str, n: u64) -> Result<(), CliError> {
    if !SUITES.contains(&suite) {
        return Err(CliError::input(format!("unknown suite `{suite}`; expected one of {}", SUITES.join(", "))));
    }
    r.param("suite", suite);
    r.param("n", n);
    r.param_f64("quad_tol", o.quad_tol);
    let rep = run_suite(suite, n, o.seed, o.quad_tol)?;
    for inst in &rep.instances {
        let mut row = Row::new(format!("{suite}#{}", inst.index), inst.passed);
        for (name, v) in &inst.values {
            row = row.value(name, *v);
        }
        if let Some(note) = &inst.note {
            row = row.note(note.clone());
        }
        r.push(row);
    }
    r.push(Row::new("summary", rep.all_passed()).value("passed", rep.passed_count() as f64).value("total", n as f64));
    Ok(())
}

/// Hull of an approximate ball and one outside point. Demo only: these
/// bodies carry no acceptance claim.
fn cap_body(level: usize, apex: f64) -> Result<Polytope, CliError> {
    let ball = build_test_body(&TestBody::ApproximateBall { level })?;
    let mut pts = ball.vertices().to_vec();
    pts.push(Vec3::new(0.0, 0.0, apex));
    Ok(hull(&pts)?)
}

fn demo(o: &Options, r: &mut RunReport) -> Result<(), CliError> {
    let cube = unit_cube();
    let thr = Thresholds::default();
    r.push(
        Row::new("V(C,C,C)", (mixed_volume(&cube, &cube, &cube) - 1.0).abs() <= 1e-12)
            .value("value", mixed_volume(&cube, &cube, &cube)),
    );

    for (spec, want) in [("trunc:0.1", Verdict::Equality), ("trunc:0.8", Verdict::Strict)] {
        let k = require_polytope(resolve(spec, "K", o.seed)?, "K")?;
        let c = certify_equality_fulldim(&k, &cube, &cube, o.quad_tol, thr)?;
        let mut row = certificate_row(&c, None);
        row.label = format!("certify {spec} vs cube");
        row.passed = c.verdict == want;
        r.push(row);
    }

    let h = PI / 50.0;
    let spec = spectrum(&assemble(&build_graph(&cube)?, h)?, 5)?;
    r.push(
        Row::new("cube spectrum", (spec.values[0] - 1.0 / 3.0).abs() <= 2e-3)
            .value("lambda_1", spec.values[0])
            .value("lambda_2", spec.values[1])
            .value("lambda_5", spec.values[4]),
    );

    let sq = verify_spectrum(&lowerdim_setup(&unit_square(), &Vec3::z_axis())?, 2, h, 2e-2)?;
    let mut row = Row::new("square lower spectrum", sq.passed).value("worst_deviation", sq.worst_deviation);
    for c in &sq.clusters {
        row = row.value(&format!("found_k{}", c.k), c.found as f64);
    }
    r.push(row);

    for level in [1, 2] {
        let cap = cap_body(level, 1.6)?;
        let ball = build_test_body(&TestBody::ApproximateBall { level })?;
        let d = quadratic_deficit(&Body::from(cap.clone()), &Body::from(ball.clone()), &ball, o.quad_tol)?;
        let f = classical_functionals(&cap, o.quad_tol)?;
        r.push(
            Row::new(format!("cap body over ball@{level}"), d.holds())
                .value("relative_deficit", d.deficit / d.scale)
                .value("volume", f.volume)
                .value("surface_area", f.surface_area)
                .value("mean_width", f.mean_width)
                .note("informational"),
        );
    }
    Ok(())
}
