//! Acceptance suite: one PASS/FAIL line per criterion, with runtimes.
//!
//! Run with `cargo test -p glstar-cli --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use glstar::constructions::{
    builtin_example, builtin_family, builtin_heights, builtin_l_coefficients, builtin_parabola_sequence, clifford,
    fg_star, latitudinal, parabola_star, param_star, symmetric_star, Fn1, GlPencil, HeightFamily, HyperbolaFamily,
    Validation,
};
use glstar::parallelism::{
    check_class_signatures, check_hfd, check_parallel_queries, check_spread_disjoint, check_torus_fixes_classes,
    check_zero_secants, dimension_estimate, embed_star, Parallelism,
};
use glstar::verify::{
    check_axial, check_coverage, check_fixed_point_free, check_involution, check_no_exterior_meet, check_pz_monotone,
    check_rotational, check_symmetric, default_root_grid, descartes_sign_changes, fibonacci_sphere, horner,
    polynomial_root_count, rng, CheckReport,
};
use glstar::GlStar;
use glstar_cli::{cmd_verify, parse_config, VerifyOptions};
use nalgebra::Vector3;
use rand::Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// The six stars every star-level criterion runs on.
struct Stars {
    list: Vec<(&'static str, GlStar)>,
}

impl Stars {
    fn build() -> Stars {
        let pencil = GlPencil::from_reparametrization(Fn1::Power { p: 2.0 }).expect("t² reparametrises [0,1]");
        Stars {
            list: vec![
                ("clifford", clifford(Vector3::zeros()).expect("origin is interior")),
                (
                    "symmetric",
                    symmetric_star(Fn1::Moebius01).expect("t/(1−t) is admissible"),
                ),
                (
                    "fg",
                    fg_star(Fn1::Power { p: 2.0 }, Fn1::Affine { a: 1.0, b: -1.0 }).expect("t², t−1 are admissible"),
                ),
                ("builtin", builtin_example()),
                ("latitudinal", latitudinal(pencil)),
                (
                    "parabola",
                    parabola_star(builtin_parabola_sequence()).expect("the built-in sequence is valid"),
                ),
            ],
        }
    }
}

fn failures(reports: &[(&str, CheckReport)]) -> Vec<String> {
    reports
        .iter()
        .filter(|(_, r)| !r.passed)
        .map(|(star, r)| format!("{star}: {r}"))
        .collect()
}

fn worst(reports: &[(&str, CheckReport)], name: &str) -> f64 {
    reports
        .iter()
        .filter(|(_, r)| r.name == name)
        .map(|(_, r)| r.max_residual)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn c1_worked_example() -> Outcome {
    let f = builtin_family();
    let lin = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / 9.0;
    let mut max_rel: f64 = 0.0;
    for i in 0..10 {
        let x = lin(0.1, 2.0, i);
        for j in 0..10 {
            // ten evenly spaced heights in [−0.9, 0.9]; none is 0
            let z = lin(-0.9, 0.9, j);
            let l = builtin_l_coefficients(x, z);
            for k in 0..10 {
                let a = lin(0.1, 10.0, k);
                let lhs = f.h(x, z, a) * (2.0 * a * a + 3.0 * a + 3.0) * (a * a + 2.0 * a + 2.0);
                let rhs = horner(&l, a);
                max_rel = max_rel.max((lhs - rhs).abs() / rhs.abs());
            }
        }
    }
    let spot = f.h(1.0, 0.5, 1.0);
    let passed = max_rel < 1e-7 && (spot - 21.0 / 40.0).abs() < 1e-15;
    outcome(
        passed,
        format!("max relative error {max_rel:.3e} on 1000 points, h_(1,0.5)(1) = {spot}"),
    )
}

fn c2_root_counts() -> Outcome {
    let mut r = rng(0);
    let mut samples = Vec::new();
    while samples.len() < 100 {
        let (x, z): (f64, f64) = (r.gen_range(0.0..3.0), r.gen_range(-3.0..3.0));
        if x > 0.0 && z != 0.0 && x * x + z * z >= 1.0 {
            samples.push((x, z));
        }
    }
    let grid = default_root_grid();
    let counts: Vec<usize> = samples
        .iter()
        .map(|&(x, z)| polynomial_root_count(&builtin_l_coefficients(x, z), &grid).count)
        .collect();
    let max_descartes = samples
        .iter()
        .map(|&(x, z)| descartes_sign_changes(&builtin_l_coefficients(x, z)))
        .max()
        .unwrap_or(0);
    let (t, s) = builtin_heights();
    let zs: Vec<f64> = samples.iter().map(|p| p.1).collect();
    let pz = check_pz_monotone(&t, &s, &zs);
    let all_one = counts.iter().all(|c| *c == 1);
    // monotone p_z is what guarantees a single root, so the two must agree
    let passed = all_one && pz.passed;
    outcome(
        passed,
        format!(
            "root counts {}..={} on 100 samples (Descartes bound ≤ {max_descartes}); {pz}",
            counts.iter().min().unwrap_or(&0),
            counts.iter().max().unwrap_or(&0)
        ),
    )
}

fn c3_axioms(stars: &Stars) -> Outcome {
    let mut reports = Vec::new();
    let mut min_chord = f64::INFINITY;
    for (name, star) in &stars.list {
        reports.push((*name, check_involution(star, 500, 1e-9)));
        let fpf = check_fixed_point_free(star, 500);
        min_chord = min_chord.min(fpf.max_residual);
        reports.push((*name, fpf));
        reports.push((*name, check_no_exterior_meet(star, 5000, 1e-9)));
        reports.push((*name, check_coverage(star, 200, 1e-9)));
    }
    let bad = failures(&reports);
    let passed = bad.is_empty() && min_chord > 0.1;
    outcome(
        passed,
        format!(
            "6 stars: involution ≤ {:.2e}, fpf margin ≥ {min_chord:.3}, exterior meets ≤ {:.3}, coverage residual ≤ {:.2e}{}",
            worst(&reports, "involution"),
            worst(&reports, "no_exterior_meet"),
            worst(&reports, "coverage"),
            if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }
        ),
    )
}

fn sigma_distance(a: &GlStar, b: &GlStar, n: usize) -> f64 {
    fibonacci_sphere(n)
        .iter()
        .map(|q| match (a.sigma(q), b.sigma(q)) {
            (Ok(x), Ok(y)) => (x - y).norm(),
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

fn c4_degeneracies() -> Outcome {
    let cliff = clifford(Vector3::zeros()).expect("origin is interior");
    let sym = symmetric_star(Fn1::Slope { k: 1.0 });
    let fg = fg_star(Fn1::Identity, Fn1::LowerCircle);
    let (d_sym, d_fg) = match (&sym, &fg) {
        (Ok(s), Ok(f)) => (sigma_distance(s, &cliff, 500), sigma_distance(f, &cliff, 500)),
        _ => (f64::INFINITY, f64::INFINITY),
    };
    let phi = HeightFamily::new(Fn1::phi(1.5), Fn1::phi(1.5));
    let max_b = Validation::default()
        .a_grid()
        .iter()
        .map(|&a| phi.b(a).abs())
        .fold(0.0, f64::max);
    let builds = param_star(Fn1::phi(1.5), Fn1::phi(1.5)).is_ok();
    let passed = d_sym < 1e-9 && d_fg < 1e-9 && max_b < 1e-12 && builds;
    outcome(
        passed,
        format!("σ distance to Clifford: symmetric {d_sym:.2e}, fg {d_fg:.2e}; max |b| for t = s = φ_3/2: {max_b:.2e}"),
    )
}

fn c5_klein(pars: &[(&'static str, Parallelism)]) -> Outcome {
    let mut reports = Vec::new();
    for (name, par) in pars {
        reports.push((*name, check_zero_secants(par.hfd(), 200)));
        reports.push((*name, check_hfd(par, 100)));
        reports.push((*name, check_class_signatures(par, 50, 1)));
        reports.push((*name, check_spread_disjoint(par, 5, 20, 1e-9, 2)));
    }
    let bad = failures(&reports);
    // the sample class of the Clifford parallelism, for the signature line
    let cls = pars[0].1.class_of(&glstar::projgeom::z_axis());
    let sig = cls.map(|c| c.signature());
    outcome(
        bad.is_empty(),
        format!(
            "6 stars: secant discriminant ≤ {:.3}, hfd residual ≤ {:.2e} with one solution per line, \
             class signature {} on every sampled class (g-polar of a positive definite H-line; \
             the elliptic (3,1) type up to the overall sign of g), spread pairing ≥ {:.2e}{}",
            worst(&reports, "zero_secants"),
            worst(&reports, "hfd"),
            sig.map_or_else(|e| e.to_string(), |s| format!("({},{})", s.pos, s.neg)),
            reports
                .iter()
                .filter(|(_, r)| r.name == "spread_disjoint")
                .map(|(_, r)| r.max_residual)
                .fold(f64::INFINITY, f64::min),
            if bad.is_empty() {
                String::new()
            } else {
                format!("; {}", bad.join("; "))
            }
        ),
    )
}

fn c6_dimension(pars: &[(&'static str, Parallelism)]) -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, par) in pars {
        let d = dimension_estimate(par.hfd(), 100);
        let want = if *name == "clifford" { 2 } else { 3 };
        passed &= d.dim == want && d.gap > 1e6;
        parts.push(format!("{name} {} (gap {:.1e})", d.dim, d.gap));
    }
    outcome(passed, parts.join(", "))
}

fn c7_classifiers(stars: &Stars) -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, star) in &stars.list {
        let axial = check_axial(star, 200, 1e-9).passed;
        let symmetric = check_symmetric(star, 200, 1e-9).passed;
        let rotational = check_rotational(star, 200, 1e-9).passed;
        let want_axial = matches!(*name, "clifford" | "latitudinal");
        let want_symmetric = matches!(*name, "clifford" | "symmetric");
        passed &= axial == want_axial && symmetric == want_symmetric && rotational;
        parts.push(format!(
            "{name}: axial {axial}, symmetric {symmetric}, rotational {rotational}"
        ));
    }
    let off = clifford(Vector3::new(0.5, 0.0, 0.0)).expect("interior centre");
    let off_rot = check_rotational(&off, 200, 1e-9).passed;
    passed &= !off_rot;
    parts.push(format!("clifford(0.5,0,0): rotational {off_rot}"));
    outcome(passed, parts.join("; "))
}

fn c8_torus(stars: &Stars) -> Outcome {
    let mut all: Vec<(&str, GlStar)> = stars.list.clone();
    all.push((
        "clifford(0.5,0,0)",
        clifford(Vector3::new(0.5, 0.0, 0.0)).expect("interior centre"),
    ));
    let reports: Vec<(&str, CheckReport)> = all
        .iter()
        .map(|(name, star)| (*name, check_torus_fixes_classes(&embed_star(star.clone()), 50)))
        .collect();
    let bad = failures(&reports);
    outcome(
        bad.is_empty(),
        format!(
            "7 embedded stars, 16 angles: isometry residual < 1e-12, H-line motion ≤ {:.2e}{}",
            worst(&reports, "torus_fixes_classes"),
            if bad.is_empty() {
                String::new()
            } else {
                format!("; {}", bad.join("; "))
            }
        ),
    )
}

fn c9_queries(pars: &[(&'static str, Parallelism)]) -> Outcome {
    let reports: Vec<(&str, CheckReport)> = pars
        .iter()
        .map(|(name, par)| (*name, check_parallel_queries(par, 100, 3)))
        .collect();
    let bad = failures(&reports);
    outcome(
        bad.is_empty(),
        format!(
            "100 queries per star: incidence, class membership, echo and scaled motion ≤ {:.2e}{}",
            worst(&reports, "parallel_queries"),
            if bad.is_empty() {
                String::new()
            } else {
                format!("; {}", bad.join("; "))
            }
        ),
    )
}

fn c10_reproducible() -> Outcome {
    let cfg = parse_config(r#"{"family":"param","t":{"kind":"phi_r","r":1.5},"s":{"kind":"phi_r","r":2.0},"seed":7}"#)
        .expect("valid config");
    let opts = VerifyOptions::default();
    let a = cmd_verify(&cfg, &opts);
    let b = cmd_verify(&cfg, &opts);
    let lines = a.text.lines().count();
    outcome(
        a == b && a.code == 0,
        format!(
            "two runs of the full builtin report ({lines} lines, exit {}) are byte-identical: {}",
            a.code,
            a == b
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results: Vec<(usize, &str, Outcome, Duration)> = Vec::new();
    let mut run = |n: usize, title: &'static str, limit: Option<f64>, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let mut o = f();
        let dt = t.elapsed();
        if let Some(limit) = limit {
            if dt.as_secs_f64() >= limit {
                o.passed = false;
                o.detail.push_str(&format!("; runtime exceeds {limit} s"));
            }
        }
        let line = format!(
            "ACCEPT {n:>2} {title}: {} ({:.2} s) {}",
            if o.passed { "PASS" } else { "FAIL" },
            dt.as_secs_f64(),
            o.detail
        );
        println!("{line}");
        results.push((n, title, o, dt));
    };

    run(1, "worked-example identity", Some(1.0), &mut c1_worked_example);
    run(2, "root count and p_z monotonicity", Some(5.0), &mut c2_root_counts);
    let stars = Stars::build();
    run(3, "gl-star axioms", Some(60.0), &mut || c3_axioms(&stars));
    run(4, "degeneracy identities", None, &mut c4_degeneracies);
    let pars: Vec<(&'static str, Parallelism)> = stars
        .list
        .iter()
        .map(|(n, s)| (*n, Parallelism::new(s.clone())))
        .collect();
    run(5, "Klein-level checks", None, &mut || c5_klein(&pars));
    run(6, "parallelism dimension", None, &mut || c6_dimension(&pars));
    run(7, "symmetry classifiers", None, &mut || c7_classifiers(&stars));
    run(8, "torus action", None, &mut || c8_torus(&stars));
    run(9, "parallel queries", None, &mut || c9_queries(&pars));
    run(10, "reproducible reports", None, &mut c10_reproducible);

    let passed = results.iter().filter(|r| r.2.passed).count();
    println!(
        "ACCEPTANCE: {} ({passed}/{}) in {:.1} s",
        if passed == results.len() { "PASS" } else { "FAIL" },
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
