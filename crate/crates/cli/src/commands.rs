//! The subcommands, as functions from a configuration to output text and an
//! exit code.

use std::f64::consts::TAU;
use std::fmt::Write;

use glstar::glstar::{meridian_point, rotation_z, surface_mesh, SurfaceEntry, TriangleMesh, DEFAULT_Z_RANGE};
use glstar::parallelism::{
    check_class_signatures, check_hfd_seeded, check_parallel_queries, check_spread_disjoint, check_torus_fixes_classes,
    check_zero_secants, dimension_estimate, parallel_through, star_to_hfd, Parallelism,
};
use glstar::verify::{
    check_axial, check_coverage_seeded, check_fixed_point_free, check_involution, check_no_exterior_meet_seeded,
    check_pz_monotone, check_rotational_seeded, check_symmetric, format_g17, render_summary, sphere_point, CheckReport,
};
use glstar::{GlStar, HPoint4, PLine};
use nalgebra::Vector3;

use crate::config::{Family, StarConfig};

/// Exit code: every check passed.
pub const EXIT_PASS: u8 = 0;
/// Exit code: at least one check failed.
pub const EXIT_CHECK_FAILED: u8 = 1;
/// Exit code: the configuration, the construction or an output file failed.
pub const EXIT_BUILD_FAILED: u8 = 2;
/// Exit code: a parallel query failed.
pub const EXIT_QUERY_FAILED: u8 = 3;

/// Text for standard output (or the `--out` file) and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub text: String,
}

impl Outcome {
    fn error(code: u8, message: impl std::fmt::Display) -> Outcome {
        Outcome {
            code,
            text: format!("ERROR: {message}\n"),
        }
    }
}

/// Names accepted by `--checks`, in report order.
pub const CHECK_NAMES: [&str; 15] = [
    "involution",
    "fixed_point_free",
    "no_exterior_meet",
    "coverage",
    "rotational",
    "axial",
    "symmetric",
    "pz_monotone",
    "zero_secants",
    "hfd",
    "class_signature",
    "spread_disjoint",
    "dimension",
    "torus_fixes_classes",
    "parallel_queries",
];

/// Overrides of the configuration from the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyOptions {
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    /// Explicit check selection; the applicable checks when absent.
    pub checks: Option<Vec<String>>,
}

/// The checks run by default: the axioms, the symmetry classes the
/// configuration promises, and the Klein-level checks.
pub fn applicable_checks(cfg: &StarConfig, star: &GlStar) -> Vec<&'static str> {
    let centred_on_axis = cfg.center[0] == 0.0 && cfg.center[1] == 0.0;
    let at_origin = cfg.center == [0.0; 3];
    CHECK_NAMES
        .into_iter()
        .filter(|name| match *name {
            "rotational" => star.is_rotational(),
            "axial" => cfg.family == Family::Latitudinal || (cfg.family == Family::Clifford && centred_on_axis),
            "symmetric" => cfg.family == Family::Symmetric || (cfg.family == Family::Clifford && at_origin),
            "pz_monotone" => cfg.family == Family::Param,
            _ => true,
        })
        .collect()
}

/// Validates the configuration by building the star.
pub fn cmd_construct(cfg: &StarConfig) -> Outcome {
    match cfg.build() {
        Ok(star) => Outcome {
            code: EXIT_PASS,
            text: format!("OK {} ({})\n", star.label(), cfg.family.name()),
        },
        Err(e) => Outcome::error(EXIT_BUILD_FAILED, e),
    }
}

/// Runs the selected checks and renders one line per check plus a summary.
pub fn cmd_verify(cfg: &StarConfig, opts: &VerifyOptions) -> Outcome {
    let star = match cfg.build() {
        Ok(s) => s,
        Err(e) => return Outcome::error(EXIT_BUILD_FAILED, e),
    };
    let selected: Vec<String> = match &opts.checks {
        Some(list) => {
            if let Some(bad) = list.iter().find(|c| !CHECK_NAMES.contains(&c.as_str())) {
                return Outcome::error(
                    EXIT_BUILD_FAILED,
                    format!("unknown check {bad:?}, expected one of {}", CHECK_NAMES.join(",")),
                );
            }
            list.clone()
        }
        None => applicable_checks(cfg, &star).into_iter().map(String::from).collect(),
    };
    let samples = opts.samples.or(cfg.samples);
    let tol = opts.tol.unwrap_or(cfg.tol);
    let seed = opts.seed.unwrap_or(cfg.seed);
    let n = |default: usize| samples.unwrap_or(default);
    let par = selected
        .iter()
        .any(|c| KLEIN_CHECKS.contains(&c.as_str()))
        .then(|| Parallelism::new(star.clone()));
    let par = || par.as_ref().expect("built for Klein checks");

    let reports: Vec<CheckReport> = selected
        .iter()
        .map(|name| match name.as_str() {
            "involution" => check_involution(&star, n(500), tol),
            "fixed_point_free" => check_fixed_point_free(&star, n(500)),
            "no_exterior_meet" => check_no_exterior_meet_seeded(&star, n(5000), tol, seed),
            "coverage" => check_coverage_seeded(&star, n(200), tol, seed),
            "rotational" => check_rotational_seeded(&star, n(200), tol, seed),
            "axial" => check_axial(&star, n(200), tol),
            "symmetric" => check_symmetric(&star, n(200), tol),
            "pz_monotone" => match (cfg.function("t"), cfg.function("s")) {
                (Some(t), Some(s)) => check_pz_monotone(t, s, &pz_grid(n(20))),
                _ => failed_report("pz_monotone"),
            },
            "zero_secants" => check_zero_secants(par().hfd(), n(200)),
            "hfd" => check_hfd_seeded(par(), n(100), seed),
            "class_signature" => check_class_signatures(par(), n(50), seed),
            "spread_disjoint" => check_spread_disjoint(par(), 5, n(100).div_ceil(5), tol, seed),
            "dimension" => dimension_report(par(), n(100)),
            "torus_fixes_classes" => check_torus_fixes_classes(par().embedded(), n(50)),
            "parallel_queries" => check_parallel_queries(par(), n(100), seed),
            _ => unreachable!("names validated"),
        })
        .collect();
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "{r}");
    }
    let _ = writeln!(text, "{}", render_summary(&reports));
    let code = if reports.iter().all(|r| r.passed) {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    };
    Outcome { code, text }
}

const KLEIN_CHECKS: [&str; 7] = [
    "zero_secants",
    "hfd",
    "class_signature",
    "spread_disjoint",
    "dimension",
    "torus_fixes_classes",
    "parallel_queries",
];

/// A check that could not run, reported as failed with a NaN figure.
fn failed_report(name: &str) -> CheckReport {
    CheckReport {
        name: name.to_string(),
        passed: false,
        max_residual: f64::NAN,
        witness: None,
        samples_used: 0,
    }
}

/// `n` heights in `]−1, 1[`, symmetric about and avoiding 0.
fn pz_grid(n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| -0.95 + 1.9 * (i as f64 + 0.5) / n as f64)
        .filter(|z| *z != 0.0)
        .collect()
}

/// `dim Π ∈ {2, 3}` with a clean singular-value gap (> 1e6). The figure is
/// the inverse gap; the witness is the dimension found.
fn dimension_report(par: &Parallelism, n: usize) -> CheckReport {
    let d = dimension_estimate(par.hfd(), n);
    let passed = (d.dim == 2 || d.dim == 3) && d.gap > 1e6;
    CheckReport {
        name: "dimension".into(),
        passed,
        max_residual: 1.0 / d.gap,
        witness: Some(vec![d.dim as f64]),
        samples_used: n.max(10),
    }
}

/// `n` sample parameters `(t, θ)`: a grid of `⌈√n⌉` values of `t ∈ [0, 1]`,
/// each with evenly spaced `θ ∈ [0, 2π)`, truncated to `n` rows.
pub fn sample_parameters(n: usize) -> Vec<(f64, f64)> {
    if n == 0 {
        return Vec::new();
    }
    let n_t = (n as f64).sqrt().ceil() as usize;
    let n_theta = n.div_ceil(n_t);
    let mut out = Vec::with_capacity(n);
    'outer: for i in 0..n_t {
        let t = if n_t == 1 { 1.0 } else { i as f64 / (n_t - 1) as f64 };
        for j in 0..n_theta {
            if out.len() == n {
                break 'outer;
            }
            out.push((t, TAU * j as f64 / n_theta as f64));
        }
    }
    out
}

/// The sphere point for sample parameters: the rotated meridian point for
/// rotational stars, `q(2t − 1, θ)` otherwise.
fn sample_point(star: &GlStar, t: f64, theta: f64) -> Vector3<f64> {
    if star.is_rotational() {
        rotation_z(theta) * meridian_point(t)
    } else {
        sphere_point(2.0 * t - 1.0, theta)
    }
}

/// 17 significant digits, negative zero printed as `0`.
fn num(x: f64) -> String {
    format_g17(x + 0.0)
}

fn join(xs: impl IntoIterator<Item = f64>) -> String {
    xs.into_iter().map(num).collect::<Vec<_>>().join(",")
}

/// Lines CSV: `t,theta,x1,y1,z1,x2,y2,z2` with the two sphere points of
/// each sampled star line.
pub fn lines_csv(star: &GlStar, n: usize) -> glstar::Result<String> {
    let mut s = String::from("t,theta,x1,y1,z1,x2,y2,z2\n");
    for (t, theta) in sample_parameters(n) {
        let q = sample_point(star, t, theta);
        let r = star.sigma(&q)?;
        let _ = writeln!(s, "{}", join([t, theta, q.x, q.y, q.z, r.x, r.y, r.z]));
    }
    Ok(s)
}

/// Wavefront OBJ mesh of `n` profile surfaces of a rotational star; stars
/// without stored profile data use the surfaces swept by their meridian
/// lines.
pub fn mesh_obj(star: &GlStar, n: usize) -> glstar::Result<String> {
    if !star.is_rotational() {
        return Err(glstar::Error::InvalidInput(
            "only rotational stars have profile surfaces".into(),
        ));
    }
    let entry = |t: f64| match star.profile() {
        Some(p) => p.entry_at(t),
        None if t == 1.0 => Ok(SurfaceEntry::axis()),
        None => SurfaceEntry::from_line(&star.meridian_line(t)?),
    };
    let mut mesh = TriangleMesh::default();
    let n = n.max(2);
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        mesh.append(&surface_mesh(&entry(t)?, 48, 24, DEFAULT_Z_RANGE));
    }
    Ok(mesh.to_obj(num))
}

/// H-line CSV: `t,theta` and two spanning 6-vectors of each sampled
/// H-line.
pub fn hfd_csv(star: &GlStar, n: usize) -> glstar::Result<String> {
    let par = Parallelism::new(star.clone());
    let h = star_to_hfd(par.embedded());
    let (lo, hi) = h.t_range();
    let mut s = String::from("t,theta");
    for v in ["h1", "h2"] {
        for i in 0..6 {
            let _ = write!(s, ",{v}_{i}");
        }
    }
    s.push('\n');
    for (t, theta) in sample_parameters(n) {
        let t = lo + (hi - lo) * t;
        let line = h.line(t, theta)?;
        let [a, b] = line.basis();
        let _ = writeln!(
            s,
            "{}",
            join([t, theta].into_iter().chain(a.iter().copied()).chain(b.iter().copied()))
        );
    }
    Ok(s)
}

/// Parses `x,y,z` into an affine point.
pub fn parse_point(text: &str) -> Result<HPoint4, String> {
    let xs: Vec<f64> = text
        .split(',')
        .map(|p| match p.trim().parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            Ok(_) => Err(format!("coordinate {p:?} is not finite")),
            Err(e) => Err(format!("bad coordinate {p:?}: {e}")),
        })
        .collect::<Result<_, _>>()?;
    match xs.as_slice() {
        [x, y, z] => Ok(HPoint4::affine(*x, *y, *z)),
        _ => Err(format!("expected three coordinates x,y,z, got {text:?}")),
    }
}

/// Parses `x,y,z;x,y,z` into the line through two affine points.
pub fn parse_line(text: &str) -> Result<PLine, String> {
    let (a, b) = text
        .split_once(';')
        .ok_or_else(|| format!("expected two points x,y,z;x,y,z, got {text:?}"))?;
    PLine::join(&parse_point(a)?, &parse_point(b)?).map_err(|e| e.to_string())
}

/// Two homogeneous points `w0,w1,w2,w3` spanning a line, one per output
/// line: an orthonormal pair with a canonical sign.
pub fn render_line(line: &PLine) -> String {
    let (a, b) = line.spanning_vectors();
    let canon = |v: nalgebra::Vector4<f64>| {
        let i = v.iamax();
        if v[i] < 0.0 {
            -v
        } else {
            v
        }
    };
    format!(
        "{}\n{}\n",
        join(canon(a).iter().copied()),
        join(canon(b).iter().copied())
    )
}

/// The unique parallel of `line` through `point`.
pub fn cmd_parallel(cfg: &StarConfig, line: &str, point: &str) -> Outcome {
    let (l, p) = match (parse_line(line), parse_point(point)) {
        (Ok(l), Ok(p)) => (l, p),
        (Err(e), _) | (_, Err(e)) => return Outcome::error(EXIT_BUILD_FAILED, e),
    };
    let star = match cfg.build() {
        Ok(s) => s,
        Err(e) => return Outcome::error(EXIT_BUILD_FAILED, e),
    };
    match parallel_through(&Parallelism::new(star), &p, &l) {
        Ok(m) => Outcome {
            code: EXIT_PASS,
            text: render_line(&m),
        },
        Err(e) => Outcome::error(EXIT_QUERY_FAILED, e),
    }
}

/// The built-in example's configuration.
pub fn demo_config() -> StarConfig {
    let (t, s) = glstar::constructions::builtin_heights();
    StarConfig {
        family: Family::Param,
        center: [0.0; 3],
        functions: vec![("t".into(), t), ("s".into(), s)],
        parabolas: None,
        hand: Default::default(),
        tol: glstar::DEFAULT_TOL,
        samples: None,
        seed: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn clifford_cfg() -> StarConfig {
        parse_config(r#"{"family":"clifford"}"#).unwrap()
    }

    #[test]
    fn sample_parameters_cover_t_range() {
        let p = sample_parameters(512);
        assert_eq!(p.len(), 512);
        assert_eq!(p[0], (0.0, 0.0));
        assert!(p.iter().any(|&(t, th)| t == 1.0 && th == 0.0));
    }

    #[test]
    fn clifford_lines_csv_pole_row() {
        let star = clifford_cfg().build().unwrap();
        let csv = lines_csv(&star, 512).unwrap();
        assert!(csv.starts_with("t,theta,x1,y1,z1,x2,y2,z2\n"));
        assert_eq!(csv.lines().count(), 513);
        assert!(csv.lines().any(|l| l == "1,0,0,0,1,0,0,-1"), "{csv}");
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn obj_mesh_has_one_based_triangles() {
        let star = clifford_cfg().build().unwrap();
        let obj = mesh_obj(&star, 5).unwrap();
        assert!(obj.lines().any(|l| l.starts_with("v ")));
        let nv = obj.lines().filter(|l| l.starts_with("v ")).count();
        for l in obj.lines().filter(|l| l.starts_with("f ")) {
            let idx: Vec<usize> = l[2..].split(' ').map(|i| i.parse().unwrap()).collect();
            assert_eq!(idx.len(), 3);
            assert!(idx.iter().all(|&i| i >= 1 && i <= nv));
        }
    }

    #[test]
    fn hfd_csv_has_two_six_vectors_per_row() {
        let star = clifford_cfg().build().unwrap();
        let csv = hfd_csv(&star, 16).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows.len(), 17);
        assert!(rows.iter().all(|r| r.split(',').count() == 14));
    }

    #[test]
    fn parallel_on_line_echoes_line() {
        let cfg = clifford_cfg();
        let out = cmd_parallel(&cfg, "0,0,0;0,0,1", "0,0,5");
        assert_eq!(out.code, EXIT_PASS);
        assert_eq!(out.text, render_line(&glstar::projgeom::z_axis()));
    }

    #[test]
    fn clifford_parallel_of_z_through_unit_point() {
        let out = cmd_parallel(&clifford_cfg(), "0,0,0;0,0,1", "1,0,0");
        assert_eq!(out.code, EXIT_PASS);
        let pts: Vec<Vec<f64>> = out
            .text
            .lines()
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect();
        let m = PLine::join(
            &HPoint4::new(nalgebra::Vector4::from_vec(pts[0].clone())).unwrap(),
            &HPoint4::new(nalgebra::Vector4::from_vec(pts[1].clone())).unwrap(),
        )
        .unwrap();
        assert!(m.contains(&HPoint4::affine(1.0, 0.0, 0.0), 1e-9));
    }

    #[test]
    fn bad_query_input_is_a_usage_error() {
        assert_eq!(cmd_parallel(&clifford_cfg(), "0,0,0", "1,0,0").code, EXIT_BUILD_FAILED);
    }

    #[test]
    fn unknown_check_rejected() {
        let opts = VerifyOptions {
            checks: Some(vec!["nope".into()]),
            ..Default::default()
        };
        assert_eq!(cmd_verify(&clifford_cfg(), &opts).code, EXIT_BUILD_FAILED);
    }

    #[test]
    fn check_subset_is_honoured() {
        let opts = VerifyOptions {
            checks: Some(vec!["involution".into(), "coverage".into()]),
            samples: Some(20),
            ..Default::default()
        };
        let out = cmd_verify(&clifford_cfg(), &opts);
        assert_eq!(out.code, EXIT_PASS, "{}", out.text);
        let lines: Vec<&str> = out.text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("CHECK involution: PASS"));
        assert!(lines[1].starts_with("CHECK coverage: PASS"));
        assert_eq!(lines[2], "RESULT: PASS (2/2)");
    }
}
