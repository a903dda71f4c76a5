//! Derivative-free local minimisation on a two-parameter grid.
//!
//! Used by the coverage check and by the parallel-class search. Both
//! minimise a non-negative functional whose zeros are the solutions, so the
//! functional is accurate down to its zero and golden-section comparisons
//! resolve parameters far below `√ε`.

const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Minimises `f` along `x + λ d`, returning `(λ, f)`.
fn line_minimize<F: Fn([f64; 2]) -> f64>(f: &F, x: [f64; 2], d: [f64; 2], step: f64, f0: f64) -> (f64, f64) {
    let at = |l: f64| f([x[0] + l * d[0], x[1] + l * d[1]]);
    // bracket: (a, b, c) with f(b) below both ends
    let mut a = 0.0;
    let (mut b, mut fb) = (step, at(step));
    if fb > f0 {
        let (m, fm) = (-step, at(-step));
        if fm < f0 {
            b = m;
            fb = fm;
        } else {
            return golden(&at, -step, step, 0.0, f0);
        }
    }
    let mut c = b + (b - a) * 1.618_033_988_749_895;
    let mut fc = at(c);
    let mut expansions = 0;
    while fc < fb && expansions < 60 {
        a = b;
        b = c;
        fb = fc;
        c = b + (b - a) * 1.618_033_988_749_895;
        fc = at(c);
        expansions += 1;
    }
    let (lo, hi) = if a < c { (a, c) } else { (c, a) };
    golden(&at, lo, hi, b, fb)
}

/// Golden-section search on `[lo, hi]` with interior point `m`.
fn golden<G: Fn(f64) -> f64>(g: &G, mut lo: f64, mut hi: f64, m: f64, fm: f64) -> (f64, f64) {
    let (mut x, mut fx) = (m, fm);
    for _ in 0..200 {
        let width = hi - lo;
        if width <= 1e-16 * (1.0 + x.abs()) {
            break;
        }
        // probe the larger side
        let u = if hi - x > x - lo {
            x + GOLDEN * (hi - x)
        } else {
            x - GOLDEN * (x - lo)
        };
        if u == x {
            break;
        }
        let fu = g(u);
        if fu < fx {
            if u > x {
                lo = x;
            } else {
                hi = x;
            }
            x = u;
            fx = fu;
        } else if u > x {
            hi = u;
        } else {
            lo = u;
        }
    }
    (x, fx)
}

/// Powell's conjugate-direction method for a function of two variables,
/// started at `x0` with initial steps `steps`. Stops when `f` falls below
/// `f_target` or stops improving.
pub(crate) fn powell<F: Fn([f64; 2]) -> f64>(f: &F, x0: [f64; 2], steps: [f64; 2], f_target: f64) -> ([f64; 2], f64) {
    let mut x = x0;
    let mut fx = f(x);
    let mut dirs = [[steps[0], 0.0], [0.0, steps[1]]];
    for _ in 0..40 {
        if fx <= f_target {
            break;
        }
        let start = (x, fx);
        let mut biggest = (0usize, 0.0f64);
        for (i, d) in dirs.iter().enumerate() {
            let before = fx;
            let (l, fl) = line_minimize(f, x, *d, 1.0, fx);
            if fl < fx {
                x = [x[0] + l * d[0], x[1] + l * d[1]];
                fx = fl;
            }
            if before - fx > biggest.1 {
                biggest = (i, before - fx);
            }
        }
        let new_dir = [x[0] - start.0[0], x[1] - start.0[1]];
        if new_dir != [0.0, 0.0] && fx < start.1 {
            let (l, fl) = line_minimize(f, x, new_dir, 1.0, fx);
            if fl < fx {
                x = [x[0] + l * new_dir[0], x[1] + l * new_dir[1]];
                fx = fl;
            }
            dirs[biggest.0] = new_dir;
        }
        if !(fx < start.1 * (1.0 - 1e-12)) {
            // restart from the axes once before giving up
            if dirs != [[steps[0], 0.0], [0.0, steps[1]]] {
                dirs = [[steps[0] * 1e-3, 0.0], [0.0, steps[1] * 1e-3]];
                continue;
            }
            break;
        }
    }
    (x, fx)
}

/// Indices of the `limit` smallest local minima of a periodic-in-`j` grid
/// of values `v[i][j]`, at least `sep` cells apart.
pub(crate) fn grid_minima(v: &[Vec<f64>], sep: usize, limit: usize) -> Vec<(usize, usize)> {
    let rows = v.len();
    let cols = v[0].len();
    let mut minima = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let x = v[i][j];
            if !x.is_finite() {
                continue;
            }
            let mut is_min = true;
            'n: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let ii = i as i64 + di;
                    if ii < 0 || ii >= rows as i64 {
                        continue;
                    }
                    let jj = (j as i64 + dj).rem_euclid(cols as i64) as usize;
                    if v[ii as usize][jj] < x {
                        is_min = false;
                        break 'n;
                    }
                }
            }
            if is_min {
                minima.push((x, i, j));
            }
        }
    }
    minima.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    for (_, i, j) in minima {
        let far = chosen.iter().all(|&(ci, cj)| {
            let dj = (j as i64 - cj as i64).rem_euclid(cols as i64);
            let dj = dj.min(cols as i64 - dj);
            (i as i64 - ci as i64).abs() > sep as i64 || dj > sep as i64
        });
        if far {
            chosen.push((i, j));
            if chosen.len() == limit {
                break;
            }
        }
    }
    chosen
}

/// Settings for [`refine_zeros`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct ZeroSearch {
    /// A point is a zero when `√f` is below this.
    pub zero_tol: f64,
    /// A stall with `√f` below this is re-examined on a finer grid.
    pub zoom_trigger: f64,
    /// Number of successively finer local grids tried after a stall.
    pub zoom_levels: usize,
    /// Points per side of a local zoom grid.
    pub zoom_points: usize,
}

impl ZeroSearch {
    pub(crate) fn new(zero_tol: f64) -> ZeroSearch {
        ZeroSearch {
            zero_tol,
            zoom_trigger: 0.02,
            zoom_levels: 2,
            zoom_points: 21,
        }
    }
}

/// Refines a coarse candidate of a non-negative `f` (whose second
/// parameter is periodic) by Powell's method and appends every zero found
/// as `(point, √f)`.
///
/// Functionals built from piecewise data have creases on which the
/// refinement can stall next to a narrow valley holding the true zero; a
/// stall at a small positive value is therefore re-examined on a finer grid
/// of half-width `spacing` around the stall point, restarting from that
/// grid's local minima. Duplicates are left to the caller.
pub(crate) fn refine_zeros<F: Fn([f64; 2]) -> f64>(
    f: &F,
    start: [f64; 2],
    spacing: [f64; 2],
    cfg: &ZeroSearch,
    out: &mut Vec<([f64; 2], f64)>,
) {
    refine_level(f, start, spacing, 0, cfg, out);
}

fn refine_level<F: Fn([f64; 2]) -> f64>(
    f: &F,
    start: [f64; 2],
    spacing: [f64; 2],
    level: usize,
    cfg: &ZeroSearch,
    out: &mut Vec<([f64; 2], f64)>,
) {
    let target = (cfg.zero_tol * 1e-3).powi(2);
    let (p, fp) = powell(f, start, [0.5 * spacing[0], 0.5 * spacing[1]], target);
    let d = fp.sqrt();
    if d < cfg.zero_tol {
        out.push((p, d));
        return;
    }
    if level >= cfg.zoom_levels || !(d < cfg.zoom_trigger) {
        return;
    }
    let n = cfg.zoom_points;
    let local = |k: usize| 2.0 * k as f64 / (n - 1) as f64 - 1.0;
    let at = |a: usize, b: usize| [p[0] + spacing[0] * local(a), p[1] + spacing[1] * local(b)];
    let values: Vec<Vec<f64>> = (0..n).map(|a| (0..n).map(|b| f(at(a, b))).collect()).collect();
    let sub = [2.0 * spacing[0] / (n - 1) as f64, 2.0 * spacing[1] / (n - 1) as f64];
    for (a, b) in grid_minima(&values, 1, 4) {
        refine_level(f, at(a, b), sub, level + 1, cfg, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powell_finds_zero_of_skewed_quadratic() {
        let f = |x: [f64; 2]| {
            let (u, v) = (x[0] - 0.3 + 0.9 * (x[1] - 1.2), 0.01 * (x[1] - 1.2));
            u * u + v * v
        };
        let (x, fx) = powell(&f, [0.0, 0.0], [0.1, 0.1], 1e-30);
        assert!(fx < 1e-24, "{fx}");
        assert!((x[0] - 0.3).abs() < 1e-9 && (x[1] - 1.2).abs() < 1e-9, "{x:?}");
    }

    #[test]
    fn powell_resolves_far_below_sqrt_eps() {
        let f = |x: [f64; 2]| (x[0] - 1.0 / 3.0).powi(2) + (x[1] + 0.25).powi(2);
        let (x, _) = powell(&f, [0.0, 0.0], [0.05, 0.05], 0.0);
        assert!((x[0] - 1.0 / 3.0).abs() < 1e-14 && (x[1] + 0.25).abs() < 1e-14);
    }

    #[test]
    fn grid_minima_wrap_in_second_index() {
        let v: Vec<Vec<f64>> = (0..5)
            .map(|i| {
                (0..8)
                    .map(|j| {
                        let d = (j as f64 - 7.5).rem_euclid(8.0);
                        (i as f64 - 2.0).powi(2) + d.min(8.0 - d)
                    })
                    .collect()
            })
            .collect();
        let m = grid_minima(&v, 1, 4);
        assert_eq!(m, vec![(2, 0)]);
    }
}
