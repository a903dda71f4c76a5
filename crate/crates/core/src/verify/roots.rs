/// Outcome of [`positive_root_count`].
#[derive(Debug, Clone, PartialEq)]
pub struct RootCount {
    /// Number of distinct roots found on the grid.
    pub count: usize,
    /// The refined roots, increasing.
    pub roots: Vec<f64>,
    /// Descartes' bound from the coefficient signs, for polynomial input.
    pub descartes_bound: Option<usize>,
}

/// Log-spaced grid of `n ≥ 2` points from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// The default root-count grid: 2048 log-spaced points in `[1e−4, 1e4]`.
pub fn default_root_grid() -> Vec<f64> {
    log_grid(1e-4, 1e4, 2048)
}

const BISECT_TOL: f64 = 1e-12;
const CLUSTER_TOL: f64 = 1e-9;

/// Counts the positive roots of `f` on `grid`: sign changes between
/// consecutive samples are refined by bisection, exact zeros at grid points
/// count once, and roots closer than `1e−9` (relative) are merged.
pub fn positive_root_count<F>(f: F, grid: &[f64]) -> RootCount
where
    F: Fn(f64) -> f64,
{
    let values: Vec<f64> = grid.iter().map(|&a| f(a)).collect();
    let mut roots = Vec::new();
    for i in 0..grid.len() {
        if values[i] == 0.0 {
            roots.push(grid[i]);
            continue;
        }
        if i + 1 < grid.len() && values[i + 1] != 0.0 && (values[i] < 0.0) != (values[i + 1] < 0.0) {
            roots.push(bisect(&f, grid[i], grid[i + 1], values[i]));
        }
    }
    roots.dedup_by(|b, a| (*b - *a).abs() <= CLUSTER_TOL * a.abs().max(1.0));
    RootCount {
        count: roots.len(),
        roots,
        descartes_bound: None,
    }
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let neg_lo = f_lo < 0.0;
    while hi - lo > BISECT_TOL * lo.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign changes in a coefficient sequence, zeros skipped.
pub fn descartes_sign_changes(coeffs: &[f64]) -> usize {
    let signs: Vec<bool> = coeffs.iter().filter(|c| **c != 0.0).map(|c| *c > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Root count of a polynomial given by coefficients in descending powers,
/// with the Descartes bound attached.
pub fn polynomial_root_count(coeffs: &[f64], grid: &[f64]) -> RootCount {
    let mut rc = positive_root_count(|a| horner(coeffs, a), grid);
    rc.descartes_bound = Some(descartes_sign_changes(coeffs));
    rc
}

/// Evaluates a polynomial given in descending powers.
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_simple_roots() {
        let rc = positive_root_count(|a| (a - 1.0) * (a - 2.0), &default_root_grid());
        assert_eq!(rc.count, 2);
        assert!((rc.roots[0] - 1.0).abs() < 1e-11);
        assert!((rc.roots[1] - 2.0).abs() < 1e-11);
    }

    #[test]
    fn descartes_bound_counts_sign_changes() {
        assert_eq!(descartes_sign_changes(&[2.0, 7.0, 8.0, 5.25, 3.25, -3.0, -1.5]), 1);
        assert_eq!(descartes_sign_changes(&[1.0, 0.0, -1.0, 0.0, 1.0]), 2);
    }

    #[test]
    fn polynomial_count_respects_bound() {
        let rc = polynomial_root_count(&[1.0, -3.0, 2.0], &default_root_grid());
        assert_eq!(rc.count, 2);
        assert_eq!(rc.descartes_bound, Some(2));
    }

    #[test]
    fn zero_at_grid_point_counts_once() {
        let grid = [0.5, 1.0, 1.5];
        assert_eq!(positive_root_count(|a| a - 1.0, &grid).count, 1);
    }

    #[test]
    fn log_grid_endpoints_exact() {
        let g = log_grid(1e-3, 1e3, 512);
        assert_eq!(g.len(), 512);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[511], 1e3);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
