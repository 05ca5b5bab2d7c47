//! Complete bipartite graphs `K_{a,b}`: the b-path construction from a
//! graceful labeling of a path when `a < b/2`, and lower bounds otherwise.
//!
//! Vertex numbering: the `a`-side is `0..a`, the `b`-side vertex `v_t` is
//! `a + t`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pathsys::{Path, PathSystem};

/// Injective labels `0..=a` on the path with `a` edges whose consecutive
/// differences are exactly `1..=a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GracefulLabeling {
    labels: Vec<usize>,
}

impl GracefulLabeling {
    /// Validates a user-supplied labeling of the path with `labels.len() - 1`
    /// edges.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::Precondition("a labeling needs at least two labels".into()));
        }
        let a = labels.len() - 1;
        let mut seen = vec![false; a + 1];
        for &l in &labels {
            if l > a || std::mem::replace(&mut seen[l], true) {
                return Err(Error::Precondition(format!("labels must be a permutation of 0..={a}")));
            }
        }
        let mut diff_seen = vec![false; a + 1];
        for w in labels.windows(2) {
            let d = w[0].abs_diff(w[1]);
            if d == 0 || std::mem::replace(&mut diff_seen[d], true) {
                return Err(Error::Precondition(format!("differences must be exactly 1..={a}")));
            }
        }
        Ok(GracefulLabeling { labels })
    }

    /// Number of path edges.
    pub fn a(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }
}

/// The zig-zag labeling `m, m-1, m+1, m-2, m+2, ...` with `m = ceil(a/2)`;
/// for even `a` it ends `a-1, 0, a`, for odd `a` it ends `1, a, 0`.
pub fn graceful_path_labeling(a: usize) -> Result<GracefulLabeling> {
    if a == 0 {
        return Err(Error::Precondition("a must be at least 1".into()));
    }
    let m = a.div_ceil(2);
    let labels = (0..=a)
        .map(|i| if i % 2 == 1 { m - i.div_ceil(2) } else { m + i / 2 })
        .collect();
    Ok(GracefulLabeling { labels })
}

/// `K_{a,b}` with the numbering described in the module docs.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_edges(a + b, (0..a).flat_map(|i| (0..b).map(move |t| (i, a + t)))).expect("valid edges")
}

/// `b` paths `P_j = (v_{φ(0)+j}, u_0, v_{φ(1)+j}, ..., u_{a-1}, v_{φ(a)+j})`,
/// `v`-indices mod `b`, using the labeling of [`graceful_path_labeling`].
pub fn build_ssp_complete_bipartite(a: usize, b: usize) -> Result<PathSystem> {
    let phi = graceful_path_labeling(a.max(1))?;
    build_ssp_complete_bipartite_with(a, b, &phi)
}

/// As [`build_ssp_complete_bipartite`] with a caller-chosen labeling of the
/// path with `a` edges.
pub fn build_ssp_complete_bipartite_with(a: usize, b: usize, phi: &GracefulLabeling) -> Result<PathSystem> {
    if a == 0 || 2 * a >= b {
        return Err(Error::Precondition(format!(
            "construction needs 1 <= a < b/2, got a={a}, b={b}"
        )));
    }
    if phi.a() != a {
        return Err(Error::Precondition(format!("labeling is for a path with {} edges, need {a}", phi.a())));
    }
    let g = complete_bipartite(a, b);
    let labels = phi.labels();
    let paths = (0..b)
        .map(|j| {
            let mut vs = Vec::with_capacity(2 * a + 1);
            for (i, &l) in labels.iter().enumerate() {
                vs.push(a + (l + j) % b);
                if i < a {
                    vs.push(i);
                }
            }
            Path::new(vs).map_err(|_| Error::Internal(format!("P_{j} is not simple")))
        })
        .collect::<Result<Vec<_>>>()?;
    PathSystem::new(g, paths)
}

/// Closed-form indices of the two paths through `u_i v_t`:
/// `(t - φ(i)) mod b` and `(t - φ(i+1)) mod b`.
pub fn bipartite_membership(phi: &GracefulLabeling, b: usize, i: usize, t: usize) -> [usize; 2] {
    let l = phi.labels();
    [(t + b - l[i] % b) % b, (t + b - l[i + 1] % b) % b]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    /// `ssp >= maximum degree = b`.
    MaxDegree,
    /// The b-path construction.
    Construction,
    /// `p^2 + 4ap - 6ab >= 0` from the edge-multiplicity counting.
    Counting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub a: usize,
    pub b: usize,
    pub lower: f64,
    pub upper: Option<f64>,
    pub exact: Option<usize>,
    pub lower_source: BoundSource,
    pub upper_source: Option<BoundSource>,
}

/// `(sqrt(6 b/a + 4) - 2) a`, the positive root of `p^2 + 4ap - 6ab`.
pub fn counting_lower_bound(a: f64, b: f64) -> f64 {
    ((6.0 * (b / a) + 4.0).sqrt() - 2.0) * a
}

/// Piecewise lower bound: `b` when `a < b/2`, else the counting bound.
pub fn lower_bound(a: f64, b: f64) -> f64 {
    if 2.0 * a < b {
        b
    } else {
        counting_lower_bound(a, b)
    }
}

pub fn bipartite_bounds(a: usize, b: usize) -> Result<BoundReport> {
    if a == 0 || b == 0 {
        return Err(Error::Precondition("part sizes must be positive".into()));
    }
    if a > b {
        return Err(Error::Precondition(format!("orient parts so a <= b (got a={a}, b={b})")));
    }
    Ok(if 2 * a < b {
        BoundReport {
            a,
            b,
            lower: b as f64,
            upper: Some(b as f64),
            exact: Some(b),
            lower_source: BoundSource::MaxDegree,
            upper_source: Some(BoundSource::Construction),
        }
    } else {
        BoundReport {
            a,
            b,
            lower: counting_lower_bound(a as f64, b as f64),
            upper: None,
            exact: None,
            lower_source: BoundSource::Counting,
            upper_source: None,
        }
    })
}

/// Formats with 6 significant digits (round-half-even on the exact binary
/// value), trailing zeros trimmed, at least one fractional digit.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.1}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    // rounding may carry into a new digit (e.g. 9.999995 -> 10.00000)
    let rounded: f64 = s.parse().expect("formatted float");
    if rounded.abs().log10().floor() as i32 > mag && decimals > 0 {
        let d = decimals - 1;
        s = format!("{x:.d$}");
    }
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.push('0');
        }
    } else {
        s.push_str(".0");
    }
    s
}

fn format_a(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{}", x as u64)
    } else {
        format_sig6(x)
    }
}

/// Rows `(a, lower bound)` for `a = b k / steps`, `k = 1..=steps`.
pub fn bounds_table(b: usize, steps: usize) -> Result<Vec<(f64, f64)>> {
    if b < 2 || steps == 0 {
        return Err(Error::Precondition("need b >= 2 and steps >= 1".into()));
    }
    Ok((1..=steps)
        .map(|k| {
            let a = if steps == b { k as f64 } else { b as f64 * k as f64 / steps as f64 };
            (a, lower_bound(a, b as f64))
        })
        .collect())
}

/// CSV rendering of [`bounds_table`] with header `a,lower_bound`.
pub fn bounds_csv(b: usize, steps: usize) -> Result<String> {
    let mut out = String::from("a,lower_bound\n");
    for (a, lb) in bounds_table(b, steps)? {
        let _ = writeln!(out, "{},{}", format_a(a), format_sig6(lb));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathsys::{incidence_profile, verify_strong_separation};

    #[test]
    fn small_labelings() {
        assert_eq!(graceful_path_labeling(4).unwrap().labels(), &[2, 1, 3, 0, 4]);
        assert_eq!(graceful_path_labeling(3).unwrap().labels(), &[2, 1, 3, 0]);
        assert_eq!(graceful_path_labeling(1).unwrap().labels(), &[1, 0]);
        assert!(graceful_path_labeling(0).is_err());
    }

    #[test]
    fn labeling_endings() {
        for a in [6usize, 10, 20] {
            let l = graceful_path_labeling(a).unwrap().labels().to_vec();
            assert_eq!(&l[a - 2..], &[a - 1, 0, a]);
        }
        for a in [5usize, 9, 21] {
            let l = graceful_path_labeling(a).unwrap().labels().to_vec();
            assert_eq!(&l[a - 2..], &[1, a, 0]);
        }
    }

    #[test]
    fn user_labeling_validation() {
        assert!(GracefulLabeling::new(vec![0, 3, 1, 2]).is_ok());
        assert!(GracefulLabeling::new(vec![0, 1, 2, 3]).is_err());
        assert!(GracefulLabeling::new(vec![0, 4, 1]).is_err());
    }

    #[test]
    fn k13_construction() {
        let sys = build_ssp_complete_bipartite(1, 3).unwrap();
        // v_t = 1 + t
        let lists: Vec<Vec<usize>> = sys.paths().iter().map(|p| p.vertices().to_vec()).collect();
        assert_eq!(lists, vec![vec![2, 0, 1], vec![3, 0, 2], vec![1, 0, 3]]);
        let prof = incidence_profile(&sys);
        let g = sys.graph();
        assert_eq!(prof.paths_of(g.edge_index(0, 1).unwrap()), vec![0, 2]);
        assert_eq!(prof.paths_of(g.edge_index(0, 2).unwrap()), vec![0, 1]);
        assert_eq!(prof.paths_of(g.edge_index(0, 3).unwrap()), vec![1, 2]);
        assert!(verify_strong_separation(&sys).is_pass());
    }

    #[test]
    fn k25_construction() {
        let sys = build_ssp_complete_bipartite(2, 5).unwrap();
        assert_eq!(sys.len(), 5);
        assert!(sys.paths().iter().all(|p| p.len() == 4));
        assert_eq!(incidence_profile(&sys).e(2), 10);
        assert!(verify_strong_separation(&sys).is_pass());
    }

    #[test]
    fn construction_boundary() {
        assert!(matches!(build_ssp_complete_bipartite(3, 6), Err(Error::Precondition(_))));
        assert!(matches!(build_ssp_complete_bipartite(0, 6), Err(Error::Precondition(_))));
    }

    #[test]
    fn custom_labeling_is_used() {
        let phi = GracefulLabeling::new(vec![0, 2, 1]).unwrap();
        let sys = build_ssp_complete_bipartite_with(2, 5, &phi).unwrap();
        assert_eq!(sys.paths()[0].vertices(), &[2, 0, 4, 1, 3]);
        assert!(verify_strong_separation(&sys).is_pass());
    }

    #[test]
    fn bounds_examples() {
        let r = bipartite_bounds(3, 8).unwrap();
        assert_eq!(r.exact, Some(8));
        let r = bipartite_bounds(8, 8).unwrap();
        assert!((r.lower - (10f64.sqrt() - 2.0) * 8.0).abs() < 1e-9);
        assert_eq!(r.upper, None);
        let r = bipartite_bounds(4, 8).unwrap();
        assert_eq!(r.lower, 8.0);
        assert_eq!(r.exact, None);
        assert!(bipartite_bounds(9, 8).is_err());
        assert!(bipartite_bounds(0, 8).is_err());
    }

    #[test]
    fn table_rows() {
        let rows = bounds_table(8, 8).unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows[1], (2.0, 8.0));
        assert_eq!(rows[3], (4.0, 8.0));
        assert!((rows[7].1 - 9.2982).abs() < 1e-4);
        let csv = bounds_csv(8, 8).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "a,lower_bound");
        assert_eq!(lines[2], "2,8.0");
        assert_eq!(lines[4], "4,8.0");
        assert_eq!(lines[8], "8,9.29822");
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(9.298221281347036), "9.29822");
        assert_eq!(format_sig6(8.0), "8.0");
        assert_eq!(format_sig6(1234567.0), "1234567.0");
        assert_eq!(format_sig6(0.000123456789), "0.000123457");
        assert_eq!(format_sig6(9.9999996), "10.0");
        assert_eq!(format_sig6(0.5), "0.5");
    }
}
