//! Exact minimum size of a strongly separating path system for small graphs.
//!
//! Iterative deepening on the number of paths `p`, starting from
//! `max(Δ, k)` where `k` is the least integer with `C(k, ⌊k/2⌋) >= m`
//! (the incidence sets form an antichain of `m` non-empty subsets of `[p]`).
//! Each search node picks the violated constraint with the fewest remaining
//! candidate paths: an uncovered edge `e`, or a pair with `S(e) ⊆ S(f)`, which
//! only a path through `e` avoiding `f` can repair. Branch `i` forbids the
//! candidates of branches `0..i`, so the subtrees partition the solutions.
//! A star argument prunes: every vertex of degree `d` needs at least `d`
//! paths through it.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartite::{bipartite_bounds, complete_bipartite, BoundReport};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pathsys::{Path, PathSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Largest `p` searched before giving up.
    pub max_path_budget: usize,
    pub time_budget: Option<Duration>,
    pub max_enumerated_paths: usize,
    /// Ignore `max_vertices` / `max_edges` (the 64-bit mask limits remain).
    pub force: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_vertices: 10,
            max_edges: 16,
            max_path_budget: 12,
            time_budget: None,
            max_enumerated_paths: 200_000,
            force: false,
        }
    }
}

impl OracleConfig {
    fn check(&self, g: &Graph) -> Result<()> {
        if self.max_vertices == 0 || self.max_edges == 0 || self.max_path_budget == 0 {
            return Err(Error::Precondition("oracle limits must be positive".into()));
        }
        if g.n() > 64 || g.m() > 64 || self.max_path_budget > 64 {
            return Err(Error::LimitExceeded("oracle supports at most 64 vertices, edges and paths".into()));
        }
        if !self.force && (g.n() > self.max_vertices || g.m() > self.max_edges) {
            return Err(Error::LimitExceeded(format!(
                "graph has {} vertices and {} edges; limits are {} and {}",
                g.n(),
                g.m(),
                self.max_vertices,
                self.max_edges
            )));
        }
        Ok(())
    }
}

/// All simple paths with at least one edge, each oriented with the smaller
/// end first, ordered by edge count and then lexicographically.
pub fn enumerate_paths(g: &Graph, cfg: &OracleConfig) -> Result<Vec<Path>> {
    cfg.check(g)?;
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut on = vec![false; g.n()];
    let mut stack = Vec::new();
    fn dfs(
        g: &Graph,
        on: &mut [bool],
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> bool {
        let x = *stack.last().expect("non-empty");
        for &y in g.neighbors(x) {
            if on[y] {
                continue;
            }
            stack.push(y);
            on[y] = true;
            if stack[0] < y {
                out.push(stack.clone());
                if out.len() > limit {
                    return false;
                }
            }
            let ok = dfs(g, on, stack, out, limit);
            on[y] = false;
            stack.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    for s in 0..g.n() {
        stack.push(s);
        on[s] = true;
        let ok = dfs(g, &mut on, &mut stack, &mut out, cfg.max_enumerated_paths);
        on[s] = false;
        stack.pop();
        if !ok {
            return Err(Error::LimitExceeded(format!(
                "more than {} simple paths",
                cfg.max_enumerated_paths
            )));
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out.into_iter().map(Path::from_vec_unchecked).collect())
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Least `k` such that `[k]` has an antichain of `m` non-empty subsets.
pub fn sperner_bound(m: usize) -> usize {
    if m == 0 {
        return 0;
    }
    (1..).find(|&k| binomial(k, k / 2) >= m as u128).expect("bounded")
}

/// `max(Δ, Sperner bound)`.
pub fn trivial_lower_bound(g: &Graph) -> usize {
    g.max_degree().max(sperner_bound(g.m()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOutcome {
    /// Proven lower bound on the minimum.
    pub lower: usize,
    /// Size of `witness`.
    pub upper: usize,
    pub witness: PathSystem,
    /// `lower == upper`, established by exhausting every smaller size.
    pub conclusive: bool,
    pub nodes: u64,
}

impl ExactOutcome {
    /// The minimum, when the search was conclusive.
    pub fn value(&self) -> Option<usize> {
        self.conclusive.then_some(self.upper)
    }
}

struct Search<'a> {
    m: usize,
    n: usize,
    words: usize,
    edges_of: Vec<Vec<usize>>,
    verts_of: Vec<Vec<usize>>,
    deg: Vec<u32>,
    /// `fixers[e * m + f]`: paths through `e` avoiding `f`; `f == e` means
    /// every path through `e`.
    fixers: Vec<Vec<u64>>,
    stop: &'a AtomicBool,
    deadline: Option<Instant>,
    nodes: &'a AtomicU64,
}

#[derive(Clone)]
struct State {
    inc: Vec<u64>,
    chosen: Vec<usize>,
    touch: Vec<u32>,
    forbidden: Vec<u64>,
}

impl Search<'_> {
    fn push(&self, st: &mut State, q: usize) {
        let bit = 1u64 << st.chosen.len();
        for &e in &self.edges_of[q] {
            st.inc[e] |= bit;
        }
        for &v in &self.verts_of[q] {
            st.touch[v] += 1;
        }
        st.chosen.push(q);
    }

    fn pop(&self, st: &mut State) {
        let q = st.chosen.pop().expect("non-empty");
        let bit = !(1u64 << st.chosen.len());
        for &e in &self.edges_of[q] {
            st.inc[e] &= bit;
        }
        for &v in &self.verts_of[q] {
            st.touch[v] -= 1;
        }
    }

    fn available(&self, set: &[u64], forbidden: &[u64]) -> u32 {
        set.iter().zip(forbidden).map(|(a, f)| (a & !f).count_ones()).sum()
    }

    /// Most constrained violation as an index into `fixers`, `Ok(None)` if the
    /// state separates, `Err(())` if some violation has no candidate left.
    #[allow(clippy::result_unit_err)]
    fn pick(&self, st: &State) -> std::result::Result<Option<usize>, ()> {
        let m = self.m;
        let mut best: Option<(u32, usize)> = None;
        let mut consider = |idx: usize| -> bool {
            let c = self.available(&self.fixers[idx], &st.forbidden);
            if c == 0 {
                return false;
            }
            if best.is_none_or(|(bc, _)| c < bc) {
                best = Some((c, idx));
            }
            true
        };
        for e in 0..m {
            if st.inc[e] == 0 && !consider(e * m + e) {
                return Err(());
            }
            for f in 0..m {
                if f != e && st.inc[e] & !st.inc[f] == 0 && !consider(e * m + f) {
                    return Err(());
                }
            }
        }
        Ok(best.map(|(_, idx)| idx))
    }

    fn tick(&self) -> bool {
        let k = self.nodes.fetch_add(1, Ordering::Relaxed);
        if k.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.stop.store(true, Ordering::Relaxed);
                }
            }
        }
        !self.stop.load(Ordering::Relaxed)
    }

    fn candidates(&self, idx: usize, forbidden: &[u64]) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, (&a, &f)) in self.fixers[idx].iter().zip(forbidden).enumerate() {
            let mut bits = a & !f;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(w * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    fn degree_prune(&self, st: &State, remaining: usize) -> bool {
        (0..self.n).any(|v| self.deg[v] as usize > st.touch[v] as usize + remaining)
    }

    fn dfs(&self, st: &mut State, remaining: usize) -> Option<Vec<usize>> {
        if !self.tick() {
            return None;
        }
        let idx = match self.pick(st) {
            Err(()) => return None,
            Ok(None) => return Some(st.chosen.clone()),
            Ok(Some(idx)) => idx,
        };
        if remaining == 0 || self.degree_prune(st, remaining) {
            return None;
        }
        let cands = self.candidates(idx, &st.forbidden);
        let mut found = None;
        for &q in &cands {
            self.push(st, q);
            found = self.dfs(st, remaining - 1);
            self.pop(st);
            if found.is_some() {
                break;
            }
            st.forbidden[q / 64] |= 1 << (q % 64);
        }
        for &q in &cands {
            st.forbidden[q / 64] &= !(1 << (q % 64));
        }
        found
    }

    /// Searches for a system with at most `budget` paths. The top-level
    /// branches run in parallel; the earliest branch with a solution wins.
    fn run(&self, budget: usize) -> Option<Vec<usize>> {
        let mut root = State {
            inc: vec![0; self.m],
            chosen: Vec::new(),
            touch: vec![0; self.n],
            forbidden: vec![0; self.words],
        };
        let idx = match self.pick(&root) {
            Err(()) => return None,
            Ok(None) => return Some(Vec::new()),
            Ok(Some(idx)) => idx,
        };
        if budget == 0 || self.degree_prune(&root, budget) {
            return None;
        }
        let cands = self.candidates(idx, &root.forbidden);
        root.forbidden = vec![0; self.words];
        cands.par_iter().enumerate().find_map_first(|(i, &q)| {
            let mut st = root.clone();
            for &earlier in &cands[..i] {
                st.forbidden[earlier / 64] |= 1 << (earlier % 64);
            }
            self.push(&mut st, q);
            self.dfs(&mut st, budget - 1)
        })
    }
}

/// Minimum number of paths in a strongly separating system of `g`.
///
/// The witness at the minimum is the first solution in the search's
/// deterministic branch order, independent of thread count. If the time
/// budget or path budget runs out, returns the proven interval with the
/// one-path-per-edge system as witness and `conclusive = false`.
pub fn exact_ssp(g: &Graph, cfg: &OracleConfig) -> Result<ExactOutcome> {
    cfg.check(g)?;
    if g.m() == 0 {
        return Err(Error::Precondition("graph has no edges".into()));
    }
    let paths = enumerate_paths(g, cfg)?;
    let m = g.m();
    let words = paths.len().div_ceil(64);
    let edges_of: Vec<Vec<usize>> = paths
        .iter()
        .map(|p| p.edges().map(|(a, b)| g.edge_index(a, b).expect("path edge")).collect())
        .collect();
    let verts_of: Vec<Vec<usize>> = paths.iter().map(|p| p.vertices().to_vec()).collect();
    let mut fixers = vec![vec![0u64; words]; m * m];
    for (q, es) in edges_of.iter().enumerate() {
        let mut mask = 0u64;
        for &e in es {
            mask |= 1 << e;
        }
        for &e in es {
            for f in 0..m {
                if f == e || mask & (1 << f) == 0 {
                    fixers[e * m + f][q / 64] |= 1 << (q % 64);
                }
            }
        }
    }
    let stop = AtomicBool::new(false);
    let nodes = AtomicU64::new(0);
    let search = Search {
        m,
        n: g.n(),
        words,
        edges_of,
        verts_of,
        deg: (0..g.n()).map(|v| g.degree(v) as u32).collect(),
        fixers,
        stop: &stop,
        deadline: cfg.time_budget.map(|d| Instant::now() + d),
        nodes: &nodes,
    };

    let trivial = || {
        let lists = g.edges().iter().map(|&(a, b)| Path::from_vec_unchecked(vec![a, b])).collect();
        PathSystem::from_parts_unchecked(g.clone(), lists)
    };
    let start = trivial_lower_bound(g);
    let ceiling = cfg.max_path_budget.min(m);
    let mut lower = start;
    for p in start..=ceiling {
        let found = search.run(p);
        if stop.load(Ordering::Relaxed) {
            break;
        }
        match found {
            Some(mut chosen) => {
                chosen.sort_unstable();
                let witness = PathSystem::from_parts_unchecked(
                    g.clone(),
                    chosen.iter().map(|&q| paths[q].clone()).collect(),
                );
                return Ok(ExactOutcome {
                    lower: witness.len(),
                    upper: witness.len(),
                    witness,
                    conclusive: true,
                    nodes: nodes.load(Ordering::Relaxed),
                });
            }
            None => lower = p + 1,
        }
    }
    let witness = trivial();
    Ok(ExactOutcome {
        lower: lower.min(m),
        upper: m,
        conclusive: lower >= m,
        witness,
        nodes: nodes.load(Ordering::Relaxed),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaCheck {
    pub a: usize,
    pub b: usize,
    pub exact: Option<usize>,
    pub oracle_lower: usize,
    pub oracle_upper: usize,
    pub bounds: BoundReport,
    /// For `a < b/2`: the minimum equals `b`. Otherwise: the minimum is at
    /// least the ceiling of the lower bound. `None` if inconclusive.
    pub consistent: Option<bool>,
}

/// Compares the oracle on `K_{a,b}` with [`bipartite_bounds`].
pub fn exact_matches_formula(a: usize, b: usize, cfg: &OracleConfig) -> Result<FormulaCheck> {
    let bounds = bipartite_bounds(a, b)?;
    let out = exact_ssp(&complete_bipartite(a, b), cfg)?;
    let exact = out.value();
    let consistent = exact.map(|x| match bounds.exact {
        Some(e) => x == e,
        None => x as f64 >= (bounds.lower - 1e-9).ceil(),
    });
    Ok(FormulaCheck {
        a,
        b,
        exact,
        oracle_lower: out.lower,
        oracle_upper: out.upper,
        bounds,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathsys::verify_strong_separation;

    fn g(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, e.iter().copied()).unwrap()
    }

    fn lists(ps: &[Path]) -> Vec<Vec<usize>> {
        ps.iter().map(|p| p.vertices().to_vec()).collect()
    }

    #[test]
    fn enumeration_small() {
        let cfg = OracleConfig::default();
        let tri = enumerate_paths(&g(3, &[(0, 1), (1, 2), (0, 2)]), &cfg).unwrap();
        assert_eq!(tri.len(), 6);
        assert_eq!(tri.iter().filter(|p| p.len() == 1).count(), 3);
        assert_eq!(lists(&enumerate_paths(&g(2, &[(0, 1)]), &cfg).unwrap()), vec![vec![0, 1]]);
        assert_eq!(
            lists(&enumerate_paths(&g(3, &[(0, 1), (1, 2)]), &cfg).unwrap()),
            vec![vec![0, 1], vec![1, 2], vec![0, 1, 2]]
        );
    }

    #[test]
    fn sperner() {
        assert_eq!(sperner_bound(1), 1);
        assert_eq!(sperner_bound(2), 2);
        assert_eq!(sperner_bound(3), 3);
        assert_eq!(sperner_bound(6), 4);
        assert_eq!(sperner_bound(7), 5);
        assert_eq!(sperner_bound(10), 5);
        assert_eq!(sperner_bound(11), 6);
    }

    #[test]
    fn small_minima() {
        let cfg = OracleConfig::default();
        let cases: [(Graph, usize); 4] = [
            (g(3, &[(0, 1), (1, 2), (0, 2)]), 3),
            (g(3, &[(0, 1), (1, 2)]), 2),
            (g(2, &[(0, 1)]), 1),
            (g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), 5),
        ];
        for (gr, want) in cases {
            let out = exact_ssp(&gr, &cfg).unwrap();
            assert_eq!(out.value(), Some(want));
            assert!(verify_strong_separation(&out.witness).is_pass());
        }
    }

    #[test]
    fn p3_witness() {
        let out = exact_ssp(&g(3, &[(0, 1), (1, 2)]), &OracleConfig::default()).unwrap();
        assert_eq!(lists(out.witness.paths()), vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn limits_and_budget() {
        let k5 = Graph::from_edges(5, (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j)))).unwrap();
        let tight = OracleConfig { max_edges: 5, ..OracleConfig::default() };
        assert!(matches!(exact_ssp(&k5, &tight), Err(Error::LimitExceeded(_))));
        let forced = OracleConfig { max_edges: 5, force: true, max_path_budget: 3, ..OracleConfig::default() };
        let out = exact_ssp(&k5, &forced).unwrap();
        assert!(!out.conclusive);
        assert_eq!(out.upper, 10);
        assert!(out.lower >= 4);
        assert!(matches!(exact_ssp(&Graph::empty(3), &OracleConfig::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn time_budget_gives_interval() {
        let petersen = crate::generate::named("petersen").unwrap();
        let cfg = OracleConfig { time_budget: Some(Duration::from_millis(50)), ..OracleConfig::default() };
        let out = exact_ssp(&petersen, &cfg).unwrap();
        if !out.conclusive {
            assert!(out.lower <= out.upper);
            assert!(verify_strong_separation(&out.witness).is_pass());
        }
    }

    #[test]
    fn canned_k4_rederived() {
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let out = exact_ssp(&k4, &OracleConfig::default()).unwrap();
        assert_eq!(out.value(), Some(crate::cubic::K4_SYSTEM.len()));
        let canned = PathSystem::from_lists(k4, crate::cubic::K4_SYSTEM.iter().map(|p| p.to_vec()).collect()).unwrap();
        assert!(verify_strong_separation(&canned).is_pass());
    }

    #[test]
    fn formula_small() {
        let cfg = OracleConfig::default();
        let r = exact_matches_formula(1, 3, &cfg).unwrap();
        assert_eq!((r.exact, r.consistent), (Some(3), Some(true)));
        let r = exact_matches_formula(2, 2, &cfg).unwrap();
        assert_eq!((r.exact, r.consistent), (Some(4), Some(true)));
        assert!((r.bounds.lower - crate::bipartite::counting_lower_bound(2.0, 2.0)).abs() < 1e-12);
    }
}
