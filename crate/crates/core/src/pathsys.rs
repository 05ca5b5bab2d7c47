//! Paths, path systems, incidence profiles and the separation verifiers.
//!
//! A system strongly separates the edges of its host graph iff every edge
//! lies on some path and the incidence sets `S(e)` (indices of paths through
//! `e`) form an antichain: `S(e) ⊆ S(f)` is exactly the statement that no
//! path contains `e` while avoiding `f`.

use std::collections::HashSet;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph};

/// A simple path given by its vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(Vec<usize>);

impl Path {
    /// Checks that the sequence is non-empty with pairwise distinct vertices.
    /// A single vertex is the trivial path with no edges.
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidPath { path: 0, message: "empty path".into() });
        }
        let mut seen = HashSet::with_capacity(vertices.len());
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(Error::InvalidPath {
                    path: 0,
                    message: format!("vertex {v} repeated"),
                });
            }
        }
        Ok(Path(vertices))
    }

    pub(crate) fn from_vec_unchecked(vertices: Vec<usize>) -> Self {
        debug_assert!(Path::new(vertices.clone()).is_ok());
        Path(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.0.windows(2).map(|w| edge(w[0], w[1]))
    }

    pub fn ends_at(&self, v: usize) -> bool {
        self.first() == v || self.last() == v
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges().any(|f| f == e)
    }

    /// Extends the path by `v` at the end currently occupied by `at`.
    pub(crate) fn extend_at(&mut self, at: usize, v: usize) {
        debug_assert!(!self.0.contains(&v));
        if self.last() == at {
            self.0.push(v);
        } else {
            debug_assert_eq!(self.first(), at);
            self.0.insert(0, v);
        }
    }

    /// The orientation whose first vertex is the smaller end.
    pub fn canonical(&self) -> Path {
        if self.first() > self.last() {
            Path(self.0.iter().rev().copied().collect())
        } else {
            self.clone()
        }
    }
}

impl std::fmt::Display for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An ordered collection of paths attached to a host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSystem {
    graph: Graph,
    paths: Vec<Path>,
}

impl PathSystem {
    /// Attaches `paths` to `graph`, rejecting any path that leaves the graph.
    pub fn new(graph: Graph, paths: Vec<Path>) -> Result<Self> {
        for (i, p) in paths.iter().enumerate() {
            for &v in p.vertices() {
                if v >= graph.n() {
                    return Err(Error::InvalidPath {
                        path: i,
                        message: format!("vertex {v} out of range (n = {})", graph.n()),
                    });
                }
            }
            for w in p.vertices().windows(2) {
                if !graph.has_edge(w[0], w[1]) {
                    return Err(Error::NonEdge { path: i, u: w[0], v: w[1] });
                }
            }
        }
        Ok(PathSystem { graph, paths })
    }

    /// Convenience constructor from raw vertex lists.
    pub fn from_lists(graph: Graph, lists: Vec<Vec<usize>>) -> Result<Self> {
        let paths = lists
            .into_iter()
            .enumerate()
            .map(|(i, l)| {
                Path::new(l).map_err(|e| match e {
                    Error::InvalidPath { message, .. } => Error::InvalidPath { path: i, message },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PathSystem::new(graph, paths)
    }

    pub(crate) fn from_parts_unchecked(graph: Graph, paths: Vec<Path>) -> Self {
        debug_assert!(PathSystem::new(graph.clone(), paths.clone()).is_ok());
        PathSystem { graph, paths }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn into_paths(self) -> Vec<Path> {
        self.paths
    }

    /// Canonically oriented paths in sorted order; two systems with equal
    /// canonical forms are the same family.
    pub fn canonical_paths(&self) -> Vec<Path> {
        let mut v: Vec<Path> = self.paths.iter().map(Path::canonical).collect();
        v.sort();
        v
    }

    /// Total number of edges over all paths.
    pub fn total_length(&self) -> usize {
        self.paths.iter().map(Path::len).sum()
    }

    /// One path per line, vertex ids separated by spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.paths {
            let parts: Vec<String> = p.vertices().iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}", parts.join(" "));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = PathSystemJson {
            n: self.graph.n(),
            paths: self.paths.iter().map(|p| p.vertices().to_vec()).collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct PathSystemJson {
    n: usize,
    paths: Vec<Vec<usize>>,
}

/// Parses the path-system text format (one path per line, `#` comments).
pub fn parse_paths_text(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let path = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    line: i + 1,
                    message: format!("not a vertex id: {t:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(path);
    }
    Ok(out)
}

/// Parses the JSON form `{"n": .., "paths": [[..], ..]}`; returns `n` and the
/// vertex lists.
pub fn parse_paths_json(text: &str) -> Result<(usize, Vec<Vec<usize>>)> {
    let doc: PathSystemJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    Ok((doc.n, doc.paths))
}

/// Per-edge incidence sets and their size histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceProfile {
    /// `sets[i]` holds the indices of paths through edge `i` of the graph.
    pub sets: Vec<FixedBitSet>,
    /// `histogram[i]` = number of edges lying on exactly `i` paths.
    pub histogram: Vec<usize>,
    /// Number of paths.
    pub p: usize,
}

impl IncidenceProfile {
    /// Number of edges on exactly `i` paths.
    pub fn e(&self, i: usize) -> usize {
        self.histogram.get(i).copied().unwrap_or(0)
    }

    /// Sorted path indices through edge index `i`.
    pub fn paths_of(&self, i: usize) -> Vec<usize> {
        self.sets[i].ones().collect()
    }
}

pub fn incidence_profile(sys: &PathSystem) -> IncidenceProfile {
    let g = sys.graph();
    let p = sys.len();
    let mut sets = vec![FixedBitSet::with_capacity(p); g.m()];
    for (j, path) in sys.paths().iter().enumerate() {
        for (u, v) in path.edges() {
            let i = g.edge_index(u, v).expect("validated on attach");
            sets[i].insert(j);
        }
    }
    let mut histogram = vec![0usize; 1];
    for s in &sets {
        let c = s.count_ones(..);
        if c >= histogram.len() {
            histogram.resize(c + 1, 0);
        }
        histogram[c] += 1;
    }
    IncidenceProfile { sets, histogram, p }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SeparationFailure {
    /// An edge on no path.
    Uncovered { edge: Edge },
    /// Every path through `contained` also passes through `container`.
    Comparable {
        contained: Edge,
        container: Edge,
        contained_paths: Vec<usize>,
        container_paths: Vec<usize>,
    },
}

impl std::fmt::Display for SeparationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeparationFailure::Uncovered { edge } => {
                write!(f, "edge {}-{} lies on no path", edge.0, edge.1)
            }
            SeparationFailure::Comparable { contained, container, contained_paths, container_paths } => write!(
                f,
                "edge {}-{} (paths {:?}) is not separated from edge {}-{} (paths {:?})",
                contained.0, contained.1, contained_paths, container.0, container.1, container_paths
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separation {
    Pass,
    Fail(SeparationFailure),
}

impl Separation {
    pub fn is_pass(&self) -> bool {
        matches!(self, Separation::Pass)
    }
}

/// Checks strong separation via incidence-set incomparability. On failure the
/// witness is the smallest uncovered edge if any, else the lexicographically
/// smallest pair of edge indices `(e, f)` with `S(e) ⊆ S(f)`.
///
/// Pairwise scan, O(m^2 p / 64); bucketing by popcount would be the next step
/// if this ever matters.
pub fn verify_strong_separation(sys: &PathSystem) -> Separation {
    let prof = incidence_profile(sys);
    verify_profile(sys.graph(), &prof)
}

pub(crate) fn verify_profile(g: &Graph, prof: &IncidenceProfile) -> Separation {
    let edges = g.edges();
    if let Some(i) = prof.sets.iter().position(|s| s.is_clear()) {
        return Separation::Fail(SeparationFailure::Uncovered { edge: edges[i] });
    }
    let sets = &prof.sets;
    let hit = (0..sets.len()).into_par_iter().find_map_first(|i| {
        (0..sets.len())
            .find(|&j| j != i && sets[i].is_subset(&sets[j]))
            .map(|j| (i, j))
    });
    match hit {
        None => Separation::Pass,
        Some((i, j)) => Separation::Fail(SeparationFailure::Comparable {
            contained: edges[i],
            container: edges[j],
            contained_paths: prof.paths_of(i),
            container_paths: prof.paths_of(j),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StructuralFailure {
    /// Edge not on exactly two paths.
    EdgeMultiplicity { edge: Edge, count: usize },
    /// Vertex not the endpoint of exactly two paths.
    EndpointCount { vertex: usize, count: usize },
}

impl std::fmt::Display for StructuralFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StructuralFailure::EdgeMultiplicity { edge, count } => {
                write!(f, "edge {}-{} lies on {} paths, expected 2", edge.0, edge.1, count)
            }
            StructuralFailure::EndpointCount { vertex, count } => {
                write!(f, "vertex {vertex} ends {count} paths, expected 2")
            }
        }
    }
}

/// Checks the two structural properties of the inductive construction: each
/// edge on exactly two paths, each vertex the end of exactly two paths.
pub fn verify_structural_properties(sys: &PathSystem) -> Result<(), StructuralFailure> {
    let g = sys.graph();
    let prof = incidence_profile(sys);
    for (i, s) in prof.sets.iter().enumerate() {
        let count = s.count_ones(..);
        if count != 2 {
            return Err(StructuralFailure::EdgeMultiplicity { edge: g.edges()[i], count });
        }
    }
    let mut ends = vec![0usize; g.n()];
    for p in sys.paths() {
        ends[p.first()] += 1;
        ends[p.last()] += 1;
    }
    match ends.iter().position(|&c| c != 2) {
        Some(vertex) => Err(StructuralFailure::EndpointCount { vertex, count: ends[vertex] }),
        None => Ok(()),
    }
}

/// Counting inequalities for a separating system of `K_{a,b}`:
///
/// * `3ab - 2e1 - e2 <= 2ap`: each edge lies on at least one path (three
///   unless it lies on one or two) and each path has at most `2a` edges;
/// * `e2 + 2e1 <= C(p - e1, 2) + 2e1 <= p^2 / 2`: an edge on one path is
///   that whole path, and edges on two paths use distinct pairs of the
///   remaining paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingCertificate {
    pub a: usize,
    pub b: usize,
    pub p: usize,
    pub e1: usize,
    pub e2: usize,
    pub length_lhs: i64,
    pub length_rhs: i64,
    pub pair_lhs: i64,
    pub pair_mid: i64,
    pub pair_rhs: f64,
    pub length_holds: bool,
    /// `pair_lhs <= pair_mid`.
    pub pair_count_holds: bool,
    /// `pair_mid <= p^2/2`. This step is an algebraic relaxation that is only
    /// valid for `p >= 4` (it fails e.g. for three single-edge paths).
    pub pair_relaxed_holds: bool,
}

impl CountingCertificate {
    pub fn length_slack(&self) -> i64 {
        self.length_rhs - self.length_lhs
    }

    pub fn pair_slack(&self) -> f64 {
        self.pair_rhs - self.pair_lhs as f64
    }

    /// Whether every inequality that must hold does.
    pub fn holds(&self) -> bool {
        self.length_holds && self.pair_count_holds && (self.p < 4 || self.pair_relaxed_holds)
    }
}

/// Sizes `(a, b)` with `a <= b` if `g` is a complete bipartite graph with
/// those part sizes.
pub fn complete_bipartite_parts(g: &Graph) -> Option<(usize, usize)> {
    if g.n() < 2 || !g.is_connected() {
        return None;
    }
    let mut color = vec![usize::MAX; g.n()];
    color[0] = 0;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for &y in g.neighbors(x) {
            if color[y] == usize::MAX {
                color[y] = 1 - color[x];
                stack.push(y);
            } else if color[y] == color[x] {
                return None;
            }
        }
    }
    let zeros = color.iter().filter(|&&c| c == 0).count();
    let ones = g.n() - zeros;
    (g.m() == zeros * ones).then_some((zeros.min(ones), zeros.max(ones)))
}

/// Evaluates the counting inequalities for a separating system of `K_{a,b}`.
pub fn counting_certificate(sys: &PathSystem, a: usize, b: usize) -> Result<CountingCertificate> {
    if a == 0 || a > b {
        return Err(Error::Precondition(format!("need 1 <= a <= b, got a={a}, b={b}")));
    }
    if complete_bipartite_parts(sys.graph()) != Some((a, b)) {
        return Err(Error::Precondition(format!("host graph is not K_{{{a},{b}}}")));
    }
    let prof = incidence_profile(sys);
    if let Separation::Fail(f) = verify_profile(sys.graph(), &prof) {
        return Err(Error::NotSeparating(f.to_string()));
    }
    let (e1, e2, p) = (prof.e(1), prof.e(2), prof.p);
    let (ai, bi, pi, e1i, e2i) = (a as i64, b as i64, p as i64, e1 as i64, e2 as i64);
    let length_lhs = 3 * ai * bi - 2 * e1i - e2i;
    let length_rhs = 2 * ai * pi;
    let pair_lhs = e2i + 2 * e1i;
    let rest = pi - e1i;
    let pair_mid = rest * (rest - 1) / 2 + 2 * e1i;
    let pair_rhs = (p * p) as f64 / 2.0;
    Ok(CountingCertificate {
        a,
        b,
        p,
        e1,
        e2,
        length_lhs,
        length_rhs,
        pair_lhs,
        pair_mid,
        pair_rhs,
        length_holds: length_lhs <= length_rhs,
        pair_count_holds: pair_lhs <= pair_mid,
        pair_relaxed_holds: (pair_mid as f64) <= pair_rhs,
    })
}
