//! Undirected simple graphs on dense vertex ids, the edge-list text format,
//! and the structural queries the builders dispatch on.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An edge stored as `(u, v)` with `u < v`.
pub type Edge = (usize, usize);

#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Undirected simple graph on vertices `0..n`.
///
/// Edges are kept sorted lexicographically; an edge's position in that order
/// is its *edge index*, used by incidence profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Graph with `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::InvalidEdge((u, v)));
            }
            set.insert(edge(u, v));
        }
        let edges: Vec<Edge> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Position of `{u, v}` in the sorted edge list.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&edge(u, v)).ok()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|a| a.len() == d)
    }

    pub fn is_cubic(&self) -> bool {
        self.n > 0 && self.is_regular(3)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || connected_components(self).len() == 1
    }

    /// Subgraph induced by `vertices`, relabelled to `0..k` in ascending id
    /// order. Returns the subgraph and the local-to-global id map.
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut map: Vec<usize> = vertices.to_vec();
        map.sort_unstable();
        map.dedup();
        let local: HashMap<usize, usize> = map.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let edges = self.edges.iter().filter_map(|&(u, v)| {
            match (local.get(&u), local.get(&v)) {
                (Some(&a), Some(&b)) => Some((a, b)),
                _ => None,
            }
        });
        let sub = Graph::from_edges(map.len(), edges).expect("induced edges are valid");
        (sub, map)
    }

    /// Same vertex set with one edge removed.
    pub fn without_edge(&self, e: Edge) -> Result<Graph> {
        let e = edge(e.0, e.1);
        if self.edge_index(e.0, e.1).is_none() {
            return Err(Error::InvalidEdge(e));
        }
        Graph::from_edges(self.n, self.edges.iter().copied().filter(|&f| f != e))
    }

    /// Serializes to the edge-list text format, edges in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.m());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_pair<T: std::str::FromStr>(line: &str, lineno: usize, what: &str) -> Result<(T, T)> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(Error::Parse {
            line: lineno,
            message: format!("expected two integers for {what}, found {} tokens", toks.len()),
        });
    }
    let p = |s: &str| {
        s.parse::<T>().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("not a non-negative integer: {s:?}"),
        })
    };
    Ok((p(toks[0])?, p(toks[1])?))
}

/// Non-blank, comment-stripped lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Parses the edge-list format: a header `n m`, then `m` lines `u v`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header line \"n m\"".into(),
    })?;
    let (n, m): (usize, usize) = parse_pair(header, hline, "header")?;
    let mut edges = Vec::with_capacity(m);
    let mut last_line = hline;
    for (lineno, line) in lines {
        last_line = lineno;
        let (u, v): (usize, usize) = parse_pair(line, lineno, "edge")?;
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { line: lineno, vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop { line: lineno, vertex: u });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header declares {m} edge lines, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, edges)
}

/// Loose variant of [`parse_graph`]: vertex ids may be arbitrary
/// non-negative integers. Distinct ids are relabelled to `0..k` in ascending
/// order; the declared `n` is ignored. Returns the graph and, for each new
/// id, the original one.
pub fn parse_graph_loose(text: &str) -> Result<(Graph, Vec<u64>)> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header line \"n m\"".into(),
    })?;
    let (_n, m): (u64, u64) = parse_pair(header, hline, "header")?;
    let m = m as usize;
    let mut raw = Vec::with_capacity(m);
    let mut last_line = hline;
    for (lineno, line) in lines {
        last_line = lineno;
        let (u, v): (u64, u64) = parse_pair(line, lineno, "edge")?;
        if u == v {
            return Err(Error::SelfLoop { line: lineno, vertex: u as usize });
        }
        raw.push((u, v));
    }
    if raw.len() != m {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header declares {m} edge lines, found {}", raw.len()),
        });
    }
    let ids: BTreeSet<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
    let mapping: Vec<u64> = ids.into_iter().collect();
    let index: HashMap<u64, usize> = mapping.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let g = Graph::from_edges(mapping.len(), raw.iter().map(|(u, v)| (index[u], index[v])))?;
    Ok((g, mapping))
}

/// Connected components, each sorted ascending, ordered by smallest vertex.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut comps = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    queue.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Degeneracy-style peeling: repeatedly delete a minimum-degree vertex
/// (smallest id on ties). Returns the elimination order if no step ever sees
/// minimum degree 3 or more, i.e. iff `g` is 2-degenerate.
pub fn two_degenerate_order(g: &Graph) -> Option<Vec<usize>> {
    let mut deg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..g.n()).map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; g.n()];
    let mut order = Vec::with_capacity(g.n());
    while let Some((d, v)) = queue.pop_first() {
        if d > 2 {
            return None;
        }
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                queue.remove(&(deg[w], w));
                deg[w] -= 1;
                queue.insert((deg[w], w));
            }
        }
    }
    Some(order)
}

pub fn is_2_degenerate(g: &Graph) -> bool {
    two_degenerate_order(g).is_some()
}

/// First edge in lexicographic order whose endpoints share no neighbor.
pub fn find_non_triangle_edge(g: &Graph) -> Option<Edge> {
    g.edges()
        .iter()
        .copied()
        .find(|&(u, v)| !sorted_intersect(g.neighbors(u), g.neighbors(v)))
}

fn sorted_intersect(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentClass {
    IsolatedVertex,
    SingleEdge,
    K4,
    CubicNonK4,
    Subcubic2Degenerate,
    General2Degenerate,
    Other,
}

impl std::fmt::Display for ComponentClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ComponentClass::IsolatedVertex => "isolated-vertex",
            ComponentClass::SingleEdge => "single-edge",
            ComponentClass::K4 => "K4",
            ComponentClass::CubicNonK4 => "cubic-non-K4",
            ComponentClass::Subcubic2Degenerate => "subcubic-2degenerate",
            ComponentClass::General2Degenerate => "general-2degenerate",
            ComponentClass::Other => "other",
        };
        f.write_str(s)
    }
}

/// Classifies a connected component of `g` by size, regularity and
/// degeneracy of the induced subgraph.
pub fn classify_component(g: &Graph, comp: &[usize]) -> ComponentClass {
    let (sub, _) = g.induced(comp);
    match sub.n() {
        0 | 1 => return ComponentClass::IsolatedVertex,
        2 => return ComponentClass::SingleEdge,
        _ => {}
    }
    if sub.is_cubic() {
        return if sub.n() == 4 {
            ComponentClass::K4
        } else {
            ComponentClass::CubicNonK4
        };
    }
    if is_2_degenerate(&sub) {
        if sub.max_degree() <= 3 {
            ComponentClass::Subcubic2Degenerate
        } else {
            ComponentClass::General2Degenerate
        }
    } else {
        ComponentClass::Other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemovalKind {
    Degree1Safe,
    Degree2Safe,
    Degree2Cut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalStep {
    pub vertex: usize,
    pub kind: RemovalKind,
    /// Neighbours at removal time. For a cut step, `[u, w]` with `u` in the
    /// first side and `w` in the second; otherwise ascending.
    pub neighbors: Vec<usize>,
    /// For a cut step, the two resulting components ordered by smallest id.
    pub sides: Option<(Vec<usize>, Vec<usize>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseShape {
    PathOfTwoEdges,
    Triangle,
}

/// A 3-vertex remainder. For a path the centre is `vertices[1]` and the ends
/// are ascending; for a triangle all three are ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseComponent {
    pub vertices: [usize; 3],
    pub shape: BaseShape,
}

/// Peeling schedule taking a connected 2-degenerate graph down to 3-vertex
/// remainders, one per component created along the way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRemovalPlan {
    pub steps: Vec<RemovalStep>,
    pub bases: Vec<BaseComponent>,
}

impl VertexRemovalPlan {
    pub fn order(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.vertex).collect()
    }

    /// Replays the plan on `g`, checking every step's degree bound and
    /// connectivity claim, and that the remainders match `bases`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut alive = vec![true; g.n()];
        for (i, step) in self.steps.iter().enumerate() {
            let v = step.vertex;
            if !alive[v] {
                return Err(Error::Internal(format!("step {i}: vertex {v} already removed")));
            }
            let comp = alive_component(g, &alive, v);
            let nbrs: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| alive[w]).collect();
            if nbrs.len() > 2 || nbrs.is_empty() {
                return Err(Error::Internal(format!(
                    "step {i}: vertex {v} has degree {} at removal",
                    nbrs.len()
                )));
            }
            alive[v] = false;
            let rest: Vec<usize> = comp.into_iter().filter(|&x| x != v).collect();
            let parts = alive_components_of(g, &alive, &rest);
            match step.kind {
                RemovalKind::Degree1Safe | RemovalKind::Degree2Safe => {
                    let want = if step.kind == RemovalKind::Degree1Safe { 1 } else { 2 };
                    if nbrs.len() != want || parts.len() != 1 {
                        return Err(Error::Internal(format!("step {i}: safe step is not safe")));
                    }
                }
                RemovalKind::Degree2Cut => {
                    if nbrs.len() != 2 || parts.len() != 2 || parts.iter().any(|p| p.len() < 3) {
                        return Err(Error::Internal(format!(
                            "step {i}: cut must leave two components of size >= 3"
                        )));
                    }
                    if step.sides.as_ref() != Some(&(parts[0].clone(), parts[1].clone())) {
                        return Err(Error::Internal(format!("step {i}: recorded sides differ")));
                    }
                }
            }
        }
        let mut remaining = alive_components_of(g, &alive, &(0..g.n()).filter(|&x| alive[x]).collect::<Vec<_>>());
        let mut recorded: Vec<Vec<usize>> = self
            .bases
            .iter()
            .map(|b| {
                let mut v = b.vertices.to_vec();
                v.sort_unstable();
                v
            })
            .collect();
        remaining.sort();
        recorded.sort();
        if remaining != recorded {
            return Err(Error::Internal("remainders do not match recorded bases".into()));
        }
        Ok(())
    }
}

fn alive_component(g: &Graph, alive: &[bool], start: usize) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    seen[start] = true;
    let mut out = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if alive[y] && !seen[y] {
                seen[y] = true;
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Components of the alive subgraph restricted to `vertices`, ordered by
/// smallest id.
fn alive_components_of(g: &Graph, alive: &[bool], vertices: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    for &s in &sorted {
        if seen[s] || !alive[s] {
            continue;
        }
        let comp = alive_component(g, alive, s);
        for &x in &comp {
            seen[x] = true;
        }
        out.push(comp);
    }
    out
}

/// Number of alive vertices reachable from `start` (which must be alive).
fn alive_reach(g: &Graph, alive: &[bool], start: usize, mark: &mut [u32], stamp: u32) -> usize {
    mark[start] = stamp;
    let mut count = 1;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in g.neighbors(x) {
            if alive[y] && mark[y] != stamp {
                mark[y] = stamp;
                count += 1;
                stack.push(y);
            }
        }
    }
    count
}

/// Removal plan for the inductive construction. At each step the smallest-id
/// degree-1 vertex is removed if any exists, else the smallest-id degree-2
/// vertex whose removal keeps the component connected; failing both, the
/// smallest-id degree-2 vertex is removed as a cut into two components which
/// are then peeled independently (first side first).
///
/// Each candidate check is a full traversal of the component, so planning is
/// O(n^2 (n + m)) in the worst case.
pub fn removal_plan_2degenerate(g: &Graph) -> Result<VertexRemovalPlan> {
    if g.n() < 4 {
        return Err(Error::TooSmall { n: g.n(), min: 4 });
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    if !is_2_degenerate(g) {
        return Err(Error::NotTwoDegenerate);
    }
    Ok(plan_components(g, vec![(0..g.n()).collect()]))
}

/// Plans each given connected component (size >= 3) of `g`.
pub(crate) fn plan_components(g: &Graph, comps: Vec<Vec<usize>>) -> VertexRemovalPlan {
    let mut alive = vec![false; g.n()];
    for c in &comps {
        for &v in c {
            alive[v] = true;
        }
    }
    let mut deg: Vec<usize> = (0..g.n())
        .map(|v| g.neighbors(v).iter().filter(|&&w| alive[w]).count())
        .collect();
    let mut mark = vec![0u32; g.n()];
    let mut stamp = 0u32;

    let mut steps = Vec::new();
    let mut bases = Vec::new();
    let mut stack: Vec<Vec<usize>> = comps.into_iter().rev().collect();

    while let Some(mut comp) = stack.pop() {
        comp.retain(|&x| alive[x]);
        if comp.len() == 3 {
            bases.push(base_of(g, &alive, &comp));
            continue;
        }
        assert!(comp.len() > 3, "component below base size");

        let remove = |v: usize, alive: &mut Vec<bool>, deg: &mut Vec<usize>| {
            alive[v] = false;
            for &w in g.neighbors(v) {
                if alive[w] {
                    deg[w] -= 1;
                }
            }
        };
        let live_nbrs = |v: usize, alive: &Vec<bool>| -> Vec<usize> {
            g.neighbors(v).iter().copied().filter(|&w| alive[w]).collect()
        };

        if let Some(&v) = comp.iter().find(|&&v| deg[v] == 1) {
            let neighbors = live_nbrs(v, &alive);
            remove(v, &mut alive, &mut deg);
            steps.push(RemovalStep { vertex: v, kind: RemovalKind::Degree1Safe, neighbors, sides: None });
            stack.push(comp);
            continue;
        }

        let target = comp.len() - 1;
        let mut safe = None;
        for &v in comp.iter().filter(|&&v| deg[v] == 2) {
            alive[v] = false;
            stamp += 1;
            let start = live_nbrs(v, &alive)[0];
            let reach = alive_reach(g, &alive, start, &mut mark, stamp);
            alive[v] = true;
            if reach == target {
                safe = Some(v);
                break;
            }
        }
        if let Some(v) = safe {
            let neighbors = live_nbrs(v, &alive);
            remove(v, &mut alive, &mut deg);
            steps.push(RemovalStep { vertex: v, kind: RemovalKind::Degree2Safe, neighbors, sides: None });
            stack.push(comp);
            continue;
        }

        let v = *comp
            .iter()
            .find(|&&v| deg[v] == 2)
            .expect("2-degenerate component with no safe vertex has a degree-2 vertex");
        let nbrs = live_nbrs(v, &alive);
        remove(v, &mut alive, &mut deg);
        let rest: Vec<usize> = comp.iter().copied().filter(|&x| x != v).collect();
        let parts = alive_components_of(g, &alive, &rest);
        assert!(
            parts.len() == 2 && parts.iter().all(|p| p.len() >= 3),
            "cut at vertex {v} produced components of sizes {:?}",
            parts.iter().map(Vec::len).collect::<Vec<_>>()
        );
        let (first, second) = (parts[0].clone(), parts[1].clone());
        let (u, w) = if first.binary_search(&nbrs[0]).is_ok() {
            (nbrs[0], nbrs[1])
        } else {
            (nbrs[1], nbrs[0])
        };
        steps.push(RemovalStep {
            vertex: v,
            kind: RemovalKind::Degree2Cut,
            neighbors: vec![u, w],
            sides: Some((first.clone(), second.clone())),
        });
        stack.push(second);
        stack.push(first);
    }
    VertexRemovalPlan { steps, bases }
}

fn base_of(g: &Graph, alive: &[bool], comp: &[usize]) -> BaseComponent {
    let mut vs = [comp[0], comp[1], comp[2]];
    vs.sort_unstable();
    let inner = |v: usize| g.neighbors(v).iter().filter(|&&w| alive[w]).count();
    if vs.iter().all(|&v| inner(v) == 2) {
        BaseComponent { vertices: vs, shape: BaseShape::Triangle }
    } else {
        let centre = *vs.iter().find(|&&v| inner(v) == 2).expect("connected 3-vertex component");
        let ends: Vec<usize> = vs.iter().copied().filter(|&v| v != centre).collect();
        BaseComponent {
            vertices: [ends[0], centre, ends[1]],
            shape: BaseShape::PathOfTwoEdges,
        }
    }
}
