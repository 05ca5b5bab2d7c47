//! The inductive n-path construction for connected 2-degenerate graphs, and
//! its variant for a cubic graph with one triangle-free edge deleted.
//!
//! The builder replays a [`VertexRemovalPlan`] backwards. Every intermediate
//! system has each edge on exactly two paths and each vertex at the end of
//! exactly two paths, which is what makes the extension steps possible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    connected_components, edge, is_2_degenerate, plan_components, BaseComponent, BaseShape, Edge,
    Graph, RemovalKind, VertexRemovalPlan,
};
use crate::pathsys::{Path, PathSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "deg1-extend")]
    Deg1Extend,
    #[serde(rename = "deg2-extend")]
    Deg2Extend,
    #[serde(rename = "deg2-join")]
    Deg2Join,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub vertex: usize,
    pub case: CaseTag,
    /// `[u]` or `[u, w]`; `paths_modified[k]` was extended from `neighbors[k]`.
    pub neighbors: Vec<usize>,
    pub paths_modified: Vec<usize>,
    pub paths_added: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceBase {
    /// Base vertices; for a path the centre is in the middle.
    pub component: [usize; 3],
    pub shape: BaseShape,
}

/// Record of a build, in build order (bases first, then steps).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub steps: Vec<TraceStep>,
    pub base_cases: Vec<TraceBase>,
}

impl ConstructionTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Re-runs the recorded bases and the first `upto` steps. The result uses
    /// the global vertex ids of `g` but only the edges among vertices present
    /// so far.
    pub fn replay_prefix(&self, g: &Graph, upto: usize) -> Result<PathSystem> {
        let mut present = vec![false; g.n()];
        let mut paths: Vec<Path> = Vec::new();
        for b in &self.base_cases {
            for &v in &b.component {
                present[v] = true;
            }
            paths.extend(base_paths(&BaseComponent { vertices: b.component, shape: b.shape }));
        }
        for (k, step) in self.steps.iter().take(upto).enumerate() {
            if step.neighbors.len() != step.paths_modified.len() {
                return Err(Error::Internal(format!("trace step {k}: malformed")));
            }
            for (&i, &at) in step.paths_modified.iter().zip(&step.neighbors) {
                let p = paths
                    .get_mut(i)
                    .ok_or_else(|| Error::Internal(format!("trace step {k}: no path {i}")))?;
                if !p.ends_at(at) {
                    return Err(Error::Internal(format!("trace step {k}: path {i} does not end at {at}")));
                }
                p.extend_at(at, step.vertex);
            }
            paths.push(new_short_path(step.vertex, &step.neighbors));
            present[step.vertex] = true;
        }
        let host = Graph::from_edges(
            g.n(),
            g.edges().iter().copied().filter(|&(a, b)| present[a] && present[b]),
        )?;
        PathSystem::new(host, paths)
    }

    /// Full replay on `g`.
    pub fn replay(&self, g: &Graph) -> Result<PathSystem> {
        let sys = self.replay_prefix(g, self.steps.len())?;
        PathSystem::new(g.clone(), sys.into_paths())
    }
}

fn base_paths(b: &BaseComponent) -> Vec<Path> {
    let [x, y, z] = b.vertices;
    let lists = match b.shape {
        BaseShape::PathOfTwoEdges => vec![vec![x, y, z], vec![x, y], vec![y, z]],
        BaseShape::Triangle => vec![vec![x, y, z], vec![y, z, x], vec![z, x, y]],
    };
    lists.into_iter().map(Path::from_vec_unchecked).collect()
}

/// `(u, v)` for one neighbour, `(u, v, w)` for two.
fn new_short_path(v: usize, neighbors: &[usize]) -> Path {
    match neighbors {
        [u] => Path::from_vec_unchecked(vec![*u, v]),
        [u, w] => Path::from_vec_unchecked(vec![*u, v, *w]),
        _ => unreachable!("removal steps have one or two neighbours"),
    }
}

/// Mutable system under construction with a per-vertex index of path ends.
struct Builder {
    paths: Vec<Path>,
    ends: Vec<Vec<usize>>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder { paths: Vec::new(), ends: vec![Vec::new(); n] }
    }

    fn push(&mut self, p: Path) -> usize {
        let i = self.paths.len();
        self.ends[p.first()].push(i);
        self.ends[p.last()].push(i);
        self.paths.push(p);
        i
    }

    /// Smallest-index path ending at `at`, other than those in `exclude`.
    fn path_ending_at(&self, at: usize, exclude: &[usize]) -> Result<usize> {
        self.ends[at]
            .iter()
            .copied()
            .filter(|i| !exclude.contains(i))
            .min()
            .ok_or_else(|| {
                Error::Internal(format!(
                    "no suitable path ends at vertex {at} (ends: {:?})",
                    self.ends[at]
                ))
            })
    }

    fn extend(&mut self, i: usize, at: usize, v: usize) {
        let pos = self.ends[at].iter().position(|&j| j == i).expect("path ends at vertex");
        self.ends[at].swap_remove(pos);
        self.paths[i].extend_at(at, v);
        self.ends[v].push(i);
    }

    fn apply_plan(&mut self, plan: &VertexRemovalPlan, trace: &mut ConstructionTrace) -> Result<()> {
        for b in &plan.bases {
            for p in base_paths(b) {
                self.push(p);
            }
            trace.base_cases.push(TraceBase { component: b.vertices, shape: b.shape });
        }
        for step in plan.steps.iter().rev() {
            let v = step.vertex;
            let (case, modified) = match (step.kind, step.neighbors.as_slice()) {
                (RemovalKind::Degree1Safe, &[u]) => {
                    let pu = self.path_ending_at(u, &[])?;
                    self.extend(pu, u, v);
                    (CaseTag::Deg1Extend, vec![pu])
                }
                (kind, &[u, w]) => {
                    let pu = self.path_ending_at(u, &[])?;
                    let pw = self.path_ending_at(w, &[pu])?;
                    self.extend(pu, u, v);
                    self.extend(pw, w, v);
                    let tag = if kind == RemovalKind::Degree2Cut {
                        CaseTag::Deg2Join
                    } else {
                        CaseTag::Deg2Extend
                    };
                    (tag, vec![pu, pw])
                }
                _ => return Err(Error::Internal(format!("malformed removal step at vertex {v}"))),
            };
            let added = self.push(new_short_path(v, &step.neighbors));
            trace.steps.push(TraceStep {
                vertex: v,
                case,
                neighbors: step.neighbors.clone(),
                paths_modified: modified,
                paths_added: vec![added],
            });
        }
        Ok(())
    }
}

/// Builds an n-path strongly separating system of a connected 2-degenerate
/// graph on at least three vertices, in which every edge lies on exactly two
/// paths and every vertex ends exactly two paths.
///
/// Tie-breaking: the extended path at a neighbour is always the smallest
/// index path ending there (distinct from the first one in the two-neighbour
/// case), so builds are deterministic.
pub fn build_ssp_2degenerate(g: &Graph) -> Result<(PathSystem, ConstructionTrace)> {
    if g.n() < 3 {
        return Err(Error::TooSmall { n: g.n(), min: 3 });
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    if !is_2_degenerate(g) {
        return Err(Error::NotTwoDegenerate);
    }
    let plan = plan_components(g, vec![(0..g.n()).collect()]);
    let mut builder = Builder::new(g.n());
    let mut trace = ConstructionTrace::default();
    builder.apply_plan(&plan, &mut trace)?;
    Ok((PathSystem::from_parts_unchecked(g.clone(), builder.paths), trace))
}

/// System for `G - e` with the two length-2 paths through `u` and `v` located.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicMinusEdge {
    /// System on `G - e`.
    pub system: PathSystem,
    pub removed: Edge,
    /// Index of `(u1, u, u2)`.
    pub short_u: usize,
    /// Index of `(v1, v, v2)`.
    pub short_v: usize,
}

/// For a connected cubic graph other than `K4` and an edge `e = uv` on no
/// triangle, builds a system for `G - e` with at most n paths, the two
/// structural properties, and the paths `(u1,u,u2)` and `(v1,v,v2)`.
///
/// `G - u - v` is built component by component; then two paths ending at
/// `u1`, `u2` are extended to `u` and two ending at `v1`, `v2` to `v`. The
/// four extended paths are pairwise distinct: the first assignment in index
/// order with that property is taken.
pub fn build_ssp_cubic_minus_edge(g: &Graph, e: Edge) -> Result<CubicMinusEdge> {
    let (u, v) = edge(e.0, e.1);
    if !g.is_cubic() {
        return Err(Error::NotCubic);
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    if g.n() == 4 {
        return Err(Error::NotApplicable("graph is K4, every edge lies in a triangle".into()));
    }
    if !g.has_edge(u, v) {
        return Err(Error::InvalidEdge((u, v)));
    }
    let un: Vec<usize> = g.neighbors(u).iter().copied().filter(|&x| x != v).collect();
    let vn: Vec<usize> = g.neighbors(v).iter().copied().filter(|&x| x != u).collect();
    if un.iter().any(|x| vn.contains(x)) {
        return Err(Error::EdgeInTriangle((u, v)));
    }

    let mut alive = vec![true; g.n()];
    alive[u] = false;
    alive[v] = false;
    let reduced = Graph::from_edges(
        g.n(),
        g.edges().iter().copied().filter(|&(a, b)| alive[a] && alive[b]),
    )?;
    let comps: Vec<Vec<usize>> = connected_components(&reduced)
        .into_iter()
        .filter(|c| !(c.len() == 1 && !alive[c[0]]))
        .collect();
    for c in &comps {
        if c.len() < 3 {
            return Err(Error::Internal(format!("component {c:?} of G-u-v has fewer than 3 vertices")));
        }
        if !is_2_degenerate(&reduced.induced(c).0) {
            return Err(Error::Internal(format!("component {c:?} of G-u-v is not 2-degenerate")));
        }
    }
    let plan = plan_components(&reduced, comps);
    let mut builder = Builder::new(g.n());
    builder.apply_plan(&plan, &mut ConstructionTrace::default())?;

    let targets = [un[0], un[1], vn[0], vn[1]];
    let chosen = distinct_ends(&builder, &targets)?;
    builder.extend(chosen[0], un[0], u);
    builder.extend(chosen[1], un[1], u);
    builder.extend(chosen[2], vn[0], v);
    builder.extend(chosen[3], vn[1], v);
    let short_u = builder.push(Path::from_vec_unchecked(vec![un[0], u, un[1]]));
    let short_v = builder.push(Path::from_vec_unchecked(vec![vn[0], v, vn[1]]));

    let host = g.without_edge((u, v))?;
    Ok(CubicMinusEdge {
        system: PathSystem::from_parts_unchecked(host, builder.paths),
        removed: (u, v),
        short_u,
        short_v,
    })
}

/// Pairwise distinct paths, the k-th ending at `targets[k]`, choosing the
/// lexicographically first assignment in path-index order.
fn distinct_ends(b: &Builder, targets: &[usize; 4]) -> Result<[usize; 4]> {
    let options: Vec<Vec<usize>> = targets
        .iter()
        .map(|&t| {
            let mut o = b.ends[t].clone();
            o.sort_unstable();
            o
        })
        .collect();
    fn go(options: &[Vec<usize>], k: usize, chosen: &mut Vec<usize>) -> bool {
        if k == options.len() {
            return true;
        }
        for &i in &options[k] {
            if !chosen.contains(&i) {
                chosen.push(i);
                if go(options, k + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(4);
    if go(&options, 0, &mut chosen) {
        Ok([chosen[0], chosen[1], chosen[2], chosen[3]])
    } else {
        Err(Error::Internal(format!("no distinct path ends for {targets:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathsys::{verify_strong_separation, verify_structural_properties};

    fn g(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, e.iter().copied()).unwrap()
    }

    fn lists(sys: &PathSystem) -> Vec<Vec<usize>> {
        sys.paths().iter().map(|p| p.vertices().to_vec()).collect()
    }

    #[test]
    fn base_case_path() {
        let (sys, trace) = build_ssp_2degenerate(&g(3, &[(0, 1), (1, 2)])).unwrap();
        assert_eq!(lists(&sys), vec![vec![0, 1, 2], vec![0, 1], vec![1, 2]]);
        assert!(trace.steps.is_empty());
        assert_eq!(trace.base_cases[0].shape, BaseShape::PathOfTwoEdges);
    }

    #[test]
    fn base_case_path_with_centre_not_smallest() {
        let (sys, _) = build_ssp_2degenerate(&g(3, &[(0, 2), (1, 2)])).unwrap();
        assert_eq!(lists(&sys), vec![vec![0, 2, 1], vec![0, 2], vec![2, 1]]);
    }

    #[test]
    fn base_case_triangle() {
        let (sys, _) = build_ssp_2degenerate(&g(3, &[(0, 1), (1, 2), (0, 2)])).unwrap();
        assert_eq!(lists(&sys), vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]);
    }

    #[test]
    fn pendant_on_triangle() {
        let gr = g(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        let (sys, trace) = build_ssp_2degenerate(&gr).unwrap();
        // path 0 = (0,1,2) is the smallest-index path ending at 2
        assert_eq!(lists(&sys), vec![vec![0, 1, 2, 3], vec![1, 2, 0], vec![2, 0, 1], vec![2, 3]]);
        assert_eq!(trace.steps[0].case, CaseTag::Deg1Extend);
        assert!(verify_strong_separation(&sys).is_pass());
        assert_eq!(verify_structural_properties(&sys), Ok(()));
    }

    #[test]
    fn cut_case_joins_two_systems() {
        let gr = crate::graph::tests::two_blocks();
        let (sys, trace) = build_ssp_2degenerate(&gr).unwrap();
        assert_eq!(sys.len(), 11);
        assert_eq!(trace.steps.last().unwrap().case, CaseTag::Deg2Join);
        assert!(verify_strong_separation(&sys).is_pass());
        assert_eq!(verify_structural_properties(&sys), Ok(()));
        assert_eq!(trace.replay(&gr).unwrap(), sys);
    }

    #[test]
    fn preconditions() {
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(build_ssp_2degenerate(&k4).unwrap_err(), Error::NotTwoDegenerate);
        assert_eq!(build_ssp_2degenerate(&g(4, &[(0, 1), (2, 3)])).unwrap_err(), Error::NotConnected);
        assert!(matches!(build_ssp_2degenerate(&g(2, &[(0, 1)])), Err(Error::TooSmall { .. })));
    }

    #[test]
    fn trace_json_field_names() {
        let gr = g(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        let (_, trace) = build_ssp_2degenerate(&gr).unwrap();
        let v: serde_json::Value = serde_json::from_str(&trace.to_json()).unwrap();
        assert_eq!(v["steps"][0]["case"], "deg1-extend");
        assert_eq!(v["steps"][0]["paths_modified"], serde_json::json!([0]));
        assert_eq!(v["steps"][0]["paths_added"], serde_json::json!([3]));
        assert_eq!(v["base_cases"][0]["shape"], "triangle");
        let back: ConstructionTrace = serde_json::from_str(&trace.to_json()).unwrap();
        assert_eq!(back, trace);
    }

    fn k33() -> Graph {
        g(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)])
    }

    fn prism() -> Graph {
        g(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
    }

    fn check_minus_edge(gr: &Graph, e: Edge) {
        let out = build_ssp_cubic_minus_edge(gr, e).unwrap();
        let sys = &out.system;
        assert_eq!(sys.graph().m(), gr.m() - 1);
        assert!(sys.len() <= gr.n());
        assert!(verify_strong_separation(sys).is_pass());
        assert_eq!(verify_structural_properties(sys), Ok(()));
        let (u, v) = out.removed;
        let su = &sys.paths()[out.short_u];
        let sv = &sys.paths()[out.short_v];
        assert_eq!((su.len(), su.vertices()[1]), (2, u));
        assert_eq!((sv.len(), sv.vertices()[1]), (2, v));
    }

    #[test]
    fn minus_edge_on_k33_and_prism() {
        check_minus_edge(&k33(), (0, 3));
        check_minus_edge(&prism(), (0, 3));
        check_minus_edge(&prism(), (2, 5));
    }

    #[test]
    fn minus_edge_rejects_triangle_edges_and_k4() {
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(matches!(build_ssp_cubic_minus_edge(&k4, (0, 1)), Err(Error::NotApplicable(_))));
        assert_eq!(build_ssp_cubic_minus_edge(&prism(), (0, 1)).unwrap_err(), Error::EdgeInTriangle((0, 1)));
        assert_eq!(build_ssp_cubic_minus_edge(&g(4, &[(0, 1)]), (0, 1)).unwrap_err(), Error::NotCubic);
    }
}
