//! Cubic graphs via re-routing through a withheld edge, and per-component
//! dispatch for subcubic, 2-degenerate and mixed inputs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degenerate::{build_ssp_2degenerate, build_ssp_cubic_minus_edge};
use crate::error::{Error, Result};
use crate::graph::{classify_component, connected_components, find_non_triangle_edge, is_2_degenerate, ComponentClass, Edge, Graph};
use crate::pathsys::{Path, PathSystem};

/// Result of the cubic construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicBuild {
    pub system: PathSystem,
    /// The triangle-free edge `uv` the construction was organised around.
    pub removed: Edge,
    /// Indices of the re-routed paths `(u1,u,v,v1)` and `(u2,u,v,v2)`.
    pub rerouted: [usize; 2],
    /// Whether `v1` and `v2` had to be interchanged.
    pub swapped: bool,
}

/// Neighbour of `end` along `p`, which must end at `end`.
fn next_to_end(p: &Path, end: usize) -> usize {
    let vs = p.vertices();
    if p.last() == end {
        vs[vs.len() - 2]
    } else {
        vs[1]
    }
}

/// At most n paths for a connected cubic graph other than `K4`.
///
/// Builds the system for `G - uv` around the first triangle-free edge `uv`,
/// then replaces `(u1,u,u2)` and `(v1,v,v2)` by `(u1,u,v,v1)` and
/// `(u2,u,v,v2)`. `P1` is the smaller-index path ending at `u` and `u1` its
/// neighbour there; likewise `Q1` and `v1` at `v`. If `P1 = Q1` the roles of
/// `v1` and `v2` are interchanged.
pub fn build_ssp_cubic(g: &Graph) -> Result<CubicBuild> {
    if !g.is_cubic() {
        return Err(Error::NotCubic);
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    if g.n() == 4 {
        return Err(Error::NotApplicable("graph is K4".into()));
    }
    let e = find_non_triangle_edge(g)
        .ok_or_else(|| Error::Internal("connected cubic non-K4 graph without a triangle-free edge".into()))?;
    let minus = build_ssp_cubic_minus_edge(g, e)?;
    let (u, v) = minus.removed;
    let mut paths = minus.system.into_paths();

    let ending_at = |x: usize| -> Vec<usize> {
        (0..paths.len()).filter(|&i| paths[i].ends_at(x)).collect()
    };
    let (pu, qv) = (ending_at(u), ending_at(v));
    if pu.len() != 2 || qv.len() != 2 {
        return Err(Error::Internal(format!("expected two paths ending at {u} and {v}")));
    }
    let (p1, p2) = (pu[0], pu[1]);
    let (mut q1, mut q2) = (qv[0], qv[1]);
    let u1 = next_to_end(&paths[p1], u);
    let u2 = next_to_end(&paths[p2], u);
    let mut v1 = next_to_end(&paths[q1], v);
    let mut v2 = next_to_end(&paths[q2], v);
    let swapped = p1 == q1;
    if swapped {
        std::mem::swap(&mut v1, &mut v2);
        std::mem::swap(&mut q1, &mut q2);
    }
    if p1 == q1 || p2 == q2 {
        return Err(Error::Internal("re-routing partners coincide after swap".into()));
    }
    // P1 separates uu1 from vv1 and Q1 the reverse; same for the second pair.
    for (p, q, a, b) in [(p1, q1, (u, u1), (v, v1)), (p2, q2, (u, u2), (v, v2))] {
        let (ea, eb) = (crate::graph::edge(a.0, a.1), crate::graph::edge(b.0, b.1));
        let ok = paths[p].contains_edge(ea)
            && !paths[p].contains_edge(eb)
            && paths[q].contains_edge(eb)
            && !paths[q].contains_edge(ea);
        if !ok {
            return Err(Error::Internal(format!("pair {ea:?}/{eb:?} not separated after re-routing")));
        }
    }

    paths[minus.short_u] = Path::from_vec_unchecked(vec![u1, u, v, v1]);
    paths[minus.short_v] = Path::from_vec_unchecked(vec![u2, u, v, v2]);
    Ok(CubicBuild {
        system: PathSystem::from_parts_unchecked(g.clone(), paths),
        removed: (u, v),
        rerouted: [minus.short_u, minus.short_v],
        swapped,
    })
}

/// A fixed 5-path system of `K4` on vertices `0..4`.
pub const K4_SYSTEM: [&[usize]; 5] = [&[0, 1], &[0, 2, 1], &[0, 3, 1], &[0, 2, 3, 1], &[0, 3, 2, 1]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuilderUsed {
    None,
    SingleEdge,
    CannedK4,
    Cubic,
    TwoDegenerate,
}

impl std::fmt::Display for BuilderUsed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BuilderUsed::None => "none (isolated vertex)",
            BuilderUsed::SingleEdge => "single-edge path",
            BuilderUsed::CannedK4 => "canned K4 system",
            BuilderUsed::Cubic => "cubic re-routing",
            BuilderUsed::TwoDegenerate => "2-degenerate induction",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub vertices: Vec<usize>,
    pub class: ComponentClass,
    pub builder: BuilderUsed,
    pub paths: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DispatchReport {
    pub components: Vec<ComponentReport>,
    pub n: usize,
    /// Number of `K4` components.
    pub k: usize,
    pub total: usize,
}

/// Which component classes a dispatch accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    /// Maximum degree at most 3.
    Subcubic,
    /// 2-degenerate inputs only.
    TwoDegenerate,
    /// Anything some implemented construction covers.
    Auto,
}

fn build_component(g: &Graph, comp: &[usize], coverage: Coverage) -> Result<(ComponentReport, Vec<Path>)> {
    let class = classify_component(g, comp);
    let (sub, map) = g.induced(comp);
    let (builder, local): (BuilderUsed, Vec<Path>) = match class {
        ComponentClass::IsolatedVertex => (BuilderUsed::None, Vec::new()),
        ComponentClass::SingleEdge => (BuilderUsed::SingleEdge, vec![Path::from_vec_unchecked(vec![0, 1])]),
        ComponentClass::K4 | ComponentClass::CubicNonK4 if coverage == Coverage::TwoDegenerate => {
            return Err(Error::NotTwoDegenerate);
        }
        ComponentClass::K4 => (
            BuilderUsed::CannedK4,
            K4_SYSTEM.iter().map(|p| Path::from_vec_unchecked(p.to_vec())).collect(),
        ),
        ComponentClass::CubicNonK4 => (BuilderUsed::Cubic, build_ssp_cubic(&sub)?.system.into_paths()),
        ComponentClass::Subcubic2Degenerate | ComponentClass::General2Degenerate => {
            (BuilderUsed::TwoDegenerate, build_ssp_2degenerate(&sub)?.0.into_paths())
        }
        ComponentClass::Other => {
            return Err(match coverage {
                Coverage::Subcubic => {
                    Error::Internal(format!("connected subcubic component {comp:?} is neither cubic nor 2-degenerate"))
                }
                Coverage::TwoDegenerate => Error::NotTwoDegenerate,
                Coverage::Auto => Error::Unsupported(format!(
                    "component containing vertex {} is neither cubic nor 2-degenerate",
                    comp[0]
                )),
            })
        }
    };
    let paths: Vec<Path> = local
        .into_iter()
        .map(|p| Path::from_vec_unchecked(p.vertices().iter().map(|&x| map[x]).collect()))
        .collect();
    let report = ComponentReport { vertices: comp.to_vec(), class, builder, paths: paths.len() };
    Ok((report, paths))
}

/// Builds each connected component independently and concatenates the
/// systems, components ordered by smallest vertex id.
pub fn dispatch(g: &Graph, coverage: Coverage) -> Result<(PathSystem, DispatchReport)> {
    match coverage {
        Coverage::Subcubic if g.max_degree() > 3 => return Err(Error::DegreeTooLarge(g.max_degree())),
        Coverage::TwoDegenerate if !is_2_degenerate(g) => return Err(Error::NotTwoDegenerate),
        _ => {}
    }
    let comps = connected_components(g);
    let built: Vec<(ComponentReport, Vec<Path>)> = comps
        .par_iter()
        .map(|c| build_component(g, c, coverage))
        .collect::<Result<_>>()?;
    let mut paths = Vec::new();
    let mut components = Vec::with_capacity(built.len());
    for (report, ps) in built {
        paths.extend(ps);
        components.push(report);
    }
    let k = components.iter().filter(|c| c.class == ComponentClass::K4).count();
    let report = DispatchReport { n: g.n(), k, total: paths.len(), components };
    Ok((PathSystem::from_parts_unchecked(g.clone(), paths), report))
}

/// At most `n + k` paths for a subcubic graph with `k` components equal to
/// `K4`.
pub fn build_ssp_subcubic(g: &Graph) -> Result<(PathSystem, DispatchReport)> {
    dispatch(g, Coverage::Subcubic)
}

/// At most n paths for any 2-degenerate graph (outerplanar graphs included).
pub fn build_ssp_outerplanar_entry(g: &Graph) -> Result<(PathSystem, DispatchReport)> {
    dispatch(g, Coverage::TwoDegenerate)
}

/// Per-component dispatch over every implemented construction: canned `K4`,
/// then cubic, then 2-degenerate; anything else is refused.
pub fn build_ssp_auto(g: &Graph) -> Result<(PathSystem, DispatchReport)> {
    dispatch(g, Coverage::Auto)
}
