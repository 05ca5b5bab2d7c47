#![allow(dead_code)]

use pathsep::generate::{complete_bipartite, named, two_degenerate};
use pathsep::{Graph, Path, PathSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Literal definition: every edge lies on a path, and for every ordered pair
/// of distinct edges some path contains the first and avoids the second.
pub fn pair_scan(sys: &PathSystem) -> bool {
    let edges = sys.graph().edges();
    let on = |p: &Path, e: (usize, usize)| p.contains_edge(e);
    for &e in edges {
        if !sys.paths().iter().any(|p| on(p, e)) {
            return false;
        }
        for &f in edges {
            if e != f && !sys.paths().iter().any(|p| on(p, e) && !on(p, f)) {
                return false;
            }
        }
    }
    true
}

pub fn graph(n: usize, e: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, e.iter().copied()).unwrap()
}

pub fn two_k4() -> Graph {
    let k4 = named("k4").unwrap();
    Graph::from_edges(8, k4.edges().iter().flat_map(|&(a, b)| [(a, b), (a + 4, b + 4)])).unwrap()
}

pub fn k4_plus_c5() -> Graph {
    let k4 = named("k4").unwrap();
    let mut e: Vec<(usize, usize)> = k4.edges().to_vec();
    e.extend((0..5).map(|i| (4 + i, 4 + (i + 1) % 5)));
    Graph::from_edges(9, e).unwrap()
}

/// Fixed corpus of small graphs, all with `m <= 12`.
pub fn small_corpus() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = ["k4", "prism", "k33", "cube", "c5", "triangle", "p3"]
        .iter()
        .map(|s| (s.to_string(), named(s).unwrap()))
        .collect();
    for (a, b) in [(1, 1), (1, 3), (1, 4), (2, 2), (2, 3), (2, 5), (2, 6)] {
        out.push((format!("k{a}{b}"), complete_bipartite(a, b)));
    }
    out.push(("fan".into(), graph(5, &[(0, 1), (1, 2), (2, 3), (0, 4), (1, 4), (2, 4), (3, 4)])));
    out.push(("bowtie".into(), graph(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])));
    out.push(("c4".into(), graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)])));
    out.push(("p5".into(), graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)])));
    for seed in 0..4 {
        out.push((format!("deg2-{seed}"), two_degenerate(7, seed).unwrap()));
    }
    out
}

/// A random simple path by self-avoiding walk; at least one edge if the graph
/// has any.
pub fn random_path(g: &Graph, rng: &mut ChaCha8Rng) -> Path {
    let (a, b) = g.edges()[rng.gen_range(0..g.m())];
    let mut vs = vec![a, b];
    let target = rng.gen_range(1..=g.n());
    while vs.len() <= target {
        let last = *vs.last().unwrap();
        let next: Vec<usize> = g.neighbors(last).iter().copied().filter(|x| !vs.contains(x)).collect();
        if next.is_empty() {
            break;
        }
        vs.push(next[rng.gen_range(0..next.len())]);
    }
    Path::new(vs).unwrap()
}

pub fn random_system(g: &Graph, seed: u64) -> PathSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=g.m() + 2);
    let paths = (0..k).map(|_| random_path(g, &mut rng)).collect();
    PathSystem::new(g.clone(), paths).unwrap()
}
