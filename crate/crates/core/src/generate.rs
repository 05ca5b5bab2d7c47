//! Deterministic test-instance generators.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph};

/// Connected 2-degenerate graph on `n >= 3` vertices. Starts from the
/// triangle `{0,1,2}`; each later vertex joins one or two distinct earlier
/// vertices chosen uniformly.
pub fn two_degenerate(n: usize, seed: u64) -> Result<Graph> {
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = vec![(0, 1), (1, 2), (0, 2)];
    for v in 3..n {
        let k = rng.gen_range(1..=2);
        let a = rng.gen_range(0..v);
        edges.push(edge(a, v));
        if k == 2 {
            let mut b = rng.gen_range(0..v - 1);
            if b >= a {
                b += 1;
            }
            edges.push(edge(b, v));
        }
    }
    Graph::from_edges(n, edges)
}

/// Connected simple cubic graph on `n` vertices (`n` even, `n >= 4`) from the
/// pairing model, rejecting loops, multi-edges and disconnected outcomes.
pub fn random_cubic(n: usize, seed: u64) -> Result<Graph> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::Precondition(format!(
            "cubic graphs need an even vertex count >= 4, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..3 * n).map(|i| i / 3).collect();
    for _ in 0..100_000 {
        points.shuffle(&mut rng);
        let mut edges: Vec<Edge> = Vec::with_capacity(3 * n / 2);
        let mut ok = true;
        for pair in points.chunks(2) {
            if pair[0] == pair[1] {
                ok = false;
                break;
            }
            edges.push(edge(pair[0], pair[1]));
        }
        if !ok {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let g = Graph::from_edges(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::LimitExceeded("pairing model did not produce a simple connected graph".into()))
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    crate::bipartite::complete_bipartite(a, b)
}

pub const NAMED: [&str; 8] = ["k4", "petersen", "prism", "cube", "k33", "c5", "triangle", "p3"];

/// Graph from the small named library (see [`NAMED`]).
pub fn named(name: &str) -> Result<Graph> {
    let edges: Vec<Edge> = match name {
        "k4" => vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        "petersen" => {
            let mut e = Vec::new();
            for i in 0..5 {
                e.push(edge(i, (i + 1) % 5));
                e.push(edge(i, i + 5));
                e.push(edge(5 + i, 5 + (i + 2) % 5));
            }
            e
        }
        "prism" => vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)],
        "cube" => {
            let mut e = Vec::new();
            for v in 0..8usize {
                for bit in [1, 2, 4] {
                    if v & bit == 0 {
                        e.push((v, v | bit));
                    }
                }
            }
            e
        }
        "k33" => return Ok(complete_bipartite(3, 3)),
        "c5" => (0..5).map(|i| edge(i, (i + 1) % 5)).collect(),
        "triangle" => vec![(0, 1), (1, 2), (0, 2)],
        "p3" => vec![(0, 1), (1, 2)],
        _ => return Err(Error::Unsupported(format!("unknown named graph '{name}'"))),
    };
    let n = edges.iter().map(|&(_, v)| v + 1).max().unwrap_or(0);
    Graph::from_edges(n, edges)
}
