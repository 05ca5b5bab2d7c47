//! Strongly separating path systems: construction, verification, exact
//! minima for small graphs and lower bounds for complete bipartite graphs.
//!
//! A family of paths in a graph strongly separates it when every edge lies on
//! some path and, for any two edges `e != f`, some path contains `e` but not
//! `f`.

mod error;

pub mod bipartite;
pub mod cubic;
pub mod degenerate;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod pathsys;

pub use error::{Error, Result};
pub use graph::{parse_graph, Edge, Graph};
pub use pathsys::{verify_strong_separation, Path, PathSystem, Separation};
