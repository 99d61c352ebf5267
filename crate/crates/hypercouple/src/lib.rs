//! Coupling the random graph G(n,p) with binomial random hypergraphs and
//! F-graphs: exact conditional inference over revealed test histories,
//! structural hypergraph analysis, brute-force lemma verification, and an
//! end-to-end coupling -> matching -> factor pipeline.

pub mod conditional;
pub mod coupling;
pub mod error;
pub mod fgraph;
pub mod graph;
pub mod harness;
pub mod hypergraph;
pub mod iso;
pub mod matching;
pub mod oracles;
pub mod pattern;
pub mod prob;

pub use error::{Error, Result};
pub use graph::{sample_gnp, Edge, SimpleGraph};
pub use pattern::{FCopy, PatternGraph};
