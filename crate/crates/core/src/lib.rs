//! Clustering of uncertain graphs by connection probability.
//!
//! An uncertain graph carries an independent existence probability on every
//! edge. Two nodes are "close" when they are likely to be connected in a random
//! possible world. The crate provides:
//!
//! - [`graph`]: the graph model and edge-list reader,
//! - [`world`]: reproducible possible-world sampling,
//! - [`oracle`]: exact and Monte Carlo connection probabilities and sample bounds,
//! - [`clustering`]: the MCP (minimum) and ACP (average) clustering algorithms,
//! - [`baselines`]: the farthest-first shortest-path baseline,
//! - [`metrics`]: quality metrics and predictive evaluation,
//! - [`synth`]: seeded random graphs for tests and benchmarks.

pub mod baselines;
pub mod clustering;
pub mod dsu;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod oracle;
pub mod synth;
pub mod world;

pub use clustering::{Clustering, ClusteringParams};
pub use error::{CoreError, Result};
pub use graph::{load_graph, Edge, NodeId, UncertainGraph};
pub use oracle::{ConnectionOracle, ExactOracle, MonteCarloOracle, ProbEstimate};
pub use world::{WorldSample, WorldSamplePool};
