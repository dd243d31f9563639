//! Exact minimum vertex cover by branch and reduce.
//!
//! The solver keeps a single mutable [`state::SolverState`] and applies a
//! configurable set of reduction rules and lower bounds at every search node.
//! Around it sit an instance profiler that recommends a configuration from
//! cheap degree measures, random instance generators, and tooling for
//! comparing configurations across runs.
//!
//! ```
//! use vc_reduce::{graph::Graph, solver::solve, config::ReductionConfig};
//!
//! let g = Graph::cycle(5);
//! let config: ReductionConfig = "DF2".parse().unwrap();
//! assert_eq!(solve(&g, &config).value, 3);
//! ```

pub mod bounds;
pub mod cli;
pub mod config;
pub mod error;
pub mod generators;
pub mod graph;
pub mod matching;
pub mod profiler;
pub mod reductions;
pub mod solver;
pub mod state;
pub mod stats;

pub use error::{Error, Result};
