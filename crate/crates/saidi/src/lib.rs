//! SAIDI reliability analysis for source-rooted networks whose edges fail
//! independently.
//!
//! The index F = sum_v w_v Pr(s and v disconnected) is computed exactly
//! (brute force, deletion-contraction, ring-path and partition formulas),
//! approximated from low-order minimal cut sets, and used to rank
//! candidate redundant edges.

pub mod analytic;
pub mod error;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod io;
pub mod network;
pub mod planner;
pub mod poly;
pub mod report;
pub mod risk;
pub mod structure;

pub use error::{Error, Result};
pub use network::{Edge, EdgeId, Network, NetworkBuilder, Node, NodeId};
pub use poly::{BinomialPolynomial, ReliabilityPolynomial};
