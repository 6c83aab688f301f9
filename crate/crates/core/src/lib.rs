//! Resource-rational task decomposition (RRTD) over graph-structured planning
//! tasks.
//!
//! The toolkit values candidate subgoals by trading the utility of the plans
//! they induce against the run-time of the planning algorithm that produces
//! those plans, and compares the resulting per-state valuations against
//! heuristic (degree, betweenness), spectral (QCut), and partition-based
//! (boundary-state, CRP bridge-sampling) alternatives across corpora of small
//! connected graphs.

pub mod analysis;
pub mod cache;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod models;
pub mod rrtd;
pub mod search;
pub mod spectral;
pub mod stimuli;

pub use error::{Error, Result};
pub use graph::Graph;
