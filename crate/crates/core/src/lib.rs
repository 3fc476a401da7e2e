//! Construction and analysis of the balanced varietal hypercube (BVH) and the
//! hypercube, varietal hypercube and balanced hypercube it is compared with.
//!
//! The crate builds each topology as an explicit graph, audits the adjacency
//! rules, and computes distance metrics, vertex-disjoint paths, routes,
//! broadcast schedules and terminal reliability on top of it.

pub mod comms;
pub mod error;
pub mod label;
pub mod metrics;
pub mod paths;
pub mod reference;
pub mod reliability;
pub mod topology;

pub use error::{Error, Result};
pub use label::{Family, NodeLabel, TopologySpec, MAX_NODES};
pub use paths::{DisjointPathSet, PathClass, PathClassSet};
pub use topology::{build_graph, Graph};
