//! Node labelling and adjacency for HC, VQ, BH and BVH, plus graph
//! construction and auditing.

mod audit;
mod graph;
mod rules;

pub use audit::{
    audit_graph, audit_graph_with, AdjacencyAuditReport, DegreeViolation, MatchingEntry,
};
pub use graph::{build_graph, build_graph_with, Graph, GraphDocument};
pub use rules::{bh_neighbors, bvh_neighbors, hc_neighbors, neighbors, vq_neighbors, BvhCaseTable};
