use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::error::Result;
use crate::label::{NodeLabel, TopologySpec};

use super::graph::build_graph_with;
use super::rules::{emit, BvhCaseTable};

/// Findings from applying a family's literal rule to every node.
#[derive(Clone, Debug, Serialize)]
pub struct AdjacencyAuditReport {
    pub spec: TopologySpec,
    pub expected_degree: u32,
    /// Degree after symmetric closure, in node order.
    pub degrees: Vec<u32>,
    pub degree_violations: Vec<DegreeViolation>,
    /// `(u, v)` where `u`'s rule lists `v` but `v`'s rule does not list `u`.
    pub asymmetric_pairs: Vec<(NodeLabel, NodeLabel)>,
    /// Emissions repeating a neighbour already listed by the same node.
    pub duplicate_emissions: usize,
    pub matching_pairs: Vec<MatchingEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeViolation {
    pub node: NodeLabel,
    pub degree: u32,
}

/// Nodes `w != node` with `N(w) = N(node)`; empty when the node has no partner.
#[derive(Clone, Debug, Serialize)]
pub struct MatchingEntry {
    pub node: NodeLabel,
    pub partners: Vec<NodeLabel>,
}

impl AdjacencyAuditReport {
    pub fn closure_repairs(&self) -> usize {
        self.asymmetric_pairs.len()
    }

    /// True when every node has exactly one identical-neighbourhood partner.
    pub fn every_node_uniquely_matched(&self) -> bool {
        self.matching_pairs.iter().all(|e| e.partners.len() == 1)
    }

    pub fn matched_node_count(&self) -> usize {
        self.matching_pairs
            .iter()
            .filter(|e| !e.partners.is_empty())
            .count()
    }

    pub fn is_clean(&self) -> bool {
        self.degree_violations.is_empty() && self.asymmetric_pairs.is_empty()
    }
}

pub fn audit_graph(spec: &TopologySpec) -> Result<AdjacencyAuditReport> {
    audit_graph_with(spec, BvhCaseTable::Corrected)
}

/// Audit using the chosen printing of the BVH case table (ignored for other families).
pub fn audit_graph_with(spec: &TopologySpec, table: BvhCaseTable) -> Result<AdjacencyAuditReport> {
    let graph = build_graph_with(spec, table)?;
    let n = graph.node_count();

    let mut emitted: Vec<HashSet<usize>> = Vec::with_capacity(n);
    let mut duplicate_emissions = 0;
    for u in 0..n {
        let mut set = HashSet::new();
        for digits in emit(spec.family(), graph.label(u).digits(), table) {
            let v = spec.index_of(&NodeLabel::from_raw(digits, spec.radix()))?;
            if !set.insert(v) {
                duplicate_emissions += 1;
            }
        }
        emitted.push(set);
    }

    let mut asymmetric_pairs = Vec::new();
    for u in 0..n {
        let mut one_way: Vec<usize> = emitted[u]
            .iter()
            .copied()
            .filter(|&v| !emitted[v].contains(&u))
            .collect();
        one_way.sort_unstable();
        asymmetric_pairs.extend(
            one_way
                .into_iter()
                .map(|v| (graph.label(u), graph.label(v))),
        );
    }

    let expected_degree = spec.expected_degree();
    let degrees: Vec<u32> = (0..n).map(|u| graph.degree(u) as u32).collect();
    let degree_violations = degrees
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != expected_degree)
        .map(|(u, &degree)| DegreeViolation {
            node: graph.label(u),
            degree,
        })
        .collect();

    let mut by_neighbourhood: BTreeMap<&[u32], Vec<usize>> = BTreeMap::new();
    for u in 0..n {
        by_neighbourhood
            .entry(graph.neighbors(u))
            .or_default()
            .push(u);
    }
    let matching_pairs = (0..n)
        .map(|u| MatchingEntry {
            node: graph.label(u),
            partners: by_neighbourhood[graph.neighbors(u)]
                .iter()
                .filter(|&&w| w != u)
                .map(|&w| graph.label(w))
                .collect(),
        })
        .collect();

    Ok(AdjacencyAuditReport {
        spec: *spec,
        expected_degree,
        degrees,
        degree_violations,
        asymmetric_pairs,
        duplicate_emissions,
        matching_pairs,
    })
}
