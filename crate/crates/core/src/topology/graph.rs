use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::{Family, NodeLabel, TopologySpec, MAX_NODES};

use super::rules::{emit, BvhCaseTable};

/// Immutable undirected simple graph over the labels of a [`TopologySpec`].
///
/// Node `i` is the `i`-th label in lexicographic order, so iteration order is
/// deterministic. Neighbour lists are sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    spec: TopologySpec,
    adjacency: Vec<Vec<u32>>,
}

impl Graph {
    pub fn spec(&self) -> &TopologySpec {
        &self.spec
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, node: usize) -> &[u32] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adjacency
    }

    pub fn label(&self, node: usize) -> NodeLabel {
        self.spec.label_at(node)
    }

    /// Index of `label`, or [`Error::UnknownNode`] if it is not in this graph.
    pub fn index_of(&self, label: &NodeLabel) -> Result<usize> {
        self.spec
            .index_of(label)
            .ok()
            .filter(|&i| i < self.node_count())
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Connected components as sorted node-index lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components(&self.adjacency)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Checks symmetry and simplicity of the adjacency.
    pub fn check_simple_undirected(&self) -> Result<()> {
        check_simple_undirected(&self.adjacency)
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            family: self.spec.family(),
            dimension: self.spec.dimension(),
            radix: self.spec.radix(),
            nodes: (0..self.node_count())
                .map(|i| self.label(i).digits().to_vec())
                .collect(),
            edges: self.edges().map(|(u, v)| [u as u32, v as u32]).collect(),
        }
    }

    /// Canonical structured-text form (pretty JSON, sorted nodes and edges).
    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(&self.to_document()).expect("graph documents serialize");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDocument =
            serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))?;
        Self::from_document(&doc)
    }

    /// Rebuilds a graph from a document, validating labels, ordering and edges.
    pub fn from_document(doc: &GraphDocument) -> Result<Self> {
        let spec = TopologySpec::new(doc.family, doc.dimension)?;
        if doc.radix != spec.radix() {
            return Err(Error::InvalidDocument(format!(
                "radix {} does not match {}",
                doc.radix, doc.family
            )));
        }
        if doc.nodes.len() as u64 != spec.node_count() {
            return Err(Error::InvalidDocument(format!(
                "expected {} nodes, found {}",
                spec.node_count(),
                doc.nodes.len()
            )));
        }
        for (i, digits) in doc.nodes.iter().enumerate() {
            let label = spec
                .label(digits)
                .map_err(|e| Error::InvalidDocument(e.to_string()))?;
            if spec.index_of(&label)? != i {
                return Err(Error::InvalidDocument(format!(
                    "node {i} ({label}) is out of canonical order"
                )));
            }
        }
        let mut adjacency = vec![Vec::new(); doc.nodes.len()];
        for &[u, v] in &doc.edges {
            let (u, v) = (u as usize, v as usize);
            if u >= adjacency.len() || v >= adjacency.len() || u == v {
                return Err(Error::InvalidDocument(format!("bad edge [{u}, {v}]")));
            }
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        check_simple_undirected(&adjacency).map_err(|e| Error::InvalidDocument(e.to_string()))?;
        Ok(Self { spec, adjacency })
    }
}

/// Serialized graph: `{family, dimension, radix, nodes, edges}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub family: Family,
    pub dimension: u32,
    pub radix: u8,
    pub nodes: Vec<Vec<u8>>,
    pub edges: Vec<[u32; 2]>,
}

/// Materializes the family's adjacency rule as the symmetric closure of its
/// emissions, and rejects disconnected results.
pub fn build_graph(spec: &TopologySpec) -> Result<Graph> {
    build_graph_with(spec, BvhCaseTable::Corrected)
}

pub fn build_graph_with(spec: &TopologySpec, table: BvhCaseTable) -> Result<Graph> {
    let count = spec.node_count();
    if count > MAX_NODES {
        return Err(Error::TooLarge {
            family: spec.family(),
            dimension: spec.dimension(),
            cap: MAX_NODES,
        });
    }
    let count = count as usize;
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); count];
    for u in 0..count {
        let label = spec.label_at(u);
        for digits in emit(spec.family(), label.digits(), table) {
            let v = spec.index_of(&NodeLabel::from_raw(digits, spec.radix()))?;
            if v == u {
                return Err(Error::Invariant(format!(
                    "{spec}: rule emits a self-loop at {label}"
                )));
            }
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }
    let graph = Graph {
        spec: *spec,
        adjacency,
    };
    let parts = graph.components();
    if parts.len() > 1 {
        return Err(Error::Disconnected {
            components: parts
                .iter()
                .map(|c| c.iter().map(|&i| spec.label_at(i).to_string()).collect())
                .collect(),
        });
    }
    Ok(graph)
}

pub(crate) fn components(adjacency: &[Vec<u32>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adjacency.len()];
    let mut out = Vec::new();
    for start in 0..adjacency.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                let v = v as usize;
                if !seen[v] {
                    seen[v] = true;
                    members.push(v);
                    queue.push_back(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

pub(crate) fn check_simple_undirected(adjacency: &[Vec<u32>]) -> Result<()> {
    for (u, nbrs) in adjacency.iter().enumerate() {
        if nbrs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invariant(format!(
                "neighbour list of node {u} is unsorted or has duplicates"
            )));
        }
        for &v in nbrs {
            let v = v as usize;
            if v == u {
                return Err(Error::Invariant(format!("self-loop at node {u}")));
            }
            if adjacency[v].binary_search(&(u as u32)).is_err() {
                return Err(Error::Invariant(format!("edge {u}->{v} has no reverse")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(family: Family, n: u32) -> Graph {
        build_graph(&TopologySpec::new(family, n).unwrap()).unwrap()
    }

    #[test]
    fn bvh1_is_the_four_cycle() {
        let g = graph(Family::Bvh, 1);
        assert_eq!(g.node_count(), 4);
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn small_counts() {
        let g = graph(Family::Bvh, 2);
        assert_eq!((g.node_count(), g.edge_count()), (16, 32));
        let g = graph(Family::Hc, 3);
        assert_eq!((g.node_count(), g.edge_count()), (8, 12));
        let g = graph(Family::Vq, 2);
        // VQ_2 is a 4-cycle
        assert_eq!((g.node_count(), g.edge_count()), (4, 4));
        assert!((0..4).all(|u| g.degree(u) == 2));
    }

    fn is_walk(g: &Graph, route: &[&str]) -> bool {
        let spec = *g.spec();
        let idx: Vec<_> = route
            .iter()
            .map(|s| spec.index_of(&spec.parse_label(s).unwrap()).unwrap())
            .collect();
        idx.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }

    #[test]
    fn reference_bvh2_routes_are_walks() {
        let g = graph(Family::Bvh, 2);
        assert!(is_walk(&g, &["0,0", "1,1", "2,3", "3,3"]));
        assert!(is_walk(&g, &["0,0", "1,0", "2,2", "3,3"]));
        assert!(is_walk(&g, &["0,0", "2,0", "1,2", "0,2", "3,3"]));
        // (2,1) emits (3,0) and (1,3); (3,3) emits (0,2) and (2,2)
        assert!(!is_walk(&g, &["0,0", "3,1", "2,1", "3,3"]));
    }

    #[test]
    fn too_large_rejected() {
        let spec = TopologySpec::new(Family::Bvh, 11).unwrap();
        assert!(matches!(build_graph(&spec), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn json_round_trip_and_determinism() {
        let g = graph(Family::Bvh, 2);
        let text = g.to_json();
        assert_eq!(text, graph(Family::Bvh, 2).to_json());
        assert_eq!(Graph::from_json(&text).unwrap(), g);
    }

    #[test]
    fn invalid_documents() {
        let g = graph(Family::Hc, 2);
        let mut doc = g.to_document();
        doc.edges.push([0, 0]);
        assert!(matches!(
            Graph::from_document(&doc),
            Err(Error::InvalidDocument(_))
        ));

        let mut doc = g.to_document();
        doc.nodes.swap(0, 1);
        assert!(matches!(
            Graph::from_document(&doc),
            Err(Error::InvalidDocument(_))
        ));

        let mut doc = g.to_document();
        doc.edges.push(doc.edges[0]);
        assert!(matches!(
            Graph::from_document(&doc),
            Err(Error::InvalidDocument(_))
        ));

        assert!(Graph::from_json("{").is_err());
    }

    #[test]
    fn components_reports_partition() {
        let adjacency = vec![vec![1], vec![0], vec![3], vec![2]];
        assert_eq!(components(&adjacency), vec![vec![0, 1], vec![2, 3]]);
    }
}
