//! Internally vertex-disjoint paths by unit-capacity max flow on the
//! node-split graph, and grouping of paths into reliability classes.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::NodeLabel;
use crate::topology::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisjointPathSet {
    pub source: NodeLabel,
    pub target: NodeLabel,
    pub paths: Vec<Vec<NodeLabel>>,
}

impl DisjointPathSet {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Checks endpoints, edges, simplicity and internal disjointness against `graph`.
    pub fn validate(&self, graph: &Graph) -> Result<()> {
        let mut used = HashSet::new();
        for path in &self.paths {
            if path.first() != Some(&self.source) || path.last() != Some(&self.target) {
                return Err(Error::Invariant(format!(
                    "path {} has wrong endpoints",
                    render(path)
                )));
            }
            let idx: Vec<usize> = path
                .iter()
                .map(|l| graph.index_of(l))
                .collect::<Result<_>>()?;
            if let Some(w) = idx.windows(2).find(|w| !graph.has_edge(w[0], w[1])) {
                return Err(Error::Invariant(format!(
                    "{} - {} is not an edge",
                    graph.label(w[0]),
                    graph.label(w[1])
                )));
            }
            let distinct: HashSet<_> = idx.iter().collect();
            if distinct.len() != idx.len() {
                return Err(Error::Invariant(format!(
                    "path {} repeats a node",
                    render(path)
                )));
            }
            for &v in &idx[1..idx.len() - 1] {
                if !used.insert(v) {
                    return Err(Error::Invariant(format!(
                        "node {} is shared by two paths",
                        graph.label(v)
                    )));
                }
            }
        }
        Ok(())
    }
}

fn render(path: &[NodeLabel]) -> String {
    path.iter()
        .map(|l| format!("({l})"))
        .collect::<Vec<_>>()
        .join("-")
}

/// `count` paths, each with `links` edges and `processors` intermediate nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathClass {
    pub count: u32,
    pub links: u32,
    pub processors: u32,
}

impl PathClass {
    pub fn new(count: u32, links: u32, processors: u32) -> Result<Self> {
        if count == 0 {
            return Err(Error::Domain("a path class needs at least one path".into()));
        }
        if links != processors + 1 {
            return Err(Error::Domain(format!(
                "a path with {processors} intermediate nodes has {} links, not {links}",
                processors + 1
            )));
        }
        Ok(Self {
            count,
            links,
            processors,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathClassSet {
    pub source: Option<NodeLabel>,
    pub target: Option<NodeLabel>,
    pub classes: Vec<PathClass>,
}

impl PathClassSet {
    /// A class set not tied to specific endpoints, e.g. a hand-listed one.
    pub fn from_classes(classes: impl IntoIterator<Item = PathClass>) -> Self {
        Self {
            source: None,
            target: None,
            classes: classes.into_iter().collect(),
        }
    }

    pub fn path_count(&self) -> u32 {
        self.classes.iter().map(|c| c.count).sum()
    }
}

/// Groups paths by length. Classes are ordered by link count.
pub fn classify_paths(set: &DisjointPathSet) -> PathClassSet {
    let mut by_links: BTreeMap<u32, u32> = BTreeMap::new();
    for path in &set.paths {
        *by_links.entry(path.len() as u32 - 1).or_default() += 1;
    }
    PathClassSet {
        source: Some(set.source.clone()),
        target: Some(set.target.clone()),
        classes: by_links
            .into_iter()
            .map(|(links, count)| PathClass {
                count,
                links,
                processors: links - 1,
            })
            .collect(),
    }
}

pub fn max_disjoint_paths(
    graph: &Graph,
    source: &NodeLabel,
    target: &NodeLabel,
) -> Result<DisjointPathSet> {
    let s = graph.index_of(source)?;
    let t = graph.index_of(target)?;
    if s == t {
        return Err(Error::Domain(format!(
            "source and target are the same node ({source})"
        )));
    }
    let paths = vertex_disjoint_paths(graph.adjacency(), s, t)
        .into_iter()
        .map(|p| p.into_iter().map(|v| graph.label(v)).collect())
        .collect();
    Ok(DisjointPathSet {
        source: source.clone(),
        target: target.clone(),
        paths,
    })
}

/// Number of internally disjoint `s`-`t` paths (local vertex connectivity).
pub fn pair_connectivity(graph: &Graph, s: usize, t: usize) -> usize {
    vertex_disjoint_paths(graph.adjacency(), s, t).len()
}

struct Arc {
    to: usize,
    cap: u32,
    flow: u32,
}

struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: u32) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap, flow: 0 });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc {
            to: from,
            cap: 0,
            flow: 0,
        });
    }

    fn residual(&self, arc: usize) -> u32 {
        let a = &self.arcs[arc];
        if arc.is_multiple_of(2) {
            a.cap - a.flow
        } else {
            // reverse arc: residual equals flow on its partner
            self.arcs[arc ^ 1].flow
        }
    }

    fn push(&mut self, arc: usize) {
        if arc.is_multiple_of(2) {
            self.arcs[arc].flow += 1;
        } else {
            self.arcs[arc ^ 1].flow -= 1;
        }
    }

    /// One BFS augmentation of a unit of flow. Arcs are scanned in insertion order.
    fn augment(&mut self, source: usize, sink: usize) -> bool {
        let mut via = vec![usize::MAX; self.out.len()];
        let mut seen = vec![false; self.out.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            for &arc in &self.out[u] {
                let v = self.arcs[arc].to;
                if !seen[v] && self.residual(arc) > 0 {
                    seen[v] = true;
                    via[v] = arc;
                    queue.push_back(v);
                }
            }
        }
        if !seen[sink] {
            return false;
        }
        let mut v = sink;
        while v != source {
            let arc = via[v];
            self.push(arc);
            v = self.arcs[arc ^ 1].to;
        }
        true
    }
}

/// Maximum set of internally vertex-disjoint `s`-`t` paths over an index
/// adjacency list. Deterministic for a given adjacency order.
///
/// Node `v` becomes `v_in = 2v` and `v_out = 2v + 1` joined by a unit arc
/// (unbounded for `s` and `t`); every edge `{u, v}` becomes unit arcs
/// `u_out -> v_in` and `v_out -> u_in`.
pub fn vertex_disjoint_paths(adjacency: &[Vec<u32>], s: usize, t: usize) -> Vec<Vec<usize>> {
    assert_ne!(s, t, "source and target must differ");
    let n = adjacency.len();
    let unbounded = adjacency.len() as u32 + 1;
    let mut net = FlowNetwork::new(2 * n);
    for v in 0..n {
        let cap = if v == s || v == t { unbounded } else { 1 };
        net.add_arc(2 * v, 2 * v + 1, cap);
    }
    for (u, nbrs) in adjacency.iter().enumerate() {
        for &v in nbrs {
            net.add_arc(2 * u + 1, 2 * v as usize, 1);
        }
    }
    let (source, sink) = (2 * s + 1, 2 * t);
    while net.augment(source, sink) {}

    // Peel paths off the flow, lowest arc first. Each internal node carries at
    // most one unit, so walking forward from `s` never enters a circulation.
    let mut paths = Vec::new();
    loop {
        let mut path = vec![s];
        let mut at = source;
        while at != sink {
            let Some(arc) = net.out[at]
                .iter()
                .copied()
                .find(|&a| a % 2 == 0 && net.arcs[a].flow > 0 && net.arcs[a].to.is_multiple_of(2))
            else {
                break;
            };
            net.arcs[arc].flow -= 1;
            let node_in = net.arcs[arc].to;
            let node = node_in / 2;
            path.push(node);
            if node == t {
                at = sink;
            } else {
                at = node_in + 1;
            }
        }
        if at != sink {
            break;
        }
        paths.push(path);
    }
    paths
}
