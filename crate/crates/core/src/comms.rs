//! Point-to-point routing and all-port one-to-all broadcast.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::label::{Family, NodeLabel};
use crate::metrics::{bfs_from, AllPairsSummary};
use crate::topology::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RoutePolicy {
    Greedy,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RouteTrace {
    pub source: NodeLabel,
    pub target: NodeLabel,
    pub hops: Vec<NodeLabel>,
    pub policy: RoutePolicy,
}

impl RouteTrace {
    pub fn hop_count(&self) -> usize {
        self.hops.len() - 1
    }

    pub fn validate(&self, graph: &Graph) -> Result<()> {
        if self.hops.first() != Some(&self.source) || self.hops.last() != Some(&self.target) {
            return Err(Error::Invariant("trace endpoints do not match".into()));
        }
        let idx: Vec<usize> = self
            .hops
            .iter()
            .map(|l| graph.index_of(l))
            .collect::<Result<_>>()?;
        if idx.windows(2).any(|w| !graph.has_edge(w[0], w[1])) {
            return Err(Error::Invariant("trace uses a non-edge".into()));
        }
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != idx.len() {
            return Err(Error::Invariant("trace revisits a node".into()));
        }
        Ok(())
    }
}

/// A shortest path, taking the lowest-labelled closer neighbour at each step.
pub fn route_oracle(graph: &Graph, u: &NodeLabel, v: &NodeLabel) -> Result<RouteTrace> {
    let (s, t) = (graph.index_of(u)?, graph.index_of(v)?);
    let dist = bfs_from(graph.adjacency(), t);
    let mut hops = vec![s];
    let mut at = s;
    while at != t {
        at = graph
            .neighbors(at)
            .iter()
            .map(|&w| w as usize)
            .find(|&w| dist[w] + 1 == dist[at])
            .expect("a closer neighbour exists in a connected graph");
        hops.push(at);
    }
    Ok(trace(graph, u, v, hops, RoutePolicy::Oracle))
}

/// Digit-correcting router for BVH.
///
/// At each node the highest-index digit that still differs from the target is
/// the one being corrected. Candidate next hops are unvisited neighbours no
/// farther from the target; they are ranked by whether they fix that digit,
/// then by whether they are strictly closer, then by label. A strictly closer
/// neighbour is always unvisited, so the walk terminates.
pub fn route_greedy(graph: &Graph, u: &NodeLabel, v: &NodeLabel) -> Result<RouteTrace> {
    let spec = graph.spec();
    if spec.family() != Family::Bvh {
        return Err(Error::UnsupportedFamily {
            expected: Family::Bvh,
            actual: spec.family(),
        });
    }
    let (s, t) = (graph.index_of(u)?, graph.index_of(v)?);
    let target = v.digits();
    let dist = bfs_from(graph.adjacency(), t);
    let mut visited = vec![false; graph.node_count()];
    visited[s] = true;
    let mut hops = vec![s];
    let mut at = s;
    while at != t {
        let here = graph.label(at);
        let h = (0..target.len())
            .rev()
            .find(|&i| here.digits()[i] != target[i])
            .expect("at != t");
        let next = graph
            .neighbors(at)
            .iter()
            .map(|&w| w as usize)
            .filter(|&w| !visited[w] && dist[w] <= dist[at])
            .min_by_key(|&w| {
                let fixes = graph.label(w).digits()[h] == target[h];
                (!fixes, dist[w] >= dist[at], w)
            })
            .expect("a strictly closer neighbour is always available");
        visited[next] = true;
        hops.push(next);
        at = next;
    }
    Ok(trace(graph, u, v, hops, RoutePolicy::Greedy))
}

fn trace(
    graph: &Graph,
    u: &NodeLabel,
    v: &NodeLabel,
    hops: Vec<usize>,
    policy: RoutePolicy,
) -> RouteTrace {
    RouteTrace {
        source: u.clone(),
        target: v.clone(),
        hops: hops.into_iter().map(|i| graph.label(i)).collect(),
        policy,
    }
}

/// Greedy-versus-oracle comparison over every ordered pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StretchSummary {
    pub pairs: usize,
    /// Extra hops over the shortest path, with the number of pairs at each.
    pub excess_hops: BTreeMap<u32, usize>,
    pub max_ratio: f64,
    pub max_hops: usize,
    pub diameter: u32,
}

pub fn greedy_stretch(graph: &Graph) -> Result<StretchSummary> {
    let n = graph.node_count();
    let diameter = AllPairsSummary::compute(graph).diameter();
    let mut excess_hops = BTreeMap::new();
    let mut max_ratio: f64 = 1.0;
    let mut max_hops = 0;
    for t in 0..n {
        let dist = bfs_from(graph.adjacency(), t);
        let target = graph.label(t);
        for s in (0..n).filter(|&s| s != t) {
            let greedy = route_greedy(graph, &graph.label(s), &target)?.hop_count();
            let best = dist[s] as usize;
            *excess_hops.entry((greedy - best) as u32).or_insert(0) += 1;
            max_ratio = max_ratio.max(greedy as f64 / best as f64);
            max_hops = max_hops.max(greedy);
        }
    }
    Ok(StretchSummary {
        pairs: n * (n - 1),
        excess_hops,
        max_ratio,
        max_hops,
        diameter,
    })
}

/// Rounds of `(sender, receiver)` transmissions; round `r` (0-based) is the
/// `r+1`-th step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BroadcastSchedule {
    pub root: NodeLabel,
    pub rounds: Vec<Vec<(NodeLabel, NodeLabel)>>,
}

impl BroadcastSchedule {
    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }

    /// Checks the all-port schedule invariants against `graph`.
    pub fn validate(&self, graph: &Graph) -> Result<()> {
        let root = graph.index_of(&self.root)?;
        let mut informed = vec![false; graph.node_count()];
        informed[root] = true;
        for (r, round) in self.rounds.iter().enumerate() {
            let mut fresh = Vec::with_capacity(round.len());
            let mut per_sender: BTreeMap<usize, usize> = BTreeMap::new();
            for (from, to) in round {
                let (a, b) = (graph.index_of(from)?, graph.index_of(to)?);
                if !informed[a] {
                    return Err(Error::Invariant(format!(
                        "round {}: sender {from} is not yet informed",
                        r + 1
                    )));
                }
                if !graph.has_edge(a, b) {
                    return Err(Error::Invariant(format!(
                        "round {}: {from} -> {to} is not an edge",
                        r + 1
                    )));
                }
                if informed[b] || fresh.contains(&b) {
                    return Err(Error::Invariant(format!(
                        "round {}: {to} receives twice",
                        r + 1
                    )));
                }
                *per_sender.entry(a).or_default() += 1;
                fresh.push(b);
            }
            if let Some((&a, &k)) = per_sender.iter().find(|(&a, &k)| k > graph.degree(a)) {
                return Err(Error::Invariant(format!(
                    "round {}: {} sends {k} messages",
                    r + 1,
                    graph.label(a)
                )));
            }
            for b in fresh {
                informed[b] = true;
            }
        }
        if let Some(missing) = informed.iter().position(|&i| !i) {
            return Err(Error::Invariant(format!(
                "{} is never informed",
                graph.label(missing)
            )));
        }
        Ok(())
    }
}

/// BFS-layer schedule: in round `r` every node at distance `r` from the root
/// receives from its lowest-labelled neighbour at distance `r - 1`.
pub fn broadcast_schedule(graph: &Graph, root: &NodeLabel) -> Result<BroadcastSchedule> {
    let r = graph.index_of(root)?;
    let dist = bfs_from(graph.adjacency(), r);
    let ecc = dist.iter().copied().max().unwrap_or(0) as usize;
    let mut rounds = vec![Vec::new(); ecc];
    for v in 0..graph.node_count() {
        if v == r {
            continue;
        }
        let sender = graph
            .neighbors(v)
            .iter()
            .map(|&w| w as usize)
            .find(|&w| dist[w] + 1 == dist[v])
            .expect("connected graph");
        rounds[dist[v] as usize - 1].push((sender, v));
    }
    let rounds = rounds
        .into_iter()
        .map(|mut round| {
            round.sort_unstable();
            round
                .into_iter()
                .map(|(a, b)| (graph.label(a), graph.label(b)))
                .collect()
        })
        .collect();
    Ok(BroadcastSchedule {
        root: root.clone(),
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::TopologySpec;
    use crate::topology::build_graph;

    fn graph(family: Family, n: u32) -> Graph {
        build_graph(&TopologySpec::new(family, n).unwrap()).unwrap()
    }

    fn label(g: &Graph, s: &str) -> NodeLabel {
        g.spec().parse_label(s).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let g = graph(Family::Bvh, 1);
        let t = route_oracle(&g, &label(&g, "0"), &label(&g, "3")).unwrap();
        let hops: Vec<String> = t.hops.iter().map(|l| l.to_string()).collect();
        assert_eq!(hops, ["0", "1", "3"]);

        let g = graph(Family::Bvh, 2);
        let t = route_oracle(&g, &label(&g, "0,0"), &label(&g, "3,3")).unwrap();
        assert_eq!(t.hop_count(), 3);
        t.validate(&g).unwrap();

        let o = g.spec().origin();
        assert_eq!(route_oracle(&g, &o, &o).unwrap().hops, vec![o]);
    }

    #[test]
    fn greedy_examples() {
        let g = graph(Family::Bvh, 1);
        let t = route_greedy(&g, &label(&g, "0"), &label(&g, "3")).unwrap();
        assert_eq!(t.hop_count(), 2);

        let g = graph(Family::Bvh, 2);
        let t = route_greedy(&g, &label(&g, "0,0"), &label(&g, "3,3")).unwrap();
        t.validate(&g).unwrap();
        assert!(t.hop_count() <= 3);

        let u = label(&g, "2,1");
        assert_eq!(route_greedy(&g, &u, &u).unwrap().hop_count(), 0);
    }

    #[test]
    fn greedy_rejects_other_families() {
        let g = graph(Family::Hc, 3);
        let o = g.spec().origin();
        assert!(matches!(
            route_greedy(&g, &o, &o),
            Err(Error::UnsupportedFamily { .. })
        ));
    }

    #[test]
    fn broadcast_rounds() {
        let g = graph(Family::Bvh, 1);
        let s = broadcast_schedule(&g, &g.spec().origin()).unwrap();
        s.validate(&g).unwrap();
        assert_eq!(s.round_count(), 2);

        let g = graph(Family::Bvh, 2);
        let s = broadcast_schedule(&g, &g.spec().origin()).unwrap();
        s.validate(&g).unwrap();
        assert_eq!(s.round_count(), 3);
        assert_eq!(s.rounds[0].len(), 4);

        let g = graph(Family::Hc, 3);
        let s = broadcast_schedule(&g, &g.spec().origin()).unwrap();
        assert_eq!(s.round_count(), 3);
    }

    #[test]
    fn validate_rejects_double_reception() {
        let g = graph(Family::Bvh, 1);
        let mut s = broadcast_schedule(&g, &g.spec().origin()).unwrap();
        let dup = s.rounds[0][0].clone();
        s.rounds[1].push(dup);
        assert!(s.validate(&g).is_err());
    }

    #[test]
    fn stretch_on_bvh2() {
        let g = graph(Family::Bvh, 2);
        let summary = greedy_stretch(&g).unwrap();
        assert_eq!(summary.pairs, 240);
        assert!(summary.max_hops <= summary.diameter as usize + 2);
    }
}
