//! Distance metrics by BFS, closed forms, and the cost-effectiveness factors.
//!
//! Average distance follows the from-origin convention: the mean BFS distance
//! from the all-zeros node over all `|V|` nodes, the zero self-distance
//! included. The all-pairs variant averages over ordered pairs `u != v`.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::label::{Family, NodeLabel, TopologySpec};
use crate::topology::Graph;

/// Tolerance for comparing averages that should agree exactly.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Hop distances from one source, indexed by node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distances {
    source: usize,
    dist: Vec<u32>,
}

impl Distances {
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn get(&self, node: usize) -> u32 {
        self.dist[node]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.dist
    }

    pub fn eccentricity(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.dist.iter().map(|&d| u64::from(d)).sum()
    }

    /// `(label, distance)` pairs in node order.
    pub fn to_map(&self, graph: &Graph) -> BTreeMap<NodeLabel, u32> {
        self.dist
            .iter()
            .enumerate()
            .map(|(i, &d)| (graph.label(i), d))
            .collect()
    }
}

pub(crate) fn bfs_from(adjacency: &[Vec<u32>], source: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; adjacency.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &v in &adjacency[u] {
            let v = v as usize;
            if dist[v] == u32::MAX {
                dist[v] = next;
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn bfs_distances(graph: &Graph, source: &NodeLabel) -> Result<Distances> {
    let source = graph.index_of(source)?;
    Ok(bfs_index(graph, source))
}

pub(crate) fn bfs_index(graph: &Graph, source: usize) -> Distances {
    let dist = bfs_from(graph.adjacency(), source);
    debug_assert!(dist.iter().all(|&d| d != u32::MAX), "graph is connected");
    Distances { source, dist }
}

/// Per-source summary: eccentricity, distance sum and distance histogram.
#[derive(Clone, Debug, PartialEq, Eq)]
struct SourceProfile {
    eccentricity: u32,
    total: u64,
    histogram: Vec<u64>,
}

fn profile(graph: &Graph, source: usize) -> SourceProfile {
    let dist = bfs_from(graph.adjacency(), source);
    let eccentricity = dist.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0u64; eccentricity as usize + 1];
    for &d in &dist {
        histogram[d as usize] += 1;
    }
    SourceProfile {
        eccentricity,
        total: dist.iter().map(|&d| u64::from(d)).sum(),
        histogram,
    }
}

/// All-pairs BFS, parallel over sources, collected in node order.
#[derive(Clone, Debug)]
pub struct AllPairsSummary {
    profiles: Vec<SourceProfile>,
}

impl AllPairsSummary {
    pub fn compute(graph: &Graph) -> Self {
        let profiles = (0..graph.node_count())
            .into_par_iter()
            .map(|s| profile(graph, s))
            .collect();
        Self { profiles }
    }

    pub fn diameter(&self) -> u32 {
        self.profiles
            .iter()
            .map(|p| p.eccentricity)
            .max()
            .unwrap_or(0)
    }

    pub fn eccentricity(&self, node: usize) -> u32 {
        self.profiles[node].eccentricity
    }

    /// Mean over ordered pairs `u != v`.
    pub fn average_distance(&self) -> f64 {
        let n = self.profiles.len() as u64;
        if n < 2 {
            return 0.0;
        }
        let total: u64 = self.profiles.iter().map(|p| p.total).sum();
        total as f64 / (n * (n - 1)) as f64
    }

    /// Every node sees the same distance distribution. Necessary for vertex
    /// transitivity; when it holds the from-origin and all-pairs conventions
    /// differ only by the self-distance term.
    pub fn distance_uniform(&self) -> bool {
        self.profiles
            .windows(2)
            .all(|w| w[0].histogram == w[1].histogram)
    }
}

pub fn diameter(graph: &Graph) -> u32 {
    AllPairsSummary::compute(graph).diameter()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AverageMode {
    FromOrigin,
    AllPairs,
}

pub fn average_distance(graph: &Graph, mode: AverageMode) -> f64 {
    match mode {
        AverageMode::FromOrigin => {
            let d = bfs_index(graph, 0);
            d.total() as f64 / graph.node_count() as f64
        }
        AverageMode::AllPairs => AllPairsSummary::compute(graph).average_distance(),
    }
}

/// `d_avg * |V| / |E|` with the from-origin average.
pub fn traffic_density(graph: &Graph) -> f64 {
    let avg = average_distance(graph, AverageMode::FromOrigin);
    avg * graph.node_count() as f64 / graph.edge_count() as f64
}

pub fn max_degree(graph: &Graph) -> u32 {
    (0..graph.node_count())
        .map(|u| graph.degree(u) as u32)
        .max()
        .unwrap_or(0)
}

/// Maximum degree times diameter.
pub fn cost(graph: &Graph) -> u64 {
    u64::from(max_degree(graph)) * u64::from(diameter(graph))
}

fn check_cef_args(n: u32, rho: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!("rho must be positive, got {rho}")));
    }
    Ok(())
}

/// Cost-effectiveness factor `1 / (1 + rho * n)`.
pub fn cef(n: u32, rho: f64) -> Result<f64> {
    check_cef_args(n, rho)?;
    Ok(1.0 / (1.0 + rho * f64::from(n)))
}

/// Time-cost-effectiveness factor `2 / (1 + rho * n + 2^(-2n))`, with unit
/// penalty ratio.
pub fn tcef(n: u32, rho: f64) -> Result<f64> {
    check_cef_args(n, rho)?;
    let p = 4f64.powi(n as i32);
    Ok(2.0 / (1.0 + rho * f64::from(n) + 1.0 / p))
}

/// Inputs to the cost-effectiveness model for BVH: `p = 4^n`, `g(p) = n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CefTcefParams {
    pub rho: f64,
    pub sigma: f64,
    pub processors: u64,
    pub dimension: u32,
    pub links_per_processor: f64,
}

impl CefTcefParams {
    pub fn for_bvh(n: u32, rho: f64) -> Result<Self> {
        check_cef_args(n, rho)?;
        let spec = TopologySpec::new(Family::Bvh, n)?;
        Ok(Self {
            rho,
            sigma: 1.0,
            processors: spec.node_count(),
            dimension: n,
            links_per_processor: spec.expected_edge_count() as f64 / spec.node_count() as f64,
        })
    }

    pub fn cef(&self) -> f64 {
        1.0 / (1.0 + self.rho * self.links_per_processor)
    }

    pub fn tcef(&self) -> f64 {
        (1.0 + self.sigma)
            / (1.0 + self.rho * self.links_per_processor + self.sigma / self.processors as f64)
    }
}

/// Diameter closed form used for BVH: `n + floor(n/2)` for `n > 1`, 2 for `n = 1`.
pub fn bvh_diameter_closed_form(n: u32) -> u32 {
    if n == 1 {
        2
    } else {
        n + n / 2
    }
}

/// Closed-form values; `None` where no reusable formula exists for the family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    pub degree: u32,
    pub node_count: u64,
    pub edge_count: u64,
    pub diameter: Option<u32>,
    pub cost: Option<u64>,
}

pub fn closed_form_report(spec: &TopologySpec) -> ClosedForm {
    let n = spec.dimension();
    let degree = spec.expected_degree();
    let diameter = match spec.family() {
        Family::Hc => Some(n),
        Family::Bvh => Some(bvh_diameter_closed_form(n)),
        Family::Vq | Family::Bh => None,
    };
    ClosedForm {
        degree,
        node_count: spec.node_count(),
        edge_count: spec.expected_edge_count(),
        diameter,
        cost: diameter.map(|d| u64::from(degree) * u64::from(d)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Measured {
    pub degree_min: u32,
    pub degree_max: u32,
    pub node_count: u64,
    pub edge_count: u64,
    pub diameter: u32,
    pub avg_distance_from_origin: f64,
    pub avg_distance_all_pairs: f64,
    pub traffic_density: f64,
    pub cost: u64,
    /// Every node has the same distance distribution.
    pub distance_uniform: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub degree: bool,
    pub node_count: bool,
    pub edge_count: bool,
    pub diameter: Option<bool>,
    pub cost: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsReport {
    pub family: Family,
    pub dimension: u32,
    pub measured: Measured,
    pub closed_form: ClosedForm,
    pub agreement: Agreement,
}

impl MetricsReport {
    /// Human-readable lines for every field where measurement and closed form disagree.
    pub fn deviations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let m = &self.measured;
        let c = &self.closed_form;
        let tag = format!("{}_{}", self.family, self.dimension);
        if !self.agreement.degree {
            out.push(format!(
                "{tag}: degree {}..{} vs closed form {}",
                m.degree_min, m.degree_max, c.degree
            ));
        }
        if !self.agreement.node_count {
            out.push(format!(
                "{tag}: {} nodes vs closed form {}",
                m.node_count, c.node_count
            ));
        }
        if !self.agreement.edge_count {
            out.push(format!(
                "{tag}: {} edges vs closed form {}",
                m.edge_count, c.edge_count
            ));
        }
        if let (Some(false), Some(d)) = (self.agreement.diameter, c.diameter) {
            out.push(format!(
                "{tag}: BFS diameter {} vs closed form {d}",
                m.diameter
            ));
        }
        if let (Some(false), Some(k)) = (self.agreement.cost, c.cost) {
            out.push(format!(
                "{tag}: measured cost {} vs closed form {k}",
                m.cost
            ));
        }
        out
    }
}

/// Measures every metric by BFS and compares with the closed forms.
/// Runs all-pairs BFS, so callers should cap the graph size.
pub fn measure(graph: &Graph) -> MetricsReport {
    let spec = *graph.spec();
    let all_pairs = AllPairsSummary::compute(graph);
    let degrees = (0..graph.node_count()).map(|u| graph.degree(u) as u32);
    let degree_min = degrees.clone().min().unwrap_or(0);
    let degree_max = degrees.max().unwrap_or(0);
    let diameter = all_pairs.diameter();
    let avg_origin = average_distance(graph, AverageMode::FromOrigin);
    let node_count = graph.node_count() as u64;
    let edge_count = graph.edge_count() as u64;
    let measured = Measured {
        degree_min,
        degree_max,
        node_count,
        edge_count,
        diameter,
        avg_distance_from_origin: avg_origin,
        avg_distance_all_pairs: all_pairs.average_distance(),
        traffic_density: avg_origin * node_count as f64 / edge_count as f64,
        cost: u64::from(degree_max) * u64::from(diameter),
        distance_uniform: all_pairs.distance_uniform(),
    };
    let closed_form = closed_form_report(&spec);
    let agreement = Agreement {
        degree: degree_min == closed_form.degree && degree_max == closed_form.degree,
        node_count: node_count == closed_form.node_count,
        edge_count: edge_count == closed_form.edge_count,
        diameter: closed_form.diameter.map(|d| d == diameter),
        cost: closed_form.cost.map(|c| c == measured.cost),
    };
    MetricsReport {
        family: spec.family(),
        dimension: spec.dimension(),
        measured,
        closed_form,
        agreement,
    }
}

/// One CSV row per `(family, n)`.
#[derive(Clone, Debug, Serialize)]
pub struct MetricsRow {
    pub family: Family,
    pub n: u32,
    pub nodes: u64,
    pub edges: u64,
    pub degree: u32,
    pub diameter: u32,
    pub diameter_closed_form: Option<u32>,
    pub avg_distance: String,
    pub avg_distance_all_pairs: String,
    pub traffic_density: String,
    pub cost: u64,
    pub cost_closed_form: Option<u64>,
}

impl From<&MetricsReport> for MetricsRow {
    fn from(r: &MetricsReport) -> Self {
        Self {
            family: r.family,
            n: r.dimension,
            nodes: r.measured.node_count,
            edges: r.measured.edge_count,
            degree: r.measured.degree_max,
            diameter: r.measured.diameter,
            diameter_closed_form: r.closed_form.diameter,
            avg_distance: format!("{:.6}", r.measured.avg_distance_from_origin),
            avg_distance_all_pairs: format!("{:.6}", r.measured.avg_distance_all_pairs),
            traffic_density: format!("{:.6}", r.measured.traffic_density),
            cost: r.measured.cost,
            cost_closed_form: r.closed_form.cost,
        }
    }
}
