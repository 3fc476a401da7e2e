use std::io::Write;

use anyhow::{Context, Result};
use bvh_core::comms::{broadcast_schedule, greedy_stretch, route_greedy, route_oracle, RouteTrace};
use bvh_core::metrics::{measure, MetricsRow};
use bvh_core::paths::{classify_paths, max_disjoint_paths};
use bvh_core::reliability::{
    derive_and_evaluate, terminal_reliability, terminal_reliability_curve, time_grid,
};
use bvh_core::topology::{audit_graph_with, BvhCaseTable};
use bvh_core::{build_graph, reference, Family, Graph, NodeLabel, PathClassSet, TopologySpec};
use serde::Serialize;

use crate::args::{
    AuditArgs, BroadcastArgs, BuildArgs, Cli, Command, Format, MetricsArgs, PathsArgs, PolicyArg,
    ReliabilityArgs, RouteArgs, Topology,
};
use crate::output::{fixed, sink, write_csv, write_json};
use crate::{tables, Status, UsageError};

pub fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Build(a) => build(a),
        Command::Audit(a) => audit(a),
        Command::Metrics(a) => metrics(a),
        Command::Tables(a) => tables::run(a),
        Command::Route(a) => route(a),
        Command::Broadcast(a) => broadcast(a),
        Command::Paths(a) => paths(a),
        Command::Reliability(a) => reliability(a),
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Largest dimension for which all-pairs operations are allowed.
pub fn all_pairs_cap(family: Family) -> u32 {
    match family {
        Family::Hc | Family::Vq => 12,
        Family::Bh | Family::Bvh => 6,
    }
}

fn spec(family: Family, dimension: u32) -> Result<TopologySpec> {
    TopologySpec::new(family, dimension).map_err(|e| usage(e.to_string()))
}

fn topology(t: &Topology) -> Result<TopologySpec> {
    spec(t.family.into(), t.dimension)
}

fn capped(spec: TopologySpec) -> Result<TopologySpec> {
    let cap = all_pairs_cap(spec.family());
    if spec.dimension() > cap {
        return Err(usage(format!(
            "{spec}: this operation is limited to n <= {cap} for {}",
            spec.family()
        )));
    }
    Ok(spec)
}

fn graph(spec: &TopologySpec) -> Result<Graph> {
    build_graph(spec).map_err(|e| match e {
        bvh_core::Error::TooLarge { .. } => usage(e.to_string()),
        other => anyhow::Error::new(other).context(format!("building {spec}")),
    })
}

fn label(spec: &TopologySpec, text: Option<&str>, default: NodeLabel) -> Result<NodeLabel> {
    match text {
        Some(t) => spec.parse_label(t).map_err(|e| usage(e.to_string())),
        None => Ok(default),
    }
}

/// `(3,3,0,...,0)` for the quaternary families, all ones for the binary ones.
pub fn default_target(spec: &TopologySpec) -> NodeLabel {
    let n = spec.dimension() as usize;
    let digits: Vec<u8> = match spec.family() {
        Family::Hc | Family::Vq => vec![1; n],
        Family::Bh | Family::Bvh => (0..n).map(|i| if i < 2 { 3 } else { 0 }).collect(),
    };
    spec.label(&digits).expect("default target is well formed")
}

fn no_csv(format: Format, what: &str) -> Result<()> {
    if format == Format::Csv {
        return Err(usage(format!(
            "{what} has no CSV form; use --format plain or json"
        )));
    }
    Ok(())
}

fn build(a: BuildArgs) -> Result<Status> {
    let spec = topology(&a.topology)?;
    let g = graph(&spec)?;
    let mut out = sink(a.out.as_deref())?;
    out.write_all(g.to_json().as_bytes())?;
    out.flush()?;
    eprintln!("{spec}: {} nodes, {} edges", g.node_count(), g.edge_count());
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct AuditRow {
    node: String,
    degree: u32,
    partners: String,
}

fn audit(a: AuditArgs) -> Result<Status> {
    let spec = topology(&a.topology)?;
    graph(&spec)?;
    let table = if a.as_printed {
        BvhCaseTable::AsPrinted
    } else {
        BvhCaseTable::Corrected
    };
    let report = audit_graph_with(&spec, table)?;
    let mut out = sink(a.common.out.as_deref())?;
    match a.common.format {
        Format::Json => write_json(&mut out, &report)?,
        Format::Csv => {
            let rows: Vec<AuditRow> = report
                .matching_pairs
                .iter()
                .zip(&report.degrees)
                .map(|(entry, &degree)| AuditRow {
                    node: entry.node.to_string(),
                    degree,
                    partners: join(&entry.partners, " "),
                })
                .collect();
            write_csv(&mut out, &rows)?;
        }
        Format::Plain => {
            writeln!(out, "{spec} adjacency audit")?;
            writeln!(out, "  expected degree: {}", report.expected_degree)?;
            writeln!(
                out,
                "  degree violations: {}",
                report.degree_violations.len()
            )?;
            for v in &report.degree_violations {
                writeln!(out, "    ({}) has degree {}", v.node, v.degree)?;
            }
            writeln!(
                out,
                "  one-directional emissions repaired by closure: {}",
                report.closure_repairs()
            )?;
            for (u, v) in &report.asymmetric_pairs {
                writeln!(out, "    ({u}) lists ({v}), not the reverse")?;
            }
            writeln!(out, "  duplicate emissions: {}", report.duplicate_emissions)?;
            writeln!(
                out,
                "  nodes with an identical-neighbourhood partner: {} of {}",
                report.matched_node_count(),
                report.matching_pairs.len()
            )?;
            writeln!(out, "  matching pairs:")?;
            for entry in &report.matching_pairs {
                let partners = if entry.partners.is_empty() {
                    "(none)".to_string()
                } else {
                    join(&entry.partners, " ")
                };
                writeln!(out, "    ({}) -> {partners}", entry.node)?;
            }
        }
    }
    out.flush()?;
    Ok(Status::Ok)
}

fn join(labels: &[NodeLabel], sep: &str) -> String {
    labels
        .iter()
        .map(|l| format!("({l})"))
        .collect::<Vec<_>>()
        .join(sep)
}

fn metrics(a: MetricsArgs) -> Result<Status> {
    let family: Family = a.family.into();
    let specs = a
        .dimensions
        .iter()
        .map(|&n| spec(family, n).and_then(capped))
        .collect::<Result<Vec<_>>>()?;
    let reports = specs
        .iter()
        .map(|s| Ok(measure(&graph(s)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = sink(a.common.out.as_deref())?;
    match a.common.format {
        Format::Json => write_json(&mut out, &reports)?,
        Format::Csv => {
            let rows: Vec<MetricsRow> = reports.iter().map(MetricsRow::from).collect();
            write_csv(&mut out, &rows)?;
        }
        Format::Plain => {
            for r in &reports {
                let m = &r.measured;
                let c = &r.closed_form;
                let opt = |x: Option<u64>| x.map_or("-".to_string(), |v| v.to_string());
                writeln!(out, "{}_{}", r.family, r.dimension)?;
                writeln!(
                    out,
                    "  nodes            {:>10}  closed form {}",
                    m.node_count, c.node_count
                )?;
                writeln!(
                    out,
                    "  edges            {:>10}  closed form {}",
                    m.edge_count, c.edge_count
                )?;
                writeln!(
                    out,
                    "  degree           {:>10}  closed form {}",
                    m.degree_max, c.degree
                )?;
                writeln!(
                    out,
                    "  diameter         {:>10}  closed form {}",
                    m.diameter,
                    opt(c.diameter.map(u64::from))
                )?;
                writeln!(
                    out,
                    "  cost             {:>10}  closed form {}",
                    m.cost,
                    opt(c.cost)
                )?;
                writeln!(
                    out,
                    "  avg distance     {:>10}  (from origin, self included)",
                    fixed(m.avg_distance_from_origin)
                )?;
                writeln!(
                    out,
                    "  avg distance     {:>10}  (all ordered pairs u != v)",
                    fixed(m.avg_distance_all_pairs)
                )?;
                writeln!(out, "  traffic density  {:>10}", fixed(m.traffic_density))?;
                writeln!(out, "  distance-uniform {:>10}", m.distance_uniform)?;
                for d in r.deviations() {
                    writeln!(out, "  deviation: {d}")?;
                }
            }
        }
    }
    out.flush()?;
    Ok(Status::Ok)
}

fn route(a: RouteArgs) -> Result<Status> {
    let spec = topology(&a.topology)?;
    let g = graph(&spec)?;
    let mut out = sink(a.common.out.as_deref())?;
    if a.stretch {
        capped(spec)?;
        no_csv(a.common.format, "stretch summary")?;
        let summary = greedy_stretch(&g)?;
        match a.common.format {
            Format::Json => write_json(&mut out, &summary)?,
            _ => {
                writeln!(
                    out,
                    "{spec}: greedy vs shortest path over {} ordered pairs",
                    summary.pairs
                )?;
                for (extra, count) in &summary.excess_hops {
                    writeln!(out, "  +{extra} hops: {count}")?;
                }
                writeln!(out, "  max stretch ratio: {:.3}", summary.max_ratio)?;
                writeln!(
                    out,
                    "  longest greedy route: {} hops (diameter {}, bound {})",
                    summary.max_hops,
                    summary.diameter,
                    summary.diameter + 2
                )?;
            }
        }
        out.flush()?;
        return Ok(Status::Ok);
    }
    let u = label(&spec, a.source.as_deref(), spec.origin())?;
    let v = label(&spec, a.target.as_deref(), default_target(&spec))?;
    let mut traces: Vec<RouteTrace> = Vec::new();
    if matches!(a.policy, PolicyArg::Greedy | PolicyArg::Both) {
        if spec.family() != Family::Bvh && a.policy == PolicyArg::Greedy {
            return Err(usage("greedy routing is defined for --family bvh only"));
        }
        if spec.family() == Family::Bvh {
            traces.push(route_greedy(&g, &u, &v)?);
        }
    }
    if matches!(a.policy, PolicyArg::Oracle | PolicyArg::Both) {
        traces.push(route_oracle(&g, &u, &v)?);
    }
    match a.common.format {
        Format::Json => write_json(&mut out, &traces)?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                policy: String,
                hop: usize,
                node: String,
            }
            let rows: Vec<Row> = traces
                .iter()
                .flat_map(|t| {
                    t.hops.iter().enumerate().map(move |(i, l)| Row {
                        policy: format!("{:?}", t.policy).to_lowercase(),
                        hop: i,
                        node: l.to_string(),
                    })
                })
                .collect();
            write_csv(&mut out, &rows)?;
        }
        Format::Plain => {
            for t in &traces {
                writeln!(
                    out,
                    "{:<6} {} ({} hops)",
                    format!("{:?}", t.policy).to_lowercase(),
                    join(&t.hops, " -> "),
                    t.hop_count()
                )?;
            }
        }
    }
    out.flush()?;
    Ok(Status::Ok)
}

fn broadcast(a: BroadcastArgs) -> Result<Status> {
    let spec = topology(&a.topology)?;
    let g = graph(&spec)?;
    let root = label(&spec, a.root.as_deref(), spec.origin())?;
    let schedule = broadcast_schedule(&g, &root)?;
    schedule.validate(&g).context("schedule invariants")?;
    let mut out = sink(a.common.out.as_deref())?;
    match a.common.format {
        Format::Json => write_json(&mut out, &schedule)?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                round: usize,
                sender: String,
                receiver: String,
            }
            let rows: Vec<Row> = schedule
                .rounds
                .iter()
                .enumerate()
                .flat_map(|(r, round)| {
                    round.iter().map(move |(s, t)| Row {
                        round: r + 1,
                        sender: s.to_string(),
                        receiver: t.to_string(),
                    })
                })
                .collect();
            write_csv(&mut out, &rows)?;
        }
        Format::Plain => {
            writeln!(
                out,
                "{spec} broadcast from ({root}): {} rounds",
                schedule.round_count()
            )?;
            for (r, round) in schedule.rounds.iter().enumerate() {
                writeln!(out, "  round {}:", r + 1)?;
                let mut senders: Vec<&NodeLabel> = round.iter().map(|(s, _)| s).collect();
                senders.dedup();
                for sender in senders {
                    let receivers: Vec<NodeLabel> = round
                        .iter()
                        .filter(|(s, _)| s == sender)
                        .map(|(_, t)| t.clone())
                        .collect();
                    writeln!(out, "    ({sender}) -> {}", join(&receivers, " "))?;
                }
            }
        }
    }
    out.flush()?;
    Ok(Status::Ok)
}

fn paths(a: PathsArgs) -> Result<Status> {
    let spec = topology(&a.topology)?;
    let g = graph(&spec)?;
    let s = label(&spec, a.source.as_deref(), spec.origin())?;
    let t = label(&spec, a.target.as_deref(), default_target(&spec))?;
    if s == t {
        return Err(usage("source and target must differ"));
    }
    let set = max_disjoint_paths(&g, &s, &t)?;
    set.validate(&g).context("path set invariants")?;
    let classes = classify_paths(&set);
    let mut out = sink(a.common.out.as_deref())?;
    match a.common.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                paths: Vec<Vec<&'a [u8]>>,
                classes: &'a PathClassSet,
            }
            let doc = Doc {
                paths: set
                    .paths
                    .iter()
                    .map(|p| p.iter().map(|l| l.digits()).collect())
                    .collect(),
                classes: &classes,
            };
            write_json(&mut out, &doc)?;
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                path: usize,
                links: usize,
                nodes: String,
            }
            let rows: Vec<Row> = set
                .paths
                .iter()
                .enumerate()
                .map(|(i, p)| Row {
                    path: i + 1,
                    links: p.len() - 1,
                    nodes: join(p, "-"),
                })
                .collect();
            write_csv(&mut out, &rows)?;
        }
        Format::Plain => {
            writeln!(
                out,
                "{spec}: {} vertex-disjoint paths ({s}) to ({t})",
                set.len()
            )?;
            for (i, p) in set.paths.iter().enumerate() {
                writeln!(
                    out,
                    "  path {} ({} links): {}",
                    i + 1,
                    p.len() - 1,
                    join(p, "-")
                )?;
            }
            writeln!(out, "  classes: {}", describe(&classes))?;
        }
    }
    out.flush()?;
    Ok(Status::Ok)
}

pub fn describe(classes: &PathClassSet) -> String {
    classes
        .classes
        .iter()
        .map(|c| {
            format!(
                "{}x({} links, {} processors)",
                c.count, c.links, c.processors
            )
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn published_classes(spec: &TopologySpec) -> Option<PathClassSet> {
    match (spec.family(), spec.dimension()) {
        (Family::Bvh, 2) => Some(reference::bvh2_path_classes()),
        (Family::Bvh, 3) => Some(reference::bvh3_path_classes()),
        _ => None,
    }
}

fn reliability(a: ReliabilityArgs) -> Result<Status> {
    let spec = topology(&a.topology)?;
    let published = published_classes(&spec);
    if a.paper_classes && published.is_none() {
        return Err(usage(
            "published path classes exist for --family bvh --dim 2 or 3 only",
        ));
    }
    for (name, p) in [("--rl", a.rl), ("--rp", a.rp)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(usage(format!("{name} must lie in [0, 1]")));
        }
    }
    let computed = if a.paper_classes {
        None
    } else {
        let g = graph(&spec)?;
        let s = label(&spec, a.source.as_deref(), spec.origin())?;
        let t = label(&spec, a.target.as_deref(), default_target(&spec))?;
        if s == t {
            return Err(usage("source and target must differ"));
        }
        Some(derive_and_evaluate(&g, &s, &t, a.rl, a.rp)?.classes)
    };
    let mut columns: Vec<(&str, PathClassSet)> = Vec::new();
    if let Some(c) = computed {
        columns.push(("computed", c));
    }
    if let Some(p) = published {
        if a.paper_classes || columns.is_empty() || a.source.is_none() && a.target.is_none() {
            columns.push(("published", p));
        }
    }
    let mut out = sink(a.common.out.as_deref())?;

    if a.curve {
        let times = time_grid(a.t_max, a.t_step).map_err(|e| usage(e.to_string()))?;
        let curves = columns
            .iter()
            .map(|(_, c)| terminal_reliability_curve(c, a.lambda_link, a.lambda_proc, &times))
            .collect::<bvh_core::Result<Vec<_>>>()
            .map_err(|e| usage(e.to_string()))?;
        no_csv_plain_as_csv(&mut out, &columns, &curves, &times, a.common.format)?;
        out.flush()?;
        return Ok(Status::Ok);
    }

    let values = columns
        .iter()
        .map(|(_, c)| terminal_reliability(c, a.rl, a.rp))
        .collect::<bvh_core::Result<Vec<_>>>()?;
    match a.common.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Entry<'a> {
                basis: &'a str,
                classes: &'a PathClassSet,
                r_link: f64,
                r_proc: f64,
                terminal_reliability: f64,
            }
            let entries: Vec<Entry> = columns
                .iter()
                .zip(&values)
                .map(|((basis, classes), &v)| Entry {
                    basis,
                    classes,
                    r_link: a.rl,
                    r_proc: a.rp,
                    terminal_reliability: v,
                })
                .collect();
            write_json(&mut out, &entries)?;
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                basis: &'a str,
                classes: String,
                r_link: f64,
                r_proc: f64,
                terminal_reliability: String,
            }
            let rows: Vec<Row> = columns
                .iter()
                .zip(&values)
                .map(|((basis, classes), &v)| Row {
                    basis,
                    classes: describe(classes),
                    r_link: a.rl,
                    r_proc: a.rp,
                    terminal_reliability: fixed(v),
                })
                .collect();
            write_csv(&mut out, &rows)?;
        }
        Format::Plain => {
            if a.paper_classes {
                writeln!(out, "{:.4}", values[0])?;
            } else {
                for ((basis, classes), v) in columns.iter().zip(&values) {
                    writeln!(out, "{basis:<9} TR = {v:.4}  [{}]", describe(classes))?;
                }
            }
        }
    }
    out.flush()?;
    Ok(Status::Ok)
}

fn no_csv_plain_as_csv(
    out: &mut dyn Write,
    columns: &[(&str, PathClassSet)],
    curves: &[Vec<(f64, f64)>],
    times: &[f64],
    format: Format,
) -> Result<()> {
    if format == Format::Json {
        #[derive(Serialize)]
        struct Curve<'a> {
            basis: &'a str,
            points: &'a [(f64, f64)],
        }
        let docs: Vec<Curve> = columns
            .iter()
            .zip(curves)
            .map(|((basis, _), points)| Curve { basis, points })
            .collect();
        return write_json(out, &docs);
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t_hours".to_string()];
    header.extend(columns.iter().map(|(b, _)| format!("tr_{b}")));
    w.write_record(&header)?;
    for (i, t) in times.iter().enumerate() {
        let mut record = vec![format!("{t}")];
        record.extend(curves.iter().map(|c| fixed(c[i].1)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
