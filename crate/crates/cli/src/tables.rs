//! Comparison tables and figure data, with a cell-by-cell diff against the
//! embedded published values.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use bvh_core::metrics::{
    average_distance, bvh_diameter_closed_form, cef, diameter, max_degree, tcef, AverageMode,
    FLOAT_TOLERANCE,
};
use bvh_core::reliability::{
    derive_and_evaluate, terminal_reliability_curve, time_grid, DEFAULT_LINK_FAILURE_RATE,
    DEFAULT_LINK_RELIABILITY, DEFAULT_PROCESSOR_FAILURE_RATE, DEFAULT_PROCESSOR_RELIABILITY,
};
use bvh_core::{build_graph, reference, Family, PathClassSet, TopologySpec};
use serde::Serialize;

use crate::args::{TableKind, TablesArgs};
use crate::commands::{all_pairs_cap, default_target};
use crate::output::{fixed, sink, write_csv};
use crate::{Status, UsageError};

const DIMENSIONS: std::ops::RangeInclusive<u32> = 1..=6;

#[derive(Debug, Serialize)]
struct DiffCell {
    table: &'static str,
    row: String,
    column: String,
    computed: String,
    published: String,
    tolerance: f64,
    verdict: &'static str,
}

#[derive(Default)]
struct Diff {
    cells: Vec<DiffCell>,
}

impl Diff {
    fn check(
        &mut self,
        table: &'static str,
        row: String,
        column: String,
        computed: f64,
        published: f64,
        tol: f64,
    ) {
        let pass = (computed - published).abs() <= tol;
        self.cells.push(DiffCell {
            table,
            row,
            column,
            computed: fixed(computed),
            published: format!("{published}"),
            tolerance: tol,
            verdict: if pass { "PASS" } else { "FAIL" },
        });
    }

    fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.verdict == "FAIL").count()
    }
}

/// A rendered CSV, kept in memory so it can go to stdout or a directory.
struct Table {
    file: &'static str,
    body: Vec<u8>,
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    Ok(buf)
}

pub fn run(a: TablesArgs) -> Result<Status> {
    if a.table == TableKind::All && a.out_dir.is_none() {
        return Err(UsageError("--table all writes several files; pass --out-dir".into()).into());
    }
    let rho_cols: Vec<(usize, f64)> = match a.rho {
        None => reference::RHO_GRID.iter().copied().enumerate().collect(),
        Some(r) => {
            let col = reference::RHO_GRID
                .iter()
                .position(|&g| (g - r).abs() < FLOAT_TOLERANCE)
                .ok_or_else(|| {
                    UsageError(format!("--rho must be one of {:?}", reference::RHO_GRID))
                })?;
            vec![(col, r)]
        }
    };
    let times = time_grid(a.t_max, a.t_step).map_err(|e| UsageError(e.to_string()))?;

    let wants = |k: TableKind| a.table == TableKind::All || a.table == k;
    let mut diff = Diff::default();
    let mut tables = Vec::new();
    if wants(TableKind::AvgDistance) {
        tables.push(avg_distance(&mut diff)?);
    }
    if wants(TableKind::Cef) {
        tables.push(grid(
            "cef.csv",
            "CEF",
            &rho_cols,
            cef,
            &reference::CEF,
            reference::CEF_TOLERANCE,
            &mut diff,
        )?);
    }
    if wants(TableKind::Tcef) {
        tables.push(grid(
            "tcef.csv",
            "TCEF",
            &rho_cols,
            tcef,
            &reference::TCEF,
            reference::TCEF_TOLERANCE,
            &mut diff,
        )?);
    }
    if wants(TableKind::Diameter) || wants(TableKind::Cost) {
        let (d, c) = diameter_and_cost()?;
        if wants(TableKind::Diameter) {
            tables.push(d);
        }
        if wants(TableKind::Cost) {
            tables.push(c);
        }
    }
    if wants(TableKind::Reliability) {
        tables.push(reliability(&times)?);
    }

    match &a.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for t in &tables {
                write_file(&dir.join(t.file), &t.body)?;
            }
            if !a.no_diff && !diff.cells.is_empty() {
                write_file(&dir.join("diff.csv"), &csv_bytes(&diff.cells)?)?;
            }
        }
        None => {
            let mut out = sink(None)?;
            for t in &tables {
                out.write_all(&t.body)?;
            }
            out.flush()?;
        }
    }

    if a.no_diff || diff.cells.is_empty() {
        return Ok(Status::Ok);
    }
    let mut err = std::io::stderr().lock();
    for c in &diff.cells {
        writeln!(
            err,
            "[{}] {} {} {}: computed {} published {} (tol {})",
            c.verdict, c.table, c.row, c.column, c.computed, c.published, c.tolerance
        )?;
    }
    let failed = diff.failures();
    writeln!(
        err,
        "{} of {} cells within tolerance",
        diff.cells.len() - failed,
        diff.cells.len()
    )?;
    Ok(if failed == 0 {
        Status::Ok
    } else {
        Status::Mismatch
    })
}

fn write_file(path: &Path, body: &[u8]) -> Result<()> {
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn graph(family: Family, n: u32) -> Result<bvh_core::Graph> {
    let spec = TopologySpec::new(family, n)?;
    Ok(build_graph(&spec)?)
}

fn avg_distance(diff: &mut Diff) -> Result<Table> {
    #[derive(Serialize)]
    struct Row {
        n: u32,
        hc: String,
        bh: String,
        bvh: String,
    }
    let mut rows = Vec::new();
    for &(n, hc_pub, bh_pub, bvh_pub) in &reference::AVERAGE_DISTANCE {
        let measured = [Family::Hc, Family::Bh, Family::Bvh]
            .map(|f| graph(f, n).map(|g| average_distance(&g, AverageMode::FromOrigin)));
        let [hc, bh, bvh] = measured;
        let (hc, bh, bvh) = (hc?, bh?, bvh?);
        let row = format!("n={n}");
        diff.check(
            "avg_distance",
            row.clone(),
            "hc".into(),
            hc,
            hc_pub,
            FLOAT_TOLERANCE,
        );
        diff.check(
            "avg_distance",
            row.clone(),
            "bh".into(),
            bh,
            bh_pub,
            reference::AVERAGE_DISTANCE_TOLERANCE,
        );
        diff.check(
            "avg_distance",
            row,
            "bvh".into(),
            bvh,
            bvh_pub,
            reference::AVERAGE_DISTANCE_TOLERANCE,
        );
        rows.push(Row {
            n,
            hc: fixed(hc),
            bh: fixed(bh),
            bvh: fixed(bvh),
        });
    }
    Ok(Table {
        file: "avg_distance.csv",
        body: csv_bytes(&rows)?,
    })
}

fn grid(
    file: &'static str,
    name: &'static str,
    cols: &[(usize, f64)],
    f: fn(u32, f64) -> bvh_core::Result<f64>,
    published: &[[f64; 3]; 6],
    tol: f64,
    diff: &mut Diff,
) -> Result<Table> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["dimension".to_string(), "nodes".to_string()];
    header.extend(cols.iter().map(|(_, r)| format!("rho_{r}")));
    w.write_record(&header)?;
    for (row, n) in DIMENSIONS.enumerate() {
        let nodes = TopologySpec::new(Family::Bvh, n)?.node_count();
        let mut record = vec![n.to_string(), nodes.to_string()];
        for &(col, rho) in cols {
            let v = f(n, rho)?;
            diff.check(
                name_of(name),
                format!("n={n}"),
                format!("rho={rho}"),
                v,
                published[row][col],
                tol,
            );
            record.push(fixed(v));
        }
        w.write_record(&record)?;
    }
    Ok(Table {
        file,
        body: w.into_inner().map_err(|e| e.into_error())?,
    })
}

fn name_of(name: &'static str) -> &'static str {
    match name {
        "CEF" => "cef",
        _ => "tcef",
    }
}

fn diameter_and_cost() -> Result<(Table, Table)> {
    #[derive(Serialize)]
    struct Row {
        n: u32,
        hc: Option<u64>,
        vq: Option<u64>,
        bh: Option<u64>,
        bvh: Option<u64>,
        bvh_closed_form: u64,
    }
    let mut diameters = Vec::new();
    let mut costs = Vec::new();
    for n in DIMENSIONS {
        let mut d = [None; 4];
        let mut c = [None; 4];
        for (i, family) in Family::ALL.into_iter().enumerate() {
            if n > all_pairs_cap(family) {
                continue;
            }
            let g = graph(family, n)?;
            let diam = u64::from(diameter(&g));
            d[i] = Some(diam);
            c[i] = Some(u64::from(max_degree(&g)) * diam);
        }
        let closed = u64::from(bvh_diameter_closed_form(n));
        diameters.push(Row {
            n,
            hc: d[0],
            vq: d[1],
            bh: d[2],
            bvh: d[3],
            bvh_closed_form: closed,
        });
        costs.push(Row {
            n,
            hc: c[0],
            vq: c[1],
            bh: c[2],
            bvh: c[3],
            bvh_closed_form: 2 * u64::from(n) * closed,
        });
    }
    Ok((
        Table {
            file: "diameter.csv",
            body: csv_bytes(&diameters)?,
        },
        Table {
            file: "cost.csv",
            body: csv_bytes(&costs)?,
        },
    ))
}

/// TR(t) for the three 64-node networks, between the origin and the default
/// far node, plus the hand-listed BVH_3 classes.
fn reliability(times: &[f64]) -> Result<Table> {
    let mut columns: Vec<(String, PathClassSet)> = Vec::new();
    for (family, n) in [(Family::Hc, 6), (Family::Bh, 3), (Family::Bvh, 3)] {
        let spec = TopologySpec::new(family, n)?;
        let g = build_graph(&spec)?;
        let derived = derive_and_evaluate(
            &g,
            &spec.origin(),
            &default_target(&spec),
            DEFAULT_LINK_RELIABILITY,
            DEFAULT_PROCESSOR_RELIABILITY,
        )?;
        columns.push((format!("{}_{n}", family.as_str()), derived.classes));
    }
    columns.push(("bvh_3_published".into(), reference::bvh3_path_classes()));

    let curves = columns
        .iter()
        .map(|(_, c)| {
            terminal_reliability_curve(
                c,
                DEFAULT_LINK_FAILURE_RATE,
                DEFAULT_PROCESSOR_FAILURE_RATE,
                times,
            )
        })
        .collect::<bvh_core::Result<Vec<_>>>()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t_hours".to_string()];
    header.extend(columns.iter().map(|(name, _)| name.clone()));
    w.write_record(&header)?;
    for (i, t) in times.iter().enumerate() {
        let mut record = vec![format!("{t}")];
        record.extend(curves.iter().map(|c| fixed(c[i].1)));
        w.write_record(&record)?;
    }
    Ok(Table {
        file: "reliability.csv",
        body: w.into_inner().map_err(|e| e.into_error())?,
    })
}
