//! Terminal reliability over classes of vertex-disjoint paths, and its
//! evolution in time under exponential component lifetimes.
//!
//! With `k` paths of `m` links and `p` intermediate processors per class,
//! `TR = 1 - prod (1 - r_link^m * r_proc^p)^k`. Endpoints are not counted as
//! processors. Paths are treated as independent parallel routes, so the value
//! is a lower bound on exact two-terminal reliability.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::label::NodeLabel;
use crate::paths::{classify_paths, max_disjoint_paths, PathClassSet};
use crate::topology::Graph;

/// Worked-example link reliability.
pub const DEFAULT_LINK_RELIABILITY: f64 = 0.9;
/// Worked-example processor reliability.
pub const DEFAULT_PROCESSOR_RELIABILITY: f64 = 0.8;
/// Link failure rate, failures per hour.
pub const DEFAULT_LINK_FAILURE_RATE: f64 = 0.0001;
/// Processor failure rate, failures per hour.
pub const DEFAULT_PROCESSOR_FAILURE_RATE: f64 = 0.001;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReliabilityParams {
    pub r_link: f64,
    pub r_proc: f64,
    pub lambda_link: f64,
    pub lambda_proc: f64,
    /// Mission time in hours.
    pub t: f64,
}

impl Default for ReliabilityParams {
    fn default() -> Self {
        Self {
            r_link: DEFAULT_LINK_RELIABILITY,
            r_proc: DEFAULT_PROCESSOR_RELIABILITY,
            lambda_link: DEFAULT_LINK_FAILURE_RATE,
            lambda_proc: DEFAULT_PROCESSOR_FAILURE_RATE,
            t: 0.0,
        }
    }
}

impl ReliabilityParams {
    pub fn validate(&self) -> Result<()> {
        check_probability("link reliability", self.r_link)?;
        check_probability("processor reliability", self.r_proc)?;
        check_nonnegative("link failure rate", self.lambda_link)?;
        check_nonnegative("processor failure rate", self.lambda_proc)?;
        check_nonnegative("mission time", self.t)
    }

    /// Component reliabilities at mission time `t`.
    pub fn at_time(&self) -> Result<(f64, f64)> {
        self.validate()?;
        Ok((
            component_reliability(self.lambda_link, self.t)?,
            component_reliability(self.lambda_proc, self.t)?,
        ))
    }
}

fn check_probability(what: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must lie in [0, 1], got {p}")))
    }
}

fn check_nonnegative(what: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} must be a nonnegative number, got {x}"
        )))
    }
}

/// `exp(-lambda * t)`.
pub fn component_reliability(lambda: f64, t: f64) -> Result<f64> {
    check_nonnegative("failure rate", lambda)?;
    check_nonnegative("mission time", t)?;
    Ok((-lambda * t).exp())
}

pub fn terminal_reliability(classes: &PathClassSet, r_link: f64, r_proc: f64) -> Result<f64> {
    check_probability("link reliability", r_link)?;
    check_probability("processor reliability", r_proc)?;
    if classes.classes.is_empty() {
        return Err(Error::Domain(
            "terminal reliability needs at least one path".into(),
        ));
    }
    let all_fail: f64 = classes
        .classes
        .iter()
        .map(|c| {
            let path = r_link.powi(c.links as i32) * r_proc.powi(c.processors as i32);
            (1.0 - path).powi(c.count as i32)
        })
        .product();
    Ok(1.0 - all_fail)
}

/// `(t, TR(t))` at each requested time.
pub fn terminal_reliability_curve(
    classes: &PathClassSet,
    lambda_link: f64,
    lambda_proc: f64,
    times: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if times.is_empty() {
        return Err(Error::Domain("time grid is empty".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("time grid must be nondecreasing".into()));
    }
    times
        .iter()
        .map(|&t| {
            let r_link = component_reliability(lambda_link, t)?;
            let r_proc = component_reliability(lambda_proc, t)?;
            Ok((t, terminal_reliability(classes, r_link, r_proc)?))
        })
        .collect()
}

/// Evenly spaced grid `0, step, 2*step, ...` up to and including `t_max`.
pub fn time_grid(t_max: f64, step: f64) -> Result<Vec<f64>> {
    check_nonnegative("t_max", t_max)?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!(
            "time step must be positive, got {step}"
        )));
    }
    let count = (t_max / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| i as f64 * step).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivedReliability {
    pub classes: PathClassSet,
    pub reliability: f64,
}

/// Disjoint paths from the built graph, grouped into classes, then evaluated.
pub fn derive_and_evaluate(
    graph: &Graph,
    source: &NodeLabel,
    target: &NodeLabel,
    r_link: f64,
    r_proc: f64,
) -> Result<DerivedReliability> {
    let set = max_disjoint_paths(graph, source, target)?;
    let classes = classify_paths(&set);
    let reliability = terminal_reliability(&classes, r_link, r_proc)?;
    Ok(DerivedReliability {
        classes,
        reliability,
    })
}
