//! Argument parsing beyond clap, and error mapping from the library.

use std::str::FromStr;

use coxspec::coxeter::CoxeterError;
use coxspec::graph::{parse_graph_any, Graph, GraphError};
use coxspec::numeric::{parse_rational, Rational};
use coxspec::sigma::SigmaError;
use coxspec::star::StarError;
use coxspec::{BranchVector, GVector, RhoError, Scalar};

use crate::{CliError, Environment, TOL_ENV};

impl From<RhoError> for CliError {
    fn from(e: RhoError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<SigmaError> for CliError {
    fn from(e: SigmaError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::ClassifierDisagreement { .. } => CliError::Consistency(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<CoxeterError> for CliError {
    fn from(e: CoxeterError) -> Self {
        match e {
            CoxeterError::Graph(g) => g.into(),
            CoxeterError::InternalConsistency(_) => CliError::Consistency(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<StarError> for CliError {
    fn from(e: StarError) -> Self {
        match e {
            StarError::Graph(g) => g.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

pub fn rational(flag: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).ok_or_else(|| {
        CliError::Usage(format!(
            "--{flag}: expected an integer, p/q or decimal, got {text:?}"
        ))
    })
}

/// A real number: plain `f64` syntax or a rational `p/q`.
pub fn real(flag: &str, text: &str) -> Result<f64, CliError> {
    if let Ok(x) = text.trim().parse::<f64>() {
        if x.is_finite() {
            return Ok(x);
        }
    }
    parse_rational(text)
        .map(|q| q.as_f64())
        .ok_or_else(|| CliError::Usage(format!("--{flag}: expected a real number, got {text:?}")))
}

pub fn branches(text: &str) -> Result<BranchVector, CliError> {
    BranchVector::from_str(text).map_err(|e| CliError::Usage(format!("--branches: {e}")))
}

/// Flag, then `COXSPEC_TOL`, then the command default.
pub fn tolerance(flag: Option<f64>, env: &Environment, default: f64) -> Result<f64, CliError> {
    let tol = match (flag, &env.tol) {
        (Some(t), _) => t,
        (None, Some(text)) => text
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("{TOL_ENV}: expected a number, got {text:?}")))?,
        (None, None) => default,
    };
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(CliError::Usage(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

pub fn graph(path: &str, env: &Environment) -> Result<Graph, CliError> {
    let text = if path == "-" {
        env.stdin
            .clone()
            .ok_or_else(|| CliError::Usage("no standard input available".into()))?
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {path:?}: {e}")))?
    };
    Ok(parse_graph_any(&text)?)
}

/// `label=value,...` (missing labels are 0) or a bare value list in vertex
/// order.
pub fn int_vector(g: &Graph, text: &str) -> Result<GVector<i64>, CliError> {
    let bad = || CliError::Usage(format!("--vector: cannot parse {text:?}"));
    let items: Vec<&str> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let mut values = vec![0i64; g.len()];
    if items.iter().all(|s| s.contains('=')) {
        for item in items {
            let (label, value) = item.split_once('=').ok_or_else(bad)?;
            let v = g
                .vertex(label.trim())
                .ok_or_else(|| CliError::Domain(format!("unknown vertex {:?}", label.trim())))?;
            values[v] = value.trim().parse().map_err(|_| bad())?;
        }
    } else {
        if items.len() != g.len() {
            return Err(CliError::Domain(format!(
                "--vector has {} values but the graph has {} vertices",
                items.len(),
                g.len()
            )));
        }
        for (slot, item) in values.iter_mut().zip(items) {
            *slot = item.parse().map_err(|_| bad())?;
        }
    }
    Ok(GVector::from_values(values))
}

pub fn vertex(g: &Graph, label: &str) -> Result<usize, CliError> {
    g.vertex(label)
        .ok_or_else(|| CliError::Domain(format!("unknown vertex {label:?}")))
}
