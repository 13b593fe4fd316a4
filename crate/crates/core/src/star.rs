//! Star-shaped graphs: analytic principal eigenvectors from the v-sequence,
//! the identity `rho_r(v) = r` for `r` the squared index, and the index
//! recovered by bisection on `f(r) = r - rho_r(v)`.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{index_and_principal, make_star, Graph, GraphError, PowerOptions};
use crate::numeric::ExtendedValue;
use crate::rho::{
    classify_branch_vector, rho_vector_unchecked, BranchTag, BranchVector, RecurrenceSequence,
    RhoError,
};
use crate::vector::GVector;

pub const DEFAULT_THEOREM_TOL: f64 = 1e-8;
pub const DEFAULT_BRACKET_TOL: f64 = 1e-12;
/// Offset of the lower bracket above the largest summand pole.
pub const POLE_OFFSET: f64 = 1e-9;
const MONOTONE_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StarError {
    #[error(transparent)]
    Rho(#[from] RhoError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("v-sequence vanishes at the centre for branch {branch} (length {length})")]
    Pole { branch: usize, length: u64 },
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("r - rho_r(v) decreases near r = {at}")]
    NotMonotone { at: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMethod {
    Bisection,
    Eigensolver,
    Both,
    /// Exact `r = 4` from the extended Dynkin classifier.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarIndexReport {
    pub branches: BranchVector,
    pub r: f64,
    pub index: f64,
    /// `|rho_r(v) - r|`
    pub residual: f64,
    pub method: SolveMethod,
    /// Squared index from power iteration, when it ran.
    pub power_r: Option<f64>,
    /// `|r - power_r|` when both methods ran.
    pub cross_check_delta: Option<f64>,
    pub within_tolerance: bool,
}

/// `f(r) = r - rho_r(v)` in floating point; `-inf` at a pole.
fn gap(r: f64, v: &BranchVector) -> Result<f64, RhoError> {
    Ok(match rho_vector_unchecked(&r, v)? {
        ExtendedValue::Finite(x) => r - x,
        ExtendedValue::Infinite => f64::NEG_INFINITY,
    })
}

/// Principal eigenvector of `make_star(v)` from the v-sequence at `r`: 1 at
/// the centre and `v_i / v_{n+1}` at distance `n + 1 - i` from it on a branch
/// of length `n`, in the vertex order of [`make_star`].
pub fn analytic_star_eigenvector(v: &BranchVector, r: f64) -> Result<GVector<f64>, StarError> {
    let seq = RecurrenceSequence::v(r)?;
    let mut values = vec![1.0];
    for (k, &n) in v.entries().iter().enumerate() {
        let top = seq.term(n + 1)?;
        if top == 0.0 {
            return Err(StarError::Pole {
                branch: k + 1,
                length: n,
            });
        }
        for i in (1..=n).rev() {
            values.push(seq.term(i)? / top);
        }
    }
    Ok(GVector::from_values(values))
}

/// `max_i |(A y)_i - lambda y_i|`.
pub fn eigen_residual(g: &Graph, y: &GVector<f64>, lambda: f64) -> f64 {
    (0..g.len())
        .map(|i| {
            let ay: f64 = g.neighbors(i).iter().map(|&j| y[j]).sum();
            (ay - lambda * y[i]).abs()
        })
        .fold(0.0, f64::max)
}

fn power_r(v: &BranchVector) -> Result<f64, StarError> {
    let spectral = index_and_principal(&make_star(v), PowerOptions::default())?;
    Ok(spectral.index * spectral.index)
}

/// Squared index by power iteration, compared with `rho_r(v)`.
pub fn verify_star_theorem(v: &BranchVector, tol: f64) -> Result<StarIndexReport, StarError> {
    let r = power_r(v)?;
    let residual = (gap(r, v)?).abs();
    Ok(StarIndexReport {
        branches: v.clone(),
        r,
        index: r.sqrt(),
        residual,
        method: SolveMethod::Eigensolver,
        power_r: Some(r),
        cross_check_delta: None,
        within_tolerance: residual <= tol,
    })
}

/// The largest pole `4 cos^2(pi / (n + 1))` among the summands.
fn largest_pole(v: &BranchVector) -> f64 {
    let n = *v.entries().last().expect("nonempty");
    let c = (std::f64::consts::PI / (n as f64 + 1.0)).cos();
    4.0 * c * c
}

fn check_monotone(v: &BranchVector, lo: f64, hi: f64) -> Result<(), StarError> {
    let mut prev = gap(lo, v)?;
    for i in 1..=MONOTONE_SAMPLES {
        let r = lo + (hi - lo) * i as f64 / MONOTONE_SAMPLES as f64;
        let cur = gap(r, v)?;
        if cur < prev {
            return Err(StarError::NotMonotone { at: r });
        }
        prev = cur;
    }
    Ok(())
}

/// Solves `r = rho_r(v)` for the squared index of the star on `v`.
///
/// Extended Dynkin vectors give `r = 4` exactly. Otherwise bisection runs on
/// `[4, 2s]` when `rho_4(v) > 4` and on `(r* + 1e-9, 4]` when `rho_4(v) < 4`,
/// `r*` being the largest summand pole, until the bracket is at most `tol`
/// wide. The result is always compared with power iteration.
pub fn solve_star_index(v: &BranchVector, tol: f64) -> Result<StarIndexReport, StarError> {
    let class = classify_branch_vector(v);
    let power = power_r(v)?;
    let (r, method) = match class.tag {
        BranchTag::ExtendedDynkin => (4.0, SolveMethod::Exact),
        tag => {
            let (mut lo, mut hi) = match tag {
                BranchTag::Hyperbolic => (4.0, 2.0 * v.len() as f64),
                _ => (largest_pole(v) + POLE_OFFSET, 4.0),
            };
            let (f_lo, f_hi) = (gap(lo, v)?, gap(hi, v)?);
            if !(f_lo < 0.0 && f_hi > 0.0) {
                return Err(StarError::Bracket { lo, hi, f_lo, f_hi });
            }
            if tag == BranchTag::Hyperbolic && cfg!(debug_assertions) {
                check_monotone(v, lo, hi)?;
            }
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if gap(mid, v)? < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (0.5 * (lo + hi), SolveMethod::Both)
        }
    };
    let residual = gap(r, v)?.abs();
    Ok(StarIndexReport {
        branches: v.clone(),
        r,
        index: r.sqrt(),
        residual,
        method,
        power_r: Some(power),
        cross_check_delta: Some((r - power).abs()),
        within_tolerance: residual <= DEFAULT_THEOREM_TOL.max(tol),
    })
}
