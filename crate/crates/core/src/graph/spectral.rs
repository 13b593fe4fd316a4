//! Index and principal eigenvector by shifted power iteration, and the full
//! adjacency spectrum by cyclic Jacobi rotations.

use serde::Serialize;

use super::{Graph, GraphError};
use crate::vector::GVector;

pub const DEFAULT_POWER_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;
pub const DEFAULT_JACOBI_TOL: f64 = 1e-12;
pub const MAX_DENSE_VERTICES: usize = 2048;
const MAX_JACOBI_SWEEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Bound on the change of the Rayleigh quotient between iterations; the
    /// residual must also fall below `10 * tol * ||A||_inf`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tol: DEFAULT_POWER_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    pub index: f64,
    /// Positive, unit Euclidean norm, in graph vertex order.
    pub principal: GVector<f64>,
    pub iterations: usize,
    /// `||A y - index * y||_inf`
    pub residual: f64,
}

fn multiply(g: &Graph, y: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = g.neighbors(i).iter().map(|&j| y[j]).sum();
    }
}

fn residual(g: &Graph, y: &[f64], lambda: f64) -> f64 {
    (0..g.len())
        .map(|i| {
            let ay: f64 = g.neighbors(i).iter().map(|&j| y[j]).sum();
            (ay - lambda * y[i]).abs()
        })
        .fold(0.0, f64::max)
}

/// Dominant eigenpair of a connected graph by power iteration on `A + I`.
///
/// The shift separates the index from its negative in bipartite spectra, and
/// starting from the all-ones vector keeps every iterate positive.
/// A single vertex returns index 0 with principal vector `(1)`.
pub fn index_and_principal(g: &Graph, opts: PowerOptions) -> Result<SpectralResult, GraphError> {
    let n = g.len();
    if n == 0 {
        return Err(GraphError::TooSmall(1));
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    if n == 1 {
        return Ok(SpectralResult {
            index: 0.0,
            principal: GVector::from_values(vec![1.0]),
            iterations: 0,
            residual: 0.0,
        });
    }
    let norm_inf = (0..n).map(|i| g.degree(i)).max().unwrap_or(0) as f64;
    let residual_bound = 10.0 * opts.tol * norm_inf;

    let mut y = vec![(n as f64).sqrt().recip(); n];
    let mut ay = vec![0.0; n];
    let mut lambda_prev = f64::INFINITY;
    let mut last_residual = f64::INFINITY;
    for iteration in 1..=opts.max_iter {
        multiply(g, &y, &mut ay);
        // Rayleigh quotient of A for the unit vector y
        let lambda: f64 = y.iter().zip(&ay).map(|(a, b)| a * b).sum();
        let mut norm = 0.0;
        for (yi, ai) in y.iter_mut().zip(&ay) {
            *yi += ai;
            norm += *yi * *yi;
        }
        let norm = norm.sqrt();
        y.iter_mut().for_each(|v| *v /= norm);

        if (lambda - lambda_prev).abs() <= opts.tol {
            multiply(g, &y, &mut ay);
            let lambda: f64 = y.iter().zip(&ay).map(|(a, b)| a * b).sum();
            last_residual = residual(g, &y, lambda);
            if last_residual <= residual_bound {
                if let Some(i) = y.iter().position(|&v| v <= 0.0) {
                    return Err(GraphError::NonPositivePrincipal(g.label(i).to_string()));
                }
                return Ok(SpectralResult {
                    index: lambda,
                    principal: GVector::from_values(y),
                    iterations: iteration,
                    residual: last_residual,
                });
            }
        }
        lambda_prev = lambda;
    }
    Err(GraphError::NotConverged {
        iterations: opts.max_iter,
        residual: last_residual,
    })
}

/// Eigenvalues of a dense symmetric matrix (row-major, `n x n`), ascending.
///
/// Cyclic Jacobi: sweeps of plane rotations over every `(p, q)` pair until
/// the off-diagonal Frobenius norm is at most `tol`.
pub fn symmetric_eigenvalues(matrix: &[f64], n: usize, tol: f64) -> Vec<f64> {
    assert_eq!(matrix.len(), n * n, "matrix must be n x n");
    let mut a = matrix.to_vec();
    for _ in 0..MAX_JACOBI_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum::<f64>()
            .sqrt();
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = (t * t + 1.0).sqrt().recip();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                a[p * n + p] -= t * apq;
                a[q * n + q] += t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// The adjacency spectrum, ascending, with multiplicities. Connectivity is
/// not required.
pub fn full_spectrum(g: &Graph, tol: f64) -> Result<Vec<f64>, GraphError> {
    if g.len() > MAX_DENSE_VERTICES {
        return Err(GraphError::TooLarge(g.len()));
    }
    Ok(symmetric_eigenvalues(&g.adjacency_matrix(), g.len(), tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_star, parse_graph};
    use crate::rho::BranchVector;

    fn star(e: &[u64]) -> Graph {
        make_star(&BranchVector::new(e.to_vec()).unwrap())
    }

    #[test]
    fn two_vertex_path_has_index_one() {
        let r = index_and_principal(&Graph::path(2), PowerOptions::default()).unwrap();
        assert!((r.index - 1.0).abs() < 1e-12);
    }

    #[test]
    fn four_leaf_star() {
        let g = star(&[1, 1, 1, 1]);
        let r = index_and_principal(&g, PowerOptions::default()).unwrap();
        assert!((r.index - 2.0).abs() < 1e-12);
        let center = g.vertex("c").unwrap();
        let y = r.principal.values();
        for (i, &v) in y.iter().enumerate() {
            let expect = if i == center { 2.0 } else { 1.0 };
            assert!((v / y[(center + 1) % 5] - expect).abs() < 1e-10);
        }
        // 2 * 2 = 1 + 1 + 1 + 1 and 2 * 1 = 2
        assert!(r.residual < 1e-11);
    }

    #[test]
    fn claw_index_is_sqrt_three() {
        let r = index_and_principal(&star(&[1, 1, 1]), PowerOptions::default()).unwrap();
        assert!((r.index - 3f64.sqrt()).abs() < 1e-10);
        let spec = full_spectrum(&star(&[1, 1, 1]), DEFAULT_JACOBI_TOL).unwrap();
        let expect = [-(3f64.sqrt()), 0.0, 0.0, 3f64.sqrt()];
        for (a, b) in spec.iter().zip(expect) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn path_three_spectrum() {
        let spec = full_spectrum(&Graph::path(3), DEFAULT_JACOBI_TOL).unwrap();
        let s2 = 2f64.sqrt();
        for (a, b) in spec.iter().zip([-s2, 0.0, s2]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(
            full_spectrum(&Graph::path(1), DEFAULT_JACOBI_TOL).unwrap(),
            vec![0.0]
        );
    }

    #[test]
    fn disconnected_and_empty_inputs() {
        let g = parse_graph("a b\nc d").unwrap();
        assert!(matches!(
            index_and_principal(&g, PowerOptions::default()),
            Err(GraphError::Disconnected)
        ));
        assert_eq!(full_spectrum(&g, DEFAULT_JACOBI_TOL).unwrap().len(), 4);
        let single = index_and_principal(&Graph::path(1), PowerOptions::default()).unwrap();
        assert_eq!(single.index, 0.0);
    }

    #[test]
    fn iteration_budget_is_enforced() {
        let opts = PowerOptions {
            tol: 1e-13,
            max_iter: 3,
        };
        assert!(matches!(
            index_and_principal(&Graph::path(20), opts),
            Err(GraphError::NotConverged { .. })
        ));
    }

    #[test]
    fn jacobi_on_dense_matrix() {
        // eigenvalues 1, 3 of [[2,1],[1,2]]
        let e = symmetric_eigenvalues(&[2.0, 1.0, 1.0, 2.0], 2, 1e-14);
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn complete_graph_reaches_upper_bound() {
        for n in 2..8 {
            let r = index_and_principal(&Graph::complete(n), PowerOptions::default()).unwrap();
            assert!((r.index - (n - 1) as f64).abs() < 1e-10);
        }
    }
}
