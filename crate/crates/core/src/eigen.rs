//! Largest eigenpair of a real symmetric tridiagonal matrix.
//!
//! The eigenvalue is bracketed by Gershgorin bounds and located by bisection
//! on the Sturm count. The eigenvector comes from inverse iteration with the
//! converged shift, solved by Gaussian elimination with partial pivoting.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix: `diag` has length `n`, `offdiag` has `n - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
}

const MAX_BISECTIONS: usize = 2_000;
const MAX_INVERSE_PASSES: usize = 8;

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidArgument(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
                diag.len(),
                offdiag.len()
            )));
        }
        Ok(SymTridiagonal { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.offdiag[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// `vᵀ T v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        self.apply(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let left = if i > 0 {
                    self.offdiag[i - 1].abs()
                } else {
                    0.0
                };
                let right = if i + 1 < n {
                    self.offdiag[i].abs()
                } else {
                    0.0
                };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 {
                self.offdiag[i - 1].abs()
            } else {
                0.0
            };
            let right = if i + 1 < n {
                self.offdiag[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `lambda` (negative LDLᵀ pivots).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let guard = f64::EPSILON * self.inf_norm().max(f64::MIN_POSITIVE);
        let mut count = 0;
        let mut q = self.diag[0] - lambda;
        for i in 1..self.dim() {
            if q < 0.0 {
                count += 1;
            }
            let q_safe = if q.abs() < guard {
                guard.copysign(q)
            } else {
                q
            };
            q = (self.diag[i] - lambda) - self.offdiag[i - 1] * self.offdiag[i - 1] / q_safe;
        }
        if q < 0.0 {
            count += 1;
        }
        count
    }

    /// Solves `(T - shift I) y = rhs` by elimination with partial pivoting.
    /// Zero pivots are replaced by `eps * ||T||`.
    fn shifted_solve(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let tiny = f64::EPSILON * self.inf_norm().max(f64::MIN_POSITIVE);
        // Row i after elimination: u0[i] x_i + u1[i] x_{i+1} + u2[i] x_{i+2}
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut b = rhs.to_vec();

        let mut d = self.diag[0] - shift;
        let mut e = if n > 1 { self.offdiag[0] } else { 0.0 };
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if d == 0.0 { tiny } else { d };
                break;
            }
            let sub = self.offdiag[i];
            let next_d = self.diag[i + 1] - shift;
            let next_e = if i + 2 < n { self.offdiag[i + 1] } else { 0.0 };
            if d.abs() >= sub.abs() {
                let pivot = if d == 0.0 { tiny } else { d };
                let l = sub / pivot;
                u0[i] = pivot;
                u1[i] = e;
                u2[i] = 0.0;
                b[i + 1] -= l * b[i];
                d = next_d - l * e;
                e = next_e;
            } else {
                // swap rows i and i+1
                let l = d / sub;
                u0[i] = sub;
                u1[i] = next_d;
                u2[i] = next_e;
                b.swap(i, i + 1);
                b[i + 1] -= l * b[i];
                d = e - l * next_d;
                e = -l * next_e;
            }
        }

        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = b[i];
            if i + 1 < n {
                acc -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= u2[i] * x[i + 2];
            }
            x[i] = acc / u0[i];
        }
        x
    }

    fn largest_eigenvalue(&self) -> Result<f64> {
        let n = self.dim();
        if n == 1 {
            return Ok(self.diag[0]);
        }
        let (lo0, hi0) = self.gershgorin();
        let pad = f64::EPSILON * self.inf_norm().max(1.0);
        let (mut lo, mut hi) = (lo0 - pad, hi0 + pad);
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.sturm_count(mid) < n {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Err(Error::NoConvergence(format!(
            "bisection did not close the bracket in {MAX_BISECTIONS} steps"
        )))
    }
}

/// Largest eigenvalue and unit eigenvector of `mat`, with
/// `||A v - lambda v||_inf <= tol * ||A||_inf` checked before returning.
///
/// The vector's sign is chosen so its components sum to a non-negative
/// value; for an irreducible non-negative matrix that makes every
/// component non-negative.
pub fn largest_eigenpair(mat: &SymTridiagonal, tol: f64) -> Result<Eigenpair> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "eigen tolerance must be positive (got {tol})"
        )));
    }
    let n = mat.dim();
    let lambda = mat.largest_eigenvalue()?;
    let norm = mat.inf_norm();

    if n > 1 {
        let gap = (tol * norm).max(1e3 * f64::EPSILON * norm.max(f64::MIN_POSITIVE));
        if mat.sturm_count(lambda - gap) < n - 1 {
            return Err(Error::NoConvergence(format!(
                "top eigenvalue {lambda} is degenerate within {gap:e}; refusing to pick a vector"
            )));
        }
    }

    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_INVERSE_PASSES {
        let y = mat.shifted_solve(lambda, &v);
        let len = y.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !len.is_finite() || len == 0.0 {
            return Err(Error::NoConvergence(
                "inverse iteration produced a non-finite vector".into(),
            ));
        }
        v = y.iter().map(|c| c / len).collect();
        if v.iter().sum::<f64>() < 0.0 {
            v.iter_mut().for_each(|c| *c = -*c);
        }
        residual = mat
            .apply(&v)
            .iter()
            .zip(&v)
            .map(|(av, vi)| (av - lambda * vi).abs())
            .fold(0.0, f64::max);
        if residual <= tol * norm {
            return Ok(Eigenpair {
                value: lambda,
                vector: v,
            });
        }
    }
    Err(Error::NoConvergence(format!(
        "eigenvector residual {residual:e} above {:e} after {MAX_INVERSE_PASSES} passes",
        tol * norm
    )))
}
