//! Coupling matrix of the `<cos chi>` quadratic form and the optimal signal.
//!
//! For a fixed `m`, `<x> = sum_jk c_j c_k A_jk` with `A` real, symmetric and
//! tridiagonal in `j`. The best signal is the Perron eigenvector of `A` and
//! its eigenvalue is the achieved `<x>`.

use rayon::prelude::*;

use crate::eigen::{largest_eigenpair, Eigenpair, SymTridiagonal};
use crate::error::Result;
use crate::types::{FidelityResult, ProblemSpec, SignalState};

pub const DEFAULT_TOL: f64 = 1e-12;

/// `A_jk` for one `(N, m)` family, indexed by ascending `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingMatrix {
    spec: ProblemSpec,
    matrix: SymTridiagonal,
}

impl CouplingMatrix {
    pub fn build(spec: ProblemSpec) -> Self {
        let m = spec.m().to_f64();
        let m2 = m * m;
        let diag = spec
            .j_values()
            .map(|j| {
                let j = j.to_f64();
                // j = 0 only occurs with m = 0; the 0/0 limit is 0
                if j == 0.0 {
                    0.0
                } else {
                    m2 / (j * (j + 1.0))
                }
            })
            .collect();
        let offdiag = spec
            .j_values()
            .skip(1)
            .map(|j| {
                let j = j.to_f64();
                (j * j - m2) / (j * (4.0 * j * j - 1.0).sqrt())
            })
            .collect();
        CouplingMatrix {
            spec,
            matrix: SymTridiagonal { diag, offdiag },
        }
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    /// `A_jj`, ascending `j`.
    pub fn diag(&self) -> &[f64] {
        &self.matrix.diag
    }

    /// `A_{j,j-1}` for `j = m+1, ..., N/2`.
    pub fn offdiag(&self) -> &[f64] {
        &self.matrix.offdiag
    }

    pub fn as_tridiagonal(&self) -> &SymTridiagonal {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = self.diag()[i];
            if i + 1 < n {
                a[i][i + 1] = self.offdiag()[i];
                a[i + 1][i] = self.offdiag()[i];
            }
        }
        a
    }

    pub fn quadratic_form(&self, c: &[f64]) -> f64 {
        self.matrix.quadratic_form(c)
    }
}

pub fn build_coupling_matrix(spec: ProblemSpec) -> CouplingMatrix {
    CouplingMatrix::build(spec)
}

/// See [`crate::eigen::largest_eigenpair`].
pub fn coupling_eigenpair(mat: &CouplingMatrix, tol: f64) -> Result<Eigenpair> {
    largest_eigenpair(mat.as_tridiagonal(), tol)
}

/// Best achievable fidelity for the given `(N, m)` family.
pub fn optimal_fidelity(spec: ProblemSpec) -> Result<FidelityResult> {
    optimal_fidelity_with_tol(spec, DEFAULT_TOL)
}

pub fn optimal_fidelity_with_tol(spec: ProblemSpec, tol: f64) -> Result<FidelityResult> {
    let mat = CouplingMatrix::build(spec);
    let pair = coupling_eigenpair(&mat, tol)?;
    let state = SignalState::from_eigenpair(spec, pair.vector, pair.value)?;
    Ok(FidelityResult::from_state(state))
}

/// `m = j = N/2`; evaluates to `(N+1)/(N+2)` through the same matrix path.
pub fn parallel_spin_fidelity(n: i64) -> Result<FidelityResult> {
    optimal_fidelity(ProblemSpec::parallel(n)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepMode {
    /// Lowest legal `m` for each `N`.
    Optimal,
    /// `m = N/2`.
    Parallel,
}

impl SweepMode {
    pub fn spec_for(self, n: i64) -> Result<ProblemSpec> {
        match self {
            SweepMode::Optimal => ProblemSpec::lowest(n),
            SweepMode::Parallel => ProblemSpec::parallel(n),
        }
    }
}

/// One result per `N` in `n_min..=n_max`, in ascending `N`. Values of `N`
/// are evaluated in parallel; each is self-contained so the output does not
/// depend on scheduling.
pub fn fidelity_sweep(n_min: i64, n_max: i64, mode: SweepMode) -> Result<Vec<FidelityResult>> {
    if n_min < 1 || n_max < n_min {
        return Err(crate::Error::InvalidArgument(format!(
            "sweep range must satisfy 1 <= n_min <= n_max (got {n_min}..={n_max})"
        )));
    }
    (n_min..=n_max)
        .into_par_iter()
        .map(|n| optimal_fidelity(mode.spec_for(n)?))
        .collect()
}
