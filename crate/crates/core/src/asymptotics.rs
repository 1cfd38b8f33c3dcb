//! Large-`N` behaviour of the optimal signal: `(1 - F)(N + 3)^2` tends to a
//! constant, here extrapolated from a sweep.
//!
//! Numerically the limit agrees with `j_{0,1}^2 = 5.7831859...`, the square
//! of the first zero of the Bessel function `J_0` (see the tests).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optimal::{optimal_fidelity, parallel_spin_fidelity};
use crate::types::ProblemSpec;

/// Reference value of the asymptotic constant, to five decimals.
pub const ASYMPTOTIC_CONSTANT: f64 = 5.78317;

/// Correction model used by the extrapolation: `c + a/N + b/N^2`.
pub const FIT_MODEL: &str = "c + a/N + b/N^2";

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoteReport {
    /// Sorted, without duplicates.
    pub n_values: Vec<i64>,
    pub one_minus_f: Vec<f64>,
    /// `(1 - F)(N + 3)^2`.
    pub scaled: Vec<f64>,
    pub extrapolated_constant: f64,
    /// `[c, a, b]` of [`FIT_MODEL`]; unused terms are 0 when fewer than three
    /// points are available.
    pub fit: [f64; 3],
    /// Largest `|model(N) - scaled(N)|` over the `N` values not used in the
    /// fit (the fit interpolates its own points). `None` if all were used.
    pub holdout_residual: Option<f64>,
}

pub fn scaled_error(n: i64, one_minus_f: f64) -> f64 {
    let shift = n as f64 + 3.0;
    one_minus_f * shift * shift
}

/// Lowest-`m` sweep over `n_list` and extrapolation from its largest three
/// `N` values.
pub fn asymptote_sweep(n_list: &[i64]) -> Result<AsymptoteReport> {
    let mut n_values = n_list.to_vec();
    n_values.sort_unstable();
    n_values.dedup();
    if n_values.is_empty() {
        return Err(Error::InvalidArgument("empty N list".into()));
    }
    if let Some(&bad) = n_values.iter().find(|&&n| n < 1) {
        return Err(Error::BadN(bad));
    }
    let one_minus_f: Vec<f64> = n_values
        .par_iter()
        .map(|&n| Ok(optimal_fidelity(ProblemSpec::lowest(n)?)?.one_minus_f))
        .collect::<Result<_>>()?;
    let scaled: Vec<f64> = n_values
        .iter()
        .zip(&one_minus_f)
        .map(|(&n, &e)| scaled_error(n, e))
        .collect();

    let used = n_values.len().min(3);
    let tail = n_values.len() - used;
    let fit = fit_inverse_powers(&n_values[tail..], &scaled[tail..]);
    let model = |n: i64| {
        let inv = 1.0 / n as f64;
        fit[0] + fit[1] * inv + fit[2] * inv * inv
    };
    let holdout_residual = n_values[..tail]
        .iter()
        .zip(&scaled[..tail])
        .map(|(&n, &s)| (model(n) - s).abs())
        .reduce(f64::max);

    Ok(AsymptoteReport {
        n_values,
        one_minus_f,
        scaled,
        extrapolated_constant: fit[0],
        fit,
        holdout_residual,
    })
}

/// Interpolates `c + a/N + b/N^2` through up to three points, dropping the
/// highest terms when fewer points are given.
fn fit_inverse_powers(ns: &[i64], ys: &[f64]) -> [f64; 3] {
    let k = ns.len();
    let mut rows: Vec<Vec<f64>> = ns
        .iter()
        .zip(ys)
        .map(|(&n, &y)| {
            let inv = 1.0 / n as f64;
            let mut row: Vec<f64> = (0..k).map(|p| inv.powi(p as i32)).collect();
            row.push(y);
            row
        })
        .collect();
    // Gauss-Jordan with partial pivoting on a k x (k+1) system
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs()))
            .unwrap();
        rows.swap(col, pivot);
        for r in 0..k {
            if r != col {
                let f = rows[r][col] / rows[col][col];
                let pivot_row = rows[col].clone();
                for (dst, src) in rows[r].iter_mut().zip(&pivot_row).skip(col) {
                    *dst -= f * src;
                }
            }
        }
    }
    let mut out = [0.0; 3];
    for i in 0..k {
        out[i] = rows[i][k] / rows[i][i];
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Figure1Row {
    pub n: i64,
    pub one_minus_f_optimal: f64,
    pub one_minus_f_parallel: f64,
}

/// `1 - F` for the lowest-`m` and the parallel (`m = j`) signals, `N = 1..=n_max`.
pub fn figure1_data(n_max: i64) -> Result<Vec<Figure1Row>> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "figure data needs n_max >= 2 (got {n_max})"
        )));
    }
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            Ok(Figure1Row {
                n,
                one_minus_f_optimal: optimal_fidelity(ProblemSpec::lowest(n)?)?.one_minus_f,
                one_minus_f_parallel: parallel_spin_fidelity(n)?.one_minus_f,
            })
        })
        .collect()
}
