//! Jacobi polynomials, Wigner small-d elements and Gauss-Legendre rules.
//!
//! Angle-dependent functions take `x = cos(chi)` wherever possible.

use crate::error::{Error, Result};
use crate::types::HalfInt;

/// `P_n^{(a,b)}(x)` by forward three-term recurrence in `n`.
pub fn jacobi_poly(n: u32, a: u32, b: u32, x: f64) -> f64 {
    let mut last = 0.0;
    jacobi_fold(n, a, b, x, |_, p| last = p);
    last
}

/// `P_0^{(a,b)}(x), ..., P_n^{(a,b)}(x)`.
pub fn jacobi_sequence(n: u32, a: u32, b: u32, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    jacobi_fold(n, a, b, x, |_, p| out.push(p));
    out
}

fn jacobi_fold(n: u32, a: u32, b: u32, x: f64, mut visit: impl FnMut(u32, f64)) {
    let (af, bf) = (f64::from(a), f64::from(b));
    let mut prev = 1.0;
    visit(0, prev);
    if n == 0 {
        return;
    }
    let mut cur = (af + 1.0) + (af + bf + 2.0) * (x - 1.0) / 2.0;
    visit(1, cur);
    for k in 2..=n {
        let k = f64::from(k);
        let s = 2.0 * k + af + bf;
        let c0 = 2.0 * k * (k + af + bf) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + af * af - bf * bf);
        let c2 = 2.0 * (k + af - 1.0) * (k + bf - 1.0) * s;
        let next = (c1 * cur - c2 * prev) / c0;
        prev = cur;
        cur = next;
        visit(k as u32, cur);
    }
}

/// `(1+x)/2` raised to a half-integer power, guarded against roundoff below 0.
#[inline]
pub(crate) fn half_one_plus_x_pow(x: f64, power: HalfInt) -> f64 {
    let base = ((1.0 + x) / 2.0).max(0.0);
    match power.twice() {
        0 => 1.0,
        t if t % 2 == 0 => base.powi((t / 2) as i32),
        t => base.sqrt().powi(t as i32),
    }
}

/// Diagonal Wigner element `d^{(j)}_{mm}(chi) = cos^{2m}(chi/2) P^{(0,2m)}_{j-m}(cos chi)`,
/// with `x = cos chi`. Requires `j >= m >= 0` and `j - m` integral.
pub fn wigner_d_diag(j: HalfInt, m: HalfInt, x: f64) -> f64 {
    let n = j
        .int_diff(m)
        .filter(|&d| d >= 0)
        .expect("wigner_d_diag requires j >= m with j - m integral");
    assert!(m.twice() >= 0, "wigner_d_diag requires m >= 0");
    half_one_plus_x_pow(x, m) * jacobi_poly(n as u32, 0, m.twice() as u32, x)
}

fn ln_factorials(upto: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(upto + 1);
    let mut acc = 0.0;
    table.push(0.0);
    for k in 1..=upto {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

/// Full small-d element `d^{(j)}_{mp,m}(theta)`.
///
/// Uses the Jacobi form `sin^a(theta/2) cos^b(theta/2) P_k^{(a,b)}(cos theta)`
/// with `k = j - max(|m|, |mp|)`. The binomial prefactor is accumulated in
/// log space and the sign tracked separately, which keeps the evaluation free
/// of the cancellation that plagues the alternating explicit sum.
pub fn wigner_d_full(j: HalfInt, mp: HalfInt, m: HalfInt, theta: f64) -> f64 {
    assert!(
        mp.abs() <= j && m.abs() <= j,
        "wigner_d_full requires |mp|, |m| <= j"
    );
    let jpm = (j + m)
        .int_diff(HalfInt::ZERO)
        .expect("j + m must be integral");
    let jmm = (j - m)
        .int_diff(HalfInt::ZERO)
        .expect("j - m must be integral");
    let jpmp = (j + mp)
        .int_diff(HalfInt::ZERO)
        .expect("j + mp must be integral");
    let jmmp = (j - mp)
        .int_diff(HalfInt::ZERO)
        .expect("j - mp must be integral");
    // mp - m, an integer
    let delta = jpmp - jpm;
    let twice_j = jpm + jmm;

    let k = jpm.min(jmm).min(jpmp).min(jmmp);
    let (a, flips) = if k == jpm || k == jmmp {
        (delta, delta)
    } else {
        (-delta, 0)
    };
    let b = twice_j - 2 * k - a;

    let lf = ln_factorials(twice_j as usize + 1);
    let f = |i: i64| lf[i as usize];
    // ln sqrt(C(2j - k, k + a) / C(k + b, b))
    let ln_pref = 0.5 * (f(twice_j - k) + f(k) - f(k + a) - f(k + b));
    let sign = if flips.rem_euclid(2) == 0 { 1.0 } else { -1.0 };

    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    sign * ln_pref.exp()
        * s.powi(a as i32)
        * c.powi(b as i32)
        * jacobi_poly(k as u32, a as u32, b as u32, theta.cos())
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    order: usize,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

const NEWTON_MAX_ITER: usize = 100;

/// Legendre `P_n(x)` and `P_{n-1}(x)`.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let next = ((2.0 * k - 1.0) * x * cur - (k - 1.0) * prev) / k;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Newton-polished Legendre roots with a Chebyshev-like starting guess.
/// Nodes are mirrored so the rule is exactly symmetric.
pub fn gauss_legendre(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::InvalidArgument(
            "quadrature order must be at least 1".into(),
        ));
    }
    let n = order;
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        let mut deriv = 1.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, p_prev) = if n == 1 {
                (x, 1.0)
            } else {
                legendre_pair(n, x)
            };
            deriv = nf * (x * p - p_prev) / (x * x - 1.0);
            let dx = p / deriv;
            x -= dx;
            if dx.abs() <= 1e-15 {
                let (p, p_prev) = if n == 1 {
                    (x, 1.0)
                } else {
                    legendre_pair(n, x)
                };
                deriv = nf * (x * p - p_prev) / (x * x - 1.0);
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence(format!(
                "Legendre root {i} of order {n} not polished within {NEWTON_MAX_ITER} iterations"
            )));
        }
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        // i counts down from the largest root
        if n % 2 == 1 && i == n / 2 {
            nodes[i] = 0.0;
            weights[i] = w;
        } else {
            nodes[n - 1 - i] = x.abs();
            nodes[i] = -x.abs();
            weights[n - 1 - i] = w;
            weights[i] = w;
        }
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        order: n,
    })
}
