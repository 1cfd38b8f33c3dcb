//! Numerical oracles that do not go through the closed-form coupling matrix:
//! the outcome density in `x = cos chi`, its normalization, a quadrature
//! rebuild of `A_jk`, and the completeness (Gram) check of the covariant
//! measurement.

use crate::error::{Error, Result};
use crate::orthopoly::{half_one_plus_x_pow, jacobi_sequence, wigner_d_full, QuadratureRule};
use crate::types::{HalfInt, ProblemSpec, SignalState};

/// Quadrature order used for density integrals: exact with margin, since
/// `x p(x)` has degree at most `N + 1`.
pub fn default_density_order(n_spins: u32) -> usize {
    n_spins as usize + 8
}

/// Quadrature order for the Gram check: `2 (2 j_max) + 16`.
pub fn default_gram_order(n_spins: u32) -> usize {
    2 * n_spins as usize + 16
}

/// Largest `N` the Gram check supports.
pub const GRAM_MAX_SPINS: u32 = 20;

/// Probability density of Bob's outcome `x = cos chi`, after the azimuthal
/// integral:
///
/// `p(x) = 1/2 |sum_j c_j sqrt(2j+1) ((1+x)/2)^m P^{(0,2m)}_{j-m}(x)|^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDensity {
    spec: ProblemSpec,
    // c_j sqrt(2j+1)
    weighted: Vec<f64>,
}

impl OutcomeDensity {
    pub fn new(state: &SignalState) -> Self {
        Self::from_coefficients(*state.spec(), state.coeffs())
            .expect("a SignalState always has one coefficient per j")
    }

    /// Accepts arbitrary (possibly unnormalized) coefficients.
    pub fn from_coefficients(spec: ProblemSpec, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() != spec.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                spec.len(),
                coeffs.len()
            )));
        }
        let weighted = spec
            .j_values()
            .zip(coeffs)
            .map(|(j, c)| c * (2.0 * j.to_f64() + 1.0).sqrt())
            .collect();
        Ok(OutcomeDensity { spec, weighted })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    /// Signed amplitude `sum_j c_j sqrt(2j+1) d^{(j)}_{mm}(chi)`.
    pub fn amplitude(&self, x: f64) -> f64 {
        let m = self.spec.m();
        let polys = jacobi_sequence(self.spec.k() as u32, 0, m.twice() as u32, x);
        let sum: f64 = self.weighted.iter().zip(&polys).map(|(w, p)| w * p).sum();
        half_one_plus_x_pow(x, m) * sum
    }

    pub fn eval(&self, x: f64) -> f64 {
        let a = self.amplitude(x);
        0.5 * a * a
    }

    /// `int p(x) dx` over `[-1, 1]`. Needs `rule.order() >= N + 2`.
    pub fn normalization(&self, rule: &QuadratureRule) -> Result<f64> {
        require_order(
            rule,
            self.spec.n_spins() as usize + 2,
            "density normalization",
        )?;
        Ok(rule.integrate(|x| self.eval(x)))
    }

    /// `int x p(x) dx`, i.e. `<cos chi>`. Needs `rule.order() >= N + 2`.
    pub fn mean_x(&self, rule: &QuadratureRule) -> Result<f64> {
        require_order(rule, self.spec.n_spins() as usize + 2, "density mean")?;
        Ok(rule.integrate(|x| x * self.eval(x)))
    }
}

fn require_order(rule: &QuadratureRule, min: usize, what: &str) -> Result<()> {
    if rule.order() < min {
        return Err(Error::InvalidArgument(format!(
            "{what} needs quadrature order >= {min}, got {}",
            rule.order()
        )));
    }
    Ok(())
}

pub fn density_eval(state: &SignalState, x: f64) -> f64 {
    OutcomeDensity::new(state).eval(x)
}

pub fn density_normalization(state: &SignalState, rule: &QuadratureRule) -> Result<f64> {
    OutcomeDensity::new(state).normalization(rule)
}

/// Dense `(K+1) x (K+1)` matrix
/// `M_jk = 1/2 int x ((1+x)/2)^{2m} sqrt((2j+1)(2k+1)) P_{j-m} P_{k-m} dx`
/// by quadrature. Needs `rule.order() >= N + 4`.
pub fn coupling_matrix_oracle(spec: ProblemSpec, rule: &QuadratureRule) -> Result<Vec<Vec<f64>>> {
    require_order(rule, spec.n_spins() as usize + 4, "coupling-matrix oracle")?;
    let dim = spec.len();
    let m = spec.m();
    let scale: Vec<f64> = spec
        .j_values()
        .map(|j| (2.0 * j.to_f64() + 1.0).sqrt())
        .collect();
    let mut out = vec![vec![0.0; dim]; dim];
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let polys = jacobi_sequence(spec.k() as u32, 0, m.twice() as u32, x);
        let weight = 0.5 * w * x * half_one_plus_x_pow(x, m + m);
        for a in 0..dim {
            let pa = weight * scale[a] * polys[a];
            for b in 0..dim {
                out[a][b] += pa * scale[b] * polys[b];
            }
        }
    }
    Ok(out)
}

/// Gram matrix of `int dOmega |theta,phi><theta,phi|` in the standard basis
/// `|j, m'>`, `j = m..N/2`, `|m'| <= j`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    /// `(j, m')` for each row/column.
    pub basis: Vec<(HalfInt, HalfInt)>,
    pub entries: Vec<Vec<f64>>,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn max_deviation_from_identity(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.entries.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                let want = if i == k { 1.0 } else { 0.0 };
                worst = worst.max((v - want).abs());
            }
        }
        worst
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for k in 0..i {
                worst = worst.max((self.entries[i][k] - self.entries[k][i]).abs());
            }
        }
        worst
    }
}

/// Completeness check of the measurement for `(N, m)`.
///
/// The azimuthal integral gives `delta_{m'_1 m'_2}` exactly (the phase
/// factors cancel because every component shares one `m`), so entries with
/// different `m'` are set to zero without being computed. The remaining
/// entries are
/// `sqrt((2j1+1)(2j2+1))/2 int_0^pi d^{j1}_{m,m'} d^{j2}_{m,m'} sin(theta) dtheta`,
/// integrated in `x = cos theta` on the supplied rule.
pub fn povm_completeness_gram(n: i64, m: HalfInt, rule: &QuadratureRule) -> Result<GramMatrix> {
    let spec = ProblemSpec::new(n, m)?;
    if spec.n_spins() > GRAM_MAX_SPINS {
        return Err(Error::InvalidArgument(format!(
            "Gram check supports N <= {GRAM_MAX_SPINS} (got {n})"
        )));
    }
    let basis: Vec<(HalfInt, HalfInt)> = spec
        .j_values()
        .flat_map(|j| {
            (-j.twice()..=j.twice())
                .step_by(2)
                .map(move |t| (j, HalfInt::from_twice(t)))
        })
        .collect();
    let dim = basis.len();

    // d^{j}_{m,m'}(theta_q) at every node, cached per basis element
    let thetas: Vec<f64> = rule.nodes().iter().map(|x| x.acos()).collect();
    let tables: Vec<Vec<f64>> = basis
        .iter()
        .map(|&(j, mp)| thetas.iter().map(|&t| wigner_d_full(j, m, mp, t)).collect())
        .collect();

    let mut entries = vec![vec![0.0; dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let ((j1, mp1), (j2, mp2)) = (basis[a], basis[b]);
            if mp1 != mp2 {
                continue;
            }
            let integral: f64 = rule
                .weights()
                .iter()
                .zip(tables[a].iter().zip(&tables[b]))
                .map(|(w, (d1, d2))| w * d1 * d2)
                .sum();
            let norm = ((2.0 * j1.to_f64() + 1.0) * (2.0 * j2.to_f64() + 1.0)).sqrt() / 2.0;
            entries[a][b] = norm * integral;
        }
    }
    Ok(GramMatrix { basis, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimal::{build_coupling_matrix, optimal_fidelity};
    use crate::orthopoly::gauss_legendre;
    use crate::types::hilbert_dimension;

    fn spec(n: i64, twice_m: i64) -> ProblemSpec {
        ProblemSpec::new(n, HalfInt::from_twice(twice_m)).unwrap()
    }

    fn all_specs(n_max: i64) -> impl Iterator<Item = ProblemSpec> {
        (1..=n_max).flat_map(|n| (n % 2..=n).step_by(2).map(move |tm| spec(n, tm)))
    }

    #[test]
    fn density_examples() {
        let one = optimal_fidelity(spec(1, 1)).unwrap().state;
        for &x in &[-1.0, -0.3, 0.0, 0.5, 1.0] {
            assert!((density_eval(&one, x) - (1.0 + x) / 2.0).abs() < 1e-15);
        }
        assert!((density_eval(&one, 1.0) - 1.0).abs() < 1e-15);

        let two = optimal_fidelity(spec(2, 0)).unwrap().state;
        let rule = gauss_legendre(default_density_order(2)).unwrap();
        let mean = OutcomeDensity::new(&two).mean_x(&rule).unwrap();
        assert!((mean - 1.0 / 3f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn density_nonnegative_and_sign_invariant() {
        for s in all_specs(9) {
            let st = optimal_fidelity(s).unwrap().state;
            let flipped: Vec<f64> = st.coeffs().iter().map(|c| -c).collect();
            let d = OutcomeDensity::new(&st);
            let df = OutcomeDensity::from_coefficients(s, &flipped).unwrap();
            for i in 0..=200 {
                let x = -1.0 + i as f64 / 100.0;
                assert!(d.eval(x) >= 0.0);
                assert_eq!(d.eval(x), df.eval(x));
            }
        }
    }

    #[test]
    fn normalization_examples() {
        let three = optimal_fidelity(spec(3, 1)).unwrap().state;
        let rule = gauss_legendre(default_density_order(3)).unwrap();
        assert!((density_normalization(&three, &rule).unwrap() - 1.0).abs() < 1e-10);

        let one = optimal_fidelity(spec(1, 1)).unwrap().state;
        let rule1 = gauss_legendre(default_density_order(1)).unwrap();
        assert!((density_normalization(&one, &rule1).unwrap() - 1.0).abs() < 1e-15);

        let doubled: Vec<f64> = three.coeffs().iter().map(|c| 2.0 * c).collect();
        let d = OutcomeDensity::from_coefficients(spec(3, 1), &doubled).unwrap();
        assert!((d.normalization(&rule).unwrap() - 4.0).abs() < 1e-10);

        let short = gauss_legendre(4).unwrap();
        assert!(density_normalization(&three, &short).is_err());
    }

    #[test]
    fn oracle_examples() {
        let rule = gauss_legendre(default_density_order(2)).unwrap();
        let m = coupling_matrix_oracle(spec(2, 0), &rule).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!(m[0][0].abs() < 1e-10 && m[1][1].abs() < 1e-10);
        assert!((m[0][1] - s).abs() < 1e-10 && (m[1][0] - s).abs() < 1e-10);

        let rule = gauss_legendre(default_density_order(4)).unwrap();
        let m = coupling_matrix_oracle(spec(4, 0), &rule).unwrap();
        for a in 0usize..3 {
            for b in 0..3 {
                if a.abs_diff(b) >= 2 {
                    assert!(m[a][b].abs() <= 1e-12);
                }
            }
        }

        let rule = gauss_legendre(default_density_order(1)).unwrap();
        let m = coupling_matrix_oracle(spec(1, 1), &rule).unwrap();
        assert!((m[0][0] - 1.0 / 3.0).abs() < 1e-12);

        assert!(coupling_matrix_oracle(spec(6, 0), &gauss_legendre(9).unwrap()).is_err());
    }

    #[test]
    fn oracle_matches_closed_form_up_to_twelve() {
        for s in all_specs(12) {
            let rule = gauss_legendre(default_density_order(s.n_spins())).unwrap();
            let quad = coupling_matrix_oracle(s, &rule).unwrap();
            let closed = build_coupling_matrix(s).to_dense();
            for a in 0..s.len() {
                for b in 0..s.len() {
                    let d = (quad[a][b] - closed[a][b]).abs();
                    assert!(d < 1e-10, "{s:?} [{a}][{b}]: {}", quad[a][b]);
                    if a.abs_diff(b) >= 2 {
                        assert!(quad[a][b].abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn quadrature_mean_matches_eigenvalue() {
        for s in all_specs(12) {
            let st = optimal_fidelity(s).unwrap().state;
            let rule = gauss_legendre(default_density_order(s.n_spins())).unwrap();
            let d = OutcomeDensity::new(&st);
            assert!(
                (d.mean_x(&rule).unwrap() - st.mean_x()).abs() < 1e-10,
                "{s:?}"
            );
            assert!(
                (d.normalization(&rule).unwrap() - 1.0).abs() < 1e-10,
                "{s:?}"
            );
        }
    }

    #[test]
    fn gram_examples() {
        let g = povm_completeness_gram(
            1,
            HalfInt::HALF,
            &gauss_legendre(default_gram_order(1)).unwrap(),
        )
        .unwrap();
        assert_eq!(g.dim(), 2);
        assert!(g.max_deviation_from_identity() < 1e-10);

        let g = povm_completeness_gram(
            2,
            HalfInt::ZERO,
            &gauss_legendre(default_gram_order(2)).unwrap(),
        )
        .unwrap();
        assert_eq!(g.dim(), 4);
        assert!(g.max_deviation_from_identity() < 1e-9);

        let g = povm_completeness_gram(
            3,
            HalfInt::HALF,
            &gauss_legendre(default_gram_order(3)).unwrap(),
        )
        .unwrap();
        assert_eq!(g.dim(), 6);
        assert!(g.max_deviation_from_identity() < 1e-9);
    }

    #[test]
    fn gram_is_identity_up_to_ten() {
        for s in all_specs(10) {
            let n = i64::from(s.n_spins());
            let rule = gauss_legendre(default_gram_order(s.n_spins())).unwrap();
            let g = povm_completeness_gram(n, s.m(), &rule).unwrap();
            let want_dim: usize = s.j_values().map(|j| j.twice() as usize + 1).sum();
            assert_eq!(g.dim(), want_dim);
            if s.m().twice() == n % 2 {
                assert_eq!(g.dim() as u64, hilbert_dimension(n).unwrap());
            }
            assert!(g.max_asymmetry() < 1e-12);
            assert!(g.max_deviation_from_identity() <= 1e-9, "{s:?}");
        }
    }

    #[test]
    fn gram_rejects_large_n() {
        let rule = gauss_legendre(10).unwrap();
        assert!(matches!(
            povm_completeness_gram(21, HalfInt::HALF, &rule),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            povm_completeness_gram(2, HalfInt::HALF, &rule),
            Err(Error::ParityMismatch { .. })
        ));
    }

    #[test]
    fn density_peaks_at_forward_direction() {
        // |d| <= 1 and c_j >= 0, so the amplitude is largest at x = 1
        for spec in all_specs(16) {
            let d = OutcomeDensity::new(&optimal_fidelity(spec).unwrap().state);
            let top = d.eval(1.0);
            for i in 0..=2000 {
                let x = -1.0 + i as f64 / 1000.0;
                assert!(d.eval(x) <= top * (1.0 + 1e-12), "{spec:?} x={x}");
            }
        }
    }
}
