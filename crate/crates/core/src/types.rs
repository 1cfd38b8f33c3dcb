//! Half-integer quantum numbers and the value types shared by every module.
//!
//! Angular momenta `j` and projections `m` are kept as exact half-integers
//! (stored doubled). They are converted to `f64` only where a formula needs
//! them numerically.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::optimal::CouplingMatrix;

/// An exact half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };

    #[inline]
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    #[inline]
    pub const fn from_int(value: i64) -> Self {
        HalfInt { twice: 2 * value }
    }

    #[inline]
    pub const fn twice(self) -> i64 {
        self.twice
    }

    /// Exact for `|twice| < 2^52`.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    #[inline]
    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// `self - other` as an integer, if it is one.
    pub fn int_diff(self, other: HalfInt) -> Option<i64> {
        let d = self.twice - other.twice;
        (d % 2 == 0).then_some(d / 2)
    }

    pub fn abs(self) -> Self {
        HalfInt::from_twice(self.twice.abs())
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl PartialOrd for HalfInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HalfInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.twice.cmp(&other.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

pub fn half_int_from_twice(t: i64) -> HalfInt {
    HalfInt::from_twice(t)
}

/// A family of signal states: `N` spin-1/2 particles and a fixed projection
/// `m`, with `j` running over `m, m+1, ..., N/2` (each value once).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProblemSpec {
    n_spins: u32,
    m: HalfInt,
}

impl ProblemSpec {
    pub fn new(n: i64, m: HalfInt) -> Result<Self> {
        if n < 1 || n > i64::from(u32::MAX) {
            return Err(Error::BadN(n));
        }
        if (m.twice() - n).rem_euclid(2) != 0 {
            return Err(Error::ParityMismatch {
                n,
                twice_m: m.twice(),
            });
        }
        if m.twice() < 0 || m.twice() > n {
            return Err(Error::OutOfRange {
                n,
                twice_m: m.twice(),
            });
        }
        Ok(ProblemSpec {
            n_spins: n as u32,
            m,
        })
    }

    /// The lowest legal projection: `m = 0` for even `N`, `m = 1/2` for odd `N`.
    pub fn lowest(n: i64) -> Result<Self> {
        Self::new(n, HalfInt::from_twice(n.rem_euclid(2)))
    }

    /// All spins parallel: `m = j = N/2`.
    pub fn parallel(n: i64) -> Result<Self> {
        Self::new(n, HalfInt::from_twice(n))
    }

    pub fn n_spins(&self) -> u32 {
        self.n_spins
    }

    pub fn m(&self) -> HalfInt {
        self.m
    }

    pub fn j_max(&self) -> HalfInt {
        HalfInt::from_twice(i64::from(self.n_spins))
    }

    /// `K = N/2 - m`.
    pub fn k(&self) -> usize {
        ((i64::from(self.n_spins) - self.m.twice()) / 2) as usize
    }

    /// Number of `j` values in the ladder, `K + 1`.
    pub fn len(&self) -> usize {
        self.k() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `j = m + index`.
    pub fn j_at(&self, index: usize) -> HalfInt {
        self.m + HalfInt::from_int(index as i64)
    }

    /// The `j` ladder in ascending order.
    pub fn j_values(&self) -> impl Iterator<Item = HalfInt> + '_ {
        (0..self.len()).map(move |i| self.j_at(i))
    }
}

pub fn validate_spec(n: i64, m: HalfInt) -> Result<ProblemSpec> {
    ProblemSpec::new(n, m)
}

/// Dimension of the space spanned when each `j` from 0 (or 1/2) to `N/2`
/// is taken once: `(N+2)^2/4` for even `N`, `(N+1)(N+3)/4` for odd `N`.
pub fn hilbert_dimension(n: i64) -> Result<u64> {
    if n < 1 {
        return Err(Error::BadN(n));
    }
    let n = n as u64;
    Ok(if n.is_multiple_of(2) {
        (n + 2) * (n + 2) / 4
    } else {
        (n + 1) * (n + 3) / 4
    })
}

/// Normalized signal coefficients `c_j`, ascending in `j`, together with the
/// mean `<cos chi>` they achieve.
#[derive(Clone, Debug, PartialEq)]
pub struct SignalState {
    spec: ProblemSpec,
    coeffs: Vec<f64>,
    mean_x: f64,
}

pub(crate) const NORM_TOL: f64 = 1e-12;
const SIGN_TOL: f64 = 1e-14;

impl SignalState {
    /// Builds a state from user-supplied coefficients. They must be
    /// non-negative and normalized; `mean_x` is the Rayleigh quotient under
    /// the coupling matrix of `spec`.
    pub fn new(spec: ProblemSpec, coeffs: Vec<f64>) -> Result<Self> {
        let coeffs = Self::checked_coeffs(&spec, coeffs)?;
        let mean_x = CouplingMatrix::build(spec).quadratic_form(&coeffs);
        Ok(SignalState {
            spec,
            coeffs,
            mean_x,
        })
    }

    /// State from an eigenpair already verified by the solver.
    pub(crate) fn from_eigenpair(spec: ProblemSpec, coeffs: Vec<f64>, mean_x: f64) -> Result<Self> {
        let coeffs = Self::checked_coeffs(&spec, coeffs)?;
        Ok(SignalState {
            spec,
            coeffs,
            mean_x,
        })
    }

    fn checked_coeffs(spec: &ProblemSpec, mut coeffs: Vec<f64>) -> Result<Vec<f64>> {
        if coeffs.len() != spec.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients for N = {}, m = {}, got {}",
                spec.len(),
                spec.n_spins(),
                spec.m(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite() || *c < -SIGN_TOL) {
            return Err(Error::InvalidArgument(
                "coefficients must be finite and non-negative".into(),
            ));
        }
        for c in coeffs.iter_mut() {
            // Clears roundoff-level negatives and -0.0.
            if *c <= 0.0 {
                *c = 0.0;
            }
        }
        let norm2: f64 = coeffs.iter().map(|c| c * c).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "coefficients are not normalized (sum of squares = {norm2})"
            )));
        }
        Ok(coeffs)
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    /// Index 0 is `j = m`, the last index is `j = N/2`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, j: HalfInt) -> Option<f64> {
        let idx = j.int_diff(self.spec.m())?;
        usize::try_from(idx)
            .ok()
            .and_then(|i| self.coeffs.get(i).copied())
    }

    pub fn mean_x(&self) -> f64 {
        self.mean_x
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FidelityResult {
    pub state: SignalState,
    pub fidelity: f64,
    pub one_minus_f: f64,
}

impl FidelityResult {
    pub fn from_state(state: SignalState) -> Self {
        let fidelity = (1.0 + state.mean_x()) / 2.0;
        FidelityResult {
            state,
            fidelity,
            one_minus_f: 1.0 - fidelity,
        }
    }

    pub fn spec(&self) -> &ProblemSpec {
        self.state.spec()
    }
}
