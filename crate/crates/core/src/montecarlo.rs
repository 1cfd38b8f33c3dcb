//! Monte Carlo simulation of the protocol: Bob's outcome `x = cos chi` is
//! drawn from the exact outcome density by rejection sampling, and the
//! fidelity is estimated as the sample mean of `cos^2(chi/2) = (1+x)/2`.
//!
//! Draws come from a single ChaCha8 stream seeded with `seed`. The chunked
//! variant splits the shots into chunks whose streams are seeded with
//! `seed ^ chunk_index`; it is a different (but equally reproducible)
//! sequence from the sequential one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optimal::optimal_fidelity;
use crate::povm::OutcomeDensity;
use crate::types::{ProblemSpec, SignalState};

pub type ProtocolRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ProtocolRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub shots: u64,
    pub envelope_grid: usize,
    pub envelope_slack: f64,
}

impl SamplerConfig {
    pub const DEFAULT_GRID: usize = 4096;
    pub const DEFAULT_SLACK: f64 = 1.000001;

    pub fn new(seed: u64, shots: u64) -> Self {
        SamplerConfig {
            seed,
            shots,
            envelope_grid: Self::DEFAULT_GRID,
            envelope_slack: Self::DEFAULT_SLACK,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots < 1 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        if self.envelope_grid < 64 {
            return Err(Error::InvalidArgument(format!(
                "envelope grid must have at least 64 points (got {})",
                self.envelope_grid
            )));
        }
        if !self.envelope_slack.is_finite() || self.envelope_slack <= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "envelope slack must be a finite number above 1 (got {})",
                self.envelope_slack
            )));
        }
        Ok(())
    }
}

/// Rejection sampler for `p(x)` under a flat envelope on `[-1, 1]` whose
/// height is the grid maximum of `p` times the slack.
#[derive(Clone, Debug)]
pub struct OutcomeSampler {
    density: OutcomeDensity,
    envelope: f64,
}

impl OutcomeSampler {
    pub fn new(state: &SignalState, config: &SamplerConfig) -> Result<Self> {
        config.validate()?;
        let density = OutcomeDensity::new(state);
        let last = (config.envelope_grid - 1) as f64;
        let grid_max = (0..config.envelope_grid)
            .map(|i| density.eval(-1.0 + 2.0 * i as f64 / last))
            .fold(0.0, f64::max);
        if grid_max.is_nan() || grid_max <= 0.0 {
            return Err(Error::InvalidArgument(
                "outcome density vanishes on the envelope grid".into(),
            ));
        }
        Ok(OutcomeSampler {
            density,
            envelope: grid_max * config.envelope_slack,
        })
    }

    pub fn envelope(&self) -> f64 {
        self.envelope
    }

    pub fn density(&self) -> &OutcomeDensity {
        &self.density
    }

    /// One outcome plus the number of proposals it took.
    pub fn sample_counted<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(f64, u64)> {
        let mut proposals = 0;
        loop {
            proposals += 1;
            let x: f64 = rng.gen_range(-1.0..=1.0);
            let u: f64 = rng.gen::<f64>() * self.envelope;
            let p = self.density.eval(x);
            if p > self.envelope {
                return Err(Error::EnvelopeBreach {
                    x,
                    density: p,
                    envelope: self.envelope,
                });
            }
            if u < p {
                return Ok((x, proposals));
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        self.sample_counted(rng).map(|(x, _)| x)
    }
}

/// Draws one outcome for `state`. Builds a fresh sampler; use
/// [`OutcomeSampler`] directly when drawing many outcomes.
pub fn sample_outcome<R: Rng + ?Sized>(state: &SignalState, rng: &mut R) -> Result<f64> {
    OutcomeSampler::new(state, &SamplerConfig::new(0, 1))?.sample(rng)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationReport {
    pub spec: ProblemSpec,
    pub config: SamplerConfig,
    pub mean_fidelity_estimate: f64,
    /// Sample standard deviation of `(1+x)/2` over `sqrt(shots)`; 0 when
    /// `shots == 1`.
    pub standard_error: f64,
    pub exact_fidelity: f64,
    pub accepted_fraction: f64,
}

impl SimulationReport {
    /// `(estimate - exact) / stderr`, or 0 when the error is 0.
    pub fn z_score(&self) -> f64 {
        if self.standard_error > 0.0 {
            (self.mean_fidelity_estimate - self.exact_fidelity) / self.standard_error
        } else {
            0.0
        }
    }
}

/// Running mean and sum of squared deviations (Welford), mergeable.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
    proposals: u64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.count += 1;
        let delta = v - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (v - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2
            + other.m2
            + delta * delta * self.count as f64 * other.count as f64 / count as f64;
        Moments {
            count,
            mean,
            m2,
            proposals: self.proposals + other.proposals,
        }
    }
}

fn draw(sampler: &OutcomeSampler, seed: u64, shots: u64) -> Result<Moments> {
    let mut rng = rng_from_seed(seed);
    let mut acc = Moments::default();
    for _ in 0..shots {
        let (x, tries) = sampler.sample_counted(&mut rng)?;
        acc.proposals += tries;
        acc.push((1.0 + x) / 2.0);
    }
    Ok(acc)
}

fn report(spec: ProblemSpec, config: SamplerConfig, exact: f64, acc: Moments) -> SimulationReport {
    let standard_error = if acc.count > 1 {
        (acc.m2 / (acc.count - 1) as f64).sqrt() / (acc.count as f64).sqrt()
    } else {
        0.0
    };
    SimulationReport {
        spec,
        config,
        mean_fidelity_estimate: acc.mean.clamp(0.0, 1.0),
        standard_error,
        exact_fidelity: exact,
        accepted_fraction: acc.count as f64 / acc.proposals as f64,
    }
}

/// Sequential single-stream simulation.
pub fn simulate_protocol(spec: ProblemSpec, config: &SamplerConfig) -> Result<SimulationReport> {
    config.validate()?;
    let exact = optimal_fidelity(spec)?;
    let sampler = OutcomeSampler::new(&exact.state, config)?;
    let acc = draw(&sampler, config.seed, config.shots)?;
    Ok(report(spec, *config, exact.fidelity, acc))
}

/// Opt-in parallel simulation over `chunks` independent streams. Chunk `i`
/// draws `shots / chunks` outcomes (the first `shots % chunks` chunks draw
/// one more) from a stream seeded with `seed ^ i`; partial moments are merged
/// in chunk order, so the result does not depend on scheduling.
pub fn simulate_protocol_chunked(
    spec: ProblemSpec,
    config: &SamplerConfig,
    chunks: u64,
) -> Result<SimulationReport> {
    config.validate()?;
    if chunks < 1 || chunks > config.shots {
        return Err(Error::InvalidArgument(format!(
            "chunk count must be in 1..={} (got {chunks})",
            config.shots
        )));
    }
    let exact = optimal_fidelity(spec)?;
    let sampler = OutcomeSampler::new(&exact.state, config)?;
    let base = config.shots / chunks;
    let extra = config.shots % chunks;
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|i| draw(&sampler, config.seed ^ i, base + u64::from(i < extra)))
        .collect::<Result<_>>()?;
    let acc = parts.into_iter().fold(Moments::default(), Moments::merge);
    Ok(report(spec, *config, exact.fidelity, acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::HalfInt;

    fn spec(n: i64, twice_m: i64) -> ProblemSpec {
        ProblemSpec::new(n, HalfInt::from_twice(twice_m)).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SamplerConfig::new(1, 1).validate().is_ok());
        assert!(SamplerConfig::new(1, 0).validate().is_err());
        let mut c = SamplerConfig::new(1, 10);
        c.envelope_grid = 63;
        assert!(c.validate().is_err());
        c.envelope_grid = 64;
        c.envelope_slack = 1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn single_spin_mean() {
        let st = optimal_fidelity(spec(1, 1)).unwrap().state;
        let sampler = OutcomeSampler::new(&st, &SamplerConfig::new(5, 1)).unwrap();
        let mut rng = rng_from_seed(5);
        let n = 1_000_000;
        let mut acc = Moments::default();
        for _ in 0..n {
            acc.push(sampler.sample(&mut rng).unwrap());
        }
        let se = (acc.m2 / (n - 1) as f64).sqrt() / (n as f64).sqrt();
        assert!(
            (acc.mean - 1.0 / 3.0).abs() <= 4.0 * se,
            "{} ± {se}",
            acc.mean
        );
    }

    #[test]
    fn same_seed_same_sequence() {
        let st = optimal_fidelity(spec(4, 0)).unwrap().state;
        let sampler = OutcomeSampler::new(&st, &SamplerConfig::new(9, 1)).unwrap();
        let (mut a, mut b) = (rng_from_seed(9), rng_from_seed(9));
        for _ in 0..1000 {
            assert_eq!(
                sampler.sample(&mut a).unwrap().to_bits(),
                sampler.sample(&mut b).unwrap().to_bits()
            );
        }
        let mut r = rng_from_seed(1);
        let x = sample_outcome(&st, &mut r).unwrap();
        assert!((-1.0..=1.0).contains(&x));
    }

    #[test]
    fn tiny_envelope_breaches() {
        let st = optimal_fidelity(spec(3, 1)).unwrap().state;
        let mut sampler = OutcomeSampler::new(&st, &SamplerConfig::new(1, 1)).unwrap();
        sampler.envelope *= 0.1;
        let mut rng = rng_from_seed(2);
        let err = (0..1000)
            .find_map(|_| sampler.sample(&mut rng).err())
            .unwrap();
        assert!(matches!(err, Error::EnvelopeBreach { .. }));
    }

    #[test]
    fn simulate_examples() {
        let r = simulate_protocol(spec(2, 0), &SamplerConfig::new(7, 100_000)).unwrap();
        assert!((r.exact_fidelity - 0.7886751).abs() < 1e-7);
        assert!((r.mean_fidelity_estimate - r.exact_fidelity).abs() <= 4.0 * r.standard_error);

        let r = simulate_protocol(spec(10, 10), &SamplerConfig::new(3, 100_000)).unwrap();
        assert!((r.exact_fidelity - 11.0 / 12.0).abs() < 1e-12);
        assert!((r.mean_fidelity_estimate - 11.0 / 12.0).abs() <= 4.0 * r.standard_error);

        let r = simulate_protocol(spec(1, 1), &SamplerConfig::new(1, 1)).unwrap();
        assert_eq!(r.standard_error, 0.0);
        assert_eq!(r.z_score(), 0.0);
        assert!((0.0..=1.0).contains(&r.mean_fidelity_estimate));
    }

    #[test]
    fn simulation_is_deterministic() {
        let c = SamplerConfig::new(42, 20_000);
        let a = simulate_protocol(spec(5, 1), &c).unwrap();
        let b = simulate_protocol(spec(5, 1), &c).unwrap();
        assert_eq!(
            a.mean_fidelity_estimate.to_bits(),
            b.mean_fidelity_estimate.to_bits()
        );
        assert_eq!(a.standard_error.to_bits(), b.standard_error.to_bits());
        assert_eq!(a, b);
    }

    #[test]
    fn chunked_is_deterministic_and_consistent() {
        let c = SamplerConfig::new(17, 50_001);
        let a = simulate_protocol_chunked(spec(4, 0), &c, 8).unwrap();
        let b = simulate_protocol_chunked(spec(4, 0), &c, 8).unwrap();
        assert_eq!(a, b);
        assert!((a.mean_fidelity_estimate - a.exact_fidelity).abs() <= 5.0 * a.standard_error);
        // one chunk is exactly the sequential stream (seed ^ 0 == seed)
        let one = simulate_protocol_chunked(spec(4, 0), &c, 1).unwrap();
        let seq = simulate_protocol(spec(4, 0), &c).unwrap();
        assert_eq!(one, seq);
        assert!(simulate_protocol_chunked(spec(4, 0), &c, 0).is_err());
    }

    #[test]
    fn acceptance_fraction_matches_envelope_efficiency() {
        for (n, tm) in [(1, 1), (2, 0), (3, 1), (6, 0), (10, 0)] {
            let c = SamplerConfig::new(11, 40_000);
            let st = optimal_fidelity(spec(n, tm)).unwrap().state;
            let sampler = OutcomeSampler::new(&st, &c).unwrap();
            let r = simulate_protocol(spec(n, tm), &c).unwrap();
            let expected = 1.0 / (2.0 * sampler.envelope());
            // binomial noise on ~40k/expected proposals
            assert!(
                (r.accepted_fraction - expected).abs() < 0.02 * expected.max(0.05),
                "N={n}: {} vs {expected}",
                r.accepted_fraction
            );
        }
    }

    #[test]
    fn moments_merge_matches_sequential() {
        let vals: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 101.0).collect();
        let mut whole = Moments::default();
        vals.iter().for_each(|&v| whole.push(v));
        let mut left = Moments::default();
        let mut right = Moments::default();
        vals[..333].iter().for_each(|&v| left.push(v));
        vals[333..].iter().for_each(|&v| right.push(v));
        let merged = left.merge(right);
        assert_eq!(merged.count, whole.count);
        assert!((merged.mean - whole.mean).abs() < 1e-14);
        assert!((merged.m2 - whole.m2).abs() < 1e-10);
    }
}
