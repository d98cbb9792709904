//! Random-point generation and suite orchestration for the exact identity
//! checks, with machine-readable verification reports.
//!
//! Identities are certified Schwartz-Zippel style: each rational-function
//! identity is evaluated exactly at seeded random rational points. Failures
//! are collected, never aborted on, and reports are deterministic for a
//! given configuration apart from wall-time fields.

mod report;
mod suites;

pub use report::{ClaimRecord, VerificationReport};
pub use suites::{run_suite, SuiteName, SUITE_NAMES};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::model::{FState, Parameters, QPState};
use crate::scalar::{rat, Rat, Scalar};

/// Configuration of the sampling process behind every suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleConfig {
    pub seed: u64,
    /// Exact points drawn per identity.
    pub points_per_identity: usize,
    /// Numerators are drawn uniformly from `[-coeff_bound, coeff_bound]`,
    /// denominators from `[1, coeff_bound]`.
    pub coeff_bound: i64,
    /// Resampling budget when a draw lands on a pole of the identity.
    pub max_retries_on_pole: usize,
    /// Solve the last free parameter from the normalization instead of
    /// drawing it.
    pub constrain_normalization: bool,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 42,
            points_per_identity: 200,
            coeff_bound: 50,
            max_retries_on_pole: 50,
            constrain_normalization: true,
        }
    }
}

impl SampleConfig {
    pub fn with_seed(seed: u64) -> Self {
        SampleConfig { seed, ..Default::default() }
    }

    fn validate(&self) {
        assert!(self.points_per_identity >= 1, "points_per_identity must be >= 1");
        assert!(self.coeff_bound >= 1, "coeff_bound must be >= 1");
    }
}

/// Constraint on a sampled symmetric-chart state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FConstraint {
    /// Force `f_i = 0` (the divisor rows).
    ZeroF(usize),
    /// Force `f3 = f0 + f1 - 1` (the reduction level set).
    LevelSet,
}

/// Deterministic stream of exact random points.
pub struct Sampler {
    rng: ChaCha8Rng,
    bound: i64,
    constrain_normalization: bool,
}

impl Sampler {
    pub fn new(cfg: &SampleConfig) -> Self {
        cfg.validate();
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            bound: cfg.coeff_bound,
            constrain_normalization: cfg.constrain_normalization,
        }
    }

    /// Same configuration, explicitly overridden seed. Suites use this to
    /// give every claim an independent deterministic sub-stream.
    pub fn with_seed(cfg: &SampleConfig, seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), ..Sampler::new(cfg) }
    }

    /// Uniform numerator in `[-B, B]`, uniform denominator in `[1, B]`.
    pub fn rat(&mut self) -> Rat {
        let num = self.rng.random_range(-self.bound..=self.bound);
        let den = self.rng.random_range(1..=self.bound);
        rat(num, den)
    }

    pub fn nonzero_rat(&mut self) -> Rat {
        loop {
            let x = self.rat();
            if !Scalar::is_zero(&x) {
                return x;
            }
        }
    }

    pub fn fstate(&mut self, constraints: &[FConstraint]) -> FState<Rat> {
        let mut x =
            FState::new(self.rat(), self.rat(), self.rat(), self.rat(), self.rat(), self.rat());
        for c in constraints {
            match c {
                FConstraint::ZeroF(i) => match i {
                    0 => x.f0 = <Rat as Scalar>::zero(),
                    1 => x.f1 = <Rat as Scalar>::zero(),
                    2 => x.f2 = <Rat as Scalar>::zero(),
                    3 => x.f3 = <Rat as Scalar>::zero(),
                    _ => panic!("f-coordinate index {i} out of range"),
                },
                FConstraint::LevelSet => {
                    x.f3 = x.f0.clone() + &x.f1 - <Rat as Scalar>::one();
                }
            }
        }
        x
    }

    /// A chart point with `T != 0`.
    pub fn qpstate(&mut self) -> QPState<Rat> {
        QPState::new(self.rat(), self.rat(), self.rat(), self.rat(), self.nonzero_rat())
    }

    /// Exact random parameters. `zero` pins one alpha to zero (the divisor
    /// rows); under normalization the last free slot is solved from
    /// `alpha0 + alpha1 + 2 alpha2 + alpha3 = 1/2`.
    pub fn parameters(&mut self, zero: Option<usize>) -> Parameters<Rat> {
        let mut a = [self.rat(), self.rat(), self.rat(), self.rat()];
        if let Some(i) = zero {
            assert!(i < 4, "parameter index {i} out of range");
            a[i] = <Rat as Scalar>::zero();
        }
        if self.constrain_normalization {
            let solve = if zero == Some(3) { 0 } else { 3 };
            let weight = |k: usize| if k == 2 { rat(2, 1) } else { rat(1, 1) };
            let mut rest = <Rat as Scalar>::zero();
            for (k, ak) in a.iter().enumerate() {
                if k != solve {
                    rest += weight(k) * ak;
                }
            }
            a[solve] = (rat(1, 2) - rest) / weight(solve);
        }
        let [a0, a1, a2, a3] = a;
        Parameters::new(a0, a1, a2, a3)
    }

    /// Draw until `admissible` accepts, up to `max_retries` rejections.
    pub fn sample_until<T>(
        &mut self,
        max_retries: usize,
        mut admissible: impl FnMut(&mut Sampler) -> Option<T>,
    ) -> Result<T, Error> {
        for _ in 0..=max_retries {
            if let Some(v) = admissible(self) {
                return Ok(v);
            }
        }
        Err(Error::InsufficientSamples { retries: max_retries })
    }
}

/// One-shot draw of a constrained symmetric-chart state from a fresh
/// deterministic stream.
pub fn sample_fstate(cfg: &SampleConfig, constraints: &[FConstraint]) -> FState<Rat> {
    Sampler::new(cfg).fstate(constraints)
}

/// One-shot draw of parameters, optionally with `alpha_i = 0`.
pub fn sample_parameters(cfg: &SampleConfig, zero: Option<usize>) -> Parameters<Rat> {
    Sampler::new(cfg).parameters(zero)
}

pub(crate) fn fnv1a64(s: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-claim sub-seed.
pub(crate) fn claim_seed(master: u64, claim_id: &str) -> u64 {
    splitmix64(master ^ fnv1a64(claim_id))
}
