//! Shared fixtures for the benchmarks.

use cp3_core::model::{FState, Parameters, QPState};
use cp3_core::scalar::{rat, Rat};
use cp3_core::verify::{SampleConfig, Sampler};

pub fn exact_params() -> Parameters<Rat> {
    Parameters::new(rat(1, 8), rat(1, 8), rat(1, 16), rat(1, 8))
}

pub fn exact_fstate() -> FState<Rat> {
    Sampler::new(&SampleConfig::with_seed(7)).fstate(&[])
}

pub fn exact_qpstate() -> QPState<Rat> {
    Sampler::new(&SampleConfig::with_seed(7)).qpstate()
}

pub fn float_params() -> Parameters<f64> {
    Parameters::new(0.125, 0.125, 0.0625, 0.125)
}
