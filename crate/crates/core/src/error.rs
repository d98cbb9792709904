use std::fmt;

use thiserror::Error;

/// A vanishing denominator of one of the birational transformations. The
/// variants name the divisor in the chart where it vanished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleDivisor {
    F0,
    F1,
    F2,
    F3,
    P1,
    P2,
    Q1Q2PlusT,
    P1PlusP2Minus1,
}

impl fmt::Display for PoleDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PoleDivisor::F0 => "f0",
            PoleDivisor::F1 => "f1",
            PoleDivisor::F2 => "f2",
            PoleDivisor::F3 => "f3",
            PoleDivisor::P1 => "p1",
            PoleDivisor::P2 => "p2",
            PoleDivisor::Q1Q2PlusT => "q1*q2+T",
            PoleDivisor::P1PlusP2Minus1 => "p1+p2-1",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("normalization violated: alpha0+alpha1+2*alpha2+alpha3 - 1/2 = {residual}")]
    NormalizationViolation { residual: String },

    #[error("singular time: T = 0")]
    SingularTime,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("state off the reduction level set: f3 - (f0+f1-1) = {residual}")]
    OffLevelSet { residual: String },

    #[error("pole: {divisor} = 0{}", step.map(|i| format!(" (word step {i})")).unwrap_or_default())]
    PoleHit {
        divisor: PoleDivisor,
        /// Index of the failing generator when the pole was hit mid-word.
        step: Option<usize>,
    },

    #[error("pole along flow: {divisor} vanished near t = {t}")]
    PoleAlongFlow { divisor: PoleDivisor, t: f64 },

    #[error("bracket {{{0}, {1}}} has no specified or derivable entry in this table")]
    UnspecifiedBracket(&'static str, &'static str),

    #[error("could not sample an admissible point after {retries} retries")]
    InsufficientSamples { retries: usize },

    #[error("step size underflow: |h| = {h:e} at t = {t}")]
    StepUnderflow { h: f64, t: f64 },

    #[error("maximum step count {0} exceeded")]
    MaxStepsExceeded(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn pole(divisor: PoleDivisor) -> Self {
        Error::PoleHit { divisor, step: None }
    }

    pub fn at_step(self, i: usize) -> Self {
        match self {
            Error::PoleHit { divisor, .. } => Error::PoleHit { divisor, step: Some(i) },
            other => other,
        }
    }
}
