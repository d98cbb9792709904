//! Parameter and phase-space state types shared by both coordinate charts.

use crate::error::Error;
use crate::scalar::Scalar;

/// The parameter quadruple (alpha0, alpha1, alpha2, alpha3).
///
/// The full symmetry analysis assumes the affine normalization
/// `alpha0 + alpha1 + 2*alpha2 + alpha3 = 1/2`; strict construction enforces
/// it, relaxed construction allows arbitrary quadruples for exploration.
#[derive(Clone, Debug, PartialEq)]
pub struct Parameters<S> {
    pub alpha0: S,
    pub alpha1: S,
    pub alpha2: S,
    pub alpha3: S,
}

impl<S: Scalar> Parameters<S> {
    /// Relaxed constructor: no normalization check.
    pub fn new(alpha0: S, alpha1: S, alpha2: S, alpha3: S) -> Self {
        Parameters { alpha0, alpha1, alpha2, alpha3 }
    }

    pub fn alpha(&self, i: usize) -> &S {
        match i {
            0 => &self.alpha0,
            1 => &self.alpha1,
            2 => &self.alpha2,
            3 => &self.alpha3,
            _ => panic!("parameter index {i} out of range"),
        }
    }

    pub fn to_array(&self) -> [S; 4] {
        [
            self.alpha0.clone(),
            self.alpha1.clone(),
            self.alpha2.clone(),
            self.alpha3.clone(),
        ]
    }
}

/// `alpha0 + alpha1 + 2*alpha2 + alpha3 - 1/2`, exactly.
pub fn normalization_residual<S: Scalar>(p: &Parameters<S>) -> S {
    p.alpha0.clone()
        + &p.alpha1
        + S::from_int(2) * &p.alpha2
        + &p.alpha3
        - S::ratio(1, 2)
}

/// Build a parameter quadruple. In strict mode the normalization residual
/// must be exactly zero.
pub fn make_parameters<S: Scalar>(
    a0: S,
    a1: S,
    a2: S,
    a3: S,
    strict: bool,
) -> Result<Parameters<S>, Error> {
    let p = Parameters::new(a0, a1, a2, a3);
    if strict {
        let r = normalization_residual(&p);
        if !r.is_zero() {
            return Err(Error::NormalizationViolation { residual: r.to_string() });
        }
    }
    Ok(p)
}

/// State of the six-variable symmetric form (f0, f1, f2, f3, g1, g2).
///
/// No intrinsic constraint: the relations `f3 = f0 + f1 - 1` and
/// `f2 - g1*g2 = T` single out the reduced level set and are checked by the
/// operations that need them, not by the type.
#[derive(Clone, Debug, PartialEq)]
pub struct FState<S> {
    pub f0: S,
    pub f1: S,
    pub f2: S,
    pub f3: S,
    pub g1: S,
    pub g2: S,
}

impl<S: Scalar> FState<S> {
    pub fn new(f0: S, f1: S, f2: S, f3: S, g1: S, g2: S) -> Self {
        FState { f0, f1, f2, f3, g1, g2 }
    }

    pub fn f(&self, i: usize) -> &S {
        match i {
            0 => &self.f0,
            1 => &self.f1,
            2 => &self.f2,
            3 => &self.f3,
            _ => panic!("f-coordinate index {i} out of range"),
        }
    }

    pub fn to_array(&self) -> [S; 6] {
        [
            self.f0.clone(),
            self.f1.clone(),
            self.f2.clone(),
            self.f3.clone(),
            self.g1.clone(),
            self.g2.clone(),
        ]
    }

    pub fn from_array(a: [S; 6]) -> Self {
        let [f0, f1, f2, f3, g1, g2] = a;
        FState { f0, f1, f2, f3, g1, g2 }
    }
}

/// State of the four-dimensional Hamiltonian chart (q1, p1, q2, p2) together
/// with the independent time variable `T`. The vector field in this chart is
/// singular at `T = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QPState<S> {
    pub q1: S,
    pub p1: S,
    pub q2: S,
    pub p2: S,
    pub t: S,
}

impl<S: Scalar> QPState<S> {
    pub fn new(q1: S, p1: S, q2: S, p2: S, t: S) -> Self {
        QPState { q1, p1, q2, p2, t }
    }

    pub fn to_array(&self) -> [S; 5] {
        [
            self.q1.clone(),
            self.p1.clone(),
            self.q2.clone(),
            self.p2.clone(),
            self.t.clone(),
        ]
    }

    pub fn from_array(a: [S; 5]) -> Self {
        let [q1, p1, q2, p2, t] = a;
        QPState { q1, p1, q2, p2, t }
    }
}

/// The integration constant `c` of the time correspondence `t + c = log T`
/// between the autonomous chart time `t` and the Hamiltonian chart time `T`.
/// Along any real trajectory using this correspondence `T = exp(t + c) > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeChange {
    pub c: f64,
}

impl Default for TimeChange {
    fn default() -> Self {
        TimeChange { c: 0.0 }
    }
}

impl TimeChange {
    /// Map autonomous time `t` to chart time `T = exp(t + c)`.
    pub fn big_t(&self, t: f64) -> f64 {
        (t + self.c).exp()
    }

    /// Map chart time `T > 0` back to autonomous time `t = log T - c`.
    pub fn small_t(&self, big_t: f64) -> f64 {
        big_t.ln() - self.c
    }
}
