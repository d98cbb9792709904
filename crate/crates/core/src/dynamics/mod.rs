//! The two vector fields, the Hamiltonian, the first integrals, and the
//! correspondence between the six-variable symmetric chart and the
//! four-dimensional Hamiltonian chart.
//!
//! Everything here evaluates rational right-hand sides pointwise; no symbolic
//! simplification is ever performed. With an exact [`Scalar`] the results are
//! exact, which is what the identity-testing harness relies on.

pub mod poisson;

use crate::error::Error;
use crate::model::{FState, Parameters, QPState};
use crate::scalar::{Dual, Scalar, ScalarRef};

/// d/dt rates of the symmetric-form system.
#[derive(Clone, Debug, PartialEq)]
pub struct FTangent<S> {
    pub df0: S,
    pub df1: S,
    pub df2: S,
    pub df3: S,
    pub dg1: S,
    pub dg2: S,
}

impl<S: Scalar> FTangent<S> {
    pub fn df(&self, i: usize) -> &S {
        match i {
            0 => &self.df0,
            1 => &self.df1,
            2 => &self.df2,
            3 => &self.df3,
            _ => panic!("f-rate index {i} out of range"),
        }
    }

    pub fn to_array(&self) -> [S; 6] {
        [
            self.df0.clone(),
            self.df1.clone(),
            self.df2.clone(),
            self.df3.clone(),
            self.dg1.clone(),
            self.dg2.clone(),
        ]
    }
}

/// d/dT rates of the Hamiltonian-chart system.
#[derive(Clone, Debug, PartialEq)]
pub struct QPTangent<S> {
    pub dq1: S,
    pub dp1: S,
    pub dq2: S,
    pub dp2: S,
}

impl<S: Scalar> QPTangent<S> {
    pub fn to_array(&self) -> [S; 4] {
        [
            self.dq1.clone(),
            self.dp1.clone(),
            self.dq2.clone(),
            self.dp2.clone(),
        ]
    }
}

/// The autonomous six-variable vector field.
pub fn f_vector_field<S>(x: &FState<S>, a: &Parameters<S>) -> FTangent<S>
where
    S: Scalar,
    for<'a> &'a S: ScalarRef<S>,
{
    let (f0, f1, f2, f3, g1, g2) = (&x.f0, &x.f1, &x.f2, &x.f3, &x.g1, &x.g2);
    let (a0, a1, a2, a3) = (&a.alpha0, &a.alpha1, &a.alpha2, &a.alpha3);
    let two = &S::from_int(2);
    let three = &S::from_int(3);
    let four = &S::from_int(4);
    // alpha0 + alpha1 + alpha3 appears in both g-rates
    let asum = &(a0.clone() + a1 + a3);

    let df0 = (two * (f1 - f3) * g1 - two * (g2 * f1) - a1 - a3) * f0 + a0 * (f1 - f3);
    let df1 = (two * (f0 - f3) * g2 - two * (g1 * f0) - a0 - a3) * f1 + a1 * (f0 - f3);
    let df2 = ((f3 - f1 + three * f0) * g1 + (f3 + three * f1 - f0) * g2 + S::one()) * f2
        - four * (a2 * g1) * g2;
    let df3 = -((two * (f0 * g1) + two * (f1 * g2) + a0 + a1) * f3) - a3 * (f0 + f1);
    let dg1 = (f0 - f1 + f3) * g1 * g1
        + ((f0 - f1 - f3) * g2 + asum) * g1
        + f2 * (f3 + three * f1 - f0);
    let dg2 = (f1 - f0 + f3) * g2 * g2
        + ((f1 - f0 - f3) * g1 + asum) * g2
        + f2 * (f3 + three * f0 - f1);

    FTangent { df0, df1, df2, df3, dg1, dg2 }
}

/// The Hamiltonian-chart vector field (rates with respect to `T`).
/// Singular at `T = 0`.
pub fn qp_vector_field<S>(x: &QPState<S>, a: &Parameters<S>) -> Result<QPTangent<S>, Error>
where
    S: Scalar,
    for<'a> &'a S: ScalarRef<S>,
{
    if x.t.is_zero() {
        return Err(Error::SingularTime);
    }
    let (q1, p1, q2, p2, t) = (&x.q1, &x.p1, &x.q2, &x.p2, &x.t);
    let (a0, a1, a3) = (&a.alpha0, &a.alpha1, &a.alpha3);
    let two = &S::from_int(2);
    let four = &S::from_int(4);
    let asum = &(a0.clone() + a1 + a3);

    let dq1 = (two * (q1 * q1) * p1 - q1 * q1 + asum * q1) / t - S::one()
        + four * p2
        + two * (q1 * q2) * p2 / t;
    let dp1 = (-(two * q1 * (p1 * p1)) + two * (q1 * p1) - asum * p1 + a0) / t
        - two * (p1 * q2) * p2 / t;
    let dq2 = (two * (q2 * q2) * p2 - q2 * q2 + asum * q2) / t - S::one()
        + four * p1
        + two * (q1 * p1) * q2 / t;
    let dp2 = (-(two * q2 * (p2 * p2)) + two * (q2 * p2) - asum * p2 + a1) / t
        - two * (q1 * p1) * p2 / t;

    Ok(QPTangent { dq1, dp1, dq2, dp2 })
}

/// The Hamiltonian generating the chart vector field through the canonical
/// bracket `{q1,p1} = {q2,p2} = 1`. Singular at `T = 0`.
pub fn hamiltonian<S>(x: &QPState<S>, a: &Parameters<S>) -> Result<S, Error>
where
    S: Scalar,
    for<'a> &'a S: ScalarRef<S>,
{
    if x.t.is_zero() {
        return Err(Error::SingularTime);
    }
    let (q1, p1, q2, p2, t) = (&x.q1, &x.p1, &x.q2, &x.p2, &x.t);
    let (a0, a1, a3) = (&a.alpha0, &a.alpha1, &a.alpha3);
    let two = &S::from_int(2);
    let four = &S::from_int(4);
    let asum = &(a0.clone() + a1 + a3);

    let block1 = ((q1 * q1) * (p1 * p1) - (q1 * q1) * p1 + asum * (q1 * p1) - a0 * q1) / t - p1;
    let block2 = ((q2 * q2) * (p2 * p2) - (q2 * q2) * p2 + asum * (q2 * p2) - a1 * q2) / t - p2;
    Ok(block1 + block2 + four * (p1 * p2) + two * (q1 * p1) * (q2 * p2) / t)
}

/// The canonical equations `(dH/dp1, -dH/dq1, dH/dp2, -dH/dq2)`, computed by
/// dual-number differentiation of [`hamiltonian`]. Agreeing with
/// [`qp_vector_field`] exactly is the Hamiltonian-consistency identity.
pub fn hamiltonian_vector_field<S>(
    x: &QPState<S>,
    a: &Parameters<S>,
) -> Result<QPTangent<S>, Error>
where
    S: Scalar,
    for<'a> &'a S: ScalarRef<S>,
{
    if x.t.is_zero() {
        return Err(Error::SingularTime);
    }
    let xd = QPState {
        q1: Dual::variable(x.q1.clone(), 0, 4),
        p1: Dual::variable(x.p1.clone(), 1, 4),
        q2: Dual::variable(x.q2.clone(), 2, 4),
        p2: Dual::variable(x.p2.clone(), 3, 4),
        t: Dual::constant(x.t.clone()),
    };
    let ad = Parameters {
        alpha0: Dual::constant(a.alpha0.clone()),
        alpha1: Dual::constant(a.alpha1.clone()),
        alpha2: Dual::constant(a.alpha2.clone()),
        alpha3: Dual::constant(a.alpha3.clone()),
    };
    let h = hamiltonian::<Dual<S>>(&xd, &ad)?;
    Ok(QPTangent {
        dq1: h.partial(1),
        dp1: -h.partial(0),
        dq2: h.partial(3),
        dp2: -h.partial(2),
    })
}

/// Residuals of the two conservation laws of the symmetric form:
/// `r1 = df3 - (df0 + df1)` and
/// `r2 = d(f2 - g1*g2)/dt - (f2 - g1*g2)`,
/// with all rates taken from [`f_vector_field`]. Both vanish identically,
/// the second one on normalized parameters.
pub fn first_integral_residuals<S>(x: &FState<S>, a: &Parameters<S>) -> (S, S)
where
    S: Scalar,
    for<'a> &'a S: ScalarRef<S>,
{
    let v = f_vector_field(x, a);
    let r1 = v.df3.clone() - (v.df0.clone() + &v.df1);
    let rate_level = v.df2.clone() - &x.g1 * &v.dg2 - &x.g2 * &v.dg1;
    let level = x.f2.clone() - &x.g1 * &x.g2;
    (r1, rate_level - level)
}

/// The rate `df_i` on the locus `{f_i = 0, alpha_i = 0}`. Vanishing exactly
/// certifies that the divisor `{f_i = 0}` is invariant when `alpha_i = 0`.
pub fn divisor_tangency_residual<S>(
    i: usize,
    x: &FState<S>,
    a: &Parameters<S>,
) -> Result<S, Error>
where
    S: Scalar,
    for<'a> &'a S: ScalarRef<S>,
{
    assert!(i < 4, "divisor index {i} out of range");
    if !x.f(i).is_zero() {
        return Err(Error::PreconditionViolated(format!("f{i} != 0 (got {})", x.f(i))));
    }
    if !a.alpha(i).is_zero() {
        return Err(Error::PreconditionViolated(format!(
            "alpha{i} != 0 (got {})",
            a.alpha(i)
        )));
    }
    Ok(f_vector_field(x, a).df(i).clone())
}

/// Embed a Hamiltonian-chart point into the symmetric chart:
/// `(f0, f1, f2, f3, g1, g2) = (p1, p2, q1*q2 + T, p1 + p2 - 1, q1, q2)`.
pub fn lift_to_f<S>(x: &QPState<S>) -> FState<S>
where
    S: Scalar,
    for<'a> &'a S: ScalarRef<S>,
{
    FState {
        f0: x.p1.clone(),
        f1: x.p2.clone(),
        f2: &x.q1 * &x.q2 + &x.t,
        f3: x.p1.clone() + &x.p2 - S::one(),
        g1: x.q1.clone(),
        g2: x.q2.clone(),
    }
}

/// Project a symmetric-chart point on the level set `f3 = f0 + f1 - 1` down
/// to the Hamiltonian chart: `(q1, p1, q2, p2, T) = (g1, f0, g2, f1, f2 - g1*g2)`.
///
/// The resulting `T` may be zero (the map itself is defined there); only the
/// chart vector field is singular at `T = 0`, and its consumers reject it.
pub fn reduce_to_qp<S>(x: &FState<S>) -> Result<QPState<S>, Error>
where
    S: Scalar,
    for<'a> &'a S: ScalarRef<S>,
{
    let level = x.f3.clone() - (x.f0.clone() + &x.f1 - S::one());
    if !level.is_zero() {
        return Err(Error::OffLevelSet { residual: level.to_string() });
    }
    Ok(project_to_qp(x))
}

/// The same projection without the level-set check. Used on floating-point
/// trajectories where the relation holds only up to integration drift.
pub fn project_to_qp<S>(x: &FState<S>) -> QPState<S>
where
    S: Scalar,
    for<'a> &'a S: ScalarRef<S>,
{
    QPState {
        q1: x.g1.clone(),
        p1: x.f0.clone(),
        q2: x.g2.clone(),
        p2: x.f1.clone(),
        t: x.f2.clone() - &x.g1 * &x.g2,
    }
}

/// Residual of the statement that the Hamiltonian-chart system is exactly the
/// reduction of the symmetric form under `t + c = log T` (so `d/dt = T d/dT`).
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionResidual<S> {
    /// Componentwise difference between the reduced symmetric field and the
    /// chart field, in d/dT units.
    pub state: QPTangent<S>,
    /// `d(f2 - g1*g2)/dt - T` along the lift; zero iff the level value moves
    /// exactly like `T` itself (i.e. `dT/dT = 1` is consistent).
    pub level_rate: S,
}

impl<S: Scalar> ReductionResidual<S> {
    pub fn is_zero(&self) -> bool {
        self.state.dq1.is_zero()
            && self.state.dp1.is_zero()
            && self.state.dq2.is_zero()
            && self.state.dp2.is_zero()
            && self.level_rate.is_zero()
    }
}

/// Evaluate the symmetric field at the lift of `x`, convert the
/// `(g1, f0, g2, f1)` rates from d/dt to d/dT by dividing by `T`, and
/// subtract the chart field. Identically zero on normalized parameters.
pub fn conjugated_field_residual<S>(
    x: &QPState<S>,
    a: &Parameters<S>,
) -> Result<ReductionResidual<S>, Error>
where
    S: Scalar,
    for<'a> &'a S: ScalarRef<S>,
{
    if x.t.is_zero() {
        return Err(Error::SingularTime);
    }
    let lifted = lift_to_f(x);
    let vf = f_vector_field(&lifted, a);
    let vqp = qp_vector_field(x, a)?;
    let t = &x.t;
    let state = QPTangent {
        dq1: vf.dg1.clone() / t - &vqp.dq1,
        dp1: vf.df0.clone() / t - &vqp.dp1,
        dq2: vf.dg2.clone() / t - &vqp.dq2,
        dp2: vf.df1.clone() / t - &vqp.dp2,
    };
    let level_rate = vf.df2.clone() - &lifted.g1 * &vf.dg2 - &lifted.g2 * &vf.dg1 - t;
    Ok(ReductionResidual { state, level_rate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_parameters;
    use crate::scalar::{rat, Rat};

    fn params_eighth() -> Parameters<Rat> {
        make_parameters(rat(1, 8), rat(1, 8), rat(1, 16), rat(1, 8), true).unwrap()
    }

    fn fstate_ones() -> FState<Rat> {
        FState::new(rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1), rat(0, 1), rat(0, 1))
    }

    #[test]
    fn f_field_at_unit_point() {
        let v = f_vector_field(&fstate_ones(), &params_eighth());
        // braces of df0 reduce to -alpha1-alpha3 = -1/4; alpha0*(f1-f3) = 0
        assert_eq!(v.df0, rat(-1, 4));
        // braces of df2 reduce to 1; the -4*alpha2*g1*g2 correction vanishes
        assert_eq!(v.df2, rat(1, 1));
    }

    #[test]
    fn f_field_vanishes_at_origin() {
        let zero = FState::new(rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1));
        let v = f_vector_field(&zero, &params_eighth());
        for r in v.to_array() {
            assert!(r.is_zero());
        }
    }

    #[test]
    fn qp_field_at_origin() {
        let a = params_eighth();
        let x = QPState::new(rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1));
        let v = qp_vector_field(&x, &a).unwrap();
        assert_eq!(v.dq1, rat(-1, 1));
        assert_eq!(v.dp1, rat(1, 8));
        assert_eq!(v.dq2, rat(-1, 1));
        assert_eq!(v.dp2, rat(1, 8));
    }

    #[test]
    fn qp_field_at_unit_momenta() {
        // q1 = q2 = 0, p1 = p2 = 1, T = 1: dq1 keeps -1 + 4*p2 = 3 and dp1
        // reduces to alpha0 - (alpha0+alpha1+alpha3) = -(alpha1+alpha3).
        let a = params_eighth();
        let x = QPState::new(rat(0, 1), rat(1, 1), rat(0, 1), rat(1, 1), rat(1, 1));
        let v = qp_vector_field(&x, &a).unwrap();
        assert_eq!(v.dq1, rat(3, 1));
        assert_eq!(v.dp1, rat(-1, 4));
        assert_eq!(v.dq2, rat(3, 1));
        assert_eq!(v.dp2, rat(-1, 4));
    }

    #[test]
    fn qp_field_singular_at_t_zero() {
        let a = params_eighth();
        let x = QPState::new(rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1), rat(0, 1));
        assert_eq!(qp_vector_field(&x, &a).unwrap_err(), Error::SingularTime);
    }

    #[test]
    fn hamiltonian_values() {
        let a = params_eighth();
        let x = QPState::new(rat(0, 1), rat(1, 1), rat(0, 1), rat(1, 1), rat(1, 1));
        assert_eq!(hamiltonian(&x, &a).unwrap(), rat(2, 1));

        let x = QPState::new(rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(7, 3));
        assert_eq!(hamiltonian(&x, &a).unwrap(), rat(0, 1));

        let x = QPState::new(rat(1, 1), rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1));
        assert_eq!(hamiltonian(&x, &a).unwrap(), rat(-3, 4));

        let x = QPState::new(rat(1, 1), rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1));
        assert_eq!(hamiltonian(&x, &a).unwrap_err(), Error::SingularTime);
    }

    #[test]
    fn hamiltonian_field_matches_qp_field() {
        let a = params_eighth();
        let x = QPState::new(rat(2, 3), rat(-1, 5), rat(3, 7), rat(4, 9), rat(5, 2));
        let hv = hamiltonian_vector_field(&x, &a).unwrap();
        let v = qp_vector_field(&x, &a).unwrap();
        assert_eq!(hv, v);

        let origin = QPState::new(rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1));
        let hv = hamiltonian_vector_field(&origin, &a).unwrap();
        assert_eq!(hv.dq1, rat(-1, 1));
        assert_eq!(hv.dp1, a.alpha0);
        assert_eq!(hv.dq2, rat(-1, 1));
        assert_eq!(hv.dp2, a.alpha1);
    }

    #[test]
    fn first_integrals_vanish() {
        let a = params_eighth();
        let x = FState::new(rat(2, 3), rat(-1, 7), rat(4, 5), rat(-3, 2), rat(5, 6), rat(-7, 4));
        let (r1, r2) = first_integral_residuals(&x, &a);
        assert!(r1.is_zero());
        assert!(r2.is_zero());

        let (r1, r2) = first_integral_residuals(&fstate_ones(), &a);
        assert!(r1.is_zero() && r2.is_zero());
    }

    #[test]
    fn second_integral_needs_normalization() {
        // On unnormalized parameters r2 picks up (1 - 2*sum) * g1 * g2.
        let a = Parameters::new(rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1));
        let x = FState::new(rat(1, 2), rat(1, 3), rat(1, 5), rat(1, 7), rat(2, 1), rat(3, 1));
        let (r1, r2) = first_integral_residuals(&x, &a);
        assert!(r1.is_zero());
        assert!(!r2.is_zero());
    }

    #[test]
    fn divisor_tangency() {
        let a = make_parameters(rat(0, 1), rat(1, 8), rat(1, 16), rat(1, 4), true).unwrap();
        let x = FState::new(rat(0, 1), rat(2, 3), rat(-1, 5), rat(4, 7), rat(1, 2), rat(-3, 4));
        assert!(divisor_tangency_residual(0, &x, &a).unwrap().is_zero());

        let a = make_parameters(rat(1, 8), rat(1, 8), rat(0, 1), rat(1, 4), true).unwrap();
        let x = FState::new(rat(1, 3), rat(2, 3), rat(0, 1), rat(4, 7), rat(1, 2), rat(-3, 4));
        assert!(divisor_tangency_residual(2, &x, &a).unwrap().is_zero());

        let x = FState::new(rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1));
        assert!(matches!(
            divisor_tangency_residual(0, &x, &a),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn lift_examples() {
        let x = QPState::new(rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1));
        let f = lift_to_f(&x);
        assert_eq!(
            f.to_array(),
            [rat(0, 1), rat(0, 1), rat(1, 1), rat(-1, 1), rat(0, 1), rat(0, 1)]
        );

        let x = QPState::new(rat(1, 1), rat(2, 1), rat(3, 1), rat(4, 1), rat(5, 1));
        let f = lift_to_f(&x);
        assert_eq!(
            f.to_array(),
            [rat(2, 1), rat(4, 1), rat(8, 1), rat(5, 1), rat(1, 1), rat(3, 1)]
        );
    }

    #[test]
    fn reduce_examples() {
        let f = FState::new(rat(2, 1), rat(4, 1), rat(8, 1), rat(5, 1), rat(1, 1), rat(3, 1));
        let x = reduce_to_qp(&f).unwrap();
        assert_eq!(
            x.to_array(),
            [rat(1, 1), rat(2, 1), rat(3, 1), rat(4, 1), rat(5, 1)]
        );

        let f = FState::new(rat(1, 1), rat(1, 1), rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1));
        assert!(matches!(reduce_to_qp(&f), Err(Error::OffLevelSet { .. })));
    }

    #[test]
    fn lift_reduce_roundtrip() {
        let x = QPState::new(rat(2, 3), rat(-1, 5), rat(3, 7), rat(4, 9), rat(5, 2));
        assert_eq!(reduce_to_qp(&lift_to_f(&x)).unwrap(), x);
    }

    #[test]
    fn conjugated_field_residual_zero() {
        let a = params_eighth();
        for x in [
            QPState::new(rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)),
            QPState::new(rat(2, 3), rat(-1, 5), rat(3, 7), rat(4, 9), rat(5, 2)),
            QPState::new(rat(-7, 2), rat(1, 9), rat(8, 3), rat(-2, 11), rat(-1, 6)),
        ] {
            let r = conjugated_field_residual(&x, &a).unwrap();
            assert!(r.is_zero(), "nonzero residual {r:?} at {x:?}");
        }

        let x = QPState::new(rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1), rat(0, 1));
        assert_eq!(conjugated_field_residual(&x, &a).unwrap_err(), Error::SingularTime);
    }

    #[test]
    fn f_field_float_matches_exact() {
        let a = params_eighth();
        let x = FState::new(rat(1, 2), rat(-1, 3), rat(2, 5), rat(3, 4), rat(-2, 7), rat(5, 9));
        let exact = f_vector_field(&x, &a);

        let af = Parameters::new(0.125, 0.125, 0.0625, 0.125);
        let xf = FState::new(0.5, -1.0 / 3.0, 0.4, 0.75, -2.0 / 7.0, 5.0 / 9.0);
        let approx = f_vector_field(&xf, &af);
        for (e, f) in exact.to_array().iter().zip(approx.to_array()) {
            let e = crate::scalar::rat_to_f64(e);
            assert!((e - f).abs() <= 1e-14 * (1.0 + e.abs()), "{e} vs {f}");
        }
    }
}
