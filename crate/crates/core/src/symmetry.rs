//! The five birational symmetry generators in both charts, word composition,
//! exact Jacobians, vector-field pushforward residuals, and discovery of the
//! pairwise relation orders.
//!
//! Words compose leftmost-first. Every generator acts on the parameters as
//! well as the state; equality in all symmetry checks is exact equality of
//! the (state, parameters) pair.

use std::fmt;
use std::str::FromStr;

use crate::dynamics::{f_vector_field, qp_vector_field, FTangent};
use crate::error::{Error, PoleDivisor};
use crate::model::{FState, Parameters, QPState};
use crate::scalar::{Dual, Scalar, ScalarRef};

/// One of the five symmetry generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    S0,
    S1,
    S2,
    S3,
    Pi,
}

pub const GENERATORS: [Generator; 5] =
    [Generator::S0, Generator::S1, Generator::S2, Generator::S3, Generator::Pi];

/// The four reflections (every generator except the diagram rotation).
pub const REFLECTIONS: [Generator; 4] =
    [Generator::S0, Generator::S1, Generator::S2, Generator::S3];

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::S0 => "s0",
            Generator::S1 => "s1",
            Generator::S2 => "s2",
            Generator::S3 => "s3",
            Generator::Pi => "pi",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "s0" => Ok(Generator::S0),
            "s1" => Ok(Generator::S1),
            "s2" => Ok(Generator::S2),
            "s3" => Ok(Generator::S3),
            "pi" => Ok(Generator::Pi),
            other => Err(Error::Parse(format!(
                "unknown generator {other:?} (expected one of s0 s1 s2 s3 pi)"
            ))),
        }
    }
}

/// A finite composition of generators, applied leftmost-first.
/// The empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(gi gj)^m`
    pub fn pair_power(gi: Generator, gj: Generator, m: usize) -> Self {
        Word([gi, gj].repeat(m))
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        s.split_whitespace().map(Generator::from_str).collect::<Result<_, _>>().map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// A (state, parameters) pair in one of the two charts.
#[derive(Clone, Debug, PartialEq)]
pub enum ChartPoint<S> {
    F { state: FState<S>, params: Parameters<S> },
    Qp { state: QPState<S>, params: Parameters<S> },
}

impl<S: Scalar> ChartPoint<S> {
    pub fn params(&self) -> &Parameters<S> {
        match self {
            ChartPoint::F { params, .. } | ChartPoint::Qp { params, .. } => params,
        }
    }
}

/// The linear action of a generator on the parameter quadruple. It is the
/// same in both charts, and each reflection `s_i` sends `alpha_i` to
/// `-alpha_i` while preserving `alpha0 + alpha1 + 2*alpha2 + alpha3`.
pub fn apply_to_parameters<S>(g: Generator, a: &Parameters<S>) -> Parameters<S>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    let (a0, a1, a2, a3) = (&a.alpha0, &a.alpha1, &a.alpha2, &a.alpha3);
    match g {
        Generator::S0 => Parameters::new(-a0, a1.clone(), a2.clone() + a0, a3.clone()),
        Generator::S1 => Parameters::new(a0.clone(), -a1, a2.clone() + a1, a3.clone()),
        Generator::S2 => Parameters::new(
            a0.clone() + a2,
            a1.clone() + a2,
            -a2,
            a3.clone() + S::from_int(2) * a2,
        ),
        Generator::S3 => Parameters::new(a0.clone(), a1.clone(), a2.clone() + a3, -a3),
        Generator::Pi => Parameters::new(a1.clone(), a0.clone(), a2.clone(), a3.clone()),
    }
}

/// Apply one generator to a symmetric-chart point.
pub fn apply_generator_f<S>(
    g: Generator,
    x: &FState<S>,
    a: &Parameters<S>,
) -> Result<(FState<S>, Parameters<S>), Error>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    let params = apply_to_parameters(g, a);
    let (f0, f1, f2, f3, g1, g2) = (&x.f0, &x.f1, &x.f2, &x.f3, &x.g1, &x.g2);
    let (a0, a1, a2, a3) = (&a.alpha0, &a.alpha1, &a.alpha2, &a.alpha3);
    let state = match g {
        Generator::S0 => {
            if f0.is_zero() {
                return Err(Error::pole(PoleDivisor::F0));
            }
            FState {
                f2: f2.clone() + a0 * g2 / f0,
                g1: g1.clone() + a0 / f0,
                ..x.clone()
            }
        }
        Generator::S1 => {
            if f1.is_zero() {
                return Err(Error::pole(PoleDivisor::F1));
            }
            FState {
                f2: f2.clone() + a1 * g1 / f1,
                g2: g2.clone() + a1 / f1,
                ..x.clone()
            }
        }
        Generator::S2 => {
            if f2.is_zero() {
                return Err(Error::pole(PoleDivisor::F2));
            }
            FState {
                f0: f0.clone() - a2 * g2 / f2,
                f1: f1.clone() - a2 * g1 / f2,
                f3: f3.clone() - a2 * (g1.clone() + g2) / f2,
                ..x.clone()
            }
        }
        Generator::S3 => {
            if f3.is_zero() {
                return Err(Error::pole(PoleDivisor::F3));
            }
            FState {
                f2: f2.clone() + a3 * (g1.clone() + g2) / f3 + a3 * a3 / (f3 * f3),
                g1: g1.clone() + a3 / f3,
                g2: g2.clone() + a3 / f3,
                ..x.clone()
            }
        }
        Generator::Pi => FState {
            f0: f1.clone(),
            f1: f0.clone(),
            f2: f2.clone(),
            f3: f3.clone(),
            g1: g2.clone(),
            g2: g1.clone(),
        },
    };
    Ok((state, params))
}

/// Apply one generator to a Hamiltonian-chart point. `T` is fixed by every
/// generator.
pub fn apply_generator_qp<S>(
    g: Generator,
    x: &QPState<S>,
    a: &Parameters<S>,
) -> Result<(QPState<S>, Parameters<S>), Error>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    let params = apply_to_parameters(g, a);
    let (q1, p1, q2, p2, t) = (&x.q1, &x.p1, &x.q2, &x.p2, &x.t);
    let (a0, a1, a2, a3) = (&a.alpha0, &a.alpha1, &a.alpha2, &a.alpha3);
    let state = match g {
        Generator::S0 => {
            if p1.is_zero() {
                return Err(Error::pole(PoleDivisor::P1));
            }
            QPState { q1: q1.clone() + a0 / p1, ..x.clone() }
        }
        Generator::S1 => {
            if p2.is_zero() {
                return Err(Error::pole(PoleDivisor::P2));
            }
            QPState { q2: q2.clone() + a1 / p2, ..x.clone() }
        }
        Generator::S2 => {
            let den = q1 * q2 + t;
            if den.is_zero() {
                return Err(Error::pole(PoleDivisor::Q1Q2PlusT));
            }
            QPState {
                p1: p1.clone() - a2 * q2 / &den,
                p2: p2.clone() - a2 * q1 / &den,
                ..x.clone()
            }
        }
        Generator::S3 => {
            let den = p1.clone() + p2 - S::one();
            if den.is_zero() {
                return Err(Error::pole(PoleDivisor::P1PlusP2Minus1));
            }
            QPState {
                q1: q1.clone() + a3 / &den,
                q2: q2.clone() + a3 / &den,
                ..x.clone()
            }
        }
        Generator::Pi => QPState {
            q1: q2.clone(),
            p1: p2.clone(),
            q2: q1.clone(),
            p2: p1.clone(),
            t: t.clone(),
        },
    };
    Ok((state, params))
}

/// Apply a generator in whichever chart the point lives in.
pub fn apply_generator<S>(g: Generator, pt: &ChartPoint<S>) -> Result<ChartPoint<S>, Error>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    match pt {
        ChartPoint::F { state, params } => {
            let (state, params) = apply_generator_f(g, state, params)?;
            Ok(ChartPoint::F { state, params })
        }
        ChartPoint::Qp { state, params } => {
            let (state, params) = apply_generator_qp(g, state, params)?;
            Ok(ChartPoint::Qp { state, params })
        }
    }
}

/// Apply a word leftmost-first. A pole mid-composition reports the index of
/// the failing step.
pub fn apply_word<S>(w: &Word, pt: &ChartPoint<S>) -> Result<ChartPoint<S>, Error>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    let mut cur = pt.clone();
    for (i, &g) in w.0.iter().enumerate() {
        cur = apply_generator(g, &cur).map_err(|e| e.at_step(i))?;
    }
    Ok(cur)
}

/// Dense row-major matrix of scalars. Only what the pushforward checks need.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![S::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = S::one();
        }
        Matrix { rows: n, cols: n, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &S {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S>
    where
        for<'s> &'s S: ScalarRef<S>,
    {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (j, vj) in v.iter().enumerate() {
                    acc = acc + self.at(i, j).clone() * vj;
                }
                acc
            })
            .collect()
    }
}

fn dual_params<S: Scalar>(a: &Parameters<S>) -> Parameters<Dual<S>> {
    Parameters {
        alpha0: Dual::constant(a.alpha0.clone()),
        alpha1: Dual::constant(a.alpha1.clone()),
        alpha2: Dual::constant(a.alpha2.clone()),
        alpha3: Dual::constant(a.alpha3.clone()),
    }
}

/// Exact Jacobian of a word's state-map on the symmetric chart (6x6),
/// computed by dual-number evaluation. Parameters are held constant.
pub fn word_jacobian_f<S>(
    w: &Word,
    x: &FState<S>,
    a: &Parameters<S>,
) -> Result<Matrix<S>, Error>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    let seeded = Dual::seed(&x.to_array());
    let pt: ChartPoint<Dual<S>> = ChartPoint::F {
        state: FState::from_array(seeded.try_into().expect("six coordinates")),
        params: dual_params(a),
    };
    let ChartPoint::F { state, .. } = apply_word::<Dual<S>>(w, &pt)? else { unreachable!() };
    Ok(Matrix::from_rows(
        state
            .to_array()
            .iter()
            .map(|out| (0..6).map(|j| out.partial(j)).collect())
            .collect(),
    ))
}

/// Exact Jacobian of a word's state-map on the extended Hamiltonian chart
/// (5x5 over `(q1, p1, q2, p2, T)`; the last row is `dT' = dT` since every
/// generator fixes `T`).
pub fn word_jacobian_qp<S>(
    w: &Word,
    x: &QPState<S>,
    a: &Parameters<S>,
) -> Result<Matrix<S>, Error>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    let seeded = Dual::seed(&x.to_array());
    let pt: ChartPoint<Dual<S>> = ChartPoint::Qp {
        state: QPState::from_array(seeded.try_into().expect("five coordinates")),
        params: dual_params(a),
    };
    let ChartPoint::Qp { state, .. } = apply_word::<Dual<S>>(w, &pt)? else { unreachable!() };
    Ok(Matrix::from_rows(
        state
            .to_array()
            .iter()
            .map(|out| (0..5).map(|j| out.partial(j)).collect())
            .collect(),
    ))
}

pub fn generator_jacobian_f<S>(
    g: Generator,
    x: &FState<S>,
    a: &Parameters<S>,
) -> Result<Matrix<S>, Error>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    word_jacobian_f(&Word(vec![g]), x, a)
}

pub fn generator_jacobian_qp<S>(
    g: Generator,
    x: &QPState<S>,
    a: &Parameters<S>,
) -> Result<Matrix<S>, Error>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    word_jacobian_qp(&Word(vec![g]), x, a)
}

/// `J_g(x) V(x, a) - V(g(x), g(a))` for the autonomous symmetric field.
/// Identically zero is the precise content of invariance under `g`.
pub fn pushforward_residual_f<S>(
    g: Generator,
    x: &FState<S>,
    a: &Parameters<S>,
) -> Result<[S; 6], Error>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    let jac = generator_jacobian_f(g, x, a)?;
    let v = f_vector_field(x, a);
    let pushed = jac.mul_vec(&v.to_array());
    let (gx, ga) = apply_generator_f(g, x, a)?;
    let v_img: FTangent<S> = f_vector_field(&gx, &ga);
    let img = v_img.to_array();
    let mut out: [S; 6] = std::array::from_fn(|_| S::zero());
    for (i, (p, w)) in pushed.into_iter().zip(img).enumerate() {
        out[i] = p - w;
    }
    Ok(out)
}

/// Same residual for the nonautonomous chart field, on the extended space
/// `(q1, p1, q2, p2, T)` with `dT/dT = 1`.
pub fn pushforward_residual_qp<S>(
    g: Generator,
    x: &QPState<S>,
    a: &Parameters<S>,
) -> Result<[S; 5], Error>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    let jac = generator_jacobian_qp(g, x, a)?;
    let v = qp_vector_field(x, a)?;
    let mut ext = v.to_array().to_vec();
    ext.push(S::one());
    let pushed = jac.mul_vec(&ext);

    let (gx, ga) = apply_generator_qp(g, x, a)?;
    if gx.t.is_zero() {
        return Err(Error::SingularTime);
    }
    let v_img = qp_vector_field(&gx, &ga)?;
    let mut img = v_img.to_array().to_vec();
    img.push(S::one());

    let mut out: [S; 5] = std::array::from_fn(|_| S::zero());
    for (i, (p, w)) in pushed.into_iter().zip(img).enumerate() {
        out[i] = p - w;
    }
    Ok(out)
}

/// Difference between lifting after and before a generator:
/// `lift(g_qp(x)) - g_f(lift(x))`, componentwise on the six symmetric
/// coordinates. Zero means the two theorems present the same map.
pub fn chart_equivariance_residual<S>(
    g: Generator,
    x: &QPState<S>,
    a: &Parameters<S>,
) -> Result<[S; 6], Error>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    let (qp_then, _) = apply_generator_qp(g, x, a)?;
    let lifted_after = crate::dynamics::lift_to_f(&qp_then);
    let (f_then, _) = apply_generator_f(g, &crate::dynamics::lift_to_f(x), a)?;
    let mut out: [S; 6] = std::array::from_fn(|_| S::zero());
    for (i, (u, v)) in lifted_after.to_array().into_iter().zip(f_then.to_array()).enumerate() {
        out[i] = u - v;
    }
    Ok(out)
}

/// Order of `(gi gj)` as discovered on sample points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationOrder {
    Finite(usize),
    /// No power up to the search bound fixes every sample.
    Unbounded,
}

/// Smallest `m <= max_order` with `(gi gj)^m` fixing every sampled
/// (state, parameters) pair exactly, or [`RelationOrder::Unbounded`].
///
/// `sample` provides fresh points; a pole anywhere in the `2*max_order`-step
/// orbit discards the point and resamples, up to `max_retries` times per
/// point.
pub fn relation_order<S>(
    gi: Generator,
    gj: Generator,
    mut sample: impl FnMut() -> ChartPoint<S>,
    n_points: usize,
    max_order: usize,
    max_retries: usize,
) -> Result<RelationOrder, Error>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    assert!(max_order >= 1);
    // return_periods[m-1] = true while (gi gj)^m still fixes every point seen
    let mut returns = vec![true; max_order];
    for _ in 0..n_points {
        let mut attempts = 0;
        let orbit = loop {
            let start = sample();
            match pair_orbit(gi, gj, &start, max_order) {
                Ok(orbit) => break orbit,
                Err(_) => {
                    attempts += 1;
                    if attempts > max_retries {
                        return Err(Error::InsufficientSamples { retries: max_retries });
                    }
                }
            }
        };
        let start = &orbit[0];
        for m in 1..=max_order {
            returns[m - 1] = returns[m - 1] && orbit[m] == *start;
        }
    }
    Ok(returns
        .iter()
        .position(|&r| r)
        .map(|i| RelationOrder::Finite(i + 1))
        .unwrap_or(RelationOrder::Unbounded))
}

fn pair_orbit<S>(
    gi: Generator,
    gj: Generator,
    start: &ChartPoint<S>,
    max_order: usize,
) -> Result<Vec<ChartPoint<S>>, Error>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    let mut orbit = vec![start.clone()];
    let mut cur = start.clone();
    for _ in 0..max_order {
        cur = apply_generator(gi, &cur)?;
        cur = apply_generator(gj, &cur)?;
        orbit.push(cur.clone());
    }
    Ok(orbit)
}

/// One conjugation identity of the diagram rotation.
#[derive(Clone, Debug)]
pub struct AutomorphismCheck {
    /// `pi s_i pi` on the left, the expected generator on the right.
    pub conjugated: Generator,
    pub expected: Generator,
    pub points: usize,
    pub failures: usize,
}

/// Verify `pi s0 pi = s1`, `pi s1 pi = s0`, `pi s2 pi = s2`, `pi s3 pi = s3`
/// pointwise exactly on `n_points` samples per identity.
pub fn diagram_automorphism_check<S>(
    mut sample: impl FnMut() -> ChartPoint<S>,
    n_points: usize,
    max_retries: usize,
) -> Result<Vec<AutomorphismCheck>, Error>
where
    S: Scalar,
    for<'s> &'s S: ScalarRef<S>,
{
    use Generator::*;
    let identities = [(S0, S1), (S1, S0), (S2, S2), (S3, S3)];
    let mut out = Vec::new();
    for (si, expected) in identities {
        let word = Word(vec![Pi, si, Pi]);
        let mut failures = 0;
        for _ in 0..n_points {
            let mut attempts = 0;
            let (lhs, rhs) = loop {
                let pt = sample();
                let lhs = apply_word(&word, &pt);
                let rhs = apply_generator(expected, &pt);
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => break (l, r),
                    _ => {
                        attempts += 1;
                        if attempts > max_retries {
                            return Err(Error::InsufficientSamples { retries: max_retries });
                        }
                    }
                }
            };
            if lhs != rhs {
                failures += 1;
            }
        }
        out.push(AutomorphismCheck { conjugated: si, expected, points: n_points, failures });
    }
    Ok(out)
}
