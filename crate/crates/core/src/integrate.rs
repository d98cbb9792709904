//! Floating-point trajectory integration of both systems with adaptive step
//! control and structure-drift diagnostics.
//!
//! The stepper is the embedded Dormand-Prince 5(4) pair with PI step-size
//! control and FSAL reuse. Requested output times are hit exactly by
//! clamping the step, so cross-checks between charts compare states at
//! identical times with no interpolation error. The exact-arithmetic suites
//! carry the correctness burden; the drift diagnostics recorded here monitor
//! how well the float trajectories respect the conserved structure.

use std::fmt::Write as _;

use crate::dynamics::{f_vector_field, hamiltonian, lift_to_f, project_to_qp, qp_vector_field};
use crate::error::{Error, PoleDivisor};
use crate::model::{FState, Parameters, QPState};
use crate::symmetry::{apply_generator_qp, Generator};

#[derive(Clone, Debug)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// `None` selects the step automatically from the initial derivatives.
    pub initial_step: Option<f64>,
    pub max_steps: usize,
    /// Spacing of emitted records; `0.0` records every accepted step.
    pub dense_output_stride: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            initial_step: None,
            max_steps: 1_000_000,
            dense_output_stride: 0.0,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tols(rel_tol: f64, abs_tol: f64) -> Self {
        IntegratorConfig { rel_tol, abs_tol, ..Default::default() }
    }

    fn validate(&self) {
        assert!(self.rel_tol > 0.0 && self.abs_tol > 0.0, "tolerances must be positive");
        assert!(self.max_steps >= 1, "max_steps must be >= 1");
    }
}

/// Which system a trajectory belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    F,
    Qp,
}

/// One record of a six-variable trajectory. `d1` and `d2` are the drifts of
/// the two conserved combinations relative to their initial values:
/// `d1 = (f3 - f0 - f1) - (f3 - f0 - f1)(t0)` and
/// `d2 = (f2 - g1 g2) e^{-(t - t0)} - (f2 - g1 g2)(t0)`.
#[derive(Clone, Debug)]
pub struct FRecord {
    pub t: f64,
    pub state: FState<f64>,
    pub step: f64,
    pub d1: f64,
    pub d2: f64,
}

/// One record of a Hamiltonian-chart trajectory. `h` is the Hamiltonian
/// value, recorded but not conserved (the system is nonautonomous).
#[derive(Clone, Debug)]
pub struct QPRecord {
    pub t: f64,
    pub state: QPState<f64>,
    pub step: f64,
    pub h: f64,
}

#[derive(Clone, Debug)]
pub enum Trajectory {
    F(Vec<FRecord>),
    Qp(Vec<QPRecord>),
}

impl Trajectory {
    pub fn chart(&self) -> Chart {
        match self {
            Trajectory::F(_) => Chart::F,
            Trajectory::Qp(_) => Chart::Qp,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Trajectory::F(r) => r.len(),
            Trajectory::Qp(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn column_names(&self) -> &'static [&'static str] {
        match self {
            Trajectory::F(_) => &["t", "f0", "f1", "f2", "f3", "g1", "g2", "step", "d1", "d2"],
            Trajectory::Qp(_) => &["T", "q1", "p1", "q2", "p2", "step", "H"],
        }
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        match self {
            Trajectory::F(recs) => {
                let r = &recs[i];
                let s = &r.state;
                vec![r.t, s.f0, s.f1, s.f2, s.f3, s.g1, s.g2, r.step, r.d1, r.d2]
            }
            Trajectory::Qp(recs) => {
                let r = &recs[i];
                let s = &r.state;
                vec![r.t, s.q1, s.p1, s.q2, s.p2, r.step, r.h]
            }
        }
    }

    /// Comma-delimited text: a header row naming the columns, one record per
    /// row, numbers in round-trip scientific notation.
    pub fn to_delimited(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.column_names().join(","));
        out.push('\n');
        for i in 0..self.len() {
            let row = self.row(i);
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{v:e}");
            }
            out.push('\n');
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)
// ---------------------------------------------------------------------------

const STEP_FLOOR_FRACTION: f64 = 1e-14;
const SAFE: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const FAC_SHRINK_MAX: f64 = 5.0; // reciprocal of the 0.2 shrink floor
const FAC_GROW_MAX: f64 = 0.1; // reciprocal of the 10x growth ceiling

/// Right-hand side of an `N`-dimensional first-order system.
type Rhs<'a, const N: usize> = &'a dyn Fn(f64, &[f64; N]) -> [f64; N];

/// Abort hook called on every accepted state.
type Guard<'a, const N: usize> = &'a mut dyn FnMut(f64, &[f64; N]) -> Result<(), Error>;

struct Dopri5<'a, const N: usize> {
    rhs: Rhs<'a, N>,
    rel_tol: f64,
    abs_tol: f64,
}

impl<const N: usize> Dopri5<'_, N> {
    /// One trial step: returns the 5th-order solution, the FSAL stage, and
    /// the scaled error norm of the embedded 4th-order estimate.
    fn stages(&self, t: f64, y: &[f64; N], h: f64, k1: &[f64; N]) -> ([f64; N], [f64; N], f64) {
        let f = self.rhs;
        let lin = |coefs: &[(f64, &[f64; N])]| -> [f64; N] {
            let mut out = *y;
            for (c, k) in coefs {
                for i in 0..N {
                    out[i] += h * c * k[i];
                }
            }
            out
        };

        let k2 = f(t + h / 5.0, &lin(&[(1.0 / 5.0, k1)]));
        let k3 = f(t + 3.0 / 10.0 * h, &lin(&[(3.0 / 40.0, k1), (9.0 / 40.0, &k2)]));
        let k4 = f(
            t + 4.0 / 5.0 * h,
            &lin(&[(44.0 / 45.0, k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)]),
        );
        let k5 = f(
            t + 8.0 / 9.0 * h,
            &lin(&[
                (19372.0 / 6561.0, k1),
                (-25360.0 / 2187.0, &k2),
                (64448.0 / 6561.0, &k3),
                (-212.0 / 729.0, &k4),
            ]),
        );
        let k6 = f(
            t + h,
            &lin(&[
                (9017.0 / 3168.0, k1),
                (-355.0 / 33.0, &k2),
                (46732.0 / 5247.0, &k3),
                (49.0 / 176.0, &k4),
                (-5103.0 / 18656.0, &k5),
            ]),
        );
        let y_new = lin(&[
            (35.0 / 384.0, k1),
            (500.0 / 1113.0, &k3),
            (125.0 / 192.0, &k4),
            (-2187.0 / 6784.0, &k5),
            (11.0 / 84.0, &k6),
        ]);
        let k7 = f(t + h, &y_new);

        const E: [f64; 7] = [
            71.0 / 57600.0,
            0.0,
            -71.0 / 16695.0,
            71.0 / 1920.0,
            -17253.0 / 339200.0,
            22.0 / 525.0,
            -1.0 / 40.0,
        ];
        let mut err_sq = 0.0;
        for i in 0..N {
            let est = h
                * (E[0] * k1[i]
                    + E[2] * k3[i]
                    + E[3] * k4[i]
                    + E[4] * k5[i]
                    + E[5] * k6[i]
                    + E[6] * k7[i]);
            let sc = self.abs_tol + self.rel_tol * y[i].abs().max(y_new[i].abs());
            err_sq += (est / sc) * (est / sc);
        }
        let mut err = (err_sq / N as f64).sqrt();
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            err = 1e10;
        }
        (y_new, k7, err)
    }

    fn initial_step(&self, t0: f64, y0: &[f64; N], k1: &[f64; N], span: f64) -> f64 {
        let posneg = span.signum();
        let sc: Vec<f64> = (0..N).map(|i| self.abs_tol + self.rel_tol * y0[i].abs()).collect();
        let rms = |v: &[f64; N]| -> f64 {
            let s: f64 = (0..N).map(|i| (v[i] / sc[i]) * (v[i] / sc[i])).sum();
            (s / N as f64).sqrt()
        };
        let d0 = rms(y0);
        let d1 = rms(k1);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(span.abs()) * posneg;

        let mut y1 = *y0;
        for i in 0..N {
            y1[i] += h0 * k1[i];
        }
        let f1 = (self.rhs)(t0 + h0, &y1);
        let mut diff = [0.0; N];
        for i in 0..N {
            diff[i] = f1[i] - k1[i];
        }
        let d2 = rms(&diff) / h0.abs();

        let h1 = if d1.max(d2) <= 1e-15 {
            (h0.abs() * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0.abs()).min(h1).min(span.abs()) * posneg
    }
}

/// Which times to emit records at. Endpoints are always included.
enum OutputSpec {
    EveryStep,
    /// Interior times, strictly monotone in the integration direction.
    Times(Vec<f64>),
}

fn output_times(t0: f64, t1: f64, stride: f64) -> OutputSpec {
    if stride <= 0.0 {
        return OutputSpec::EveryStep;
    }
    let span = t1 - t0;
    let n = (span.abs() / stride).floor() as usize;
    let mut times = Vec::with_capacity(n);
    for k in 1..=n {
        let t = t0 + span.signum() * stride * k as f64;
        if (t - t1) * span.signum() < 0.0 {
            times.push(t);
        }
    }
    OutputSpec::Times(times)
}

/// Generic driver: integrates from `t0` to `t1` (either direction), emitting
/// `(t, y, h_of_arriving_step)` through `record` and aborting when `guard`
/// rejects an accepted state.
#[allow(clippy::too_many_arguments)]
fn integrate_dopri5<const N: usize>(
    rhs: Rhs<'_, N>,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    cfg: &IntegratorConfig,
    output: OutputSpec,
    guard: Guard<'_, N>,
    record: &mut dyn FnMut(f64, &[f64; N], f64),
) -> Result<(), Error> {
    cfg.validate();
    let solver = Dopri5::<N> { rhs, rel_tol: cfg.rel_tol, abs_tol: cfg.abs_tol };
    let span = t1 - t0;
    let posneg = span.signum();
    let h_floor = STEP_FLOOR_FRACTION * span.abs();

    let mut stops: Vec<f64> = match &output {
        OutputSpec::EveryStep => vec![t1],
        OutputSpec::Times(ts) => {
            let mut v = ts.clone();
            v.push(t1);
            v
        }
    };
    stops.retain(|s| (s - t0) * posneg > 0.0 && (s - t1) * posneg <= 0.0);
    let every_step = matches!(output, OutputSpec::EveryStep);

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    guard(t, &y)?;
    record(t, &y, 0.0);

    let mut h = match cfg.initial_step {
        Some(h0) => h0.abs().min(span.abs()) * posneg,
        None => solver.initial_step(t0, &y0, &k1, span),
    };
    let mut facold: f64 = 1e-4;
    let mut rejected = false;
    let mut nsteps = 0usize;
    let mut stop_idx = 0usize;

    while (t - t1) * posneg < 0.0 && stop_idx < stops.len() {
        nsteps += 1;
        if nsteps > cfg.max_steps {
            return Err(Error::MaxStepsExceeded(cfg.max_steps));
        }
        if h.abs() < h_floor {
            return Err(Error::StepUnderflow { h: h.abs(), t });
        }

        let target = stops[stop_idx];
        let mut hitting = false;
        if (t + h - target) * posneg >= 0.0 {
            h = target - t;
            hitting = true;
        }

        let (y_new, k7, err) = solver.stages(t, &y, h, &k1);
        let fac11 = err.powf(EXPO1);

        if err <= 1.0 {
            t = if hitting { target } else { t + h };
            y = y_new;
            k1 = k7;
            guard(t, &y)?;

            if hitting {
                record(t, &y, h);
                while stop_idx < stops.len() && (stops[stop_idx] - t) * posneg <= 0.0 {
                    stop_idx += 1;
                }
            } else if every_step {
                record(t, &y, h);
            }

            let fac = (fac11 / facold.powf(BETA) / SAFE).clamp(FAC_GROW_MAX, FAC_SHRINK_MAX);
            facold = err.max(1e-4);
            let mut h_new = h / fac;
            if rejected {
                h_new = posneg * h_new.abs().min(h.abs());
            }
            rejected = false;
            h = h_new;
        } else {
            rejected = true;
            h /= (fac11 / SAFE).min(FAC_SHRINK_MAX);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// chart-level drivers
// ---------------------------------------------------------------------------

/// Integrate the six-variable autonomous system over `t in [t0, t1]`
/// (either direction), recording the two conservation drifts at every record.
pub fn integrate_f(
    x0: &FState<f64>,
    a: &Parameters<f64>,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, Error> {
    if t0 == t1 {
        return Err(Error::PreconditionViolated("t1 = t0: empty integration interval".into()));
    }
    let rhs = |_t: f64, y: &[f64; 6]| -> [f64; 6] {
        f_vector_field(&FState::from_array(*y), a).to_array()
    };
    let lin0 = x0.f3 - x0.f0 - x0.f1;
    let level0 = x0.f2 - x0.g1 * x0.g2;

    let mut records = Vec::new();
    integrate_dopri5(
        &rhs,
        t0,
        t1,
        x0.to_array(),
        cfg,
        output_times(t0, t1, cfg.dense_output_stride),
        &mut |_, _| Ok(()),
        &mut |t, y, step| {
            let state = FState::from_array(*y);
            let d1 = (state.f3 - state.f0 - state.f1) - lin0;
            let d2 = (state.f2 - state.g1 * state.g2) * (-(t - t0)).exp() - level0;
            records.push(FRecord { t, state, step, d1, d2 });
        },
    )?;
    Ok(Trajectory::F(records))
}

/// Integrate the Hamiltonian-chart system over `T in [t0, t1]`. Both
/// endpoints must be nonzero and on the same side of the singular time
/// `T = 0`. The state's own `t` field is ignored; integration starts at `t0`.
pub fn integrate_qp(
    x0: &QPState<f64>,
    a: &Parameters<f64>,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, Error> {
    integrate_qp_guarded(x0, a, t0, t1, cfg, &mut |_, _| Ok(()))
}

fn integrate_qp_guarded(
    x0: &QPState<f64>,
    a: &Parameters<f64>,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
    guard: Guard<'_, 4>,
) -> Result<Trajectory, Error> {
    if t0 == 0.0 || t1 == 0.0 || (t0 < 0.0) != (t1 < 0.0) {
        return Err(Error::SingularTime);
    }
    let rhs = |t: f64, y: &[f64; 4]| -> [f64; 4] {
        let x = QPState::new(y[0], y[1], y[2], y[3], t);
        qp_vector_field(&x, a).expect("T stays on one side of zero").to_array()
    };
    let y0 = [x0.q1, x0.p1, x0.q2, x0.p2];

    let mut records = Vec::new();
    let mut push = |t: f64, y: &[f64; 4], step: f64| {
        let state = QPState::new(y[0], y[1], y[2], y[3], t);
        let h = hamiltonian(&state, a).expect("T != 0 along the flow");
        records.push(QPRecord { t, state, step, h });
    };

    if t0 == t1 {
        guard(t0, &y0)?;
        push(t0, &y0, 0.0);
        return Ok(Trajectory::Qp(records));
    }
    integrate_dopri5(
        &rhs,
        t0,
        t1,
        y0,
        cfg,
        output_times(t0, t1, cfg.dense_output_stride),
        guard,
        &mut push,
    )?;
    Ok(Trajectory::Qp(records))
}

/// Result of integrating the chart system directly against integrating the
/// symmetric form and projecting back at matched times.
#[derive(Clone, Copy, Debug)]
pub struct CrossCheck {
    /// Max componentwise deviation over (q1, p1, q2, p2) at compared times.
    pub max_state_deviation: f64,
    /// Max of `|f2 - g1 g2 - T|` along the lifted trajectory.
    pub max_level_residual: f64,
}

const CROSS_CHECK_SAMPLES: usize = 32;

/// Integrate the chart system over `[t0, t1]` and, independently, the
/// six-variable system over `[log t0, log t1]` from the lifted state
/// (`c = 0`), project back at matched times, and measure the worst deviation.
pub fn cross_check_charts(
    x0: &QPState<f64>,
    a: &Parameters<f64>,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<CrossCheck, Error> {
    if t0 <= 0.0 || t1 <= 0.0 {
        return Err(Error::SingularTime);
    }
    if t0 == t1 {
        return Ok(CrossCheck { max_state_deviation: 0.0, max_level_residual: 0.0 });
    }

    let n = CROSS_CHECK_SAMPLES;
    let big_times: Vec<f64> = (1..n).map(|k| t0 + (t1 - t0) * k as f64 / n as f64).collect();
    let small_times: Vec<f64> = big_times.iter().map(|bt| bt.ln()).collect();

    let inner_cfg = IntegratorConfig { dense_output_stride: 0.0, ..cfg.clone() };
    let qp_records = {
        let mut records = Vec::new();
        let rhs = |t: f64, y: &[f64; 4]| -> [f64; 4] {
            let x = QPState::new(y[0], y[1], y[2], y[3], t);
            qp_vector_field(&x, a).expect("T > 0").to_array()
        };
        integrate_dopri5(
            &rhs,
            t0,
            t1,
            [x0.q1, x0.p1, x0.q2, x0.p2],
            &inner_cfg,
            OutputSpec::Times(big_times.clone()),
            &mut |_, _| Ok(()),
            &mut |t, y, _| records.push((t, *y)),
        )?;
        records
    };

    let start_f = lift_to_f(&QPState { t: t0, ..x0.clone() });
    let f_records = {
        let mut records = Vec::new();
        let rhs = |_t: f64, y: &[f64; 6]| -> [f64; 6] {
            f_vector_field(&FState::from_array(*y), a).to_array()
        };
        integrate_dopri5(
            &rhs,
            t0.ln(),
            t1.ln(),
            start_f.to_array(),
            &inner_cfg,
            OutputSpec::Times(small_times),
            &mut |_, _| Ok(()),
            &mut |t, y, _| records.push((t, *y)),
        )?;
        records
    };

    // both sides record t0, every interior matched time, and t1
    assert_eq!(qp_records.len(), f_records.len());
    let mut max_dev: f64 = 0.0;
    let mut max_level: f64 = 0.0;
    for ((bt, qp_y), (_st, f_y)) in qp_records.iter().zip(&f_records) {
        let projected = project_to_qp(&FState::from_array(*f_y));
        for (u, v) in [
            (qp_y[0], projected.q1),
            (qp_y[1], projected.p1),
            (qp_y[2], projected.q2),
            (qp_y[3], projected.p2),
        ] {
            max_dev = max_dev.max((u - v).abs());
        }
        max_level = max_level.max((projected.t - bt).abs());
    }
    Ok(CrossCheck { max_state_deviation: max_dev, max_level_residual: max_level })
}

/// Deviation between the two charts at the single time `t1`: the chart
/// system integrated directly against the six-variable system integrated in
/// `log T` and projected back. Unlike [`cross_check_charts`] no interior
/// output times constrain the step size, so the deviation tracks the
/// tolerance; this is the quantity the convergence-order study refines.
pub fn endpoint_chart_deviation(
    x0: &QPState<f64>,
    a: &Parameters<f64>,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<f64, Error> {
    if t0 <= 0.0 || t1 <= 0.0 {
        return Err(Error::SingularTime);
    }
    if t0 == t1 {
        return Ok(0.0);
    }
    let free_cfg = IntegratorConfig { dense_output_stride: 0.0, ..cfg.clone() };
    let qp = integrate_qp(x0, a, t0, t1, &free_cfg)?;
    let Trajectory::Qp(qr) = qp else { unreachable!() };
    let direct = qr.last().expect("endpoint record").state.clone();

    let start_f = lift_to_f(&QPState { t: t0, ..x0.clone() });
    let f = integrate_f(&start_f, a, t0.ln(), t1.ln(), &free_cfg)?;
    let Trajectory::F(fr) = f else { unreachable!() };
    let projected = project_to_qp(&fr.last().expect("endpoint record").state);

    Ok([
        (direct.q1 - projected.q1).abs(),
        (direct.p1 - projected.p1).abs(),
        (direct.q2 - projected.q2).abs(),
        (direct.p2 - projected.p2).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max))
}

/// Endpoint deviations at `n_refinements + 1` successive 10x tightenings of
/// `base_rtol` (with `abs_tol` kept at `rel_tol / 100`). A fifth-order
/// method with tolerance-proportional control shows roughly one decade of
/// deviation per decade of tolerance.
pub fn refinement_deviations(
    x0: &QPState<f64>,
    a: &Parameters<f64>,
    t0: f64,
    t1: f64,
    base_rtol: f64,
    n_refinements: usize,
) -> Result<Vec<f64>, Error> {
    (0..=n_refinements)
        .map(|k| {
            let rtol = base_rtol * 10f64.powi(-(k as i32));
            endpoint_chart_deviation(x0, a, t0, t1, &IntegratorConfig::with_tols(rtol, rtol / 100.0))
        })
        .collect()
}

fn generator_denominator(g: Generator, x: &QPState<f64>) -> Option<(PoleDivisor, f64)> {
    match g {
        Generator::S0 => Some((PoleDivisor::P1, x.p1)),
        Generator::S1 => Some((PoleDivisor::P2, x.p2)),
        Generator::S2 => Some((PoleDivisor::Q1Q2PlusT, x.q1 * x.q2 + x.t)),
        Generator::S3 => Some((PoleDivisor::P1PlusP2Minus1, x.p1 + x.p2 - 1.0)),
        Generator::Pi => None,
    }
}

const POLE_GUARD_EPS: f64 = 1e-12;

fn pole_guard(
    g: Generator,
    initial_sign: Option<f64>,
) -> impl FnMut(f64, &[f64; 4]) -> Result<(), Error> {
    move |t: f64, y: &[f64; 4]| {
        let x = QPState::new(y[0], y[1], y[2], y[3], t);
        if let Some((divisor, den)) = generator_denominator(g, &x) {
            if den.abs() < POLE_GUARD_EPS || Some(den.signum()) != initial_sign {
                return Err(Error::PoleAlongFlow { divisor, t });
            }
        }
        Ok(())
    }
}

/// Deviation at `t1` between (flow, then apply `g`) and (apply `g`, then
/// flow) -- the dynamical form of invariance under `g`. Both flows are
/// guarded: if the generator's denominator vanishes along either path
/// (magnitude below 1e-12, or a sign change against its starting value,
/// which means the flow crossed the pole divisor), the check aborts with a
/// pole diagnostic.
pub fn backlund_commutation_check(
    g: Generator,
    x0: &QPState<f64>,
    a: &Parameters<f64>,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<f64, Error> {
    let start = QPState { t: t0, ..x0.clone() };

    // flow then transform
    let sign_a = generator_denominator(g, &start).map(|(_, d)| d.signum());
    let mut guard_a = pole_guard(g, sign_a);
    let traj = integrate_qp_guarded(&start, a, t0, t1, cfg, &mut guard_a)?;
    let Trajectory::Qp(records) = traj else { unreachable!() };
    let end = records.last().expect("at least the initial record").state.clone();
    let (flow_then_g, _) = apply_generator_qp(g, &end, a)?;

    // transform then flow
    let (gx, ga) = apply_generator_qp(g, &start, a)?;
    let sign_b = generator_denominator(g, &gx).map(|(_, d)| d.signum());
    let mut guard_b = pole_guard(g, sign_b);
    let traj_b = integrate_qp_guarded(&gx, &ga, t0, t1, cfg, &mut guard_b)?;
    let Trajectory::Qp(records_b) = traj_b else { unreachable!() };
    let g_then_flow = records_b.last().expect("at least the initial record").state.clone();

    let dev = [
        (flow_then_g.q1 - g_then_flow.q1).abs(),
        (flow_then_g.p1 - g_then_flow.p1).abs(),
        (flow_then_g.q2 - g_then_flow.q2).abs(),
        (flow_then_g.p2 - g_then_flow.p2).abs(),
    ];
    Ok(dev.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> Parameters<f64> {
        Parameters::new(0.125, 0.125, 0.0625, 0.125)
    }

    fn sample_qp() -> QPState<f64> {
        QPState::new(0.3, 0.4, -0.2, 0.35, 1.0)
    }

    #[test]
    fn zero_field_gives_constant_trajectory() {
        let x0 = FState::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let traj = integrate_f(&x0, &params(), 0.0, 1.0, &IntegratorConfig::default()).unwrap();
        let Trajectory::F(records) = &traj else { unreachable!() };
        assert!(records.len() >= 2);
        let last = records.last().unwrap();
        assert_eq!(last.t, 1.0);
        for v in last.state.to_array() {
            assert_eq!(v, 0.0);
        }
        assert_eq!(last.d1, 0.0);
        assert_eq!(last.d2, 0.0);
    }

    #[test]
    fn empty_interval_is_rejected_in_f_chart() {
        let x0 = FState::new(0.1, 0.2, 0.3, 0.4, 0.5, 0.6);
        let err = integrate_f(&x0, &params(), 1.0, 1.0, &IntegratorConfig::default()).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolated(_)));
    }

    #[test]
    fn qp_interval_touching_zero_is_singular() {
        let cfg = IntegratorConfig::default();
        let err = integrate_qp(&sample_qp(), &params(), 0.0, 1.0, &cfg).unwrap_err();
        assert_eq!(err, Error::SingularTime);
        let err = integrate_qp(&sample_qp(), &params(), -1.0, 2.0, &cfg).unwrap_err();
        assert_eq!(err, Error::SingularTime);
    }

    #[test]
    fn qp_motion_matches_initial_rates_at_origin() {
        // at q = p = 0 the rates are (-1, alpha0, -1, alpha1)
        let x0 = QPState::new(0.0, 0.0, 0.0, 0.0, 1.0);
        let a = params();
        let v = qp_vector_field(&x0, &a).unwrap();
        assert_eq!(v.to_array(), [-1.0, 0.125, -1.0, 0.125]);

        let traj = integrate_qp(&x0, &a, 1.0, 1.001, &IntegratorConfig::default()).unwrap();
        let Trajectory::Qp(records) = &traj else { unreachable!() };
        let last = &records.last().unwrap().state;
        assert!((last.q1 - (-0.001)).abs() < 1e-5);
        assert!((last.p1 - 0.000125).abs() < 1e-5);
    }

    #[test]
    fn drift_stays_small_on_f_chart() {
        let x0 = FState::new(0.4, -0.3, 0.5, 0.2, -0.4, 0.3);
        let traj = integrate_f(&x0, &params(), 0.0, 1.0, &IntegratorConfig::default()).unwrap();
        let Trajectory::F(records) = &traj else { unreachable!() };
        assert!(records.len() > 4);
        for r in records {
            assert!(r.d1.abs() <= 1e-8, "d1 drift {} at t = {}", r.d1, r.t);
            assert!(r.d2.abs() <= 1e-8, "d2 drift {} at t = {}", r.d2, r.t);
        }
    }

    #[test]
    fn stride_controls_record_times() {
        let x0 = FState::new(0.1, 0.1, 0.1, 0.1, 0.1, 0.1);
        let cfg = IntegratorConfig { dense_output_stride: 0.25, ..Default::default() };
        let traj = integrate_f(&x0, &params(), 0.0, 1.0, &cfg).unwrap();
        let Trajectory::F(records) = &traj else { unreachable!() };
        let times: Vec<f64> = records.iter().map(|r| r.t).collect();
        assert_eq!(times, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn reverse_time_integration_returns_home() {
        let x0 = FState::new(0.2, -0.1, 0.3, 0.15, -0.2, 0.1);
        let a = params();
        let cfg = IntegratorConfig::default();
        let traj = integrate_f(&x0, &a, 0.0, 1.0, &cfg).unwrap();
        let Trajectory::F(records) = &traj else { unreachable!() };
        let end = records.last().unwrap().state.clone();

        let back = integrate_f(&end, &a, 1.0, 0.0, &cfg).unwrap();
        let Trajectory::F(records) = &back else { unreachable!() };
        let home = &records.last().unwrap().state;
        for (u, v) in home.to_array().into_iter().zip(x0.to_array()) {
            assert!((u - v).abs() < 1e-8, "{u} vs {v}");
        }
    }

    #[test]
    fn cross_check_zero_length_interval() {
        let c = cross_check_charts(&sample_qp(), &params(), 1.0, 1.0, &IntegratorConfig::default())
            .unwrap();
        assert_eq!(c.max_state_deviation, 0.0);
        assert_eq!(c.max_level_residual, 0.0);
    }

    #[test]
    fn cross_check_over_e_interval() {
        let c = cross_check_charts(
            &sample_qp(),
            &params(),
            1.0,
            std::f64::consts::E,
            &IntegratorConfig::default(),
        )
        .unwrap();
        assert!(c.max_state_deviation <= 1e-7, "deviation {}", c.max_state_deviation);
        assert!(c.max_level_residual <= 1e-7, "level residual {}", c.max_level_residual);
    }

    #[test]
    fn delimited_export_roundtrips() {
        let x0 = FState::new(0.1, 0.2, 0.3, 0.4, 0.5, 0.6);
        let cfg = IntegratorConfig { dense_output_stride: 0.5, ..Default::default() };
        let traj = integrate_f(&x0, &params(), 0.0, 1.0, &cfg).unwrap();
        let text = traj.to_delimited();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,f0,f1,f2,f3,g1,g2,step,d1,d2");
        for (i, line) in lines.enumerate() {
            let parsed: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
            assert_eq!(parsed, traj.row(i), "row {i} does not round-trip");
        }
    }

    #[test]
    fn backlund_commutation_pi_exact() {
        let dev = backlund_commutation_check(
            Generator::Pi,
            &sample_qp(),
            &params(),
            1.0,
            2.0,
            &IntegratorConfig::default(),
        )
        .unwrap();
        assert!(dev <= 1e-12, "pi commutation deviation {dev}");
    }

    #[test]
    fn backlund_commutation_s0_within_budget() {
        let dev = backlund_commutation_check(
            Generator::S0,
            &sample_qp(),
            &params(),
            1.0,
            2.0,
            &IntegratorConfig::default(),
        )
        .unwrap();
        assert!(dev <= 1e-7, "s0 commutation deviation {dev}");
    }

    #[test]
    fn max_steps_is_enforced() {
        let x0 = FState::new(0.4, -0.3, 0.5, 0.2, -0.4, 0.3);
        let cfg = IntegratorConfig { max_steps: 3, ..Default::default() };
        let err = integrate_f(&x0, &params(), 0.0, 1.0, &cfg).unwrap_err();
        assert_eq!(err, Error::MaxStepsExceeded(3));
    }

    #[test]
    fn backlund_check_aborts_when_flow_crosses_s2_divisor() {
        // with alpha2 < 0 the divisor f2 = q1 q2 + T is no longer repelling,
        // and this flow drives it through zero
        let a = Parameters::new(0.125, 0.125, -0.0625, 0.375);
        let x0 = QPState::new(1.2, 0.2, -0.75, 0.15, 1.0);
        let err = backlund_commutation_check(
            Generator::S2,
            &x0,
            &a,
            1.0,
            3.5,
            &IntegratorConfig::default(),
        )
        .unwrap_err();
        match err {
            Error::PoleAlongFlow { divisor, t } => {
                assert_eq!(divisor, PoleDivisor::Q1Q2PlusT);
                assert!(t > 1.0 && t < 3.5, "crossing time {t}");
            }
            other => panic!("expected a pole diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn refinement_band_matches_fifth_order() {
        // mean deviation reduction per 10x tightening sits in the [8, 64]
        // band expected of a fifth-order pair with proportional control
        let a = params();
        let x0 = sample_qp();
        let devs =
            refinement_deviations(&x0, &a, 1.0, std::f64::consts::E, 1e-4, 5).unwrap();
        for w in devs.windows(2) {
            assert!(w[1] <= 2.0 * w[0], "deviation grew past 2x on tightening: {devs:?}");
        }
        let n = devs.len() - 1;
        let geo = (devs[0] / devs[n]).powf(1.0 / n as f64);
        assert!((8.0..=64.0).contains(&geo), "mean reduction {geo:.2}x per decade, devs {devs:?}");
    }
}
