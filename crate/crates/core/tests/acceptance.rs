//! Acceptance suite: every structural property of the system checked at its
//! stated point count and runtime budget, one test (and one printed pass/fail
//! line) per criterion. Run with `--nocapture` to see the lines:
//!
//! ```text
//! cargo test -p cp3-core --test acceptance -- --nocapture
//! ```

use std::time::{Duration, Instant};

use cp3_core::dynamics::poisson::{check_stated_brackets, FCoord};
use cp3_core::dynamics::{
    conjugated_field_residual, divisor_tangency_residual, first_integral_residuals,
    hamiltonian_vector_field, lift_to_f, qp_vector_field, reduce_to_qp,
};
use cp3_core::integrate::{
    cross_check_charts, integrate_f, refinement_deviations, IntegratorConfig, Trajectory,
};
use cp3_core::model::{normalization_residual, FState, Parameters, QPState};
use cp3_core::scalar::Scalar;
use cp3_core::symmetry::{
    apply_to_parameters, apply_word, chart_equivariance_residual, pushforward_residual_f,
    pushforward_residual_qp, relation_order, ChartPoint, Generator, RelationOrder, Word,
    GENERATORS, REFLECTIONS,
};
use cp3_core::verify::{FConstraint, SampleConfig, Sampler};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 42;

fn cfg() -> SampleConfig {
    SampleConfig::with_seed(SEED)
}

fn finish(name: &str, detail: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    println!(
        "acceptance {name}: PASS — {detail} ({:.2} s, budget {:.0} s)",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(
        elapsed < budget,
        "{name} exceeded its runtime budget: {elapsed:?} >= {budget:?}"
    );
}

#[test]
fn c01_first_integrals() {
    let start = Instant::now();
    let mut s = Sampler::with_seed(&cfg(), SEED ^ 0x01);
    let n = 200;
    for _ in 0..n {
        let x = s.fstate(&[]);
        let a = s.parameters(None);
        let (r1, r2) = first_integral_residuals(&x, &a);
        assert!(r1.is_zero() && r2.is_zero(), "nonzero integral residual at {x:?} {a:?}");
    }
    finish("01 first-integrals", &format!("residuals (0, 0) at {n}/{n} exact points"), start, Duration::from_secs(1));
}

#[test]
fn c02_invariant_divisors() {
    let start = Instant::now();
    let mut s = Sampler::with_seed(&cfg(), SEED ^ 0x02);
    let n = 200;
    for i in 0..4 {
        for _ in 0..n {
            let x = s.fstate(&[FConstraint::ZeroF(i)]);
            let a = s.parameters(Some(i));
            let r = divisor_tangency_residual(i, &x, &a).expect("constrained point");
            assert!(r.is_zero(), "df{i} = {r} != 0 on the divisor at {x:?}");
        }
    }
    finish("02 invariant-divisors", &format!("all 4 rows tangent at {n} points each"), start, Duration::from_secs(1));
}

#[test]
fn c03_invariance_f_chart() {
    let start = Instant::now();
    let c = cfg();
    let mut s = Sampler::with_seed(&c, SEED ^ 0x03);
    let n = 200;
    for g in GENERATORS {
        for _ in 0..n {
            let r = s
                .sample_until(c.max_retries_on_pole, |s| {
                    let x = s.fstate(&[]);
                    let a = s.parameters(None);
                    pushforward_residual_f(g, &x, &a).ok()
                })
                .expect("admissible point");
            assert!(r.iter().all(Scalar::is_zero), "pushforward residual for {g}: {r:?}");
        }
    }
    finish("03 invariance-f", &format!("pushforward = 0 for 5 generators x {n} points"), start, Duration::from_secs(30));
}

#[test]
fn c04_invariance_qp_chart() {
    let start = Instant::now();
    let c = cfg();
    let mut s = Sampler::with_seed(&c, SEED ^ 0x04);
    let n = 200;
    for g in GENERATORS {
        for _ in 0..n {
            let r = s
                .sample_until(c.max_retries_on_pole, |s| {
                    let x = s.qpstate();
                    let a = s.parameters(None);
                    pushforward_residual_qp(g, &x, &a).ok()
                })
                .expect("admissible point");
            assert!(r.iter().all(Scalar::is_zero), "extended pushforward residual for {g}: {r:?}");
        }
    }
    finish("04 invariance-qp", &format!("extended pushforward = 0 for 5 generators x {n} points"), start, Duration::from_secs(30));
}

#[test]
fn c05_hamiltonian_consistency() {
    let start = Instant::now();
    let mut s = Sampler::with_seed(&cfg(), SEED ^ 0x05);
    let n = 200;
    for _ in 0..n {
        let x = s.qpstate();
        let a = s.parameters(None);
        let hv = hamiltonian_vector_field(&x, &a).expect("T != 0");
        let v = qp_vector_field(&x, &a).expect("T != 0");
        assert_eq!(hv, v, "canonical equations disagree with the chart field at {x:?}");
    }
    finish("05 hamiltonian-consistency", &format!("canonical equations = chart field at {n} points"), start, Duration::from_secs(5));
}

#[test]
fn c06_reduction() {
    let start = Instant::now();
    let mut s = Sampler::with_seed(&cfg(), SEED ^ 0x06);
    let n = 200;
    for _ in 0..n {
        let x = s.qpstate();
        let a = s.parameters(None);
        let r = conjugated_field_residual(&x, &a).expect("T != 0");
        assert!(r.is_zero(), "conjugated-field residual at {x:?}: {r:?}");

        let back = reduce_to_qp(&lift_to_f(&x)).expect("lift is on the level set");
        assert_eq!(back, x, "reduce(lift) is not the identity");
        let y = s.fstate(&[FConstraint::LevelSet]);
        let there = lift_to_f(&reduce_to_qp(&y).expect("level-set point"));
        assert_eq!(there, y, "lift(reduce) is not the identity on the level set");
    }
    finish("06 reduction", &format!("conjugated field = 0 and exact round-trips at {n} points"), start, Duration::from_secs(5));
}

#[test]
fn c07_weyl_relations() {
    let start = Instant::now();
    let c = cfg();
    let n = 50;
    const MAX_ORDER: usize = 8;

    // involutions in both charts
    let mut s = Sampler::with_seed(&c, SEED ^ 0x07);
    for g in REFLECTIONS {
        let w = Word(vec![g, g]);
        for _ in 0..n {
            let (pt, out) = s
                .sample_until(c.max_retries_on_pole, |s| {
                    let pt = ChartPoint::F { state: s.fstate(&[]), params: s.parameters(None) };
                    let out = apply_word(&w, &pt).ok()?;
                    Some((pt, out))
                })
                .expect("admissible point");
            assert_eq!(out, pt, "{g}^2 != id in the f chart");

            let (pt, out) = s
                .sample_until(c.max_retries_on_pole, |s| {
                    let pt = ChartPoint::Qp { state: s.qpstate(), params: s.parameters(None) };
                    let out = apply_word(&w, &pt).ok()?;
                    Some((pt, out))
                })
                .expect("admissible point");
            assert_eq!(out, pt, "{g}^2 != id in the qp chart");
        }
    }

    // order table in both charts
    use Generator::*;
    let expected = [(S0, S1, 2), (S0, S3, 2), (S1, S3, 2), (S0, S2, 3), (S1, S2, 3), (S2, S3, 4)];
    for (gi, gj, m) in expected {
        let mut sf = Sampler::with_seed(&c, SEED ^ u64::from(m as u32) ^ 0x70);
        let found = relation_order(
            gi,
            gj,
            || ChartPoint::F { state: sf.fstate(&[]), params: sf.parameters(None) },
            n,
            MAX_ORDER,
            c.max_retries_on_pole,
        )
        .expect("sampling");
        assert_eq!(found, RelationOrder::Finite(m), "f-chart order of ({gi} {gj})");

        let mut sq = Sampler::with_seed(&c, SEED ^ u64::from(m as u32) ^ 0x71);
        let found = relation_order(
            gi,
            gj,
            || ChartPoint::Qp { state: sq.qpstate(), params: sq.parameters(None) },
            n,
            MAX_ORDER,
            c.max_retries_on_pole,
        )
        .expect("sampling");
        assert_eq!(found, RelationOrder::Finite(m), "qp-chart order of ({gi} {gj})");
    }
    finish(
        "07 weyl-relations",
        &format!("involutions and order table {{2,2,2,3,3,4}} in both charts, {n} points each"),
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn c08_normalization_preserved() {
    let start = Instant::now();
    let mut s = Sampler::with_seed(&cfg(), SEED ^ 0x08);
    let n = 200;
    for _ in 0..n {
        // arbitrary quadruples: preservation is an identity in alpha
        let a = Parameters::new(s.rat(), s.rat(), s.rat(), s.rat());
        let before = normalization_residual(&a);
        for g in GENERATORS {
            let after = normalization_residual(&apply_to_parameters(g, &a));
            assert_eq!(before, after, "{g} changes the normalization residual");
        }
    }
    finish("08 normalization", &format!("alpha0+alpha1+2 alpha2+alpha3 preserved by all generators, {n} points"), start, Duration::from_secs(1));
}

#[test]
fn c09_chart_equivariance() {
    let start = Instant::now();
    let c = cfg();
    let mut s = Sampler::with_seed(&c, SEED ^ 0x09);
    let n = 100;
    for g in GENERATORS {
        for _ in 0..n {
            let r = s
                .sample_until(c.max_retries_on_pole, |s| {
                    let x = s.qpstate();
                    let a = s.parameters(None);
                    chart_equivariance_residual(g, &x, &a).ok()
                })
                .expect("admissible point");
            assert!(r.iter().all(Scalar::is_zero), "equivariance residual for {g}: {r:?}");
        }
    }
    finish("09 chart-equivariance", &format!("lift o g_qp = g_f o lift for 5 generators x {n} points"), start, Duration::from_secs(10));
}

#[test]
fn c10_numeric_drift_and_convergence() {
    let start = Instant::now();
    let a = Parameters::new(0.125, 0.125, 0.0625, 0.125);

    // conserved-quantity drift over t in [0, 1] at rtol 1e-10
    let int_cfg = IntegratorConfig::default();
    assert_eq!(int_cfg.rel_tol, 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for i in 0..8 {
        // initial coordinates inside the admissible box [-2, 2]; drawn from
        // [-1/2, 1/2] so every trajectory stays finite up to t = 1
        let mut coords = [0.0; 6];
        for v in &mut coords {
            *v = rng.random_range(-0.5..0.5);
        }
        let x0 = FState::from_array(coords);
        let traj = integrate_f(&x0, &a, 0.0, 1.0, &int_cfg)
            .unwrap_or_else(|e| panic!("drift trajectory {i} failed: {e}"));
        let Trajectory::F(records) = &traj else { unreachable!() };
        for r in records {
            assert!(r.d1.abs() <= 1e-8, "|d1| = {} > 1e-8 on trajectory {i}", r.d1.abs());
            assert!(r.d2.abs() <= 1e-8, "|d2| = {} > 1e-8 on trajectory {i}", r.d2.abs());
            worst = worst.max(r.d1.abs()).max(r.d2.abs());
        }
    }

    // cross-chart agreement over T in [1, e]
    let x0 = QPState::new(0.3, 0.4, -0.2, 0.35, 1.0);
    let check = cross_check_charts(&x0, &a, 1.0, std::f64::consts::E, &int_cfg).unwrap();
    assert!(
        check.max_state_deviation <= 1e-7,
        "cross-check deviation {} > 1e-7",
        check.max_state_deviation
    );
    assert!(
        check.max_level_residual <= 1e-7,
        "level residual {} > 1e-7",
        check.max_level_residual
    );

    // tolerance refinement: at least 8x deviation reduction per 10x
    // tightening, averaged over 5 refinements
    let devs = refinement_deviations(&x0, &a, 1.0, std::f64::consts::E, 1e-4, 5).unwrap();
    let n_ref = devs.len() - 1;
    let geo_ratio = (devs[0] / devs[n_ref]).powf(1.0 / n_ref as f64);
    assert!(
        geo_ratio >= 8.0,
        "mean deviation reduction {geo_ratio:.2}x per decade < 8x (devs {devs:?})"
    );

    finish(
        "10 numeric-drift",
        &format!(
            "drift <= 1e-8 (worst {worst:.1e}), cross-check {:.1e} <= 1e-7, {geo_ratio:.1}x per decade >= 8x",
            check.max_state_deviation
        ),
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn c11_bracket_report() {
    let start = Instant::now();
    let mut s = Sampler::with_seed(&cfg(), SEED ^ 0x0B);
    let n = 200;
    let mut sign_flips = 0usize;
    for _ in 0..n {
        let x = s.fstate(&[FConstraint::LevelSet]);
        let checks = check_stated_brackets(&x).expect("level-set point");
        for c in &checks {
            match c.pair {
                (FCoord::F2, FCoord::F3) => {
                    assert!(c.matches, "{{f2, f3}} != g1+g2 at {x:?} (embedded {})", c.embedded)
                }
                _ => {
                    // {f3, g1} and {f3, g2}: the embedding gives the opposite
                    // sign of the stated value; flagged, never a failure
                    assert!(
                        c.sign_discrepancy,
                        "stated bracket {:?} neither matches nor flips sign (embedded {})",
                        c.pair, c.embedded
                    );
                    sign_flips += 1;
                }
            }
        }
    }
    assert_eq!(sign_flips, 2 * n);
    finish(
        "11 bracket-report",
        &format!("{{f2,f3}} = g1+g2 at {n} points; sign discrepancy on {{f3,g1}}, {{f3,g2}} flagged as warning"),
        start,
        Duration::from_secs(1),
    );
}
