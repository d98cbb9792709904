use std::fs;
use std::path::PathBuf;

use clap::Args;
use cp3_core::integrate::{cross_check_charts, integrate_f, integrate_qp, IntegratorConfig, Trajectory};
use cp3_core::model::{FState, Parameters, QPState};
use cp3_core::scalar::{parse_rat, rat_to_f64};

use crate::{EXIT_INTEGRATION, EXIT_OK, EXIT_USAGE};

#[derive(Args)]
pub struct IntegrateArgs {
    /// Chart to integrate: f or qp
    #[arg(long)]
    chart: String,
    /// Initial state: f chart f0,...,g2 (6 values); qp chart q1,p1,q2,p2
    /// (4 values; time starts at --from). Entries may be decimals or exact
    /// ratios like 1/8.
    #[arg(long)]
    state: String,
    /// Parameters alpha0,alpha1,alpha2,alpha3 (decimals or ratios)
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long, default_value_t = 1e-10)]
    rtol: f64,
    #[arg(long, default_value_t = 1e-12)]
    atol: f64,
    /// Time spacing of exported records; 0 exports every accepted step
    #[arg(long, default_value_t = 0.0)]
    stride: f64,
    /// Output file for the delimited trajectory
    #[arg(long)]
    out: PathBuf,
    /// Also integrate the six-variable lift over [log from, log to] and
    /// report the worst disagreement (qp chart only)
    #[arg(long, default_value_t = false)]
    cross_check: bool,
}

fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if s.contains('/') {
        parse_rat(s).map(|r| rat_to_f64(&r)).map_err(|e| e.to_string())
    } else {
        s.parse::<f64>().map_err(|e| format!("invalid number {s:?}: {e}"))
    }
}

fn parse_csv(s: &str, expected: usize, what: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != expected {
        return Err(format!("{what} needs {expected} comma-separated values, got {}", parts.len()));
    }
    parts.iter().map(|p| parse_number(p)).collect()
}

pub fn run(args: IntegrateArgs) -> i32 {
    if args.rtol <= 0.0 || args.atol <= 0.0 {
        eprintln!("error: tolerances must be positive");
        return EXIT_USAGE;
    }
    let alpha = match parse_csv(&args.alpha, 4, "--alpha") {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let a = Parameters::new(alpha[0], alpha[1], alpha[2], alpha[3]);
    let cfg = IntegratorConfig {
        rel_tol: args.rtol,
        abs_tol: args.atol,
        dense_output_stride: args.stride,
        ..Default::default()
    };
    eprintln!(
        "# integrate: chart={} from={} to={} rtol={:e} atol={:e} stride={} out={}",
        args.chart,
        args.from,
        args.to,
        cfg.rel_tol,
        cfg.abs_tol,
        cfg.dense_output_stride,
        args.out.display()
    );

    let result = match args.chart.as_str() {
        "f" => {
            if args.cross_check {
                eprintln!("error: --cross-check applies to the qp chart");
                return EXIT_USAGE;
            }
            match parse_csv(&args.state, 6, "--state") {
                Ok(v) => {
                    let x0 = FState::new(v[0], v[1], v[2], v[3], v[4], v[5]);
                    integrate_f(&x0, &a, args.from, args.to, &cfg)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            }
        }
        "qp" => match parse_csv(&args.state, 4, "--state") {
            Ok(v) => {
                let x0 = QPState::new(v[0], v[1], v[2], v[3], args.from);
                let result = integrate_qp(&x0, &a, args.from, args.to, &cfg);
                if result.is_ok() && args.cross_check {
                    match cross_check_charts(&x0, &a, args.from, args.to, &cfg) {
                        Ok(c) => println!(
                            "cross-check max deviation: {:e} (level residual {:e})",
                            c.max_state_deviation, c.max_level_residual
                        ),
                        Err(e) => {
                            eprintln!("integration failed: {e}");
                            return EXIT_INTEGRATION;
                        }
                    }
                }
                result
            }
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        },
        other => {
            eprintln!("error: unknown chart {other:?} (expected f or qp)");
            return EXIT_USAGE;
        }
    };

    let traj = match result {
        Ok(t) => t,
        Err(e) => {
            eprintln!("integration failed: {e}");
            return EXIT_INTEGRATION;
        }
    };

    if let Err(e) = fs::write(&args.out, traj.to_delimited()) {
        eprintln!("error: cannot write {}: {e}", args.out.display());
        return EXIT_INTEGRATION;
    }

    match &traj {
        Trajectory::F(records) => {
            let d1 = records.iter().map(|r| r.d1.abs()).fold(0.0, f64::max);
            let d2 = records.iter().map(|r| r.d2.abs()).fold(0.0, f64::max);
            println!("records: {}", records.len());
            println!("max |d1|: {d1:e}");
            println!("max |d2|: {d2:e}");
        }
        Trajectory::Qp(records) => {
            println!("records: {}", records.len());
            let first = records.first().expect("non-empty trajectory");
            let last = records.last().expect("non-empty trajectory");
            println!("H({}) = {:e}", first.t, first.h);
            println!("H({}) = {:e}", last.t, last.h);
        }
    }
    EXIT_OK
}
