use clap::Args;
use cp3_core::verify::{run_suite, SampleConfig, SuiteName};

use crate::{EXIT_OK, EXIT_USAGE};

#[derive(Args)]
pub struct VerifyArgs {
    /// Suite to run: integrals, divisors, invariance-f, invariance-qp,
    /// hamiltonian, reduction, relations, automorphism, bracket, all
    #[arg(long, default_value = "all")]
    suite: String,
    /// Exact points per identity
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Numerator/denominator bound of the sampled rationals
    #[arg(long, default_value_t = 50)]
    bound: i64,
    /// Output format: text or structured (JSON)
    #[arg(long, default_value = "text")]
    format: String,
}

pub fn run(args: VerifyArgs) -> i32 {
    let suite: SuiteName = match args.suite.parse() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if args.points == 0 || args.bound < 1 {
        eprintln!("error: --points and --bound must be at least 1");
        return EXIT_USAGE;
    }
    let structured = match args.format.as_str() {
        "text" => false,
        "structured" => true,
        other => {
            eprintln!("error: unknown format {other:?} (expected text or structured)");
            return EXIT_USAGE;
        }
    };

    let cfg = SampleConfig {
        seed: args.seed,
        points_per_identity: args.points,
        coeff_bound: args.bound,
        ..Default::default()
    };
    eprintln!(
        "# verify: suite={suite} points={} seed={} bound={} format={}",
        cfg.points_per_identity, cfg.seed, cfg.coeff_bound, args.format
    );

    let report = run_suite(suite, &cfg);
    if structured {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    let flagged = report.flagged_count();
    if flagged > 0 {
        eprintln!("warning: {flagged} flagged discrepancies (reported, not failures)");
    }
    if report.pass {
        EXIT_OK
    } else {
        1
    }
}
