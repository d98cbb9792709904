use clap::Args;
use cp3_core::symmetry::{relation_order, ChartPoint, Generator, RelationOrder, REFLECTIONS};
use cp3_core::verify::{SampleConfig, Sampler};

use crate::{EXIT_OK, EXIT_USAGE};

#[derive(Args)]
pub struct RelationsArgs {
    /// Chart to test in: f, qp, or both
    #[arg(long, default_value = "both")]
    chart: String,
    /// Sample points per generator pair
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    bound: i64,
    /// Largest power of (gi gj) tried before reporting unbounded
    #[arg(long, default_value_t = 8)]
    max_order: usize,
}

fn order_string(o: RelationOrder) -> String {
    match o {
        RelationOrder::Finite(m) => m.to_string(),
        RelationOrder::Unbounded => "unbounded".into(),
    }
}

pub fn run(args: RelationsArgs) -> i32 {
    let charts: Vec<&str> = match args.chart.as_str() {
        "f" => vec!["f"],
        "qp" => vec!["qp"],
        "both" => vec!["f", "qp"],
        other => {
            eprintln!("error: unknown chart {other:?} (expected f, qp, or both)");
            return EXIT_USAGE;
        }
    };
    if args.points == 0 || args.max_order == 0 {
        eprintln!("error: --points and --max-order must be at least 1");
        return EXIT_USAGE;
    }
    let cfg = SampleConfig {
        seed: args.seed,
        points_per_identity: args.points,
        coeff_bound: args.bound,
        ..Default::default()
    };
    eprintln!(
        "# relations: chart={} points={} seed={} bound={} max-order={}",
        args.chart, args.points, args.seed, args.bound, args.max_order
    );

    println!("pair\tchart\torder");
    let pairs: Vec<(Generator, Generator)> = REFLECTIONS
        .iter()
        .enumerate()
        .flat_map(|(i, &gi)| REFLECTIONS[i + 1..].iter().map(move |&gj| (gi, gj)))
        .collect();
    for (gi, gj) in pairs {
        for chart in &charts {
            // independent deterministic sub-seed per (pair, chart)
            let seed = cfg.seed ^ ((gi as u64 + 1) << 8) ^ (gj as u64 + 1) ^ ((chart.len() as u64) << 16);
            let mut s = Sampler::with_seed(&cfg, seed);
            let result = if *chart == "f" {
                relation_order(
                    gi,
                    gj,
                    || ChartPoint::F { state: s.fstate(&[]), params: s.parameters(None) },
                    args.points,
                    args.max_order,
                    cfg.max_retries_on_pole,
                )
            } else {
                relation_order(
                    gi,
                    gj,
                    || ChartPoint::Qp { state: s.qpstate(), params: s.parameters(None) },
                    args.points,
                    args.max_order,
                    cfg.max_retries_on_pole,
                )
            };
            match result {
                Ok(order) => println!("{gi} {gj}\t{chart}\t{}", order_string(order)),
                Err(e) => {
                    eprintln!("error: sampling failed for ({gi}, {gj}) in the {chart} chart: {e}");
                    return EXIT_USAGE;
                }
            }
        }
    }
    EXIT_OK
}
