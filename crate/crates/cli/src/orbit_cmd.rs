use clap::Args;
use cp3_core::model::{FState, Parameters, QPState};
use cp3_core::scalar::{parse_rat, Rat};
use cp3_core::symmetry::{apply_word, ChartPoint, Word};
use cp3_core::Error;

use crate::{EXIT_OK, EXIT_POLE, EXIT_USAGE};

#[derive(Args)]
pub struct OrbitArgs {
    /// Chart the point lives in: f or qp
    #[arg(long)]
    chart: String,
    /// Whitespace-separated generators, e.g. "s2 s3 s2 s3"; empty = identity
    #[arg(long)]
    word: String,
    /// Exact state: f chart f0,f1,f2,f3,g1,g2; qp chart q1,p1,q2,p2,T
    #[arg(long)]
    state: String,
    /// Exact parameters alpha0,alpha1,alpha2,alpha3
    #[arg(long)]
    alpha: String,
}

fn parse_rat_csv(s: &str, expected: usize, what: &str) -> Result<Vec<Rat>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != expected {
        return Err(format!("{what} needs {expected} comma-separated values, got {}", parts.len()));
    }
    parts
        .iter()
        .map(|p| parse_rat(p).map_err(|e| e.to_string()))
        .collect()
}

fn rats_csv(values: &[Rat]) -> String {
    values.iter().map(Rat::to_string).collect::<Vec<_>>().join(",")
}

pub fn run(args: OrbitArgs) -> i32 {
    let word: Word = match args.word.parse() {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let alpha = match parse_rat_csv(&args.alpha, 4, "--alpha") {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let params = Parameters::new(alpha[0].clone(), alpha[1].clone(), alpha[2].clone(), alpha[3].clone());

    let point = match args.chart.as_str() {
        "f" => match parse_rat_csv(&args.state, 6, "--state") {
            Ok(v) => ChartPoint::F {
                state: FState::from_array(v.try_into().expect("length checked")),
                params,
            },
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        },
        "qp" => match parse_rat_csv(&args.state, 5, "--state") {
            Ok(v) => ChartPoint::Qp {
                state: QPState::from_array(v.try_into().expect("length checked")),
                params,
            },
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

    eprintln!("# orbit: chart={} word={:?} ({} generators)", args.chart, args.word, word.len());

    match apply_word(&word, &point) {
        Ok(ChartPoint::F { state, params }) => {
            println!("{}", rats_csv(&state.to_array()));
            println!("{}", rats_csv(&params.to_array()));
            EXIT_OK
        }
        Ok(ChartPoint::Qp { state, params }) => {
            println!("{}", rats_csv(&state.to_array()));
            println!("{}", rats_csv(&params.to_array()));
            EXIT_OK
        }
        Err(e @ Error::PoleHit { .. }) => {
            eprintln!("{e}");
            EXIT_POLE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
