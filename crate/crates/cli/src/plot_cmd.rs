use std::fs;
use std::path::PathBuf;

use clap::Args;

use crate::svg::{line_chart, Series};
use crate::{EXIT_OK, EXIT_USAGE};

#[derive(Args)]
pub struct PlotArgs {
    /// Trajectory file produced by the integrate command
    #[arg(long = "in")]
    input: PathBuf,
    /// Column for the horizontal axis, e.g. T
    #[arg(long)]
    x: String,
    /// Comma-separated columns for the vertical axis, e.g. q1,q2
    #[arg(long)]
    y: String,
    /// Output SVG file
    #[arg(long)]
    out: PathBuf,
}

struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

fn parse_table(text: &str) -> Result<Table, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty trajectory file")?;
    let columns: Vec<String> = header.split(',').map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|v| v.parse::<f64>().map_err(|e| format!("row {}: {e}", i + 2)))
            .collect::<Result<_, _>>()?;
        if row.len() != columns.len() {
            return Err(format!("row {} has {} fields, header has {}", i + 2, row.len(), columns.len()));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err("trajectory file has no data rows".into());
    }
    Ok(Table { columns, rows })
}

impl Table {
    fn column(&self, name: &str) -> Result<usize, String> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| format!("unknown column {name:?} (file has: {})", self.columns.join(", ")))
    }
}

pub fn run(args: PlotArgs) -> i32 {
    let text = match fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.input.display());
            return EXIT_USAGE;
        }
    };
    let table = match parse_table(&text) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };

    eprintln!(
        "# plot: in={} x={} y={} out={} ({} rows)",
        args.input.display(),
        args.x,
        args.y,
        args.out.display(),
        table.rows.len()
    );

    let xi = match table.column(&args.x) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut series = Vec::new();
    for name in args.y.split(',') {
        let yi = match table.column(name) {
            Ok(i) => i,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        };
        series.push(Series {
            label: name.to_string(),
            points: table.rows.iter().map(|r| (r[xi], r[yi])).collect(),
        });
    }

    let svg = line_chart(&args.x, &args.y, &series);
    if let Err(e) = fs::write(&args.out, svg) {
        eprintln!("error: cannot write {}: {e}", args.out.display());
        return EXIT_USAGE;
    }
    EXIT_OK
}
