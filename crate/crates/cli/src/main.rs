//! `cp3`: verification suites, symmetry orbits, numerical integration, and
//! static plots for the coupled Painleve III system.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 pole hit, 4 integration
//! failure. Results go to stdout; the resolved configuration is echoed to
//! stderr.

mod integrate_cmd;
mod orbit_cmd;
mod plot_cmd;
mod relations_cmd;
mod svg;
mod verify_cmd;

use clap::{Parser, Subcommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_POLE: i32 = 3;
pub const EXIT_INTEGRATION: i32 = 4;

#[derive(Parser)]
#[command(
    name = "cp3",
    about = "Coupled Painleve III system: exact verification, symmetry orbits, integration, plots",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an exact verification suite and print its report
    Verify(verify_cmd::VerifyArgs),
    /// Apply a word of symmetry generators to an exact chart point
    Orbit(orbit_cmd::OrbitArgs),
    /// Integrate one of the systems and export the trajectory
    Integrate(integrate_cmd::IntegrateArgs),
    /// Discover the pairwise orders of the generators
    Relations(relations_cmd::RelationsArgs),
    /// Render columns of an exported trajectory as a static SVG chart
    Plot(plot_cmd::PlotArgs),
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify(args) => verify_cmd::run(args),
        Command::Orbit(args) => orbit_cmd::run(args),
        Command::Integrate(args) => integrate_cmd::run(args),
        Command::Relations(args) => relations_cmd::run(args),
        Command::Plot(args) => plot_cmd::run(args),
    };
    std::process::exit(code);
}
