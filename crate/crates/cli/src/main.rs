use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use packlab_cli::commands::{self, Options};

#[derive(Parser)]
#[command(name = "packlab", version, about = "Exact sphere packings from Coxeter graphs")]
struct Cli {
    /// Worker threads for orbit enumeration.
    #[arg(long, global = true, env = "PACKLAB_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Budget {
    /// Maximum word length.
    #[arg(long)]
    depth: Option<usize>,
    /// Maximum number of orbit elements.
    #[arg(long)]
    max: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Gram matrix, determinant, signature, inverse and weights.
    Gram { graph: String },
    /// Enumerate the orbit and check the packing condition.
    Orbit {
        scenario: String,
        #[command(flatten)]
        budget: Budget,
        /// Write the orbit as TSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every expectation of a scenario.
    Verify {
        scenario: String,
        #[command(flatten)]
        budget: Budget,
    },
    /// Render a planar slice of the realized orbit as SVG.
    Render {
        scenario: String,
        #[command(flatten)]
        budget: Budget,
        /// Slicing plane: a mirror that is a plane in the chart, or `coord`.
        #[arg(long)]
        plane: Option<String>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Classify the orbit against the plane with normal `h`.
    CrossSection {
        scenario: String,
        #[command(flatten)]
        budget: Budget,
        /// Normal vector of the cutting plane, as a scenario expression.
        #[arg(long)]
        h: String,
    },
    /// Dump the realized orbit as TSV.
    Realize {
        scenario: String,
        #[command(flatten)]
        budget: Budget,
    },
}

fn options(b: &Budget, threads: Option<usize>) -> Options {
    Options {
        depth: b.depth,
        max: b.max,
        threads,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let t = cli.threads;
    let result = match &cli.command {
        Command::Gram { graph } => commands::gram(graph, &mut out),
        Command::Orbit {
            scenario,
            budget,
            out: tsv,
        } => commands::orbit(scenario, &options(budget, t), tsv.as_deref(), &mut out),
        Command::Verify { scenario, budget } => commands::verify(scenario, &options(budget, t), &mut out),
        Command::Render {
            scenario,
            budget,
            plane,
            svg,
        } => commands::render(
            scenario,
            &options(budget, t),
            plane.as_deref(),
            svg.as_deref(),
            &mut out,
        ),
        Command::CrossSection { scenario, budget, h } => {
            commands::cross_section(scenario, &options(budget, t), h, &mut out)
        }
        Command::Realize { scenario, budget } => commands::realize_tsv(scenario, &options(budget, t), &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
