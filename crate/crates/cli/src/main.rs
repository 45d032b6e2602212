use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hinv_cli::{emit_report, parse_lambda, run_suite, Format, RunConfig, Suite};
use hinv_core::constructions::LambdaMode;

#[derive(Parser)]
#[command(name = "hinv", version, about = "Exact verification of invariant distributions and orbit counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more check suites.
    Verify {
        #[arg(value_enum, required = true)]
        suites: Vec<Suite>,
        /// Dimension n of ℂ^n.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(2..=12))]
        n: u64,
        /// Largest family order l.
        #[arg(long, default_value_t = 4)]
        lmax: u32,
        /// `formal` or a rational value p/q.
        #[arg(long, default_value = "formal", value_parser = parse_lambda)]
        lambda: LambdaMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples for the sampled checks.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Format::Text, env = "HINV_FORMAT")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

fn main() -> ExitCode {
    let Command::Verify {
        suites,
        n,
        lmax,
        lambda,
        seed,
        samples,
        format,
        out,
    } = Cli::parse().command;
    let config = RunConfig {
        n: n as usize,
        lmax,
        lambda,
        seed,
        samples,
        suites: suites.into_iter().collect::<BTreeSet<_>>(),
    };
    let (report, timings) = run_suite(&config);
    let text = emit_report(&report, &timings, format);
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("hinv: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            eprintln!(
                "summary: {} pass, {} fail, {} skipped",
                report.summary.pass, report.summary.fail, report.summary.skipped
            );
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
