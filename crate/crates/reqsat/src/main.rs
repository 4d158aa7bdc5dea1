use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use reqsat::pipeline::{self, ReportFormat, RunConfig};
use reqsat::service;

/// Contradiction analyzer for structured requirements.
#[derive(Parser)]
#[command(name = "reqsat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a requirements corpus against a data dictionary.
    Analyze(AnalyzeArgs),
    /// Run the HTTP analysis service.
    Serve {
        /// Port to listen on.
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Data dictionary CSV (`Data,Range` header, `name,v1|v2|...` rows).
    #[arg(long)]
    dict: PathBuf,

    /// Requirement files (`.req`); several files form one corpus.
    #[arg(long, num_args = 1.., required = true)]
    reqs: Vec<PathBuf>,

    /// Output directory for report files.
    #[arg(long)]
    out: PathBuf,

    /// Which reports to write.
    #[arg(long, value_enum, default_value_t = ReportFormat::Both)]
    format: ReportFormat,

    /// Hypothetical-syllogism chaining depth; 0 disables the rule.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(0..=8))]
    syllogism_depth: u32,

    /// Add at-most-one constraints per enum data item.
    #[arg(long)]
    domain_axioms: bool,

    /// Downgrade dictionary violations to warnings and keep going.
    #[arg(long)]
    lenient: bool,

    /// Exit 0 even when contradictions are found.
    #[arg(long)]
    no_fail_on_contradiction: bool,

    /// Pin the report timestamp (ISO 8601) for reproducible output.
    #[arg(long)]
    timestamp: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze(args) => pipeline::run(&RunConfig {
            dict_path: args.dict,
            req_paths: args.reqs,
            output_dir: args.out,
            format: args.format,
            syllogism_depth: args.syllogism_depth,
            domain_axioms: args.domain_axioms,
            lenient: args.lenient,
            fail_on_contradiction: !args.no_fail_on_contradiction,
            timestamp: args.timestamp,
        }),
        Command::Serve { port } => {
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(rt) => rt,
                Err(e) => {
                    eprintln!("error: cannot start runtime: {e}");
                    return ExitCode::from(pipeline::EXIT_ERROR as u8);
                }
            };
            match runtime.block_on(service::serve(port)) {
                Ok(()) => pipeline::EXIT_OK,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    pipeline::EXIT_ERROR
                }
            }
        }
    };
    ExitCode::from(code as u8)
}
