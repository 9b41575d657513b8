use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use treecomp::examples::{builtin_spec, write_specs};
use treecomp::operator::Assumption;
use treecomp::oracle::CampaignConfig;
use treecomp::report::{
    self, parse_assumption, parse_cutoffs, Format, OracleConfig, Report, RunConfig, SpecOrigin,
    BUDGET_ENV,
};
use treecomp::tree::DEFAULT_VERTEX_BUDGET;
use treecomp::Error;

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_SPEC: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "treecomp",
    version,
    about = "Composition operators on weighted sup-norm spaces of trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the composition operator described by a spec.
    Analyze(AnalyzeArgs),
    /// Compare the closed-form norm with brute force on random finite instances.
    Oracle(OracleArgs),
    /// Reproduce the built-in examples and check their expected outcomes.
    Examples(ExamplesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave the timing field out of the report.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Spec file.
    #[arg(long, group = "source", required_unless_present_any = ["inline", "builtin"])]
    spec: Option<PathBuf>,
    /// Spec text given directly.
    #[arg(long, group = "source")]
    inline: Option<String>,
    /// Name of a built-in spec.
    #[arg(long, group = "source")]
    builtin: Option<String>,
    #[arg(long, default_value_t = report::DEFAULT_DEPTH)]
    depth: usize,
    #[arg(long, default_value_t = report::DEFAULT_PREIMAGE_DEPTH)]
    preimage_depth: usize,
    /// Comma-separated essential-tail cutoffs.
    #[arg(long, value_parser = parse_cutoffs)]
    cutoffs: Option<Vec<usize>>,
    #[arg(long, default_value_t = report::DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Window ratio at which boundedness is reported as failing.
    #[arg(long, default_value_t = report::DEFAULT_THRESHOLD)]
    threshold: f64,
    /// pinch=m,M | finite-range | sigma=s (repeatable).
    #[arg(long = "assume", value_parser = parse_assumption)]
    assumptions: Vec<Assumption>,
    #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_VERTEX_BUDGET)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 4)]
    max_depth: usize,
    #[arg(long, default_value_t = 3)]
    max_branching: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Include the weight and map tables of the first instance.
    #[arg(long)]
    echo: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ExamplesArgs {
    /// unbounded-3, compact-parity-4, parent-5, doubling-final or all.
    #[arg(long, default_value = "all")]
    which: String,
    /// Also write the built-in specs into this directory.
    #[arg(long)]
    write_specs: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn error_exit(e: &Error) -> ExitCode {
    fail(
        if e.is_budget() {
            EXIT_BUDGET
        } else {
            EXIT_SPEC
        },
        e,
    )
}

fn emit(report: Report, output: &Output, started: Instant) -> ExitCode {
    let report = if output.no_timing {
        report
    } else {
        report.with_timing(started.elapsed())
    };
    let text = report.render(output.format.into());
    match &output.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                return fail(EXIT_SPEC, format!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{text}"),
    }
    if report.succeeded() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED_CHECK)
    }
}

fn analyze(args: AnalyzeArgs, started: Instant) -> ExitCode {
    let (origin, text) = if let Some(path) = &args.spec {
        match fs::read_to_string(path) {
            Ok(t) => (SpecOrigin::File(path.display().to_string()), t),
            Err(e) => return fail(EXIT_SPEC, format!("cannot read {}: {e}", path.display())),
        }
    } else if let Some(t) = args.inline {
        (SpecOrigin::Inline, t)
    } else {
        let name = args.builtin.expect("clap requires a source");
        match builtin_spec(&name) {
            Some(s) => (SpecOrigin::Builtin(name), s.text.to_string()),
            None => return fail(EXIT_SPEC, format!("unknown built-in spec {name:?}")),
        }
    };
    let mut config = RunConfig::new(origin, text);
    config.depth = args.depth;
    config.preimage_depth = args.preimage_depth;
    if let Some(c) = args.cutoffs {
        config.cutoffs = c;
    }
    config.tolerance = args.tolerance;
    config.threshold = args.threshold;
    config.budget = args.budget;
    config.seed = args.seed;
    config.format = args.output.format.into();
    config.assumptions = args.assumptions;
    match report::analyze(&config) {
        Ok(r) => emit(r, &args.output, started),
        Err(e) => error_exit(&e),
    }
}

fn oracle(args: OracleArgs, started: Instant) -> ExitCode {
    let config = OracleConfig {
        campaign: CampaignConfig {
            instances: args.instances,
            max_depth: args.max_depth,
            max_branching: args.max_branching,
            seed: args.seed,
            samples: args.samples,
            tolerance: args.tolerance,
        },
        echo: args.echo,
    };
    match report::oracle(&config) {
        Ok(r) => emit(r, &args.output, started),
        Err(e) => error_exit(&e),
    }
}

fn examples(args: ExamplesArgs, started: Instant) -> ExitCode {
    if let Some(dir) = &args.write_specs {
        match write_specs(dir) {
            Ok(paths) => {
                for p in paths {
                    eprintln!("wrote {}", p.display());
                }
            }
            Err(e) => {
                return fail(
                    EXIT_SPEC,
                    format!("cannot write specs to {}: {e}", dir.display()),
                )
            }
        }
    }
    match report::examples(&args.which) {
        Ok(r) => emit(r, &args.output, started),
        Err(e) => error_exit(&e),
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    match Cli::parse().command {
        Cmd::Analyze(a) => analyze(a, started),
        Cmd::Oracle(a) => oracle(a, started),
        Cmd::Examples(a) => examples(a, started),
    }
}
