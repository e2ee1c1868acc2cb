//! `symdyn`: substitutive subshifts, their quasi-fixed points and the automata behind them.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use commands::{Export, FactorOptions};
use report::{render_failure_json, render_failure_text, CmdResult};

#[derive(Parser)]
#[command(name = "symdyn", version, about = "Substitutive subshifts, quasi-fixed points and their automata")]
struct Cli {
    /// Print a JSON report (schema 1) instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Leave out the timing line, so reports are byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural summary: growth, primitivity, letters and pairs of the subshift, prolongability.
    Analyze {
        file: PathBuf,
        /// Accept substitutions with bounded letters.
        #[arg(long)]
        allow_nongrowing: bool,
    },
    /// Words of the subshift up to a length.
    Language {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        /// Also report whether this word is in the language.
        #[arg(long)]
        contains: Option<String>,
    },
    /// Quasi-fixed points `T^c(φ^m(z)) = z`.
    Qfp {
        #[command(subcommand)]
        command: QfpCommand,
    },
    /// Desubstitute a window (and look for a quasi-fixed point), or read a point's digits.
    #[command(group(ArgGroup::new("input").required(true).args(["window", "seed"])))]
    Desub {
        file: PathBuf,
        /// Window as `pos=<lo> <letters>`.
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        seed: Option<String>,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Kernel automaton of a quasi-fixed point.
    Kernel {
        file: PathBuf,
        #[arg(long)]
        seed: String,
        /// Compose the output with the coding block of the file.
        #[arg(long)]
        coding: bool,
        #[arg(long)]
        export: Option<ExportFormat>,
        /// Radius of the evaluated window shown in the report.
        #[arg(long, default_value_t = 8)]
        eval_radius: i64,
    },
    /// k-adic rationals: the address of a relation, or the digits of p/q.
    #[command(group(ArgGroup::new("mode").required(true).args(["relation", "expand"])))]
    Kadic {
        /// `c m k`: the address c/(1 - k^m).
        #[arg(long, num_args = 3, value_names = ["C", "M", "K"], allow_negative_numbers = true)]
        relation: Option<Vec<i64>>,
        /// `p/q k`: the digits of p/q in base k.
        #[arg(long, num_args = 2, value_names = ["P/Q", "K"], allow_hyphen_values = true)]
        expand: Option<Vec<String>>,
    },
    /// r-block substitution, optionally checking the block laws.
    Block {
        file: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
    },
    /// Factor maps given by a sliding block code (or the file's coding).
    #[command(group(ArgGroup::new("mode").required(true).args(["push", "fiber"])))]
    Factor {
        file: PathBuf,
        /// Sliding block code file; defaults to the coding block of the substitution file.
        #[arg(long)]
        code: Option<PathBuf>,
        /// Push this quasi-fixed point through the code.
        #[arg(long)]
        push: Option<String>,
        /// Enumerate preimage windows of this target window (`pos=<lo> <letters>`).
        #[arg(long)]
        fiber: Option<String>,
        #[arg(long, default_value_t = 20)]
        radius: i64,
        #[arg(long, default_value_t = 10_000)]
        max_windows: usize,
        /// Number of preimage windows printed in text mode.
        #[arg(long, default_value_t = 20)]
        show: usize,
        /// With --push, run every preimage of the image window through point detection.
        #[arg(long)]
        certify: bool,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// One-sided points, desubstitution and W-interpretations.
    Onesided {
        #[command(subcommand)]
        command: OnesidedCommand,
    },
    /// Reproduce the worked examples.
    PaperExamples {
        /// Run a single example.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(symdyn::catalog::EXAMPLE_NAMES))]
        only: Option<String>,
    },
}

#[derive(Subcommand)]
enum QfpCommand {
    /// Enumerate seeds of a period.
    List {
        file: PathBuf,
        #[arg(long)]
        period: u32,
        /// Keep one point per equality class.
        #[arg(long)]
        dedup: bool,
        #[arg(long, default_value_t = 8)]
        radius: i64,
    },
    /// Materialize a point.
    Show {
        file: PathBuf,
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 20)]
        radius: i64,
    },
    /// Check the point's relation letterwise on [-radius, radius].
    Verify {
        file: PathBuf,
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 1000)]
        radius: i64,
    },
}

#[derive(Subcommand)]
enum OnesidedCommand {
    /// The suffix of a two-sided point from a start position.
    Show {
        file: PathBuf,
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        start: i64,
        #[arg(long, default_value_t = 40)]
        len: usize,
    },
    /// Extend a one-sided point known through a prefix to a two-sided quasi-fixed point.
    Prolong {
        file: PathBuf,
        #[arg(long)]
        period: u32,
        #[arg(long, allow_negative_numbers = true)]
        offset: i64,
        #[arg(long)]
        prefix: String,
    },
    /// All one-sided desubstitutions of a window (`start=<p> <letters>`).
    Desub {
        file: PathBuf,
        #[arg(long)]
        window: String,
    },
    /// Pairwise-disjoint W-interpretations, W the images of φ^power.
    Count {
        file: PathBuf,
        #[arg(long)]
        window: String,
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Text,
    Dot,
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Analyze { file, allow_nongrowing } => commands::analyze(&file, allow_nongrowing),
        Command::Language { file, max_len, contains } => commands::language(&file, max_len, contains.as_deref()),
        Command::Qfp { command } => match command {
            QfpCommand::List { file, period, dedup, radius } => commands::qfp_list(&file, period, dedup, radius),
            QfpCommand::Show { file, seed, radius } => commands::qfp_show(&file, &seed, radius),
            QfpCommand::Verify { file, seed, radius } => commands::qfp_verify(&file, &seed, radius),
        },
        Command::Desub { file, window, seed, depth } => commands::desub(&file, window.as_deref(), seed.as_deref(), depth),
        Command::Kernel { file, seed, coding, export, eval_radius } => {
            let export = export.map(|e| match e {
                ExportFormat::Text => Export::Text,
                ExportFormat::Dot => Export::Dot,
            });
            commands::kernel(&file, &seed, coding, export, eval_radius)
        }
        Command::Kadic { relation, expand } => match (relation, expand) {
            (Some(v), None) => {
                let to_u32 = |x: i64, what: &str| {
                    u32::try_from(x).map_err(|_| report::Failure::Validation(format!("{what} must be a nonnegative integer")))
                };
                commands::kadic_relation(v[0], to_u32(v[1], "m")?, to_u32(v[2], "k")?)
            }
            (None, Some(v)) => {
                let k = v[1].parse::<u32>().map_err(|_| report::Failure::Validation(format!("bad base `{}`", v[1])))?;
                commands::kadic_expand(&v[0], k)
            }
            _ => unreachable!("clap enforces exactly one mode"),
        },
        Command::Block { file, r, verify, samples, max_len } => commands::block(&file, r, verify, samples, max_len),
        Command::Factor { file, code, push, fiber, radius, max_windows, show, certify, depth } => {
            let opts = FactorOptions { radius, max_windows, show, certify, depth };
            match (push, fiber) {
                (Some(seed), None) => commands::factor_push(&file, code.as_deref(), &seed, &opts),
                (None, Some(w)) => commands::factor_fiber(&file, code.as_deref(), &w, &opts),
                _ => unreachable!("clap enforces exactly one mode"),
            }
        }
        Command::Onesided { command } => match command {
            OnesidedCommand::Show { file, seed, start, len } => commands::onesided_show(&file, &seed, start, len),
            OnesidedCommand::Prolong { file, period, offset, prefix } => {
                commands::onesided_prolong(&file, period, offset, &prefix)
            }
            OnesidedCommand::Desub { file, window } => commands::onesided_desub_cmd(&file, &window),
            OnesidedCommand::Count { file, window, power } => commands::onesided_count(&file, &window, power),
        },
        Command::PaperExamples { only } => commands::paper_examples(only.as_deref()),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors are validation failures (exit 1); exit 2 is reserved for invariant breaches.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).cloned().collect();
    let start = Instant::now();
    let outcome = run(cli.command);
    let timing = (!cli.no_timing).then(|| start.elapsed().as_secs_f64() * 1e3);
    // Write errors (e.g. a closed pipe) are ignored: the exit code still reflects the outcome.
    match outcome {
        Ok(report) => {
            let text = if cli.json { report.render_json(&echo, timing) + "\n" } else { report.render_text(timing) };
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(if report.failed() { 1 } else { 0 })
        }
        Err(failure) => {
            if cli.json {
                let _ = writeln!(std::io::stdout(), "{}", render_failure_json(&echo, &failure));
            } else {
                let _ = writeln!(std::io::stderr(), "{}", render_failure_text(&failure));
            }
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
