//! `weaklp`: norms, embeddings and verification suites from the command line.
//!
//! Exit status is 0 on success, 1 when a verification run fails and 2 for
//! any usage or input error.

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use weaklp::embeddings::{build_layout, p_project, r_embed, t_embed, w_project, BlockLayout};
use weaklp::{make_params, norms_of, DyadicStep, Params};
use weaklp_harness::{chain_report, run_suite, ChainConfig, SizeCaps, TrialConfig};

use input::Input;
use output::{Document, Format, LaidOut};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or a malformed input document.
    Input(String),
    /// A verification run completed and found a violation.
    Failed,
}

impl From<weaklp::Error> for CliError {
    fn from(e: weaklp::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<weaklp_harness::HarnessError> for CliError {
    fn from(e: weaklp_harness::HarnessError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "weaklp", version, about = "Weak L^p norms, dyadic embeddings and their verification")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    #[command(flatten)]
    emit: EmitArgs,
}

#[derive(Debug, Args)]
struct EmitArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Exponent {
    /// Exponent p > 1; the conjugate q is derived from it.
    #[arg(long, allow_hyphen_values = true)]
    p: f64,
}

impl Exponent {
    fn params(&self) -> Result<Params, CliError> {
        make_params(self.p).map_err(|e| CliError::Input(format!("--p: {e}")))
    }
}

#[derive(Debug, Args)]
struct Source {
    /// Input file, or inline JSON starting with `{`; standard input if omitted.
    input: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Weak norm, quasi-norm and L^{q,1} norm of an atomic vector or step.
    Norm {
        #[command(flatten)]
        exp: Exponent,
        #[command(flatten)]
        src: Source,
    },
    /// Level-stack image of a dyadic step.
    #[command(name = "embed-tk")]
    EmbedTk {
        #[command(flatten)]
        exp: Exponent,
        /// Interval length; reinterprets an atomic vector as a step.
        #[arg(long)]
        k: Option<usize>,
        /// Dyadic level; reinterprets an atomic vector as a step.
        #[arg(long = "N")]
        top_level: Option<usize>,
        #[command(flatten)]
        src: Source,
    },
    /// Projection of a level stack onto the consistent stacks.
    #[command(name = "project-pk")]
    ProjectPk {
        #[command(flatten)]
        exp: Exponent,
        #[command(flatten)]
        src: Source,
    },
    /// Block embedding of a single-interval level stack into a sequence.
    #[command(name = "embed-r")]
    EmbedR {
        #[command(flatten)]
        exp: Exponent,
        /// Expected top level of the input stack.
        #[arg(long = "N")]
        top_level: Option<usize>,
        #[command(flatten)]
        src: Source,
    },
    /// Block-averaging projection of a sequence.
    #[command(name = "project-w")]
    ProjectW {
        /// Top level of the block layout when the input carries none.
        #[arg(long = "N")]
        top_level: Option<usize>,
        #[command(flatten)]
        src: Source,
    },
    /// Run a seeded verification suite; exits 1 if any trial fails.
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        exp: Exponent,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest interval length of generated inputs.
        #[arg(long)]
        k: Option<usize>,
        /// Largest dyadic level of generated inputs.
        #[arg(long = "N")]
        top_level: Option<usize>,
    },
    /// Measure every embedding constant across truncation sizes; exits 1
    /// if a constant exceeds its bound or grows with the size.
    Chain {
        #[command(flatten)]
        exp: Exponent,
        /// Comma-separated top levels, e.g. `2,4,6,8`.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Random samples per link and size.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load(src: &Source) -> Result<Input, CliError> {
    input::parse(&input::read_source(src.input.as_deref())?)
}

fn wrong_kind(verb: &str, expected: &str, found: &Input) -> CliError {
    CliError::Input(format!("{verb} expects {expected}, found a {}", found.kind()))
}

fn step_for_embedding(input: Input, k: Option<usize>, top_level: Option<usize>) -> Result<DyadicStep, CliError> {
    match input {
        Input::Step(step) => {
            if let Some(k) = k.filter(|&k| k != step.k()) {
                return Err(CliError::Input(format!("--k {k} disagrees with field `k` = {}", step.k())));
            }
            if let Some(n) = top_level.filter(|&n| n != step.level()) {
                return Err(CliError::Input(format!("--N {n} disagrees with field `level` = {}", step.level())));
            }
            Ok(step)
        }
        Input::Atoms(atoms, _) => match (k, top_level) {
            (Some(k), Some(n)) => Ok(DyadicStep::new(k, n, atoms.atoms)?),
            _ => Err(CliError::Input("an atomic vector needs --k and --N to be read as a step".into())),
        },
        other => Err(wrong_kind("embed-tk", "a dyadic step", &other)),
    }
}

fn layout_for(given: Option<BlockLayout>, top_level: Option<usize>) -> Result<BlockLayout, CliError> {
    match (given, top_level) {
        (Some(layout), Some(n)) if layout.top_level() != n => Err(CliError::Input(format!(
            "--N {n} disagrees with field `layout.N` = {}",
            layout.top_level()
        ))),
        (Some(layout), _) => Ok(layout),
        (None, Some(n)) => Ok(build_layout(n)?),
        (None, None) => Err(CliError::Input("project-w needs a `layout` field or --N".into())),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let emit = |doc: &Document| output::emit(doc, cli.emit.format, cli.emit.out.as_deref());
    match cli.verb {
        Verb::Norm { ref exp, ref src } => {
            let params = exp.params()?;
            let norms = match load(src)? {
                Input::Atoms(a, _) => norms_of(&a, params),
                Input::Step(s) => norms_of(&s, params),
                other => return Err(wrong_kind("norm", "an atomic vector or a dyadic step", &other)),
            };
            emit(&Document::Norms(norms))
        }
        Verb::EmbedTk { ref exp, k, top_level, ref src } => {
            let params = exp.params()?;
            let step = step_for_embedding(load(src)?, k, top_level)?;
            emit(&Document::Stack(&t_embed(&step, params)))
        }
        Verb::ProjectPk { ref exp, ref src } => {
            let params = exp.params()?;
            match load(src)? {
                Input::Stack(x) => emit(&Document::Stack(&p_project(&x, params))),
                other => Err(wrong_kind("project-pk", "a level stack", &other)),
            }
        }
        Verb::EmbedR { ref exp, top_level, ref src } => {
            let params = exp.params()?;
            let x = match load(src)? {
                Input::Stack(x) => x,
                other => return Err(wrong_kind("embed-r", "a level stack", &other)),
            };
            if let Some(n) = top_level.filter(|&n| n != x.top_level()) {
                return Err(CliError::Input(format!("--N {n} disagrees with field `N` = {}", x.top_level())));
            }
            let layout = build_layout(x.top_level())?;
            let rx = r_embed(&x, &layout, params)?;
            emit(&Document::LaidOut(LaidOut { atoms: &rx.atoms, layout: &layout }))
        }
        Verb::ProjectW { top_level, ref src } => {
            let (a, given) = match load(src)? {
                Input::Atoms(a, layout) => (a, layout),
                other => return Err(wrong_kind("project-w", "an atomic vector", &other)),
            };
            let layout = layout_for(given, top_level)?;
            let w = w_project(&a, &layout)?;
            emit(&Document::LaidOut(LaidOut { atoms: &w.atoms, layout: &layout }))
        }
        Verb::Verify { ref suite, ref exp, trials, seed, k, top_level } => {
            exp.params()?;
            let defaults = SizeCaps::default();
            let caps = SizeCaps {
                max_k: k.unwrap_or(defaults.max_k),
                max_level: top_level.unwrap_or(defaults.max_level),
                ..defaults
            };
            let config = TrialConfig { suite: suite.clone(), p_values: vec![exp.p], trials, seed, caps };
            let report = run_suite(&config)?;
            emit(&Document::Suite(&report))?;
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Failed)
            }
        }
        Verb::Chain { ref exp, ref sizes, trials, seed } => {
            exp.params()?;
            let mut config = ChainConfig::new(exp.p, sizes.clone());
            config.seed = seed;
            if let Some(t) = trials {
                config.trials = t;
            }
            let report = chain_report(&config)?;
            emit(&Document::Chain(&report))?;
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Failed)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(CliError::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
