//! `fmkit` command-line front end.
//!
//! Exit codes: 0 success, 1 negative verdict (structural violations,
//! invalid configuration, void model), 2 input error, 3 count refused by
//! the decision-point bound.

mod render;

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use fmkit::compare::{compare_models, NameMap};
use fmkit::corpus::{corpus_ids, corpus_model, corpus_source, CORPUS};
use fmkit::model::{FeatureModel, StructureReport, StructureViolation};
use fmkit::ontology::{emit_dot, emit_fmx, to_ontology};
use fmkit::semantics::{
    analyze_with_bound, count_configurations_with_bound, validate_configuration, AnalysisError,
    Configuration, DEFAULT_COUNT_BOUND,
};
use fmkit::{parse_model, serialize_model};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_TOO_LARGE: i32 = 3;

/// Environment variable overriding the decision-point bound.
pub const COUNT_BOUND_VAR: &str = "FMKIT_COUNT_BOUND";

#[derive(Parser, Debug)]
#[command(name = "fmkit", version, about = "Feature model toolkit")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ModelArg {
    /// Model file, or `-` for standard input.
    #[arg(
        value_name = "MODEL",
        required_unless_present = "corpus",
        conflicts_with = "corpus"
    )]
    path: Option<String>,
    /// Built-in corpus model instead of a file.
    #[arg(long, value_name = "ID")]
    corpus: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural validation.
    Check(ModelArg),
    /// Model statistics.
    Stats(ModelArg),
    /// Configuration commands.
    #[command(subcommand)]
    Config(ConfigCommand),
    /// Exact number of valid configurations.
    Count(ModelArg),
    /// Core, dead and false-optional features.
    Analyze(ModelArg),
    /// Commonality between two models.
    Compare {
        /// Model files (`-` for standard input); mix freely with --corpus.
        #[arg(value_name = "MODEL", num_args = 0..=2)]
        paths: Vec<String>,
        #[arg(long, value_name = "ID")]
        corpus: Vec<String>,
        /// NameMap file with `PATH_A = PATH_B` lines.
        #[arg(long, value_name = "FILE")]
        map: Option<PathBuf>,
    },
    /// Ontology export.
    Export {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, value_enum)]
        format: Format,
        /// Output file; standard output when absent.
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Built-in models.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Subcommand, Debug)]
enum ConfigCommand {
    /// Check one configuration.
    Validate {
        #[command(flatten)]
        model: ModelArg,
        /// Selected feature paths.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        select: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusCommand {
    List,
    Print { id: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Fmx,
    Dot,
}

enum Failure {
    Input(String),
    TooLarge(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::TooLarge(_) => EXIT_TOO_LARGE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::TooLarge(m) => m,
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::CountTooLarge { .. } => Failure::TooLarge(e.to_string()),
            AnalysisError::UnknownPath(_) => Failure::Input(e.to_string()),
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: Vec<u8>,
    json: bool,
    bound: Option<&'a str>,
}

/// Runs one invocation. `args` includes the program name.
pub fn run(
    args: &[String],
    count_bound: Option<&str>,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return EXIT_INPUT;
        }
    };
    let mut io = Io {
        stdin,
        out: Vec::new(),
        json: cli.json,
        bound: count_bound,
    };
    let result = dispatch(cli.command, &matches, &mut io);
    let _ = stdout.write_all(&io.out);
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(command: Command, matches: &ArgMatches, io: &mut Io) -> Result<i32, Failure> {
    match command {
        Command::Check(m) => check(&m, io),
        Command::Stats(m) => {
            let model = load(&m, io)?;
            render::stats(io, &model);
            Ok(EXIT_OK)
        }
        Command::Config(ConfigCommand::Validate { model, select }) => {
            let m = load(&model, io)?;
            let config: Configuration = select
                .iter()
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .collect();
            let report = validate_configuration(&m, &config)?;
            render::validity(io, &m, &config, &report);
            Ok(if report.valid() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Count(m) => {
            let model = load(&m, io)?;
            let count = count_configurations_with_bound(&model, bound(io)?)?;
            render::count(io, &model, &count);
            Ok(if count == 0u32.into() {
                EXIT_NEGATIVE
            } else {
                EXIT_OK
            })
        }
        Command::Analyze(m) => {
            let model = load(&m, io)?;
            let report = analyze_with_bound(&model, bound(io)?)?;
            render::analysis(io, &model, &report);
            Ok(if report.is_void() {
                EXIT_NEGATIVE
            } else {
                EXIT_OK
            })
        }
        Command::Compare { paths, corpus, map } => {
            let sub = matches
                .subcommand_matches("compare")
                .expect("compare matches");
            let (a, b) = compare_inputs(sub, paths, corpus, io)?;
            let map = match map {
                Some(file) => {
                    let text = fs::read_to_string(&file).map_err(|e| {
                        Failure::Input(format!("cannot read {}: {e}", file.display()))
                    })?;
                    Some(
                        NameMap::parse(&text)
                            .map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?,
                    )
                }
                None => None,
            };
            let report = compare_models(&a, &b, map.as_ref())
                .map_err(|e| Failure::Input(format!("name map: {e}")))?;
            render::comparison(io, &report);
            Ok(EXIT_OK)
        }
        Command::Export {
            model,
            format,
            output,
        } => {
            let m = load(&model, io)?;
            let onto = to_ontology(&m);
            let text = match format {
                Format::Fmx => emit_fmx(&onto),
                Format::Dot => emit_dot(&onto),
            };
            match output {
                None => io.out.extend_from_slice(text.as_bytes()),
                Some(path) => {
                    fs::write(&path, &text).map_err(|e| {
                        Failure::Input(format!("cannot write {}: {e}", path.display()))
                    })?;
                    let format = match format {
                        Format::Fmx => "fmx",
                        Format::Dot => "dot",
                    };
                    render::export(io, &onto, format, &path);
                }
            }
            Ok(EXIT_OK)
        }
        Command::Corpus(CorpusCommand::List) => {
            let entries: Vec<_> = CORPUS
                .iter()
                .map(|e| (e.id, corpus_model(e.id).expect("corpus id")))
                .collect();
            render::corpus_list(io, &entries);
            Ok(EXIT_OK)
        }
        Command::Corpus(CorpusCommand::Print { id }) => {
            corpus_source(&id).ok_or_else(|| unknown_corpus(&id))?;
            let m = corpus_model(&id).expect("corpus id");
            io.out.extend_from_slice(serialize_model(&m).as_bytes());
            Ok(EXIT_OK)
        }
    }
}

fn check(arg: &ModelArg, io: &mut Io) -> Result<i32, Failure> {
    let (label, text) = read_source(arg, io)?;
    let (name, report) = match parse_model(&text) {
        Ok(m) => (Some(m.name().to_string()), m.validate_structure()),
        Err(e) => {
            let violation = e.cause.as_ref().and_then(|cause| {
                Some(StructureViolation {
                    code: cause.violation_code()?,
                    path: cause.subject()?,
                    message: format!("{}:{}: {cause}", e.line, e.column),
                })
            });
            match violation {
                Some(v) => (
                    None,
                    StructureReport {
                        violations: vec![v],
                    },
                ),
                None => return Err(Failure::Input(format!("{label}:{e}"))),
            }
        }
    };
    render::structure(io, name.as_deref(), &report);
    Ok(if report.ok() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn bound(io: &Io) -> Result<usize, Failure> {
    match io.bound {
        None => Ok(DEFAULT_COUNT_BOUND),
        Some(raw) => raw.trim().parse().map_err(|_| {
            Failure::Input(format!(
                "{COUNT_BOUND_VAR} must be a non-negative integer, got `{raw}`"
            ))
        }),
    }
}

fn unknown_corpus(id: &str) -> Failure {
    let known: Vec<_> = corpus_ids().collect();
    Failure::Input(format!(
        "unknown corpus id `{id}` (known: {})",
        known.join(", ")
    ))
}

fn read_source(arg: &ModelArg, io: &mut Io) -> Result<(String, String), Failure> {
    match (&arg.path, &arg.corpus) {
        (_, Some(id)) => Ok((
            format!("corpus:{id}"),
            corpus_source(id)
                .ok_or_else(|| unknown_corpus(id))?
                .to_string(),
        )),
        (Some(p), None) => read_path(p, io).map(|t| (p.clone(), t)),
        (None, None) => Err(Failure::Input("no model given".into())),
    }
}

fn read_path(path: &str, io: &mut Io) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        io.stdin
            .read_to_string(&mut text)
            .map_err(|e| Failure::Input(format!("cannot read standard input: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {path}: {e}")))
    }
}

fn parse_labeled(label: &str, text: &str) -> Result<FeatureModel, Failure> {
    parse_model(text).map_err(|e| Failure::Input(format!("{label}:{e}")))
}

fn load(arg: &ModelArg, io: &mut Io) -> Result<FeatureModel, Failure> {
    let (label, text) = read_source(arg, io)?;
    parse_labeled(&label, &text)
}

/// Both compare slots, in command-line order.
fn compare_inputs(
    sub: &ArgMatches,
    paths: Vec<String>,
    corpus: Vec<String>,
    io: &mut Io,
) -> Result<(FeatureModel, FeatureModel), Failure> {
    let idx = |name: &str| -> Vec<usize> {
        sub.indices_of(name)
            .map(|i| i.collect())
            .unwrap_or_default()
    };
    let mut slots: Vec<(usize, bool, String)> = idx("paths")
        .into_iter()
        .zip(paths)
        .map(|(i, p)| (i, false, p))
        .chain(
            idx("corpus")
                .into_iter()
                .zip(corpus)
                .map(|(i, c)| (i, true, c)),
        )
        .collect();
    if slots.len() != 2 {
        return Err(Failure::Input(format!(
            "compare needs exactly two models, got {}",
            slots.len()
        )));
    }
    slots.sort_by_key(|s| s.0);
    if slots.iter().filter(|s| !s.1 && s.2 == "-").count() > 1 {
        return Err(Failure::Input(
            "standard input can feed only one model".into(),
        ));
    }
    let mut models = Vec::with_capacity(2);
    for (_, is_corpus, v) in slots {
        let arg = ModelArg {
            path: (!is_corpus).then(|| v.clone()),
            corpus: is_corpus.then_some(v),
        };
        models.push(load(&arg, io)?);
    }
    let b = models.pop().expect("two models");
    let a = models.pop().expect("two models");
    Ok((a, b))
}
