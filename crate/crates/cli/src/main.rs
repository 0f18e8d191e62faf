//! Command-line interface: capture debugging, rule learning, rule
//! application, and corpus evaluation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use timenorm_core::capture::{capture, CaptureTask};
use timenorm_core::corpus::{evaluate, ingest_timeml, ingest_tsv, AnnotatedExpression};
use timenorm_core::lexicon::Lexicon;
use timenorm_core::normalize::{normalize, Normalization, Via};
use timenorm_core::rule::{learn, RuleStore};
use timenorm_core::{parse_timex_value, serialize_timex_value};

#[derive(Parser)]
#[command(name = "timenorm", version, about = "Learn and apply time-expression normalization rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CorpusFormat {
    Timeml,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct LexiconArgs {
    /// Lexicon override file: TYPE<TAB>canonical<TAB>variant1|variant2|...
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Stop-word list, one per line (replaces the built-in list).
    #[arg(long)]
    stopwords: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Search for operation sequences from a base value to a target value.
    Capture {
        #[arg(long)]
        base: String,
        #[arg(long)]
        target: String,
        /// Comma-separated integers usable as operation parameters.
        #[arg(long, default_value = "")]
        pool: String,
    },
    /// Learn a rule file from annotated corpora.
    Learn {
        #[arg(long, required = true, num_args = 1..)]
        corpus: Vec<PathBuf>,
        #[arg(long, value_enum)]
        format: CorpusFormat,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        lexicon: LexiconArgs,
    },
    /// Apply learned rules to one expression or a batch file.
    Apply {
        #[arg(long)]
        rules: PathBuf,
        /// Document creation time for --expr mode.
        #[arg(long)]
        dct: Option<String>,
        #[arg(long, conflicts_with = "batch")]
        expr: Option<String>,
        /// TSV file of `expression<TAB>dct` lines.
        #[arg(long)]
        batch: Option<PathBuf>,
        #[command(flatten)]
        lexicon: LexiconArgs,
    },
    /// Evaluate a rule file against gold annotations.
    Eval {
        #[arg(long)]
        rules: PathBuf,
        #[arg(long, required = true, num_args = 1..)]
        corpus: Vec<PathBuf>,
        #[arg(long, value_enum)]
        format: CorpusFormat,
        #[arg(long, value_enum, default_value = "text")]
        report: ReportFormat,
        #[command(flatten)]
        lexicon: LexiconArgs,
    },
}

const EXIT_USAGE: u8 = 1;
const EXIT_CORPUS: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Corpus(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CORPUS)
        }
    }
}

enum CliError {
    Usage(String),
    Corpus(String),
}

type CliResult = Result<(), CliError>;

fn usage(msg: impl ToString) -> CliError {
    CliError::Usage(msg.to_string())
}

fn corpus_err(msg: impl ToString) -> CliError {
    CliError::Corpus(msg.to_string())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Capture { base, target, pool } => cmd_capture(&base, &target, &pool),
        Command::Learn { corpus, format, out, lexicon } => {
            let lex = build_lexicon(&lexicon)?;
            let exprs = read_corpora(&corpus, format)?;
            let store = learn(&exprs, &lex).map_err(usage)?;
            std::fs::write(&out, store.to_text())
                .map_err(|e| usage(format!("cannot write {}: {e}", out.display())))?;
            eprintln!("learned {} rules from {} expressions", store.rules().len(), exprs.len());
            Ok(())
        }
        Command::Apply { rules, dct, expr, batch, lexicon } => {
            let lex = build_lexicon(&lexicon)?;
            let store = read_rules(&rules)?;
            match (expr, batch) {
                (Some(expr), None) => {
                    let dct = dct.ok_or_else(|| usage("--expr requires --dct"))?;
                    let dct = parse_timex_value(&dct)
                        .map_err(|e| usage(format!("bad --dct: {e}")))?;
                    println!("{}", apply_line(&expr, &dct, &store, &lex));
                    Ok(())
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| corpus_err(format!("{}: {e}", path.display())))?;
                    for (lineno, line) in text.lines().enumerate() {
                        if line.trim().is_empty() || line.starts_with('#') {
                            continue;
                        }
                        let Some((expr, dct)) = line.split_once('\t') else {
                            return Err(corpus_err(format!(
                                "{}: line {} is not `expr<TAB>dct`",
                                path.display(),
                                lineno + 1
                            )));
                        };
                        match parse_timex_value(dct.trim()) {
                            Ok(dct) => println!("{}", apply_line(expr, &dct, &store, &lex)),
                            Err(_) => println!("{expr}\tFAILED\tbad dct"),
                        }
                    }
                    Ok(())
                }
                _ => Err(usage("apply needs exactly one of --expr or --batch")),
            }
        }
        Command::Eval { rules, corpus, format, report, lexicon } => {
            let lex = build_lexicon(&lexicon)?;
            let store = read_rules(&rules)?;
            let exprs = read_corpora(&corpus, format)?;
            let rep = evaluate(&store, &exprs, &lex);
            match report {
                ReportFormat::Json => {
                    println!("{}", serde_json::to_string_pretty(&rep).expect("report is serializable"))
                }
                ReportFormat::Text => {
                    println!("total:          {}", rep.total);
                    println!("skipped:        {}", rep.skipped);
                    println!("type accuracy:  {:.4}", rep.type_accuracy);
                    println!("value accuracy: {:.4}", rep.value_accuracy);
                    println!(
                        "errors: unseen_pattern={} bad_rule={} exec_error={} other={}",
                        rep.errors.unseen_pattern,
                        rep.errors.bad_rule,
                        rep.errors.exec_error,
                        rep.errors.other
                    );
                }
            }
            Ok(())
        }
    }
}

fn cmd_capture(base: &str, target: &str, pool: &str) -> CliResult {
    let parse = |s: &str, what: &str| {
        parse_timex_value(s).map_err(|e| usage(format!("bad --{what} value {s:?}: {e}")))
    };
    let numeric_pool = pool
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|_| usage(format!("bad pool entry {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let task = CaptureTask {
        base: parse(base, "base")?,
        target: parse(target, "target")?,
        numeric_pool,
    };
    let result = capture(&task).map_err(usage)?;
    let mut lines: Vec<String> =
        result.sequences.iter().map(|(s, _)| s.to_string()).collect();
    lines.sort();
    for line in lines {
        println!("{line}");
    }
    if result.truncated {
        eprintln!("warning: search budget exhausted; sequence list is partial");
    }
    Ok(())
}

fn apply_line(expr: &str, dct: &timenorm_core::TemporalValue, store: &RuleStore, lex: &Lexicon) -> String {
    let tokens = lex.tokenize(expr);
    match normalize(&tokens, dct, store, lex) {
        Ok(Normalization { timex_type, value, via, .. }) => {
            let via = match via {
                Via::Direct => "direct",
                Via::Segmented => "segmented",
            };
            format!("{}\t{}\tvia={via}", timex_type.name(), serialize_timex_value(&value))
        }
        Err(e) => format!("{expr}\tFAILED\t{e}"),
    }
}

fn build_lexicon(args: &LexiconArgs) -> Result<Lexicon, CliError> {
    let mut lex = Lexicon::default();
    if let Some(path) = &args.lexicon {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
        lex.load_overrides(&text).map_err(usage)?;
    }
    if let Some(path) = &args.stopwords {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
        lex.load_stop_words(&text);
    }
    Ok(lex)
}

fn read_rules(path: &Path) -> Result<RuleStore, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    RuleStore::parse(&text).map_err(usage)
}

/// Collect corpus files from the given paths (directories are walked
/// recursively), in sorted order for determinism.
fn corpus_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for path in paths {
        collect_files(path, &mut files)?;
    }
    files.sort();
    Ok(files)
}

fn collect_files(path: &Path, out: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let meta = std::fs::metadata(path)
        .map_err(|e| corpus_err(format!("{}: {e}", path.display())))?;
    if meta.is_dir() {
        let entries = std::fs::read_dir(path)
            .map_err(|e| corpus_err(format!("{}: {e}", path.display())))?;
        for entry in entries {
            let entry = entry.map_err(|e| corpus_err(format!("{}: {e}", path.display())))?;
            collect_files(&entry.path(), out)?;
        }
    } else {
        out.push(path.to_path_buf());
    }
    Ok(())
}

fn read_corpora(
    paths: &[PathBuf],
    format: CorpusFormat,
) -> Result<Vec<AnnotatedExpression>, CliError> {
    let mut exprs = Vec::new();
    for file in corpus_files(paths)? {
        let text = std::fs::read_to_string(&file)
            .map_err(|e| corpus_err(format!("{}: {e}", file.display())))?;
        let doc_id = file.display().to_string();
        let parsed = match format {
            CorpusFormat::Timeml => ingest_timeml(&text, &doc_id),
            CorpusFormat::Tsv => ingest_tsv(&text, &doc_id),
        };
        match parsed {
            Ok(mut e) => exprs.append(&mut e),
            Err(e) => eprintln!("warning: skipping {doc_id}: {e}"),
        }
    }
    if exprs.is_empty() {
        return Err(corpus_err("no usable expressions in the given corpora"));
    }
    Ok(exprs)
}
