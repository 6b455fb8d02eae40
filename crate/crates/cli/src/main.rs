//! `transent`: command-line harness for the cross-lingual sentiment
//! experiments. Every subcommand reads one TOML config, accepts `--set
//! key=value` overrides and writes a JSON report whose bytes depend only on
//! the config and the input files.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use transent::fixtures::{self, FixtureParams};
use transent::pipelines::{self, ExperimentConfig, ExperimentReport, Outcome, PredictionRow};
use transent::{TranslationMatrix, VectorSpace};

#[derive(Parser)]
#[command(
    name = "transent",
    version,
    about = "Cross-lingual sentiment transfer experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long, short)]
    config: PathBuf,
    /// Override a config value, e.g. `--set binary.run_count=5`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Where to write the JSON report. Defaults to stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Eval {
    #[command(flatten)]
    common: Common,
    /// Also write per-item predictions as CSV.
    #[arg(long)]
    predictions: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the translation matrix on the whole alignment lexicon.
    FitAlign {
        #[command(flatten)]
        common: Common,
        /// Where to write the fitted matrix.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Print the k nearest target words of a mapped source word.
    Translate {
        #[arg(long, short)]
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Matrix file; defaults to `paths.translation_matrix`.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        token: String,
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
    /// Monte Carlo P@1 / P@5 of translation retrieval.
    EvalAlign(Eval),
    /// Polarity classifier transfer.
    EvalBinary(Eval),
    /// Valence / arousal / dominance regression transfer.
    EvalAnew(Eval),
    /// Write sentiment vectors of one review set as JSON lines.
    Featurize {
        #[arg(long, short)]
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Where to write the vectors (JSON lines).
        #[arg(long, short)]
        output: PathBuf,
        /// Where to write the JSON report. Defaults to stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Star-rating classifier transfer over review sentiment vectors.
    EvalReviews(Eval),
    /// Generate synthetic data with known ground truth plus a config for it.
    MakeFixtures(FixtureArgs),
}

#[derive(Args)]
struct FixtureArgs {
    /// Output directory.
    #[arg(long, short)]
    output: PathBuf,
    #[arg(long, default_value_t = FixtureParams::default().seed)]
    seed: u64,
    #[arg(long, default_value_t = FixtureParams::default().words)]
    words: usize,
    #[arg(long, default_value_t = FixtureParams::default().dim)]
    dim: usize,
    /// Std of the Gaussian noise on source vectors.
    #[arg(long, default_value_t = FixtureParams::default().noise)]
    noise: f64,
    #[arg(long, default_value_t = FixtureParams::default().anew_fraction)]
    anew_fraction: f64,
    #[arg(long, default_value_t = FixtureParams::default().target_reviews_per_star)]
    target_reviews_per_star: usize,
    #[arg(long, default_value_t = FixtureParams::default().source_reviews_per_star)]
    source_reviews_per_star: usize,
    #[arg(long, default_value_t = FixtureParams::default().review_length)]
    review_length: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let module = e
                .chain()
                .find_map(|c| c.downcast_ref::<transent::Error>())
                .map_or("cli", |c| c.module());
            // Core errors already embed their sources in the message.
            let mut message = String::new();
            for cause in e.chain().map(|c| c.to_string()) {
                if !message.contains(&cause) {
                    if !message.is_empty() {
                        message.push_str(": ");
                    }
                    message.push_str(&cause);
                }
            }
            eprintln!("error[{module}]: {message}");
            ExitCode::from(1)
        }
    }
}

fn load_config(path: &Path, overrides: &[String]) -> anyhow::Result<ExperimentConfig> {
    Ok(ExperimentConfig::load(path, overrides)?)
}

fn stamp(report: &mut ExperimentReport) {
    report.versions.insert(
        "transent-cli".to_string(),
        env!("CARGO_PKG_VERSION").to_string(),
    );
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn write_report(path: Option<&Path>, report: &mut ExperimentReport) -> anyhow::Result<()> {
    stamp(report);
    let mut text = report.to_json_pretty();
    text.push('\n');
    write_output(path, &text)
}

fn write_predictions(path: &Path, rows: &[PredictionRow]) -> anyhow::Result<()> {
    let ctx = || format!("writing {}", path.display());
    let mut w = csv::Writer::from_path(path).with_context(ctx)?;
    for row in rows {
        w.serialize(row).with_context(ctx)?;
    }
    w.flush().with_context(ctx)?;
    Ok(())
}

fn run_eval(
    args: Eval,
    f: fn(&ExperimentConfig) -> transent::Result<Outcome>,
) -> anyhow::Result<()> {
    let cfg = load_config(&args.common.config, &args.common.overrides)?;
    let mut outcome = f(&cfg)?;
    // Predictions first so a report on disk implies a complete run.
    if let Some(p) = &args.predictions {
        write_predictions(p, &outcome.predictions)?;
    }
    write_report(args.common.output.as_deref(), &mut outcome.report)
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::FitAlign { common, matrix } => {
            let cfg = load_config(&common.config, &common.overrides)?;
            let (w, mut report) = pipelines::fit_alignment(&cfg)?;
            w.save(&matrix)?;
            write_report(common.output.as_deref(), &mut report)
        }
        Command::Translate {
            config,
            overrides,
            matrix,
            token,
            k,
        } => {
            let cfg = load_config(&config, &overrides)?;
            let matrix = match matrix {
                Some(m) => m,
                None => cfg.require("translation_matrix", &cfg.paths.translation_matrix)?,
            };
            let w = TranslationMatrix::load(&matrix)?;
            let src = cfg.require("source_space", &cfg.paths.source_space)?;
            let tgt = cfg.require("target_space", &cfg.paths.target_space)?;
            let source = VectorSpace::load_word2vec_text(src, &cfg.source_language)?;
            let target = VectorSpace::load_word2vec_text(tgt, &cfg.target_language)?;
            let hits = w.translate_token(&token, &source, &target, k)?;
            let text: String = hits
                .iter()
                .map(|n| format!("{}\t{}\n", n.token, n.similarity))
                .collect();
            write_output(None, &text)
        }
        Command::EvalAlign(args) => run_eval(args, pipelines::run_translation_eval),
        Command::EvalBinary(args) => run_eval(args, pipelines::run_binary_sentiment_eval),
        Command::EvalAnew(args) => run_eval(args, pipelines::run_anew_eval),
        Command::EvalReviews(args) => run_eval(args, pipelines::run_review_eval),
        Command::Featurize {
            config,
            overrides,
            output,
            report,
        } => {
            let cfg = load_config(&config, &overrides)?;
            let (mut rep, rows) = pipelines::featurize_side(&cfg)?;
            let mut text = String::new();
            for (vector, label) in &rows {
                let line = serde_json::json!({
                    "label": label,
                    "source_token_count": vector.source_token_count,
                    "values": vector.values,
                });
                text.push_str(&line.to_string());
                text.push('\n');
            }
            write_output(Some(&output), &text)?;
            write_report(report.as_deref(), &mut rep)
        }
        Command::MakeFixtures(a) => {
            let params = FixtureParams {
                seed: a.seed,
                words: a.words,
                dim: a.dim,
                noise: a.noise,
                anew_fraction: a.anew_fraction,
                target_reviews_per_star: a.target_reviews_per_star,
                source_reviews_per_star: a.source_reviews_per_star,
                review_length: a.review_length,
                ..FixtureParams::default()
            };
            let manifest = fixtures::write_fixtures(&a.output, &params)?;
            eprintln!(
                "wrote {} files to {}",
                manifest.files.len(),
                a.output.display()
            );
            Ok(())
        }
    }
}
