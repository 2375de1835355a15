//! `uutest` command-line tool.
//!
//! Exit codes: 0 unimodal / success, 1 multimodal (or unresolved leaves
//! after splitting), 2 any error. Reports go to stdout or `--out`;
//! diagnostics go to stderr.

mod error;
mod input;
mod plot;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use uutest::eval::{compare, fit_gaussian, fit_uniform, BaselineModel, Model};
use uutest::experiments::{run_decision_suite, run_model_row};
use uutest::par::{self, Execution};
use uutest::synth::{derive_seed, decision_suite, model_suite};
use uutest::{split_recursive, uu_test, Dataset, Umm, Verdict};

use error::{CliError, Result};
use report::{
    DecisionBench, EvalReport, Format, ModelBench, Render, ScoreRow, SplitReport, TestReport,
};

#[derive(Parser)]
#[command(name = "uutest", version, about = "Unimodality test with uniform mixture models")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Significance level of the uniformity tests
    #[arg(long, global = true, default_value_t = 0.01, value_parser = parse_alpha)]
    alpha: f64,
    /// Seed for sampling and benchmarks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Zero-based field to read from delimited input (comma, semicolon, tab or space)
    #[arg(long, global = true)]
    column: Option<usize>,
    /// Skip the first input line
    #[arg(long, global = true)]
    header: bool,
    /// Report format
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write <PREFIX>.hist.csv (50 bins) and <PREFIX>.ecdf.csv of the data
    #[arg(long, global = true, value_name = "PREFIX")]
    emit_plot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide unimodality; exit 0 when unimodal, 1 when multimodal
    Test {
        /// Input file, or - for stdin
        input: PathBuf,
    },
    /// Fit a model document; a UMM fit on multimodal data exits 1 with the test report
    Fit {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "umm")]
        kind: FitKind,
    },
    /// Draw values from a model document, one per line
    Sample {
        model: PathBuf,
        #[arg(short, long)]
        n: usize,
    },
    /// Split recursively into unimodal pieces; exit 1 when leaves stay unresolved
    Split {
        input: PathBuf,
        #[arg(long, default_value_t = uutest::split::DEFAULT_MAX_LEAVES)]
        max_leaves: usize,
    },
    /// Compare model documents on test data by log-likelihood and two-sample KS distance
    Eval {
        /// Test data
        input: PathBuf,
        /// Model documents to compare
        #[arg(long = "model", required = true)]
        models: Vec<PathBuf>,
        /// Sample the KS distance is measured against; defaults to the test data
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Run a benchmark suite over synthetic data; UUTEST_THREADS caps parallelism
    Bench {
        #[arg(value_enum)]
        suite: Suite,
        /// Repetitions per row of the decision suite
        #[arg(long, default_value_t = 20)]
        reps: usize,
        /// Cap on worker threads
        #[arg(long, env = "UUTEST_THREADS")]
        threads: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FitKind {
    Umm,
    Gaussian,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Table2,
    Models,
}

fn parse_alpha(s: &str) -> std::result::Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(format!("alpha must lie in (0, 1), got {a}"))
    }
}

impl Common {
    fn read(&self, path: &Path) -> Result<Vec<f64>> {
        input::read_values(path, self.column, self.header)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io("<stdout>", e)),
        }
    }

    fn report(&self, r: &impl Render) -> Result<()> {
        self.emit(&r.render(self.format))
    }

    fn plot(&self, values: &[f64]) -> Result<()> {
        if let Some(prefix) = &self.emit_plot {
            plot::emit(prefix, values)?;
        }
        Ok(())
    }
}

fn load_model(path: &Path) -> Result<Model> {
    let text = input::read_text(path)?;
    let bad = |reason: String| CliError::Model {
        path: path.to_path_buf(),
        reason,
    };
    let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    match doc.get("type").and_then(|t| t.as_str()) {
        Some("umm") => Umm::from_json(&text)
            .map(Model::Umm)
            .map_err(|e| bad(e.to_string())),
        Some("gaussian" | "uniform") => serde_json::from_value::<BaselineModel>(doc)
            .map(Model::Baseline)
            .map_err(|e| bad(e.to_string())),
        Some(other) => Err(bad(format!("unknown model type {other:?}"))),
        None => Err(bad("missing \"type\"".into())),
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Unimodal => 0,
        Verdict::Multimodal => 1,
    }
}

fn cmd_test(c: &Common, input: &Path) -> Result<u8> {
    let values = c.read(input)?;
    c.plot(&values)?;
    let d = Dataset::from_raw(&values)?;
    let r = uu_test(&d, c.alpha)?;
    let model = match r.verdict {
        Verdict::Unimodal => Some(Umm::from_report(&r.s_points, &d)?.with_alpha(c.alpha)),
        Verdict::Multimodal => None,
    };
    c.report(&TestReport::new(&r, model.as_ref()))?;
    Ok(verdict_code(r.verdict))
}

fn cmd_fit(c: &Common, input: &Path, kind: FitKind) -> Result<u8> {
    let values = c.read(input)?;
    c.plot(&values)?;
    let d = Dataset::from_raw(&values)?;
    let doc = match kind {
        FitKind::Umm => {
            let r = uu_test(&d, c.alpha)?;
            if r.verdict == Verdict::Multimodal {
                c.report(&TestReport::new(&r, None))?;
                return Ok(1);
            }
            let mut s = Umm::from_report(&r.s_points, &d)?.with_alpha(c.alpha).to_json();
            s.push('\n');
            s
        }
        FitKind::Gaussian => serde_json::to_string(&fit_gaussian(&d)?)? + "\n",
        FitKind::Uniform => serde_json::to_string(&fit_uniform(&d)?)? + "\n",
    };
    c.emit(&doc)?;
    Ok(0)
}

fn cmd_sample(c: &Common, model: &Path, n: usize) -> Result<u8> {
    if n == 0 {
        return Err(CliError::Usage("sample size must be positive".into()));
    }
    let values = load_model(model)?.sample(n, c.seed)?;
    c.plot(&values)?;
    let mut text = String::with_capacity(values.len() * 20);
    for v in &values {
        text.push_str(&v.to_string());
        text.push('\n');
    }
    c.emit(&text)?;
    Ok(0)
}

fn cmd_split(c: &Common, input: &Path, max_leaves: usize) -> Result<u8> {
    let values = c.read(input)?;
    c.plot(&values)?;
    let d = Dataset::from_raw(&values)?;
    let tree = split_recursive(&d, c.alpha, max_leaves)?;
    let report = SplitReport::new(tree, c.alpha, max_leaves);
    c.report(&report)?;
    Ok(u8::from(report.unresolved() > 0))
}

fn cmd_eval(c: &Common, input: &Path, paths: &[PathBuf], reference: Option<&Path>) -> Result<u8> {
    let test = Dataset::from_raw(&c.read(input)?)?;
    let reference = match reference {
        Some(p) => Dataset::from_raw(&c.read(p)?)?,
        None => test.clone(),
    };
    let models = paths.iter().map(|p| load_model(p)).collect::<Result<Vec<_>>>()?;
    let cmp = compare(&models, &test, &reference, c.seed)?;
    let scores: Vec<ScoreRow> = cmp
        .scores
        .iter()
        .zip(paths)
        .map(|(s, p)| ScoreRow {
            label: p.display().to_string(),
            model: s.model.clone(),
            log_likelihood: s.log_likelihood,
            ks_distance: s.ks_distance,
        })
        .collect();
    let best = |key: fn(&ScoreRow) -> f64| {
        scores
            .iter()
            .min_by(|a, b| key(a).total_cmp(&key(b)))
            .map(|s| s.label.clone())
            .unwrap_or_default()
    };
    let report = EvalReport {
        n_test: test.n_total(),
        n_reference: reference.n_total(),
        seed: c.seed,
        best_log_likelihood: best(|s| -s.log_likelihood),
        best_ks: best(|s| s.ks_distance),
        scores,
    };
    c.report(&report)?;
    Ok(0)
}

fn cmd_bench(c: &Common, suite: Suite, reps: usize, threads: Option<usize>) -> Result<u8> {
    let exec = Execution::capped(threads);
    match suite {
        Suite::Table2 => {
            if reps == 0 {
                return Err(CliError::Usage("reps must be positive".into()));
            }
            let rows = run_decision_suite(&decision_suite(), reps, c.alpha, c.seed, exec)?;
            c.report(&DecisionBench {
                suite: "table2",
                alpha: c.alpha,
                seed: c.seed,
                reps,
                rows,
            })?;
        }
        Suite::Models => {
            let rows = model_suite();
            let idx: Vec<usize> = (0..rows.len()).collect();
            let results = par::map(exec, &idx, |&i| {
                run_model_row(&rows[i], c.alpha, derive_seed(c.seed, i as u64, 0))
            });
            let models = vec!["umm", "gaussian", "uniform"];
            let pick = |f: fn(&uutest::eval::ModelScore) -> f64| -> Vec<Vec<Option<f64>>> {
                results
                    .iter()
                    .map(|r| {
                        models
                            .iter()
                            .map(|m| r.as_ref().ok().and_then(|r| r.comparison.score(m)).map(f))
                            .collect()
                    })
                    .collect()
            };
            let report = ModelBench {
                suite: "models",
                alpha: c.alpha,
                seed: c.seed,
                rows: rows.iter().map(|r| r.name.to_string()).collect(),
                segments: results.iter().map(|r| r.as_ref().ok().map(|r| r.segments)).collect(),
                log_likelihood: pick(|s| s.log_likelihood),
                ks_distance: pick(|s| s.ks_distance),
                errors: results.iter().map(|r| r.as_ref().err().map(|e| e.to_string())).collect(),
                models,
            };
            c.report(&report)?;
        }
    }
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8> {
    let c = &cli.common;
    match &cli.command {
        Command::Test { input } => cmd_test(c, input),
        Command::Fit { input, kind } => cmd_fit(c, input, *kind),
        Command::Sample { model, n } => cmd_sample(c, model, *n),
        Command::Split { input, max_leaves } => cmd_split(c, input, *max_leaves),
        Command::Eval {
            input,
            models,
            reference,
        } => cmd_eval(c, input, models, reference.as_deref()),
        Command::Bench {
            suite,
            reps,
            threads,
        } => cmd_bench(c, *suite, *reps, *threads),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("uutest: {e}");
            ExitCode::from(2)
        }
    }
}
