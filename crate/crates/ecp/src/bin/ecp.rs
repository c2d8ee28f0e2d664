//! `ecp`: fit, validate and explore the circuit model from the command line.
//!
//! Exit codes: 0 success, 1 usage (bad flags, unreadable paths, invalid
//! arguments), 2 malformed input files or parameters that do not cover the
//! data, 3 degenerate data (no signal to fit or correlate).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{CommandFactory, Parser, Subcommand};
use ecp::annotate::annotate_steps;
use ecp::core::calibration::{
    fit, fit_direct_answer_multipliers, predict, run_powers, summarize, BinSpec, Demonstrations, FitOptions,
    FitParams, ValidationSummary,
};
use ecp::core::circuit::circuit_power;
use ecp::core::dataset::{validation_split, TaskRecord};
use ecp::core::field::{retrieve, DemoPool, FieldMetric, RetrievalPolicy};
use ecp::core::strategy::{EffectiveSampleRule, Strategy, StrategySpec};
use ecp::core::synth::{generate, SynthConfig};
use ecp::io::{self as files, Encoding, Parsing};
use ecp::report::{read_csv, write_csv, write_report, ReportFormat, ReportRow};

#[derive(Parser)]
#[command(name = "ecp", version, about = "Equivalent-circuit performance model for prompting strategies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct DataArgs {
    /// Line-delimited task file.
    #[arg(long)]
    tasks: PathBuf,
    /// Embedding pool (text or binary) holding query and demonstration vectors.
    #[arg(long)]
    embeddings: Option<PathBuf>,
    /// Warn about unknown fields instead of rejecting them.
    #[arg(long)]
    lenient: bool,
}

#[derive(clap::Args)]
struct ModelArgs {
    /// projection, cosine, l1, l2 or none.
    #[arg(long, default_value = "projection")]
    metric: FieldMetric,
    /// independent or log_corrected.
    #[arg(long, default_value = "independent")]
    rule: EffectiveSampleRule,
}

#[derive(clap::Args)]
struct BinArgs {
    /// Fixed bin width in power units.
    #[arg(long, conflicts_with = "bins")]
    bin_width: Option<f64>,
    /// Number of equal bins spanning zero to the largest power.
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long, default_value_t = 10)]
    min_count: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the model constants and write a parameter file.
    Fit {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Output parameter file.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        val_frac: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Model pinned to EMF 1; defaults to the model of the first run.
        #[arg(long)]
        gauge_model: Option<String>,
        /// Fixed bin width; by default six bins span the fitted powers.
        #[arg(long, conflicts_with = "bins")]
        bin_width: Option<f64>,
        #[arg(long, default_value_t = 6)]
        bins: usize,
        #[arg(long, default_value_t = 10)]
        min_count: usize,
        /// Keep annotated domain resistances instead of fitting one per family.
        #[arg(long)]
        no_domain: bool,
        /// Also fit direct-answer multipliers.
        #[arg(long)]
        direct_answer: bool,
        /// Write the validation bins as CSV.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Predict power and accuracy per run, or per task for one configuration.
    Predict {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        params: PathBuf,
        /// Evaluate every task with this model instead of each run's own setup.
        #[arg(long = "model")]
        model_name: Option<String>,
        /// Strategy tag (zero_shot, direct_answer, tool_usage, program_of_thought) or a JSON object.
        #[arg(long, default_value = "zero_shot")]
        strategy: String,
        /// Retrieve this many demonstrations per task (needs --model).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value = "top_k")]
        policy: String,
        /// Candidate pool size for diverse_among_top.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Representation whose lambda prices retrieved demonstrations.
        #[arg(long)]
        representation: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bin runs by predicted power and correlate with accuracy.
    Validate {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        bins: BinArgs,
        #[arg(long)]
        params: PathBuf,
        /// Restrict to the validation split drawn with --seed.
        #[arg(long)]
        val_frac: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also bin each (model, strategy) group separately.
        #[arg(long)]
        group: bool,
        /// Write the bins here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
    },
    /// Sweep a strategy's sample count and print resistance and power.
    Simulate {
        /// JSON object {"strategy": {...}, "base": {...}}.
        #[arg(long)]
        strategy_file: PathBuf,
        /// Inclusive range such as n=1..100.
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
        /// Model EMF.
        #[arg(long, default_value_t = 1.0)]
        emf: f64,
        /// Demonstration EMF.
        #[arg(long, default_value_t = 0.0)]
        e_itl: f64,
        #[arg(long, default_value = "independent")]
        rule: EffectiveSampleRule,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Select demonstrations for one query vector of a pool.
    Retrieve {
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long)]
        query_id: String,
        /// random, top_k, bottom_k, diverse_static, similar_dynamic or diverse_among_top.
        #[arg(long, default_value = "top_k")]
        policy: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Count planning steps and local operations in rationales.
    Annotate {
        /// Line-delimited {"id": ..., "text": ...} records.
        #[arg(long)]
        rationales: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a bins CSV to csv or svg-scatter.
    Report {
        #[arg(long)]
        bins: PathBuf,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
        /// Parameter file whose calibration is drawn as a line.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic dataset drawn from known constants.
    Synth {
        #[arg(long)]
        out_tasks: PathBuf,
        #[arg(long)]
        out_embeddings: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        tasks: usize,
        #[arg(long, default_value_t = 50)]
        runs: usize,
        /// Write the embeddings in the binary encoding.
        #[arg(long)]
        binary: bool,
        /// Write the generating constants as a parameter file.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Write every run's true power as CSV.
        #[arg(long)]
        true_powers: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed stdout (e.g. piped into `head`) is not an error.
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = exit_code(&e);
            if code == 1 {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            ExitCode::from(code)
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("ECP_THREADS") {
        let n: usize = v.parse().with_context(|| format!("ECP_THREADS={v:?} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    Ok(())
}

fn core_code(e: &ecp::core::Error) -> u8 {
    use ecp::core::Error as E;
    match e {
        E::InvalidInput(_) => 1,
        E::MissingParam(_) | E::MissingEmbedding(_) => 2,
        E::DegenerateInput(_) | E::DegenerateFit(_) => 3,
    }
}

fn broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|cause| {
        let io_err = cause.downcast_ref::<io::Error>().or_else(|| match cause.downcast_ref::<csv::Error>()?.kind() {
            csv::ErrorKind::Io(e) => Some(e),
            _ => None,
        });
        io_err.is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
    })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<ecp::Error>() {
            return match e {
                ecp::Error::Io { .. } => 1,
                ecp::Error::Format { .. } | ecp::Error::Csv(_) => 2,
                ecp::Error::Core(c) => core_code(c),
            };
        }
        if let Some(c) = cause.downcast_ref::<ecp::core::Error>() {
            return core_code(c);
        }
        if cause.downcast_ref::<io::Error>().is_some() {
            return 1;
        }
    }
    1
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Fit {
            data,
            model,
            out,
            val_frac,
            seed,
            gauge_model,
            bin_width,
            bins,
            min_count,
            no_domain,
            direct_answer,
            report,
        } => {
            let (tasks, pool) = load_data(&data)?;
            let gauge = match gauge_model {
                Some(g) => g,
                None => tasks
                    .iter()
                    .flat_map(|t| &t.runs)
                    .map(|r| r.model.clone())
                    .next()
                    .ok_or_else(|| ecp::core::Error::DegenerateFit("the dataset has no runs".into()))?,
            };
            let mut opts = FitOptions::new(gauge);
            opts.val_frac = val_frac;
            opts.seed = seed;
            opts.metric = model.metric;
            opts.rule = model.rule;
            opts.fit_domain = !no_domain;
            match bin_width {
                Some(w) => opts.bins = BinSpec::new(w, min_count)?,
                None => {
                    opts.bins.min_count = min_count;
                    opts.bin_count = Some(bins);
                }
            }
            let fitted = fit(&tasks, pool.as_ref(), &opts)?;
            let mut params = fitted.params;
            if direct_answer {
                if bin_width.is_none() {
                    opts.bins = span_validation(&tasks, pool.as_ref(), &params, &opts, bins)?;
                }
                let da = fit_direct_answer_multipliers(&tasks, pool.as_ref(), &params, &opts)?;
                println!(
                    "direct_answer plan={} operation={} calculate={} rho={:.4}",
                    da.multipliers.plan, da.multipliers.operation, da.multipliers.calculate, da.spearman
                );
                params.direct_answer = Some(da.multipliers);
            }
            files::save_params(&out, &params)?;
            print_summary(&fitted.validation);
            println!("sweeps={} converged={} objective={:.6}", fitted.sweeps, fitted.converged, fitted.objective);
            if let Some(path) = report {
                write_report(&bin_rows(&fitted.validation, "all", "all"), path, ReportFormat::Csv, None)?;
            }
        }
        Command::Predict {
            data,
            model,
            params,
            model_name,
            strategy,
            k,
            policy,
            m,
            seed,
            representation,
            out,
        } => {
            let (tasks, pool) = load_data(&data)?;
            let params = files::load_params(&params)?;
            let mut w = csv::Writer::from_writer(output(out.as_deref())?);
            w.write_record(["task_id", "run", "model", "strategy", "power", "accuracy"])?;
            match model_name {
                None => {
                    for rp in run_powers(&tasks, pool.as_ref(), &params, model.metric, model.rule)? {
                        let task = &tasks[rp.task];
                        let run = &task.runs[rp.run];
                        w.write_record([
                            task.task_id.clone(),
                            rp.run.to_string(),
                            run.model.clone(),
                            run.strategy.tag().to_string(),
                            rp.power.to_string(),
                            params.calib.accuracy(rp.power).to_string(),
                        ])?;
                    }
                }
                Some(name) => {
                    let strategy = parse_strategy(&strategy)?;
                    let retrieval = match k {
                        Some(k) => {
                            let pool = pool.as_ref().context("--k needs --embeddings")?;
                            let representation = match representation {
                                Some(r) => r,
                                None if params.lambda.len() == 1 => params.lambda.keys().next().unwrap().clone(),
                                None => bail!(ecp::core::Error::InvalidInput(
                                    "--representation is required when the parameters have several lambdas".into()
                                )),
                            };
                            Some((pool, k, parse_policy(&policy, seed, m)?, representation))
                        }
                        None => None,
                    };
                    for task in &tasks {
                        let ids = match &retrieval {
                            Some((pool, k, policy, _)) => {
                                let qid = task.embedding_id.as_deref().ok_or_else(|| {
                                    ecp::core::Error::MissingEmbedding(format!("task {} has no embedding_id", task.task_id))
                                })?;
                                let query = pool.get(qid).ok_or_else(|| {
                                    ecp::core::Error::MissingEmbedding(format!("no embedding {qid}"))
                                })?;
                                retrieve(query, &pool.without(qid), *policy, *k)?
                            }
                            None => Vec::new(),
                        };
                        let demos = retrieval.as_ref().map(|(pool, _, _, rep)| Demonstrations {
                            ids: &ids,
                            representation: rep,
                            pool,
                            metric: model.metric,
                        });
                        let p = predict(task, &name, &params, demos, &strategy, model.rule)?;
                        w.write_record([
                            task.task_id.clone(),
                            String::new(),
                            name.clone(),
                            strategy.tag().to_string(),
                            p.power.to_string(),
                            p.accuracy.to_string(),
                        ])?;
                    }
                }
            }
            w.flush()?;
        }
        Command::Validate { data, model, bins, params, val_frac, seed, group, out, format } => {
            let (tasks, pool) = load_data(&data)?;
            let params = files::load_params(&params)?;
            let tasks = match val_frac {
                Some(f) => validation_split(tasks.len(), f, seed)?.into_iter().map(|i| tasks[i].clone()).collect(),
                None => tasks,
            };
            let powers = run_powers(&tasks, pool.as_ref(), &params, model.metric, model.rule)?;
            let records: Vec<(f64, bool)> = powers.iter().map(|r| (r.power, r.correct)).collect();
            if records.is_empty() {
                bail!(ecp::core::Error::DegenerateFit("no runs to validate".into()));
            }
            let spec = bin_spec(&bins, &records)?;
            let summary = summarize(&records, &spec)?;
            print_summary(&summary);
            let mut rows = bin_rows(&summary, "all", "all");
            if group {
                let mut keys: Vec<(String, String)> = powers
                    .iter()
                    .map(|r| {
                        let run = &tasks[r.task].runs[r.run];
                        (run.model.clone(), run.strategy.tag().to_string())
                    })
                    .collect();
                keys.sort();
                keys.dedup();
                for (m, s) in keys {
                    let sub: Vec<(f64, bool)> = powers
                        .iter()
                        .filter(|r| {
                            let run = &tasks[r.task].runs[r.run];
                            run.model == m && run.strategy.tag() == s
                        })
                        .map(|r| (r.power, r.correct))
                        .collect();
                    let binned = ecp::core::calibration::bin_by_power(&sub, &spec)?;
                    rows.extend(binned.iter().map(|b| ReportRow::from_bin(b, &m, &s)));
                }
            }
            if let Some(path) = out {
                write_report(&rows, path, format, Some(&params.calib))?;
            }
        }
        Command::Simulate { strategy_file, sweep, r0, emf, e_itl, rule, out } => {
            let text = fs::read_to_string(&strategy_file)
                .map_err(|e| ecp::Error::Io { path: strategy_file.clone(), error: e })?;
            let spec: StrategySpec = serde_json::from_str(&text).map_err(|e| ecp::Error::Format {
                path: strategy_file.clone(),
                error: ecp::FormatError::Syntax { at: ecp::Location::Line(e.line()), message: e.to_string() },
            })?;
            spec.validate()?;
            let counts: Vec<Option<u64>> = match &sweep {
                Some(s) => {
                    if spec.strategy.samples().is_none() {
                        bail!(ecp::core::Error::InvalidInput(format!(
                            "{} draws a single path and cannot be swept",
                            spec.strategy.tag()
                        )));
                    }
                    parse_sweep(s)?.map(Some).collect()
                }
                None => vec![spec.strategy.samples()],
            };
            let mut w = csv::Writer::from_writer(output(out.as_deref())?);
            w.write_record(["n", "resistance", "power"])?;
            for n in counts {
                let spec = match n {
                    Some(n) => StrategySpec { strategy: spec.strategy.with_samples(n).unwrap(), base: spec.base },
                    None => spec.clone(),
                };
                let r = spec.equivalent_resistance(rule, None)?;
                let p = circuit_power(emf, e_itl, r, r0)?;
                w.write_record([n.unwrap_or(1).to_string(), (r + r0).to_string(), p.to_string()])?;
            }
            w.flush()?;
        }
        Command::Retrieve { embeddings, query_id, policy, k, m, seed } => {
            let pool = files::load_embeddings(&embeddings, Encoding::Auto)?;
            let query = pool
                .get(&query_id)
                .ok_or_else(|| ecp::core::Error::InvalidInput(format!("no embedding with id {query_id:?}")))?;
            let ids = retrieve(query, &pool.without(&query_id), parse_policy(&policy, seed, m)?, k)?;
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["rank", "id"])?;
            for (i, id) in ids.iter().enumerate() {
                w.write_record([(i + 1).to_string(), id.clone()])?;
            }
            w.flush()?;
        }
        Command::Annotate { rationales, out } => {
            #[derive(serde::Deserialize)]
            struct Rationale {
                id: String,
                text: String,
            }
            let text = fs::read_to_string(&rationales)
                .map_err(|e| ecp::Error::Io { path: rationales.clone(), error: e })?;
            let mut w = csv::Writer::from_writer(output(out.as_deref())?);
            w.write_record(["id", "plan_steps", "local_ops"])?;
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let r: Rationale = serde_json::from_str(line).map_err(|e| ecp::Error::Format {
                    path: rationales.clone(),
                    error: ecp::FormatError::Syntax { at: ecp::Location::Line(i + 1), message: e.to_string() },
                })?;
                let a = annotate_steps(&r.text);
                w.write_record([r.id, a.plan_steps.to_string(), a.local_ops.to_string()])?;
            }
            w.flush()?;
        }
        Command::Report { bins, format, params, out } => {
            let file = fs::File::open(&bins).map_err(|e| ecp::Error::Io { path: bins.clone(), error: e })?;
            let rows = read_csv(file)?;
            let calib = params.map(files::load_params).transpose()?.map(|p| p.calib);
            match (out, format) {
                (Some(path), f) => write_report(&rows, path, f, calib.as_ref())?,
                (None, ReportFormat::Csv) => write_csv(io::stdout().lock(), &rows)?,
                (None, ReportFormat::SvgScatter) => {
                    io::stdout().lock().write_all(ecp::report::svg_scatter(&rows, calib.as_ref()).as_bytes())?
                }
            }
        }
        Command::Synth { out_tasks, out_embeddings, seed, tasks, runs, binary, truth, true_powers } => {
            let cfg = SynthConfig { seed, tasks, runs_per_task: runs, ..SynthConfig::default() };
            let data = generate(&cfg)?;
            files::save_tasks(&out_tasks, &data.tasks)?;
            let encoding = if binary { Encoding::Binary } else { Encoding::Text };
            files::save_embeddings(&out_embeddings, &data.pool, encoding)?;
            if let Some(path) = truth {
                files::save_params(path, &data.truth)?;
            }
            if let Some(path) = true_powers {
                let mut w = csv::Writer::from_path(&path)?;
                w.write_record(["task_id", "run", "power"])?;
                let mut powers = data.true_power.iter();
                for t in &data.tasks {
                    for i in 0..t.runs.len() {
                        w.write_record([t.task_id.clone(), i.to_string(), powers.next().unwrap().to_string()])?;
                    }
                }
                w.flush()?;
            }
        }
    }
    Ok(())
}

fn load_data(args: &DataArgs) -> Result<(Vec<TaskRecord>, Option<DemoPool>)> {
    let mode = if args.lenient { Parsing::Lenient } else { Parsing::Strict };
    let loaded = files::load_tasks(&args.tasks, mode)?;
    for w in &loaded.warnings {
        eprintln!("warning: {}: line {}: ignored unknown field `{}`", args.tasks.display(), w.line, w.field);
    }
    let pool = args.embeddings.as_ref().map(|p| files::load_embeddings(p, Encoding::Auto)).transpose()?;
    Ok((loaded.tasks, pool))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            fs::File::create(p).map_err(|e| ecp::Error::Io { path: p.to_path_buf(), error: e })?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn fmt_stat(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".to_string(), |v| format!("{v:.6}"))
}

fn print_summary(s: &ValidationSummary) {
    println!(
        "rho={} r={} r2={} bins={} dropped={}",
        fmt_stat(s.spearman),
        fmt_stat(s.pearson),
        fmt_stat(s.r_squared),
        s.bins.len(),
        s.dropped
    );
}

fn bin_rows(s: &ValidationSummary, model: &str, strategy: &str) -> Vec<ReportRow> {
    s.bins.iter().map(|b| ReportRow::from_bin(b, model, strategy)).collect()
}

fn bin_spec(args: &BinArgs, records: &[(f64, bool)]) -> Result<BinSpec> {
    Ok(match (args.bin_width, args.bins) {
        (Some(w), _) => BinSpec::new(w, args.min_count)?,
        (None, Some(n)) => {
            let max = records.iter().map(|r| r.0).fold(0.0, f64::max);
            BinSpec::spanning(max, n, args.min_count)?
        }
        (None, None) => BinSpec::new(1.0, args.min_count)?,
    })
}

/// Bins spanning the fitted validation powers, as the fit itself used.
fn span_validation(
    tasks: &[TaskRecord],
    pool: Option<&DemoPool>,
    params: &FitParams,
    opts: &FitOptions,
    count: usize,
) -> Result<BinSpec> {
    let split: Vec<TaskRecord> =
        validation_split(tasks.len(), opts.val_frac, opts.seed)?.into_iter().map(|i| tasks[i].clone()).collect();
    let max = run_powers(&split, pool, params, opts.metric, opts.rule)?.iter().map(|r| r.power).fold(0.0, f64::max);
    Ok(BinSpec::spanning(max, count, opts.bins.min_count)?)
}

fn parse_strategy(s: &str) -> Result<Strategy> {
    let value = if s.trim_start().starts_with('{') {
        serde_json::from_str(s).context("parsing --strategy")?
    } else {
        serde_json::json!({ "kind": s })
    };
    serde_json::from_value(value)
        .map_err(|e| ecp::core::Error::InvalidInput(format!("unknown or incomplete strategy {s:?}: {e}")).into())
}

fn parse_policy(name: &str, seed: u64, m: Option<usize>) -> Result<RetrievalPolicy> {
    Ok(match name.replace('-', "_").as_str() {
        "random" => RetrievalPolicy::Random { seed },
        "top_k" => RetrievalPolicy::TopK,
        "bottom_k" => RetrievalPolicy::BottomK,
        "diverse_static" => RetrievalPolicy::DiverseStatic,
        "similar_dynamic" => RetrievalPolicy::SimilarDynamic,
        "diverse_among_top" => RetrievalPolicy::DiverseAmongTop {
            m: m.ok_or_else(|| ecp::core::Error::InvalidInput("diverse_among_top needs --m".into()))?,
        },
        _ => bail!(ecp::core::Error::InvalidInput(format!("unknown retrieval policy {name:?}"))),
    })
}

/// `n=a..b` or `a..b`, inclusive.
fn parse_sweep(s: &str) -> Result<std::ops::RangeInclusive<u64>> {
    let range = s.strip_prefix("n=").unwrap_or(s);
    let parsed = range.split_once("..").and_then(|(a, b)| Some((a.parse::<u64>().ok()?, b.parse::<u64>().ok()?)));
    match parsed {
        Some((a, b)) if a >= 1 && a <= b => Ok(a..=b),
        _ => bail!(ecp::core::Error::InvalidInput(format!("sweep {s:?} is not of the form n=a..b with 1 ≤ a ≤ b"))),
    }
}
