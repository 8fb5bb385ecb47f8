//! Command implementations behind the `sdlist` binary: discover a subgroup
//! list, evaluate a serialised list against a dataset, and verify the
//! encodings against the brute-force oracles. Every flag can also be set
//! through an `SDLIST_`-prefixed environment variable.

pub mod report;
pub mod synth;

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use sdlist::data::{generate_items, load_csv, ColumnKind, DataError, Dataset, SchemaConfig};
use sdlist::encoding::{lookup, nml_categorical, EncodingContext};
use sdlist::metrics::{wkl, ListSummary};
use sdlist::model::{Description, Subgroup, SubgroupList, TargetPart};
use sdlist::search::{beam_search, ssd_plus_plus, SearchError, SearchParams};
use sdlist_oracle::{
    enumerate_multinomial_complexity, exhaustive_top1, nml_partition_bruteforce, quadrature_bayes,
    OracleBudget,
};

use report::{DefaultRow, ParamsEcho, Report, SubgroupRow, TableLabels};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

fn data_error(err: DataError) -> CliError {
    let code = match err {
        DataError::Io(_) | DataError::Csv(_) => EXIT_IO,
        _ => EXIT_CONFIG,
    };
    CliError {
        code,
        message: err.to_string(),
    }
}

fn search_error(err: SearchError) -> CliError {
    CliError::config(err.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "sdlist", version, about = "Mine MDL-optimal subgroup lists from CSV data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mine a subgroup list from a CSV file
    Discover(DiscoverArgs),
    /// Recompute covers and scores of a saved list against a dataset
    Evaluate(EvaluateArgs),
    /// Compare the closed-form encodings and the beam search against
    /// brute-force oracles
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Markdown,
}

#[derive(Args, Debug, Clone)]
pub struct DiscoverArgs {
    /// CSV file with a header row
    #[arg(long, env = "SDLIST_INPUT")]
    pub input: PathBuf,
    /// Schema config: a JSON file path or an inline JSON object
    #[arg(long, env = "SDLIST_SCHEMA")]
    pub schema: Option<String>,
    /// Target column names (alternative to --schema)
    #[arg(long, env = "SDLIST_TARGETS", value_delimiter = ',')]
    pub targets: Vec<String>,
    /// Target encoding: one of the registered strategies (nominal, numeric)
    #[arg(long, env = "SDLIST_TASK")]
    pub task: Option<String>,
    /// Non-target columns to force nominal when inferring the schema
    #[arg(long, env = "SDLIST_NOMINAL_EXPLANATORY", value_delimiter = ',')]
    pub nominal_explanatory: Vec<String>,
    #[arg(long, env = "SDLIST_BEAM_WIDTH", default_value_t = 100)]
    pub beam_width: usize,
    #[arg(long, env = "SDLIST_DEPTH", default_value_t = 5)]
    pub depth: usize,
    #[arg(long, env = "SDLIST_CUTPOINTS", default_value_t = 5)]
    pub cutpoints: usize,
    /// Gain normalisation: 1 favours many small subgroups, 0 few large ones
    #[arg(long, env = "SDLIST_BETA", default_value_t = 1.0)]
    pub beta: f64,
    /// Mine only the single best subgroup
    #[arg(long, env = "SDLIST_TOP1")]
    pub top1: bool,
    #[arg(long, env = "SDLIST_FORMAT", value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write the report here instead of stdout
    #[arg(long, env = "SDLIST_OUTPUT")]
    pub output: Option<PathBuf>,
    /// Worker threads; 0 uses all available cores
    #[arg(long, env = "SDLIST_THREADS", default_value_t = 0)]
    pub threads: usize,
}

#[derive(Args, Debug, Clone)]
pub struct EvaluateArgs {
    #[arg(long, env = "SDLIST_INPUT")]
    pub input: PathBuf,
    /// JSON report produced by `discover --format json`
    #[arg(long, env = "SDLIST_LIST")]
    pub list: PathBuf,
    #[arg(long, env = "SDLIST_SCHEMA")]
    pub schema: Option<String>,
    #[arg(long, env = "SDLIST_TARGETS", value_delimiter = ',')]
    pub targets: Vec<String>,
    #[arg(long, env = "SDLIST_TASK")]
    pub task: Option<String>,
    #[arg(long, env = "SDLIST_NOMINAL_EXPLANATORY", value_delimiter = ',')]
    pub nominal_explanatory: Vec<String>,
    #[arg(long, env = "SDLIST_FORMAT", value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[arg(long, env = "SDLIST_OUTPUT")]
    pub output: Option<PathBuf>,
    #[arg(long, env = "SDLIST_THREADS", default_value_t = 0)]
    pub threads: usize,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Largest sample size for the sequence-enumeration sweep
    #[arg(long, env = "SDLIST_VERIFY_BUDGET", default_value_t = 8)]
    pub verify_budget: usize,
    #[arg(long, env = "SDLIST_THREADS", default_value_t = 0)]
    pub threads: usize,
}

fn with_pool<T: Send>(threads: usize, run: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool")
            .install(run)
    }
}

fn resolve_schema(
    schema: Option<&str>,
    targets: &[String],
    task: Option<&str>,
    nominal_explanatory: &[String],
) -> Result<SchemaConfig, CliError> {
    if let Some(spec) = schema {
        let text = if spec.trim_start().starts_with('{') {
            spec.to_owned()
        } else {
            std::fs::read_to_string(spec)
                .map_err(|e| CliError::io(format!("cannot read schema {spec}: {e}")))?
        };
        return serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("invalid schema config: {e}")));
    }
    if targets.is_empty() {
        return Err(CliError::config(
            "provide --schema, or --targets together with --task",
        ));
    }
    let task = task.ok_or_else(|| {
        CliError::config("provide --task (nominal or numeric) when using --targets")
    })?;
    let strategy = lookup(task).ok_or_else(|| {
        CliError::config(format!(
            "unknown task {task:?}; registered tasks: {}",
            sdlist::encoding::registry()
                .iter()
                .map(|s| s.name())
                .collect::<Vec<_>>()
                .join(", ")
        ))
    })?;
    Ok(SchemaConfig::Inferred {
        targets: targets.to_vec(),
        target_kind: strategy.target_kind(),
        nominal_explanatory: nominal_explanatory.to_vec(),
    })
}

fn load_dataset(path: &Path, config: &SchemaConfig) -> Result<Dataset, CliError> {
    load_csv(path, config).map_err(data_error)
}

fn check_task(task: Option<&str>, dataset: &Dataset) -> Result<&'static str, CliError> {
    let strategy = match task {
        Some(name) => lookup(name)
            .ok_or_else(|| CliError::config(format!("unknown task {name:?}")))?,
        None => sdlist::encoding::for_kind(dataset.target_kind()),
    };
    if strategy.target_kind() != dataset.target_kind() {
        return Err(CliError::config(format!(
            "task {} does not match the {} target columns",
            strategy.name(),
            dataset.target_kind()
        )));
    }
    Ok(strategy.name())
}

fn table_labels(dataset: &Dataset) -> TableLabels {
    let targets = dataset.target_indices();
    TableLabels {
        target_names: targets
            .iter()
            .map(|&c| dataset.column_name(c).to_owned())
            .collect(),
        class_labels: targets
            .iter()
            .map(|&c| match dataset.schema()[c].kind {
                ColumnKind::Nominal => Some(dataset.category_dict(c).to_vec()),
                ColumnKind::Numeric => None,
            })
            .collect(),
    }
}

fn build_report(
    dataset: &Dataset,
    list: &SubgroupList,
    gains: &[Option<f64>],
    params: ParamsEcho,
) -> Result<Report, CliError> {
    let universe = generate_items(dataset, params.cutpoints);
    let ctx = EncodingContext::new(dataset, &universe, params.top1);
    let cover = list.cover(dataset);
    let targets = dataset.target_indices();

    let mut subgroups = Vec::with_capacity(list.len());
    for (i, subgroup) in list.subgroups.iter().enumerate() {
        let rows = &cover.subgroup_rows[i];
        let stats: Vec<_> = targets
            .iter()
            .map(|&col| {
                TargetPart::gather(dataset, col, rows.iter().map(|&r| r as usize)).statistics()
            })
            .collect();
        subgroups.push(SubgroupRow {
            description: subgroup.description.display(dataset),
            conditions: subgroup.description.to_json(dataset),
            n: rows.len(),
            wkl: wkl(&stats, list.default_stats()),
            stats,
            gain_at_insertion: gains.get(i).copied().flatten(),
        });
    }
    let summary = ListSummary::compute(dataset, list, &ctx)
        .map_err(|e| CliError::config(e.to_string()))?;
    Ok(Report {
        params,
        subgroups,
        default: DefaultRow {
            n: cover.default_rows.len(),
            stats: list.default_stats().to_vec(),
        },
        summary,
    })
}

fn render(report: &Report, labels: &TableLabels, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => report::render_json(report),
        OutputFormat::Text => report::render_text(report, labels),
        OutputFormat::Markdown => report::render_markdown(report, labels),
    }
}

fn deliver(rendered: String, output: Option<&Path>) -> Result<String, CliError> {
    if let Some(path) = output {
        std::fs::write(path, &rendered)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(rendered)
}

/// Mines a list and returns the rendered report.
pub fn run_discover(args: &DiscoverArgs) -> Result<String, CliError> {
    let report = discover_report(args)?;
    let config = resolve_schema(
        args.schema.as_deref(),
        &args.targets,
        args.task.as_deref(),
        &args.nominal_explanatory,
    )?;
    let dataset = load_dataset(&args.input, &config)?;
    let rendered = render(&report, &table_labels(&dataset), args.format);
    deliver(rendered, args.output.as_deref())
}

/// The discover pipeline without rendering; used by tests.
pub fn discover_report(args: &DiscoverArgs) -> Result<Report, CliError> {
    let config = resolve_schema(
        args.schema.as_deref(),
        &args.targets,
        args.task.as_deref(),
        &args.nominal_explanatory,
    )?;
    let dataset = load_dataset(&args.input, &config)?;
    let task = check_task(args.task.as_deref(), &dataset)?;
    let params = SearchParams {
        task: dataset.target_kind(),
        beam_width: args.beam_width,
        max_depth: args.depth,
        n_cut: args.cutpoints,
        beta: args.beta,
        top1: args.top1,
        min_coverage: 2,
    };
    let discovery =
        with_pool(args.threads, || ssd_plus_plus(&dataset, &params)).map_err(search_error)?;
    let gains: Vec<Option<f64>> = discovery.insertion_gains.iter().map(|&g| Some(g)).collect();
    build_report(
        &dataset,
        &discovery.list,
        &gains,
        ParamsEcho {
            input: args.input.display().to_string(),
            task: task.to_owned(),
            targets: dataset
                .target_indices()
                .iter()
                .map(|&c| dataset.column_name(c).to_owned())
                .collect(),
            beam_width: args.beam_width,
            depth: args.depth,
            cutpoints: args.cutpoints,
            beta: args.beta,
            top1: args.top1,
        },
    )
}

/// Recomputes covers, statistics and scores of a saved report against a
/// dataset.
pub fn run_evaluate(args: &EvaluateArgs) -> Result<String, CliError> {
    let report = evaluate_report(args)?;
    let config = resolve_schema(
        args.schema.as_deref(),
        &args.targets,
        args.task.as_deref(),
        &args.nominal_explanatory,
    )?;
    let dataset = load_dataset(&args.input, &config)?;
    let rendered = render(&report, &table_labels(&dataset), args.format);
    deliver(rendered, args.output.as_deref())
}

pub fn evaluate_report(args: &EvaluateArgs) -> Result<Report, CliError> {
    let config = resolve_schema(
        args.schema.as_deref(),
        &args.targets,
        args.task.as_deref(),
        &args.nominal_explanatory,
    )?;
    let dataset = load_dataset(&args.input, &config)?;
    check_task(args.task.as_deref(), &dataset)?;
    let text = std::fs::read_to_string(&args.list)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", args.list.display())))?;
    let saved: Report = serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("invalid list json: {e}")))?;

    let mut list = SubgroupList::empty(&dataset);
    for row in &saved.subgroups {
        let description = Description::from_json(&row.conditions, &dataset)
            .map_err(|e| CliError::config(format!("invalid description: {e}")))?;
        list.subgroups.push(Subgroup {
            description,
            cover_size: 0,
            statistics: Vec::new(),
        });
    }
    // refresh covers and statistics for the list order
    let cover = list.cover(&dataset);
    let targets = dataset.target_indices();
    for (i, rows) in cover.subgroup_rows.iter().enumerate() {
        list.subgroups[i].cover_size = rows.len();
        list.subgroups[i].statistics = targets
            .iter()
            .map(|&col| {
                TargetPart::gather(&dataset, col, rows.iter().map(|&r| r as usize)).statistics()
            })
            .collect();
    }
    let gains: Vec<Option<f64>> = saved
        .subgroups
        .iter()
        .map(|row| row.gain_at_insertion)
        .collect();
    let params = ParamsEcho {
        input: args.input.display().to_string(),
        ..saved.params
    };
    with_pool(args.threads, || build_report(&dataset, &list, &gains, params))
}

/// Oracle comparison: residuals of the closed-form encodings against
/// enumeration and quadrature, and beam-vs-exhaustive agreement. Returns
/// the rendered report and whether every check passed.
pub fn run_verify(args: &VerifyArgs) -> Result<(String, bool), CliError> {
    with_pool(args.threads, || verify_inner(args))
}

fn verify_inner(args: &VerifyArgs) -> Result<(String, bool), CliError> {
    let budget = OracleBudget::default();
    let mut out = String::new();
    let mut all_ok = true;
    let check = |line: String, ok: bool, out: &mut String| {
        out.push_str(&format!("{} {}\n", if ok { "ok  " } else { "FAIL" }, line));
        ok
    };

    // closed recurrence vs sequence enumeration
    let max_n = args.verify_budget.clamp(2, 10);
    let mut worst: f64 = 0.0;
    for n in 1..=max_n {
        for k in 2..=3usize {
            let exact = enumerate_multinomial_complexity(n, k, &budget)
                .map_err(|e| CliError::config(e.to_string()))?;
            let closed = sdlist::encoding::multinomial_complexity(n as u64, k as u32);
            worst = worst.max((exact - closed).abs());
        }
    }
    all_ok &= check(
        format!("multinomial complexity, enumeration vs recurrence (n <= {max_n}, k <= 3): max residual {worst:.3e} (bound 1e-9)"),
        worst < 1e-9,
        &mut out,
    );

    // NML separation over random two-part partitions
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.gen_range(4..=8usize);
        let split = rng.gen_range(1..n);
        let k = rng.gen_range(2..=3usize);
        let parts: Vec<Vec<usize>> = vec![
            (0..split).map(|_| rng.gen_range(0..k)).collect(),
            (0..n - split).map(|_| rng.gen_range(0..k)).collect(),
        ];
        let brute = nml_partition_bruteforce(&parts, k, &budget)
            .map_err(|e| CliError::config(e.to_string()))?;
        let summed: f64 = parts
            .iter()
            .map(|part| {
                let mut counts = vec![0u64; k];
                for &label in part {
                    counts[label] += 1;
                }
                nml_categorical(&counts, k)
            })
            .sum();
        worst = worst.max((brute - summed).abs());
    }
    all_ok &= check(
        format!("nml separation, 20 random two-part partitions: max residual {worst:.3e} (bound 1e-9)"),
        worst < 1e-9,
        &mut out,
    );

    // quadrature vs the closed Bayesian code
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let n = rng.gen_range(3..=6usize);
        let values: Vec<f64> = (0..n).map(|_| synth::standard_normal(&mut rng)).collect();
        let mu_d = synth::standard_normal(&mut rng);
        let sigma_d = rng.gen_range(0.5..2.0);
        let quad = quadrature_bayes(&values, mu_d, sigma_d, &budget.grid)
            .map_err(|e| CliError::config(e.to_string()))?;
        let picked = sdlist::encoding::two_point_selection(&values, mu_d, sigma_d)
            .map_err(|e| CliError::config(e.to_string()))?;
        let part = TargetPart::Numeric {
            values: values.clone(),
        };
        let stats = part.statistics();
        let closed = sdlist::encoding::bayes_normal(stats.n(), stats.variance(), picked.cost)
            .map_err(|e| CliError::config(e.to_string()))?;
        worst = worst.max((quad - closed).abs());
    }
    all_ok &= check(
        format!("bayes code, quadrature vs closed form (5 samples): max residual {worst:.3e} (bound 1e-3)"),
        worst < 1e-3,
        &mut out,
    );

    // beam search vs exhaustive enumeration in top-1 mode
    let mut agreements = 0usize;
    let runs = 10usize;
    for seed in 0..runs as u64 {
        let dataset = synth::small_binary_dataset(1000 + seed);
        let universe = generate_items(&dataset, 5);
        let params = SearchParams {
            task: ColumnKind::Nominal,
            beam_width: universe.len().max(1),
            max_depth: 4,
            n_cut: 5,
            beta: 0.0,
            top1: true,
            min_coverage: 2,
        };
        let beam = beam_search(&SubgroupList::empty(&dataset), &dataset, &params, &universe);
        let exhaustive = exhaustive_top1(&dataset, 5, 4, 2, &budget)
            .map_err(|e| CliError::config(e.to_string()))?;
        let agree = match (&beam, &exhaustive) {
            (None, None) => true,
            (Some(b), Some(e)) => b.description.display(&dataset) == e.description.display(&dataset),
            _ => false,
        };
        agreements += usize::from(agree);
    }
    all_ok &= check(
        format!("beam vs exhaustive top-1 on {runs} seeded datasets: {agreements}/{runs} agree"),
        agreements == runs,
        &mut out,
    );

    Ok((out, all_ok))
}
