//! Command-line binding of ingest → analysis → report and the simulator.
//!
//! Exit codes are a stable contract for scripting: 0 success, 1 usage error
//! (bad flags or spec strings), 2 data error (unreadable input, malformed
//! rows, empty trims, unknown thread names). Every run prints its effective
//! configuration to stderr as a `#`-prefixed line so results can be
//! reproduced; tables and CSV go to stdout or `--out`.

use std::collections::HashMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    self, closed_loop_observed, closed_loop_ratios, default_checkpoints, default_thread_ordering,
    dispersion_index, interarrival_diffs, per_label_report, poisson_count_histogram,
    requests_per_interval, thread_curve,
};
use crate::ingest::{self, parse_log, HeaderMode, RecordSet, TrimWindow};
use crate::report::{
    curve_series, histogram_series, render_curve_matrix, render_histogram_data, render_ratios,
    render_summary_table, render_svg, render_thread_curve, summary_title, write_records_csv,
    OutputFormat, PlotKind,
};
use crate::simulator::{
    simulate, ClosedLoopConfig, LabelMix, OpenLoopConfig, SimConfig, SimError, SutModelSpec,
    ThinkTimeSpec, DEFAULT_EPOCH_MS,
};

/// Environment variable consulted for the default output format.
pub const FORMAT_ENV: &str = "ARRIVALKIT_FORMAT";

#[derive(Parser)]
#[command(
    name = "arrivalkit",
    version,
    about = "Measure whether a load generator launches requests independently or in bunches"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Per-event-name inter-arrival summary (gap CoV ~ 1.0 means real-user-like timing)
    Analyze(AnalyzeArgs),
    /// Gap CoV versus cumulative thread-group size
    Curve(CurveArgs),
    /// Generate a log with the open- or closed-loop simulator
    Simulate(SimulateArgs),
    /// Merge logs from several generators with per-file clock offsets
    Merge(MergeArgs),
    /// Requests-per-interval counts, dispersion index, and Poisson overlay
    Histogram(HistogramArgs),
    /// Closed-loop cycle ratios from think time, response time, and throughput
    Ratios(RatiosArgs),
}

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Input log(s); use "-" for stdin. Several inputs are merged at offset 0.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Milliseconds excluded from the start of the test
    #[arg(long, default_value_t = 0)]
    pub trim_start_ms: u64,
    /// Milliseconds excluded from the end of the test
    #[arg(long, default_value_t = 0)]
    pub trim_end_ms: u64,
    /// Keep only records with this event name
    #[arg(long)]
    pub label: Option<String>,
    /// text, csv, or json (default text; env ARRIVALKIT_FORMAT)
    #[arg(long)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print gap diagnostics (first differences, span) to stderr
    #[arg(long, short = 'v')]
    pub verbose: bool,
}

#[derive(Args)]
pub struct CurveArgs {
    /// Input log(s); several inputs render as a side-by-side CoV matrix
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Comma-separated thread names; default: numeric-suffix order
    #[arg(long)]
    pub threads_order: Option<String>,
    /// Comma-separated cumulative thread counts; default: 1-10, 15-50 by 5, 75-200 by 25
    #[arg(long)]
    pub checkpoints: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub trim_start_ms: u64,
    #[arg(long, default_value_t = 0)]
    pub trim_end_ms: u64,
    #[arg(long)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the curve as an SVG plot
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// key=value config file mirroring these flags; flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// open or closed
    #[arg(long)]
    pub mode: Option<String>,
    /// Virtual-user threads (closed loop)
    #[arg(long)]
    pub threads: Option<u32>,
    /// fixed:V | uniform:OFFSET:RANGE | exp:MEAN (milliseconds)
    #[arg(long)]
    pub think: Option<String>,
    /// zero | lognormal:MEAN:COV | queue:SERVERS:MEAN:COV
    #[arg(long)]
    pub sut: Option<String>,
    /// Simulated horizon in milliseconds
    #[arg(long)]
    pub duration_ms: Option<u64>,
    /// Arrival count (open loop)
    #[arg(long)]
    pub arrivals: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// name:weight,name:weight event mix
    #[arg(long)]
    pub labels: Option<String>,
    /// Epoch added to virtual time in emitted timestamps
    #[arg(long)]
    pub epoch_ms: Option<i64>,
    /// Write the generated CSV here (default stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct MergeArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Clock offset per input, repeatable; default 0 for every file
    #[arg(long = "offset-ms", allow_negative_numbers = true)]
    pub offsets: Vec<i64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct HistogramArgs {
    pub input: PathBuf,
    /// Interval width in milliseconds
    #[arg(long, default_value_t = 10_000.0)]
    pub bin_width_ms: f64,
    #[arg(long, default_value_t = 0)]
    pub trim_start_ms: u64,
    #[arg(long, default_value_t = 0)]
    pub trim_end_ms: u64,
    #[arg(long)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write observed-vs-theoretical bars as an SVG plot
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args)]
pub struct RatiosArgs {
    /// Mean think time Z, milliseconds
    #[arg(long)]
    pub z_mean: f64,
    /// Mean response time R, milliseconds
    #[arg(long)]
    pub r_mean: f64,
    /// Response-time standard deviation, milliseconds
    #[arg(long, default_value_t = 0.0)]
    pub r_sdev: f64,
    /// Transactions per second
    #[arg(long)]
    pub tps: f64,
    #[arg(long)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl From<ingest::IngestError> for CliError {
    fn from(e: ingest::IngestError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<analysis::AnalysisError> for CliError {
    fn from(e: analysis::AnalysisError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Parses arguments and runs one subcommand, returning the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Curve(args) => cmd_curve(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Merge(args) => cmd_merge(args),
        Command::Histogram(args) => cmd_histogram(args),
        Command::Ratios(args) => cmd_ratios(args),
    }
}

// ---- shared helpers ---------------------------------------------------------

fn resolve_format(flag: Option<OutputFormat>) -> Result<OutputFormat, CliError> {
    if let Some(f) = flag {
        return Ok(f);
    }
    match std::env::var(FORMAT_ENV) {
        Ok(value) => value
            .parse()
            .map_err(|e: String| CliError::Usage(format!("{FORMAT_ENV}: {e}"))),
        Err(_) => Ok(OutputFormat::Text),
    }
}

fn read_set(path: &Path) -> Result<RecordSet, CliError> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::Data(format!("stdin: {e}")))?;
        return Ok(parse_log(&buf[..], HeaderMode::Auto)?);
    }
    let file =
        fs::File::open(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    parse_log(file, HeaderMode::Auto)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn source_stem(path: &Path) -> String {
    if path.as_os_str() == "-" {
        return "stdin".to_string();
    }
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, content).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn trim_window(start_ms: u64, end_ms: u64) -> Result<TrimWindow, CliError> {
    TrimWindow::new(start_ms as i64, end_ms as i64).map_err(|e| CliError::Usage(e.to_string()))
}

fn load_trimmed(inputs: &[PathBuf], window: &TrimWindow) -> Result<RecordSet, CliError> {
    let mut sets = Vec::with_capacity(inputs.len());
    for path in inputs {
        sets.push((read_set(path)?, 0));
    }
    let set = if sets.len() == 1 {
        sets.pop().expect("one set").0
    } else {
        ingest::merge(sets)?
    };
    if window.is_zero() {
        Ok(set)
    } else {
        Ok(ingest::trim(&set, window)?)
    }
}

fn format_name(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Text => "text",
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    }
}

fn parse_checkpoints(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad checkpoint '{s}'")))
        })
        .collect()
}

// ---- subcommands -------------------------------------------------------------

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let format = resolve_format(args.format)?;
    let window = trim_window(args.trim_start_ms, args.trim_end_ms)?;
    eprintln!(
        "# analyze inputs={} trim-start-ms={} trim-end-ms={} label={} format={}",
        args.inputs
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>()
            .join(","),
        args.trim_start_ms,
        args.trim_end_ms,
        args.label.as_deref().unwrap_or("*"),
        format_name(format)
    );

    let set = load_trimmed(&args.inputs, &window)?;
    let set = match &args.label {
        Some(label) => ingest::filter(&set, Some(label), None),
        None => set,
    };

    if args.verbose {
        let diffs = interarrival_diffs(&set)?;
        let head: Vec<String> = diffs
            .diffs_ms
            .iter()
            .take(5)
            .map(|d| format!("{d:.0}"))
            .collect();
        eprintln!(
            "# gaps: first [{}] ms, events {}, span {:.0} ms",
            head.join(", "),
            diffs.n_events,
            diffs.window_ms
        );
    }

    let rows = per_label_report(&set)?;
    let stem = args
        .inputs
        .iter()
        .map(|p| source_stem(p))
        .collect::<Vec<_>>()
        .join("+");
    let title = summary_title(
        &stem,
        &window,
        ((set.span_ms() as f64) / 1000.0).round() as i64,
    );
    let rendered = render_summary_table(&rows, format, Some(&title));
    write_output(args.out.as_deref(), &rendered)
}

fn cmd_curve(args: CurveArgs) -> Result<(), CliError> {
    let format = resolve_format(args.format)?;
    let window = trim_window(args.trim_start_ms, args.trim_end_ms)?;
    eprintln!(
        "# curve inputs={} threads-order={} checkpoints={} trim-start-ms={} trim-end-ms={} format={}",
        args.inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(","),
        args.threads_order.as_deref().unwrap_or("default"),
        args.checkpoints.as_deref().unwrap_or("default"),
        args.trim_start_ms,
        args.trim_end_ms,
        format_name(format)
    );

    let mut curves = Vec::new();
    for path in &args.inputs {
        let set = load_trimmed(std::slice::from_ref(path), &window)?;
        let ordering: Vec<String> = match &args.threads_order {
            Some(text) => text
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect(),
            None => default_thread_ordering(&set),
        };
        if ordering.is_empty() {
            return Err(CliError::Usage("thread ordering is empty".into()));
        }
        let checkpoints = match &args.checkpoints {
            Some(text) => parse_checkpoints(text)?,
            None => default_checkpoints(ordering.len()),
        };
        let points = thread_curve(&set, &ordering, &checkpoints)?;
        curves.push((source_stem(path), points));
    }

    let rendered = if curves.len() == 1 {
        let (name, points) = &curves[0];
        let title = format!("Coefficient of Variation (gap CoV) - {name}");
        render_thread_curve(points, format, Some(&title))
    } else {
        render_curve_matrix(&curves, format, Some("Coefficient of Variation (gap CoV)"))
    };

    if let Some(svg_path) = &args.svg {
        let series: Vec<_> = curves.iter().map(|(n, p)| curve_series(n, p)).collect();
        let svg = render_svg(PlotKind::Curve, "Gap CoV vs thread-group size", &series)
            .map_err(|e| CliError::Data(e.to_string()))?;
        fs::write(svg_path, svg)
            .map_err(|e| CliError::Data(format!("{}: {e}", svg_path.display())))?;
    }
    write_output(args.out.as_deref(), &rendered)
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let config = build_sim_config(&args)?;
    eprintln!("# simulate {}", config.describe());

    let set = simulate(&config)?;
    let csv = write_records_csv(&set);

    let summary = match &config {
        SimConfig::Open(_) => {
            let diffs = interarrival_diffs(&set).map_err(|e| CliError::Data(e.to_string()))?;
            let tps = diffs.n_events as f64 / (diffs.window_ms / 1000.0);
            format!(
                "events,tps,span_s\n{},{:.2},{:.1}\n",
                set.len(),
                tps,
                diffs.window_ms / 1000.0
            )
        }
        SimConfig::Closed(_) => {
            let observed = closed_loop_observed(&set).map_err(|e| CliError::Data(e.to_string()))?;
            render_ratios(&observed, OutputFormat::Text)
        }
    };

    match &args.out {
        Some(path) => {
            fs::write(path, csv).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            print!("{summary}");
        }
        None => {
            print!("{csv}");
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn cmd_merge(args: MergeArgs) -> Result<(), CliError> {
    let offsets = if args.offsets.is_empty() {
        vec![0i64; args.inputs.len()]
    } else if args.offsets.len() == args.inputs.len() {
        args.offsets.clone()
    } else {
        return Err(CliError::Usage(format!(
            "{} inputs but {} --offset-ms values",
            args.inputs.len(),
            args.offsets.len()
        )));
    };
    eprintln!(
        "# merge inputs={} offsets-ms={}",
        args.inputs
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>()
            .join(","),
        offsets
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );

    let mut sets = Vec::with_capacity(args.inputs.len());
    for (path, offset) in args.inputs.iter().zip(&offsets) {
        sets.push((read_set(path)?, *offset));
    }
    let merged = ingest::merge(sets)?;
    write_output(args.out.as_deref(), &write_records_csv(&merged))
}

fn cmd_histogram(args: HistogramArgs) -> Result<(), CliError> {
    let format = resolve_format(args.format)?;
    let window = trim_window(args.trim_start_ms, args.trim_end_ms)?;
    eprintln!(
        "# histogram input={} bin-width-ms={} trim-start-ms={} trim-end-ms={} format={}",
        args.input.display(),
        args.bin_width_ms,
        args.trim_start_ms,
        args.trim_end_ms,
        format_name(format)
    );

    let set = load_trimmed(std::slice::from_ref(&args.input), &window)?;
    let interval = requests_per_interval(&set, args.bin_width_ms)?;
    let counts = poisson_count_histogram(&interval);
    let index = dispersion_index(&interval);

    let title = format!(
        "Requests Per Interval ({} s) - {}",
        args.bin_width_ms / 1000.0,
        source_stem(&args.input)
    );
    let rendered = match format {
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "title": title,
                "bins": interval.counts.len(),
                "count_mean": interval.count_mean(),
                "count_variance": interval.count_variance(),
                "dispersion_index": index,
                "rows": serde_json::from_str::<serde_json::Value>(
                    &render_histogram_data(&counts, OutputFormat::Json, None)
                )
                .expect("valid json")["rows"].clone(),
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )
        }
        OutputFormat::Text => {
            let mut out = render_histogram_data(&counts, OutputFormat::Text, Some(&title));
            out.push_str(&format!(
                "# bins={} mean={:.4} variance={:.4} dispersion={}\n",
                interval.counts.len(),
                interval.count_mean(),
                interval.count_variance(),
                index
                    .map(|i| format!("{i:.4}"))
                    .unwrap_or_else(|| "undef".into())
            ));
            out
        }
        OutputFormat::Csv => render_histogram_data(&counts, OutputFormat::Csv, None),
    };

    if let Some(svg_path) = &args.svg {
        let series = histogram_series(&counts);
        let svg = render_svg(PlotKind::Histogram, &title, &series)
            .map_err(|e| CliError::Data(e.to_string()))?;
        fs::write(svg_path, svg)
            .map_err(|e| CliError::Data(format!("{}: {e}", svg_path.display())))?;
    }
    write_output(args.out.as_deref(), &rendered)
}

fn cmd_ratios(args: RatiosArgs) -> Result<(), CliError> {
    let format = resolve_format(args.format)?;
    eprintln!(
        "# ratios z-mean={} r-mean={} r-sdev={} tps={} format={}",
        args.z_mean,
        args.r_mean,
        args.r_sdev,
        args.tps,
        format_name(format)
    );
    let ratios = closed_loop_ratios(args.z_mean, args.r_mean, args.r_sdev, args.tps)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    print!("{}", render_ratios(&ratios, format));
    Ok(())
}

// ---- simulate config assembly --------------------------------------------------

const CONFIG_KEYS: [&str; 9] = [
    "mode",
    "threads",
    "arrivals",
    "duration_ms",
    "think",
    "sut",
    "seed",
    "labels",
    "epoch_ms",
];

fn load_config_file(path: &Path) -> Result<HashMap<String, String>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected key=value",
                path.display(),
                idx + 1
            ))
        })?;
        let key = key.trim().replace('-', "_");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!(
                "{}:{}: unknown key '{key}'",
                path.display(),
                idx + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn build_sim_config(args: &SimulateArgs) -> Result<SimConfig, CliError> {
    let file = match &args.config {
        Some(path) => load_config_file(path)?,
        None => HashMap::new(),
    };
    let parse_key = |key: &str| -> Option<&String> { file.get(key) };

    macro_rules! pick {
        ($flag:expr, $key:literal, $parse:expr) => {
            match (&$flag, parse_key($key)) {
                (Some(v), _) => Some(v.clone()),
                (None, Some(raw)) => Some(
                    $parse(raw)
                        .map_err(|e: String| CliError::Usage(format!("config {}: {e}", $key)))?,
                ),
                (None, None) => None,
            }
        };
    }

    let parse_u64 = |raw: &String| {
        raw.parse::<u64>()
            .map_err(|_| format!("bad integer '{raw}'"))
    };
    let parse_u32 = |raw: &String| {
        raw.parse::<u32>()
            .map_err(|_| format!("bad integer '{raw}'"))
    };
    let parse_i64 = |raw: &String| {
        raw.parse::<i64>()
            .map_err(|_| format!("bad integer '{raw}'"))
    };
    let parse_string = |raw: &String| Ok::<String, String>(raw.clone());

    let mode = pick!(args.mode, "mode", parse_string).unwrap_or_else(|| "closed".to_string());
    let seed = pick!(args.seed, "seed", parse_u64).unwrap_or(0);
    let duration_ms = pick!(args.duration_ms, "duration_ms", parse_u64).unwrap_or(1_500_000);
    let epoch_ms = pick!(args.epoch_ms, "epoch_ms", parse_i64).unwrap_or(DEFAULT_EPOCH_MS);
    let labels = match pick!(args.labels, "labels", parse_string) {
        Some(text) => LabelMix::parse(&text)?,
        None => LabelMix::single(),
    };

    match mode.as_str() {
        "open" => {
            let arrivals = pick!(args.arrivals, "arrivals", parse_u64).unwrap_or(200);
            Ok(SimConfig::Open(OpenLoopConfig {
                arrivals,
                horizon_ms: duration_ms,
                seed,
                labels,
                epoch_ms,
            }))
        }
        "closed" => {
            let threads = pick!(args.threads, "threads", parse_u32).unwrap_or(200);
            let think = match pick!(args.think, "think", parse_string) {
                Some(text) => ThinkTimeSpec::parse(&text)?,
                None => ThinkTimeSpec::Uniform {
                    offset_ms: 0.0,
                    range_ms: 12_500.0,
                },
            };
            let sut = match pick!(args.sut, "sut", parse_string) {
                Some(text) => SutModelSpec::parse(&text)?,
                None => SutModelSpec::Zero,
            };
            Ok(SimConfig::Closed(ClosedLoopConfig {
                threads,
                horizon_ms: duration_ms,
                think,
                sut,
                seed,
                labels,
                epoch_ms,
            }))
        }
        other => Err(CliError::Usage(format!(
            "mode must be open or closed, got '{other}'"
        ))),
    }
}
