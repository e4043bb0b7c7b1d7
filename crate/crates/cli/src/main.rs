use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use mlnsim::engine::{compare_schemes, load_scenario_file, run_mission, Scenario, SCENARIO_SCHEMA};
use mlnsim::export::{comparison_table, figure_table, records_table, Figure, Format, Table};
use mlnsim::metrics::{ReliabilityMode, RfScenario};
use mlnsim::schemes::Scheme;

#[derive(Parser)]
#[command(name = "mlnsim", version, about = "Multi-layer satellite network simulator for telecommand delivery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the mission and write one record per (target, sample, scheme, scenario).
    Run(RunArgs),
    /// Per-satellite GS access fractions over the mission window.
    Access(AccessArgs),
    /// Plot-ready data series, one file per figure.
    Figures(FiguresArgs),
    /// Print the scenario document schema.
    Schema,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file, or `default` for the built-in mission.
    #[arg(long)]
    config: String,
    /// Comma-separated subset of mln,traditional,geo_only,leo_mln.
    #[arg(long, value_delimiter = ',', value_parser = parse_scheme)]
    schemes: Option<Vec<Scheme>>,
    /// Comma-separated subset of S1,S2,S3,S4.
    #[arg(long, value_delimiter = ',', value_parser = parse_scenario)]
    scenarios: Option<Vec<RfScenario>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    stochastic: Option<Switch>,
    #[arg(long, value_parser = parse_mode)]
    reliability_mode: Option<ReliabilityMode>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Sample spacing in seconds, overriding T_sample.
    #[arg(long)]
    step: Option<f64>,
    /// Records destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
    /// Also write the scheme comparison table here.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct AccessArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Access sampling step in seconds.
    #[arg(long, default_value_t = 60.0)]
    step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
}

#[derive(Args)]
struct FiguresArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Mission sample spacing in seconds, overriding T_sample.
    #[arg(long)]
    step: Option<f64>,
    /// Sampling step of the access series, seconds.
    #[arg(long, default_value_t = 60.0)]
    access_step: f64,
    /// Output directory; one `<series>.<format>` file per series.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
    /// Comma-separated subset of hops,pathlen,latency,resilience,reliability,access.
    #[arg(long, value_delimiter = ',', value_parser = parse_figure)]
    series: Option<Vec<Figure>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse()
}

fn parse_scenario(s: &str) -> Result<RfScenario, String> {
    s.parse()
}

fn parse_mode(s: &str) -> Result<ReliabilityMode, String> {
    s.parse()
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn parse_figure(s: &str) -> Result<Figure, String> {
    s.parse()
}

fn load(args: &ScenarioArgs, step: Option<f64>) -> Result<Scenario> {
    let mut s = if args.config == "default" {
        Scenario::default_mission()
    } else {
        load_scenario_file(Path::new(&args.config)).with_context(|| format!("loading {}", args.config))?
    };
    if let Some(list) = &args.schemes {
        s.schemes = dedup(list);
    }
    if let Some(list) = &args.scenarios {
        s.scenarios = dedup(list);
    }
    if let Some(seed) = args.seed {
        s.seed = seed;
    }
    if let Some(sw) = args.stochastic {
        s.stochastic_failures = matches!(sw, Switch::On);
    }
    if let Some(mode) = args.reliability_mode {
        s.reliability_mode = mode;
    }
    if let Some(step) = step {
        s.t_sample = step;
    }
    s.validate()?;
    Ok(s)
}

fn dedup<T: PartialEq + Copy>(items: &[T]) -> Vec<T> {
    let mut out = Vec::new();
    for &x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn write_table(table: &Table, format: Format, dest: Option<&Path>) -> Result<()> {
    match dest {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            table.write(format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let scenario = load(&args.scenario, args.step)?;
    let report = run_mission(&scenario)?;
    info!("{} records, {} stale positions", report.records.len(), report.stale_positions);
    write_table(&records_table(&report.records), args.format, args.out.as_deref())?;
    let comparison = comparison_table(&compare_schemes(&report));
    match &args.summary {
        Some(path) => write_table(&comparison, args.format, Some(path))?,
        None if args.out.is_some() => {
            let mut err = io::stderr().lock();
            comparison.write_csv(&mut err)?;
        }
        None => {}
    }
    Ok(())
}

fn cmd_access(args: &AccessArgs) -> Result<()> {
    let scenario = load(&args.scenario, None)?;
    let placeholder = empty_report();
    let table = figure_table(Figure::Access, &scenario, &placeholder, args.step)?;
    write_table(&table, args.format, args.out.as_deref())
}

fn empty_report() -> mlnsim::engine::MissionReport {
    mlnsim::engine::MissionReport { records: Vec::new(), summary: Default::default(), stale_positions: 0 }
}

fn cmd_figures(args: &FiguresArgs) -> Result<()> {
    let series = args.series.clone().unwrap_or_else(|| Figure::ALL.to_vec());
    if series.is_empty() {
        bail!("select at least one series");
    }
    let scenario = load(&args.scenario, args.step)?;
    let needs_run = series.iter().any(|f| *f != Figure::Access);
    let report = if needs_run { run_mission(&scenario)? } else { empty_report() };
    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let ext = match args.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    for fig in dedup(&series) {
        let table = figure_table(fig, &scenario, &report, args.access_step)?;
        let path = args.out.join(format!("{fig}.{ext}"));
        write_table(&table, args.format, Some(&path))?;
        info!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Access(a) => cmd_access(a),
        Command::Figures(a) => cmd_figures(a),
        Command::Schema => {
            print!("{SCENARIO_SCHEMA}");
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
