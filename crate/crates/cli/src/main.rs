use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use trendwave_cli::config::{AnalysisConfig, Overrides, PeriodSpec};
use trendwave_cli::error::{CliError, CliResult};
use trendwave_cli::pipeline::{self, to_json};
use trendwave_cli::verify::{self, Suite};
use trendwave_cli::{entropy, field, ingest, svg};
use trendwave_core::infocalc::information_report;

#[derive(Parser)]
#[command(name = "trendwave", version, about = "Logistic-wave decomposition of weekly rate series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract and refine logistic waves for each period; write JSON, CSV and SVG.
    Analyze(AnalyzeArgs),
    /// Write the first-pass scalogram of one period as CSV and SVG.
    Scalogram(ScalogramArgs),
    /// Refine a wave set against the data and print the fit report.
    Fit(FitArgs),
    /// Sample a (multi-)soliton field and write JSON plus an SVG of time slices.
    Soliton(SolitonArgs),
    /// Entropy, transmission and redundancy of a joint distribution in JSON.
    Entropy(EntropyArgs),
    /// Run numerical self-checks.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Print the machine-readable report instead of one line per check.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Default)]
struct GridArgs {
    #[arg(long)]
    scale_steps: Option<usize>,
    #[arg(long)]
    min_scale: Option<f64>,
    #[arg(long)]
    max_scale: Option<f64>,
    #[arg(long)]
    shift_step: Option<f64>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Weekly `date,close` CSV.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Flat `key = value` settings file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// `start:end` in week numbers or a reference period name; repeatable.
    #[arg(long = "period")]
    periods: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    max_waves: Option<usize>,
    #[arg(long)]
    saturation_floor: Option<f64>,
    #[arg(long)]
    index_floor: Option<f64>,
    #[arg(long)]
    restarts: Option<usize>,
}

#[derive(Args)]
struct ScalogramArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    period: String,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    /// Waves file written by `analyze`.
    #[arg(long, conflicts_with = "reference", required_unless_present = "reference")]
    waves: Option<PathBuf>,
    /// Start from the published waves of a reference period (e.g. `VI`).
    #[arg(long)]
    reference: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolitonArgs {
    /// Comma-separated wavenumbers.
    #[arg(long, value_delimiter = ',', required = true)]
    kappas: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    c1: f64,
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, default_value_t = 0.1)]
    dx: f64,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    t_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    t_max: f64,
    #[arg(long, default_value_t = 0.1)]
    dt: f64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct EntropyArgs {
    /// JSON file, or `-` for standard input.
    #[arg(long, default_value = "-")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> CliResult<u8> {
    match command {
        Command::Analyze(a) => analyze(a),
        Command::Scalogram(a) => scalogram(a),
        Command::Fit(a) => fit(a),
        Command::Soliton(a) => soliton(a),
        Command::Entropy(a) => entropy_cmd(a),
        Command::Verify { suite, json } => {
            let report = verify::run(suite);
            if json {
                print!("{}", to_json(&report));
            } else {
                for c in &report.checks {
                    println!("[{}] {}", c.suite, c.line());
                }
                println!("{} passed, {} failed", report.passed, report.failed);
            }
            Ok(if report.all_pass() { 0 } else { 1 })
        }
    }
}

fn parse_periods(raw: &[String]) -> CliResult<Option<Vec<PeriodSpec>>> {
    if raw.is_empty() {
        return Ok(None);
    }
    raw.iter()
        .flat_map(|s| s.split(','))
        .filter(|s| !s.trim().is_empty())
        .map(|s| PeriodSpec::parse(s).map_err(CliError::Usage))
        .collect::<CliResult<Vec<_>>>()
        .map(Some)
}

fn grid_overrides(g: &GridArgs) -> Overrides {
    Overrides {
        scale_steps: g.scale_steps,
        min_scale: g.min_scale,
        max_scale: g.max_scale,
        shift_step: g.shift_step,
        ..Overrides::default()
    }
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn analyze(a: AnalyzeArgs) -> CliResult<u8> {
    let flags = Overrides {
        input: a.input,
        out: a.out,
        periods: parse_periods(&a.periods)?,
        seed: a.seed,
        max_waves: a.max_waves,
        saturation_floor: a.saturation_floor,
        index_floor: a.index_floor,
        restarts: a.restarts,
        ..grid_overrides(&a.grid)
    };
    let config = AnalysisConfig::resolve(a.config.as_deref(), flags)?;
    let summary = pipeline::run_pipeline(&config)?;
    print!("{}", to_json(&summary));
    Ok(0)
}

fn scalogram(a: ScalogramArgs) -> CliResult<u8> {
    let config = AnalysisConfig::resolve(None, grid_overrides(&a.grid))?;
    let period = PeriodSpec::parse(&a.period).map_err(CliError::Usage)?;
    let data = ingest::ingest_csv(&a.input)?;
    let window = pipeline::period_window(&data.series, &period)?;
    let sc = pipeline::period_scalogram(&window, &config.extract_config())?;
    std::fs::create_dir_all(&a.out).map_err(|e| CliError::Io {
        path: a.out.clone(),
        source: e,
    })?;
    write_file(&a.out.join("scalogram.csv"), &sc.to_csv())?;
    write_file(
        &a.out.join("scalogram.svg"),
        &svg::heatmap(&sc, &format!("Scalogram, period {}", period.name)),
    )?;
    print!("{}", to_json(&sc.dominant()));
    Ok(0)
}

fn fit(a: FitArgs) -> CliResult<u8> {
    let data = ingest::ingest_csv(&a.input)?;
    let waves = match (&a.waves, &a.reference) {
        (Some(path), _) => pipeline::read_waves(path)?,
        (None, Some(key)) => pipeline::reference_waves(key, &data.series)?,
        (None, None) => return Err(CliError::Usage("give --waves or --reference".into())),
    };
    let mut options = waves.refine.clone();
    if let Some(s) = a.seed {
        options.seed = s;
    }
    if let Some(r) = a.restarts {
        options.restarts = r;
    }
    let result = pipeline::refit(&data.series, &waves, &options)?;
    let text = to_json(&result);
    match a.out {
        Some(path) => write_file(&path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn soliton(a: SolitonArgs) -> CliResult<u8> {
    let f = field::sample(a.kappas, a.c1, (a.x_min, a.x_max, a.dx), (a.t_min, a.t_max, a.dt))?;
    std::fs::create_dir_all(&a.out).map_err(|e| CliError::Io {
        path: a.out.clone(),
        source: e,
    })?;
    write_file(&a.out.join("soliton.json"), &to_json(&f))?;
    write_file(&a.out.join("soliton.svg"), &field::slices_svg(&f))?;
    println!(
        "{{\"residual\": {}, \"nx\": {}, \"nt\": {}}}",
        f.residual.map_or("null".to_string(), |r| r.to_string()),
        f.x.count,
        f.t.count
    );
    Ok(0)
}

fn entropy_cmd(a: EntropyArgs) -> CliResult<u8> {
    let text = if a.input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io {
                path: a.input.clone(),
                source: e,
            })?;
        s
    } else {
        std::fs::read_to_string(&a.input).map_err(|e| CliError::Io {
            path: a.input.clone(),
            source: e,
        })?
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: a.input.clone(),
        source,
    })?;
    let dist = entropy::parse_distribution(&value).map_err(CliError::Usage)?;
    let report = information_report(&dist)?;
    let out = to_json(&report);
    match a.out {
        Some(path) => write_file(&path, &out)?,
        None => print!("{out}"),
    }
    Ok(0)
}
