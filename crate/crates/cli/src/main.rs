use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nichebench_core::benchmark::MAX_BENCHMARK_INSTITUTIONS;
use nichebench_core::rating::DEFAULT_MIN_PUBS;
use nichebench_core::report::{self, to_pretty};
use nichebench_core::{
    benchmark, load_corpus, rate_subject, validate_corpus, Corpus, CorpusError, CorpusPaths,
    EngineError, Level, RatingQuery, Region, SubjectCode, WeightScheme, YearWindow,
};
use nichebench_service::{router, AppState, Defaults, ServiceConfig};

/// Exit status for a structural data error or a failed engine call.
const EXIT_FAILURE: u8 = 1;
/// Exit status for missing input files. Clap also uses 2 for usage errors.
const EXIT_MISSING: u8 = 2;

#[derive(Parser)]
#[command(
    name = "nichebench",
    version,
    about = "Rate and benchmark institutions by subject"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load the corpus, check references and report warnings.
    Validate {
        #[arg(long)]
        data: PathBuf,
    },
    /// Rate every institution in one subject cell.
    Rate(RateArgs),
    /// Compare up to five institutions indicator by indicator.
    Benchmark(BenchmarkArgs),
    /// Run the HTTP API.
    Serve(ServeArgs),
}

#[derive(clap::Args)]
struct Cell {
    #[arg(long)]
    subject: u32,
    #[arg(long, value_parser = parse_level)]
    level: Level,
    #[arg(long, default_value_t = YearWindow::DEFAULT)]
    years: YearWindow,
}

#[derive(clap::Args)]
struct RateArgs {
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    cell: Cell,
    /// equal, volume, quality, or five comma-separated weights in [0,100].
    #[arg(long, default_value = "equal", value_parser = parse_weights)]
    weights: WeightScheme,
    #[arg(long, default_value_t = DEFAULT_MIN_PUBS)]
    min_pubs: u64,
    #[arg(long, default_value = "ALL")]
    region: String,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct BenchmarkArgs {
    #[arg(long)]
    data: PathBuf,
    /// Comma-separated institution ids, one to five.
    #[arg(long, value_parser = parse_institutions)]
    institutions: InstitutionList,
    #[command(flatten)]
    cell: Cell,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone)]
struct InstitutionList(Vec<String>);

#[derive(clap::Args)]
struct ServeArgs {
    /// Overrides `data_dir` from the config file and NICHEBENCH_DATA.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    port: Option<u16>,
    #[arg(long)]
    host: Option<std::net::IpAddr>,
    /// TOML file with host, port, data_dir, years, min_pubs and cors.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    no_cors: bool,
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse::<u8>()
        .ok()
        .and_then(Level::from_number)
        .ok_or_else(|| format!("level must be 1, 2 or 3, got {s:?}"))
}

fn parse_weights(s: &str) -> Result<WeightScheme, String> {
    s.parse::<WeightScheme>().map_err(|e| e.to_string())
}

fn parse_institutions(s: &str) -> Result<InstitutionList, String> {
    let ids: Vec<String> = s
        .split(',')
        .map(|p| p.trim().to_string())
        .filter(|p| !p.is_empty())
        .collect();
    if ids.is_empty() {
        return Err("expected at least one institution id".into());
    }
    if ids.len() > MAX_BENCHMARK_INSTITUTIONS {
        return Err(format!(
            "at most {MAX_BENCHMARK_INSTITUTIONS} institutions can be benchmarked, got {}",
            ids.len()
        ));
    }
    Ok(InstitutionList(ids))
}

#[derive(Debug)]
enum Failure {
    Corpus(CorpusError),
    Engine(EngineError),
    Other(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Corpus(e) if e.is_missing_file() => EXIT_MISSING,
            _ => EXIT_FAILURE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Corpus(e) => write!(f, "{e}"),
            Failure::Engine(e) => write!(f, "{}: {e}", e.name()),
            Failure::Other(m) => f.write_str(m),
        }
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        Failure::Corpus(e)
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure::Engine(e)
    }
}

fn load(dir: &Path) -> Result<Corpus, Failure> {
    Ok(load_corpus(&CorpusPaths::in_dir(dir))?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn validate(data: &Path) -> Result<(), Failure> {
    let corpus = load(data)?;
    let report = validate_corpus(&corpus);
    eprintln!(
        "ok: {} publications, {} journals, {} institutions, {} warnings",
        report.summary.publications,
        report.summary.journals,
        report.summary.institutions,
        report.warnings.len()
    );
    emit(None, &to_pretty(&report::validation_json(&report)))
}

fn rate(args: RateArgs) -> Result<(), Failure> {
    let corpus = load(&args.data)?;
    let query = RatingQuery {
        window: args.cell.years,
        region: Region::from(args.region),
        subject: SubjectCode(args.cell.subject),
        level: args.cell.level,
        weights: args.weights,
        min_pubs: args.min_pubs,
    };
    let rows = rate_subject(&corpus, &query)?;
    let text = match args.format {
        Format::Json => to_pretty(&report::rating_json(&rows)),
        Format::Csv => report::rating_csv(&rows),
    };
    emit(args.out.as_deref(), &text)
}

fn bench(args: BenchmarkArgs) -> Result<(), Failure> {
    let corpus = load(&args.data)?;
    let profile = benchmark(
        &corpus,
        &args.institutions.0,
        SubjectCode(args.cell.subject),
        args.cell.level,
        args.cell.years,
    )?;
    emit(
        args.out.as_deref(),
        &to_pretty(&report::benchmark_json(&profile)),
    )
}

fn serve(args: ServeArgs) -> Result<(), Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
            ServiceConfig::from_toml(&text)
                .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?
        }
        None => ServiceConfig::default(),
    };
    cfg.apply_env(|k| std::env::var(k).ok())
        .map_err(|e| Failure::Other(e.to_string()))?;
    if let Some(d) = args.data {
        cfg.data_dir = d;
    }
    if let Some(p) = args.port {
        cfg.port = p;
    }
    if let Some(h) = args.host {
        cfg.host = h;
    }
    if args.no_cors {
        cfg.cors = false;
    }

    // a bad data directory must fail before the port is taken
    let corpus = load(&cfg.data_dir)?;
    let defaults = Defaults {
        window: cfg.default_window,
        min_pubs: cfg.default_min_pubs,
    };
    let app = router(AppState::ready(corpus, defaults), cfg.cors);

    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| Failure::Other(format!("cannot start runtime: {e}")))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(cfg.addr())
            .await
            .map_err(|e| Failure::Other(format!("cannot bind {}: {e}", cfg.addr())))?;
        nichebench_service::serve(listener, app)
            .await
            .map_err(|e| Failure::Other(format!("server error: {e}")))
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { data } => validate(&data),
        Command::Rate(args) => rate(args),
        Command::Benchmark(args) => bench(args),
        Command::Serve(args) => serve(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
