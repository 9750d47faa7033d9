use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gfp_core::asymptotics::{self, Functional};
use gfp_core::interaction::{self, PerimeterBreakdown};
use gfp_core::kernel;
use gfp_core::spectral;
use gfp_core::{Error, InteractionConfig, QuadratureSpec, Region, ScalarField};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "gfp",
    version,
    about = "Fractional Gaussian perimeters and their small-order limits"
)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "GFP_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the subordinated kernel K_sigma(x, y).
    Kernel(KernelArgs),
    /// Fractional Gaussian perimeter P_s(E; Omega).
    Perimeter(FunctionalArgs),
    /// Euclidean-kernel perimeter J^lambda_s(E; Omega).
    Jlambda(FunctionalArgs),
    /// s * P_s(E; Omega) over a list of orders, with a fitted s -> 0 limit.
    Sweep(SweepArgs),
    /// Closed-form limit mu(E; Omega).
    Limit(LimitArgs),
    /// Spectral seminorm of an indicator or a Hermite polynomial.
    Spectral(SpectralArgs),
    /// Lower bounds for the perimeter of the interval-union example.
    Example(ExampleArgs),
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum kernel evaluations per interaction.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// Relative tolerance of each kernel value.
    #[arg(long, value_parser = parse_tol)]
    tol: Option<f64>,
    /// Output file, written atomically.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl Common {
    fn config(&self) -> InteractionConfig {
        let mut spec = QuadratureSpec::default();
        if let Some(t) = self.tol {
            spec.rel_tol = t;
        }
        InteractionConfig {
            spec,
            budget: self.budget,
            seed: self.seed,
            ..InteractionConfig::default()
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct KernelArgs {
    #[arg(long, value_parser = parse_sigma)]
    sigma: f64,
    /// Comma-separated coordinates.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    x: Vec<f64>,
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    y: Vec<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SetArgs {
    /// JSON set document for E.
    #[arg(long = "set")]
    set: PathBuf,
    /// JSON set document for Omega (defaults to the whole space).
    #[arg(long)]
    omega: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FunctionalArgs {
    #[command(flatten)]
    sets: SetArgs,
    #[arg(long = "s", value_parser = parse_order)]
    s: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FunctionalName {
    Perimeter,
    Jlambda,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    sets: SetArgs,
    /// Comma-separated orders, strictly decreasing.
    #[arg(long = "s-list", value_delimiter = ',', value_parser = parse_order,
          default_value = "0.5,0.25,0.125,0.0625,0.03125,0.015625,0.0078125,0.00390625")]
    s_list: Vec<f64>,
    #[arg(long, value_enum, default_value_t = FunctionalName::Perimeter)]
    functional: FunctionalName,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct LimitArgs {
    #[command(flatten)]
    sets: SetArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FieldName {
    /// Indicator of the set given by --set.
    Chi,
    /// Normalised Hermite polynomial with multi-index --alpha.
    Hermite,
}

#[derive(Args, Debug)]
struct SpectralArgs {
    #[arg(long, value_enum)]
    u: FieldName,
    #[arg(long = "set")]
    set: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<usize>>,
    #[arg(long = "s", value_parser = parse_order)]
    s: f64,
    /// Truncation degree (default: |alpha| + 4 for Hermite fields, 100000 for
    /// one-dimensional indicators, 40 otherwise).
    #[arg(long)]
    degree: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ExampleArgs {
    /// Number of interval pairs J.
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    #[arg(long = "s", value_parser = parse_order, default_value_t = 0.5)]
    s: f64,
    /// Also compute the perimeter of the truncated set by quadrature.
    #[arg(long)]
    direct: bool,
    #[command(flatten)]
    common: Common,
}

fn parse_open(v: &str, hi: f64, name: &str) -> Result<f64, String> {
    let x: f64 = v.trim().parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x < hi {
        Ok(x)
    } else {
        Err(format!("{name} must lie in (0, {hi}), got {x}"))
    }
}

fn parse_sigma(v: &str) -> Result<f64, String> {
    parse_open(v, 2.0, "sigma")
}

fn parse_order(v: &str) -> Result<f64, String> {
    parse_open(v, 1.0, "s")
}

fn parse_tol(v: &str) -> Result<f64, String> {
    let x: f64 = v.trim().parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x <= 1e-2 {
        Ok(x)
    } else {
        Err(format!("tol must lie in (0, 1e-2], got {x}"))
    }
}

enum Failure {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Numeric(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numeric(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SingularInput
            | Error::InvalidArgument(_)
            | Error::InvalidSet(_)
            | Error::DimensionMismatch { .. }
            | Error::DegreeCap { .. }
            | Error::TooFewRows { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

/// Text written to --out plus the value and error for the summary line.
struct Report {
    csv: String,
    json: String,
    value: f64,
    error: f64,
}

fn read_region(path: &Path) -> Result<Region, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_sets(sets: &SetArgs) -> Result<(Region, Region), Failure> {
    let e = read_region(&sets.set)?;
    let omega = match &sets.omega {
        Some(p) => read_region(p)?,
        None => Region::full(e.dimension()),
    };
    if omega.dimension() != e.dimension() {
        return Err(Error::DimensionMismatch {
            expected: e.dimension(),
            got: omega.dimension(),
        }
        .into());
    }
    Ok((e, omega))
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn json_text(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json value serialises");
    s.push('\n');
    s
}

fn breakdown_report(s: f64, p: &PerimeterBreakdown) -> Report {
    let mut csv = String::from("s,value,error,method\n");
    let _ = writeln!(
        csv,
        "{},{},{},{}",
        s,
        p.total.value,
        p.total.error,
        p.total.method.name()
    );
    Report {
        csv,
        json: json_text(json!({ "s": s, "breakdown": p })),
        value: p.total.value,
        error: p.total.error,
    }
}

fn run_kernel(a: &KernelArgs) -> Result<Report, Failure> {
    let cfg = a.common.config();
    let kv = kernel::kernel_k(a.sigma, &a.x, &a.y, &cfg.spec)?;
    let coords = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
    let csv = format!(
        "sigma,x,y,value,error_bound\n{},{},{},{},{}\n",
        a.sigma,
        coords(&a.x),
        coords(&a.y),
        kv.value,
        kv.error_bound
    );
    let json = json_text(json!({ "sigma": a.sigma, "x": a.x, "y": a.y, "kernel": kv }));
    Ok(Report {
        csv,
        json,
        value: kv.value,
        error: kv.error_bound,
    })
}

fn run_functional(a: &FunctionalArgs, which: Functional) -> Result<Report, Failure> {
    let (e, omega) = read_sets(&a.sets)?;
    let cfg = a.common.config();
    let p = match which {
        Functional::Perimeter => interaction::perimeter(&e, &omega, a.s, &cfg)?,
        Functional::JLambda => interaction::j_lambda(&e, &omega, a.s, &cfg)?,
    };
    Ok(breakdown_report(a.s, &p))
}

fn run_sweep(a: &SweepArgs) -> Result<Report, Failure> {
    let (e, omega) = read_sets(&a.sets)?;
    let which = match a.functional {
        FunctionalName::Perimeter => Functional::Perimeter,
        FunctionalName::Jlambda => Functional::JLambda,
    };
    let r = asymptotics::sweep_functional(which, &e, &omega, &a.s_list, &a.common.config())?;
    let mut json = r.to_json();
    json.push('\n');
    Ok(Report {
        csv: r.to_csv(),
        json,
        value: r.extrapolated_limit,
        error: r.uncertainty,
    })
}

fn run_limit(a: &LimitArgs) -> Result<Report, Failure> {
    let (e, omega) = read_sets(&a.sets)?;
    let mc = gfp_core::measure::McConfig {
        seed: a.common.seed,
        ..Default::default()
    };
    let l = asymptotics::mu_limit_with(&e, &omega, &mc)?;
    let csv = format!(
        "mu,error,closed_form\n{},{},{}\n",
        l.mu,
        l.error,
        l.is_closed_form()
    );
    Ok(Report {
        csv,
        json: json_text(json!({ "limit": l })),
        value: l.mu,
        error: l.error,
    })
}

fn run_spectral(a: &SpectralArgs) -> Result<Report, Failure> {
    let (field, dim) = match a.u {
        FieldName::Chi => {
            let path = a
                .set
                .as_ref()
                .ok_or_else(|| Failure::Usage("--u chi needs --set".into()))?;
            let region = read_region(path)?;
            let dim = region.dimension();
            (ScalarField::indicator(&region), dim)
        }
        FieldName::Hermite => {
            let alpha = a
                .alpha
                .clone()
                .ok_or_else(|| Failure::Usage("--u hermite needs --alpha".into()))?;
            let dim = alpha.len();
            (ScalarField::hermite(alpha)?, dim)
        }
    };
    let degree = a.degree.unwrap_or(match (&a.u, &a.alpha) {
        (FieldName::Hermite, Some(alpha)) => alpha.iter().sum::<usize>() + 4,
        _ if dim == 1 => 100_000,
        _ => 40,
    });
    let order = (2 * degree + 2).max(64);
    let expansion = spectral::expand(&field, degree, order)?;
    let sn = spectral::spectral_seminorm_sq(&expansion, a.s)?;
    let limit = spectral::ms_limit(&expansion);
    let csv = format!(
        "s,value,truncation,scaled_estimate,small_order_limit\n{},{},{},{},{}\n",
        sn.s,
        sn.value,
        sn.truncation,
        sn.scaled_estimate(),
        limit
    );
    let json = json_text(json!({
        "degree": degree,
        "seminorm": sn,
        "scaled_estimate": sn.scaled_estimate(),
        "small_order_limit": limit,
    }));
    Ok(Report {
        csv,
        json,
        value: sn.value,
        error: sn.truncation,
    })
}

fn run_example(a: &ExampleArgs) -> Result<Report, Failure> {
    let cfg = a.common.config();
    let b = asymptotics::divergent_example(a.pairs, a.s, a.direct.then_some(&cfg))?;
    let direct = b.direct.map(|d| d.value.to_string()).unwrap_or_default();
    let direct_err = b.direct.map(|d| d.error.to_string()).unwrap_or_default();
    let csv = format!(
        "pairs,s,lower_bound,bracket_bound,direct,direct_error\n{},{},{},{},{},{}\n",
        b.pairs, b.s, b.lower_bound, b.bracket_bound, direct, direct_err
    );
    let (value, error) = match b.direct {
        Some(d) => (d.value, d.error),
        None => (b.lower_bound, 0.0),
    };
    Ok(Report {
        csv,
        json: json_text(json!({ "example": b })),
        value,
        error,
    })
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(Failure::Usage("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot start worker pool: {e}")))?;
    }
    let (name, common, report) = match &cli.command {
        Command::Kernel(a) => ("kernel", &a.common, run_kernel(a)?),
        Command::Perimeter(a) => (
            "perimeter",
            &a.common,
            run_functional(a, Functional::Perimeter)?,
        ),
        Command::Jlambda(a) => (
            "jlambda",
            &a.common,
            run_functional(a, Functional::JLambda)?,
        ),
        Command::Sweep(a) => ("sweep", &a.common, run_sweep(a)?),
        Command::Limit(a) => ("limit", &a.common, run_limit(a)?),
        Command::Spectral(a) => ("spectral", &a.common, run_spectral(a)?),
        Command::Example(a) => ("example", &a.common, run_example(a)?),
    };
    if let Some(path) = &common.out {
        let text = match common.format {
            Format::Csv => &report.csv,
            Format::Json => &report.json,
        };
        write_atomic(path, text)?;
    }
    println!("{name} value={} err={}", report.value, report.error);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("gfp: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
