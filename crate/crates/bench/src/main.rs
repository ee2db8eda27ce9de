use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cscs_bench::{
    emit_report, run_bench, save_problem_file, BenchConfig, BenchError, Method, OutputFormat, ProblemSource,
};
use cscs_core::cscs::{ShiftPolicy, DEFAULT_MAXIT, DEFAULT_TOL};

/// Benchmark CSCS and the baseline Sylvester solvers on generated or stored
/// Toeplitz problems.
#[derive(Debug, Parser)]
#[command(name = "cscs-bench", version)]
struct Cli {
    /// Comma-separated methods: cscs, hss, bssor, bartels_stewart, oracle.
    #[arg(long, value_delimiter = ',', default_value = "cscs")]
    method: Vec<String>,

    /// Generator: example1, cd2, example2, example3, example4.
    #[arg(long, required_unless_present = "problem_file")]
    problem: Option<String>,

    /// Problem size(s); comma-separated for a sweep.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,

    /// Second size for example2 (defaults to n).
    #[arg(long)]
    m: Option<usize>,

    #[arg(long)]
    sigma: Option<f64>,

    /// Defaults to sigma.
    #[arg(long)]
    tau: Option<f64>,

    /// Skewness parameter of example3.
    #[arg(long)]
    r: Option<f64>,

    /// centered or upwind (example1).
    #[arg(long, default_value = "centered")]
    scheme: String,

    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,

    #[arg(long, default_value_t = DEFAULT_MAXIT)]
    maxit: usize,

    #[arg(long)]
    alpha: Option<f64>,

    /// Defaults to alpha.
    #[arg(long)]
    beta: Option<f64>,

    /// Use alpha = beta = k * gamma*.
    #[arg(long, conflicts_with_all = ["alpha", "beta"])]
    shift_mult: Option<f64>,

    /// Relaxation parameter for bssor.
    #[arg(long)]
    omega: Option<f64>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Timed repetitions per cell (after one untimed warmup).
    #[arg(long, default_value_t = 3)]
    reps: usize,

    /// markdown, csv or json.
    #[arg(long, default_value = "markdown")]
    format: String,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Load the equation from a problem file instead of a generator.
    #[arg(long, conflicts_with = "problem")]
    problem_file: Option<PathBuf>,

    /// example3 right-hand side: ones (known solution) or uniform.
    #[arg(long, default_value = "ones")]
    rhs: String,

    /// example4 spectral margin (default n/4).
    #[arg(long)]
    margin: Option<f64>,

    /// Save the generated problem (single size only) and continue.
    #[arg(long)]
    save_problem: Option<PathBuf>,

    /// Run independent cells concurrently.
    #[arg(long)]
    parallel: bool,
}

fn need(value: Option<f64>, flag: &str, problem: &str) -> Result<f64, BenchError> {
    value.ok_or_else(|| BenchError::Config(format!("--problem {problem} needs --{flag}")))
}

fn problems(cli: &Cli) -> Result<Vec<ProblemSource>, BenchError> {
    if let Some(path) = &cli.problem_file {
        return Ok(vec![ProblemSource::File(path.clone())]);
    }
    let name = cli.problem.as_deref().expect("clap enforces problem or problem-file");
    if cli.n.is_empty() {
        return Err(BenchError::Config("--n is required with --problem".into()));
    }
    let square_only = |src: ProblemSource, n: usize| match cli.m {
        Some(m) if m != n => Err(BenchError::Config(format!("{name} has m = n; got --m {m}"))),
        _ => Ok(src),
    };
    cli.n
        .iter()
        .map(|&n| {
            let base = ProblemSource::generator(name).with("n", n);
            match name {
                "example1" => {
                    let sigma = need(cli.sigma, "sigma", name)?;
                    let src = base
                        .with("sigma", sigma)
                        .with("tau", cli.tau.unwrap_or(sigma))
                        .with("scheme", &cli.scheme);
                    square_only(src, n)
                }
                "cd2" => {
                    let sigma = need(cli.sigma, "sigma", name)?;
                    square_only(base.with("sigma", sigma).with("tau", cli.tau.unwrap_or(sigma)), n)
                }
                "example2" => {
                    let sigma = need(cli.sigma, "sigma", name)?;
                    Ok(base
                        .with("m", cli.m.unwrap_or(n))
                        .with("sigma1", sigma)
                        .with("sigma2", cli.tau.unwrap_or(sigma))
                        .with("seed", cli.seed))
                }
                "example3" => {
                    let src = base.with("r", need(cli.r, "r", name)?).with("rhs", &cli.rhs).with("seed", cli.seed);
                    square_only(src, n)
                }
                "example4" => {
                    let mut src = base.with("seed", cli.seed);
                    if let Some(margin) = cli.margin {
                        src = src.with("margin", margin);
                    }
                    square_only(src, n)
                }
                other => Err(BenchError::Config(format!("unknown problem `{other}`"))),
            }
        })
        .collect()
}

fn config(cli: &Cli) -> Result<(BenchConfig, OutputFormat), BenchError> {
    let methods = cli.method.iter().map(|m| m.parse()).collect::<Result<Vec<Method>, _>>()?;
    let mut config = BenchConfig::new(methods, problems(cli)?);
    config.tol = cli.tol;
    config.maxit = cli.maxit;
    config.omega = cli.omega;
    config.repetitions = cli.reps;
    config.parallel = cli.parallel;
    config.shifts = match (cli.alpha, cli.beta, cli.shift_mult) {
        (_, _, Some(k)) => ShiftPolicy::Multiplier(k),
        (Some(alpha), beta, None) => ShiftPolicy::Explicit { alpha, beta: beta.unwrap_or(alpha) },
        (None, Some(_), None) => return Err(BenchError::Config("--beta needs --alpha".into())),
        (None, None, None) => ShiftPolicy::Auto,
    };
    Ok((config, cli.format.parse()?))
}

fn run(cli: &Cli) -> Result<bool, BenchError> {
    let (config, format) = config(cli)?;
    if let Some(path) = &cli.save_problem {
        match config.problems.as_slice() {
            [single] => save_problem_file(&single.build()?, path)?,
            _ => return Err(BenchError::Config("--save-problem needs exactly one problem size".into())),
        }
    }
    let records = run_bench(&config)?;
    let report = emit_report(&records, format);
    match &cli.out {
        Some(path) => std::fs::write(path, &report).map_err(|e| BenchError::Io { path: path.clone(), source: e })?,
        None => print!("{report}"),
    }

    let failed: Vec<_> = records.iter().filter(|r| !r.status.is_success()).collect();
    for r in &failed {
        let detail = r.detail.as_deref().map(|d| format!(": {d}")).unwrap_or_default();
        eprintln!("{} on {}: {}{detail}", r.method, r.problem, r.status);
    }
    if !failed.is_empty() {
        eprintln!("{} of {} cells did not converge", failed.len(), records.len());
    }
    Ok(failed.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
