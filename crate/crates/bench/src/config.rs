use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use cscs_core::cscs::{ShiftPolicy, DEFAULT_MAXIT, DEFAULT_TOL};
use cscs_core::problems::{
    convection_diffusion_cd2, convection_diffusion_example1, example2_instance, example3_instance_with,
    example4_default_margin, example4_instance_with_margin, ProblemInstance, ProblemMeta, RhsMode, Scheme,
};

use crate::error::{BenchError, Result};
use crate::problem_file::load_problem_file;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Cscs,
    Hss,
    Bssor,
    BartelsStewart,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Cscs, Method::Hss, Method::Bssor, Method::BartelsStewart, Method::Oracle];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Cscs => "cscs",
            Method::Hss => "hss",
            Method::Bssor => "bssor",
            Method::BartelsStewart => "bartels_stewart",
            Method::Oracle => "oracle",
        }
    }

    /// Direct methods report one "iteration" and a `completed` status.
    pub fn is_direct(self) -> bool {
        matches!(self, Method::BartelsStewart | Method::Oracle)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "cscs" => Ok(Method::Cscs),
            "hss" => Ok(Method::Hss),
            "bssor" => Ok(Method::Bssor),
            "bartels_stewart" | "bs" => Ok(Method::BartelsStewart),
            "oracle" | "kron" => Ok(Method::Oracle),
            other => Err(BenchError::config(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Markdown,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(BenchError::config(format!("unknown format `{other}`"))),
        }
    }
}

/// Where a cell's equation comes from: a named generator with its parameter
/// map, or a problem file.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    Generator(ProblemMeta),
    File(PathBuf),
}

impl ProblemSource {
    pub fn generator(name: &str) -> Self {
        ProblemSource::Generator(ProblemMeta::new(name))
    }

    pub fn with(self, key: &str, value: impl ToString) -> Self {
        match self {
            ProblemSource::Generator(meta) => ProblemSource::Generator(meta.with(key, value)),
            file => file,
        }
    }

    pub fn build(&self) -> Result<ProblemInstance> {
        match self {
            ProblemSource::File(path) => load_problem_file(path),
            ProblemSource::Generator(meta) => build_generator(meta),
        }
    }
}

struct Params<'a>(&'a ProblemMeta);

impl Params<'_> {
    fn raw(&self, key: &str) -> Result<&str> {
        self.0
            .get(key)
            .ok_or_else(|| BenchError::config(format!("{} needs parameter `{key}`", self.0.generator)))
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.raw(key)?;
        raw.parse()
            .map_err(|_| BenchError::config(format!("{}: cannot parse {key}={raw}", self.0.generator)))
    }

    fn parse_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        if self.0.get(key).is_some() {
            self.parse(key)
        } else {
            Ok(default)
        }
    }
}

fn build_generator(meta: &ProblemMeta) -> Result<ProblemInstance> {
    let p = Params(meta);
    let instance = match meta.generator.as_str() {
        "example1" => {
            let scheme: Scheme = p.raw("scheme").unwrap_or("centered").parse()?;
            convection_diffusion_example1(p.parse("n")?, p.parse("sigma")?, p.parse("tau")?, scheme)?
        }
        "cd2" => convection_diffusion_cd2(p.parse("n")?, p.parse("sigma")?, p.parse("tau")?)?,
        "example2" => example2_instance(
            p.parse("n")?,
            p.parse("m")?,
            p.parse("sigma1")?,
            p.parse("sigma2")?,
            p.parse_or("seed", 0)?,
        )?,
        "example3" => {
            let rhs = match p.raw("rhs").unwrap_or("ones") {
                "ones" => RhsMode::Ones,
                "uniform" => RhsMode::Uniform { seed: p.parse_or("seed", 0)? },
                other => return Err(BenchError::config(format!("example3: unknown rhs `{other}`"))),
            };
            example3_instance_with(p.parse("n")?, p.parse("r")?, rhs)?
        }
        "example4" => {
            let n: usize = p.parse("n")?;
            let margin = p.parse_or("margin", example4_default_margin(n))?;
            example4_instance_with_margin(n, p.parse_or("seed", 0)?, margin)?
        }
        other => return Err(BenchError::config(format!("unknown problem generator `{other}`"))),
    };
    Ok(instance)
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub methods: Vec<Method>,
    pub problems: Vec<ProblemSource>,
    pub tol: f64,
    pub maxit: usize,
    pub shifts: ShiftPolicy,
    pub omega: Option<f64>,
    pub repetitions: usize,
    /// Run independent cells on separate threads.
    pub parallel: bool,
}

impl BenchConfig {
    pub fn new(methods: Vec<Method>, problems: Vec<ProblemSource>) -> Self {
        Self {
            methods,
            problems,
            tol: DEFAULT_TOL,
            maxit: DEFAULT_MAXIT,
            shifts: ShiftPolicy::Auto,
            omega: None,
            repetitions: 3,
            parallel: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(BenchError::config("no methods selected"));
        }
        if self.problems.is_empty() {
            return Err(BenchError::config("no problems selected"));
        }
        if !(self.tol > 0.0) {
            return Err(BenchError::config(format!("tol must be positive, got {}", self.tol)));
        }
        if self.maxit == 0 {
            return Err(BenchError::config("maxit must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(BenchError::config("repetitions must be at least 1"));
        }
        match self.shifts {
            ShiftPolicy::Explicit { alpha, beta } if !(alpha.is_finite() && beta.is_finite()) => {
                return Err(BenchError::config("shifts must be finite"));
            }
            ShiftPolicy::Multiplier(k) if !(k > 0.0 && k.is_finite()) => {
                return Err(BenchError::config(format!("shift multiplier must be positive, got {k}")));
            }
            _ => {}
        }
        if self.methods.contains(&Method::Bssor) {
            match self.omega {
                None => return Err(BenchError::config("bssor needs a relaxation parameter (omega)")),
                Some(w) if !(w > 0.0 && w < 2.0) => {
                    return Err(BenchError::config(format!("omega must lie in (0, 2), got {w}")));
                }
                _ => {}
            }
        }
        Ok(())
    }
}
