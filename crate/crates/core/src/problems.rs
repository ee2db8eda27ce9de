//! Generators for the convection–diffusion and dense Toeplitz test families.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::toeplitz::{DenseMatrix, SpectralSplit, ToeplitzSpec};

/// Generator name plus its parameters, stored as text so every generator
/// shares one shape.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProblemMeta {
    pub generator: String,
    pub params: BTreeMap<String, String>,
}

impl ProblemMeta {
    pub fn new(generator: impl Into<String>) -> Self {
        Self { generator: generator.into(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key).and_then(|v| v.parse().ok())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub a: ToeplitzSpec,
    pub b: ToeplitzSpec,
    pub c: DenseMatrix,
    pub meta: ProblemMeta,
    pub x_true: Option<DenseMatrix>,
}

impl ProblemInstance {
    pub fn new(a: ToeplitzSpec, b: ToeplitzSpec, c: DenseMatrix, meta: ProblemMeta, x_true: Option<DenseMatrix>) -> Result<Self> {
        let shape = (a.order(), b.order());
        if c.shape() != shape {
            return Err(Error::dims(format!("C of shape {}x{}", shape.0, shape.1), format!("{}x{}", c.nrows(), c.ncols())));
        }
        if let Some(x) = &x_true {
            if x.shape() != shape {
                return Err(Error::dims(
                    format!("X_true of shape {}x{}", shape.0, shape.1),
                    format!("{}x{}", x.nrows(), x.ncols()),
                ));
            }
        }
        Ok(Self { a, b, c, meta, x_true })
    }

    pub fn n(&self) -> usize {
        self.a.order()
    }

    pub fn m(&self) -> usize {
        self.b.order()
    }

    /// Short identifier such as `example3(n=64,r=0.01)`.
    pub fn id(&self) -> String {
        let params: Vec<String> = self.meta.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", self.meta.generator, params.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Centered,
    Upwind,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Centered => "centered",
            Scheme::Upwind => "upwind",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "centered" => Ok(Scheme::Centered),
            "upwind" => Ok(Scheme::Upwind),
            other => Err(Error::input(format!("unknown scheme '{other}' (expected centered or upwind)"))),
        }
    }
}

/// Five-point stencil values `(a, b, c, d, e)` after scaling by `h²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl Stencil {
    pub fn new(scheme: Scheme, sigma: f64, tau: f64, h: f64) -> Result<Self> {
        match scheme {
            Scheme::Centered => Ok(Self {
                a: 4.0,
                b: -(1.0 + tau * h / 2.0),
                c: -(1.0 + sigma * h / 2.0),
                d: -(1.0 - sigma * h / 2.0),
                e: -(1.0 - tau * h / 2.0),
            }),
            Scheme::Upwind => {
                if sigma < 0.0 || tau < 0.0 {
                    return Err(Error::input(format!("upwind scheme needs sigma, tau >= 0, got {sigma}, {tau}")));
                }
                Ok(Self {
                    a: 4.0 + (sigma + tau) * h,
                    b: -(1.0 + tau * h),
                    c: -(1.0 + sigma * h),
                    d: -1.0,
                    e: -1.0,
                })
            }
        }
    }
}

fn grid_rhs(n: usize, m: usize, h: f64) -> DenseMatrix {
    DenseMatrix::from_fn(n, m, |i, j| {
        let (x, y) = ((i + 1) as f64 * h, (j + 1) as f64 * h);
        Complex64::new(h * h * (x + y).exp(), 0.0)
    })
}

fn uniform_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = DenseMatrix::zeros(rows, cols);
    // fill column by column so the draw order matches column-major storage
    for z in out.iter_mut() {
        *z = Complex64::new(rng.random::<f64>(), 0.0);
    }
    out
}

fn ones(n: usize, m: usize) -> DenseMatrix {
    DenseMatrix::from_element(n, m, Complex64::new(1.0, 0.0))
}

fn ones_rhs(a: &ToeplitzSpec, b: &ToeplitzSpec) -> (DenseMatrix, DenseMatrix) {
    let x = ones(a.order(), b.order());
    let c = a.to_dense() * &x + &x * b.to_dense();
    (c, x)
}

fn check_order(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        return Err(Error::input(format!("{what} must be at least {min}, got {n}")));
    }
    Ok(())
}

/// `AX + XAᵀ = V` from the five-point convection–diffusion stencil, with
/// `A = tridiag(c, a/2, d)` and `v_ij = h²·e^{ih + jh}`.
///
/// The reduction to a Sylvester equation needs `b = c` and `e = d`, which for
/// both schemes means `sigma == tau`.
pub fn convection_diffusion_example1(n: usize, sigma: f64, tau: f64, scheme: Scheme) -> Result<ProblemInstance> {
    check_order(n, 2, "n")?;
    if sigma != tau {
        return Err(Error::input(format!(
            "the Sylvester form needs equal velocities, got sigma={sigma}, tau={tau}"
        )));
    }
    let h = 1.0 / (n + 1) as f64;
    let s = Stencil::new(scheme, sigma, tau, h)?;
    let a = ToeplitzSpec::tridiagonal(n, s.c, s.a / 2.0, s.d)?;
    let b = ToeplitzSpec::tridiagonal(n, s.d, s.a / 2.0, s.c)?;
    let meta = ProblemMeta::new("example1")
        .with("n", n)
        .with("sigma", sigma)
        .with("tau", tau)
        .with("h", h)
        .with("scheme", scheme);
    ProblemInstance::new(a, b, grid_rhs(n, n, h), meta, None)
}

/// `A = tridiag(−1 + τh/2, 2, −1 − τh/2)`, `B = tridiag(−1 + σh/2, 2, −1 − σh/2)`.
pub fn convection_diffusion_cd2(n: usize, sigma: f64, tau: f64) -> Result<ProblemInstance> {
    check_order(n, 2, "n")?;
    let h = 1.0 / (n + 1) as f64;
    let a = ToeplitzSpec::tridiagonal(n, -1.0 + tau * h / 2.0, 2.0, -1.0 - tau * h / 2.0)?;
    let b = ToeplitzSpec::tridiagonal(n, -1.0 + sigma * h / 2.0, 2.0, -1.0 - sigma * h / 2.0)?;
    let meta = ProblemMeta::new("cd2").with("n", n).with("sigma", sigma).with("tau", tau).with("h", h);
    ProblemInstance::new(a, b, grid_rhs(n, n, h), meta, None)
}

fn five_diagonal(n: usize, sigma: f64) -> Result<ToeplitzSpec> {
    let h = 1.0 / (n + 1) as f64;
    let s = Stencil::new(Scheme::Centered, sigma, sigma, h)?;
    let r = |x: f64| Complex64::new(x, 0.0);
    let k = n as isize;
    ToeplitzSpec::from_diagonals(n * n, &[(0, r(s.a)), (1, r(s.c)), (-1, r(s.d)), (k, r(s.b)), (-k, r(s.e))])
}

/// Orders `n²` and `m²`: the five-point matrix with constant diagonals at
/// offsets `0, ±1, ±n`, and a uniform `[0, 1)` right-hand side.
pub fn example2_instance(n: usize, m: usize, sigma1: f64, sigma2: f64, seed: u64) -> Result<ProblemInstance> {
    check_order(n, 2, "n")?;
    check_order(m, 2, "m")?;
    let a = five_diagonal(n, sigma1)?;
    let b = five_diagonal(m, sigma2)?;
    let c = uniform_matrix(n * n, m * m, seed);
    let meta = ProblemMeta::new("example2")
        .with("n", n)
        .with("m", m)
        .with("sigma1", sigma1)
        .with("sigma2", sigma2)
        .with("seed", seed);
    ProblemInstance::new(a, b, c, meta, None)
}

/// Right-hand side used by [`example3_instance_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhsMode {
    /// `C = A·1 + 1·B`, so the solution is all ones.
    Ones,
    /// Entries uniform in `[0, 1)`.
    Uniform { seed: u64 },
}

/// `A = B = tridiag(−1 + r, 2 + 100/(n+1)², −1 − r)` with the all-ones solution.
pub fn example3_instance(n: usize, r: f64) -> Result<ProblemInstance> {
    example3_instance_with(n, r, RhsMode::Ones)
}

pub fn example3_instance_with(n: usize, r: f64, rhs: RhsMode) -> Result<ProblemInstance> {
    check_order(n, 2, "n")?;
    if !(r > 0.0) {
        return Err(Error::input(format!("r must be positive, got {r}")));
    }
    let diag = 2.0 + 100.0 / ((n + 1) as f64).powi(2);
    let a = ToeplitzSpec::tridiagonal(n, -1.0 + r, diag, -1.0 - r)?;
    let mut meta = ProblemMeta::new("example3").with("n", n).with("r", r);
    let (c, x_true) = match rhs {
        RhsMode::Ones => {
            let (c, x) = ones_rhs(&a, &a);
            meta = meta.with("rhs", "ones");
            (c, Some(x))
        }
        RhsMode::Uniform { seed } => {
            meta = meta.with("rhs", "uniform").with("seed", seed);
            (uniform_matrix(n, n, seed), None)
        }
    };
    ProblemInstance::new(a.clone(), a, c, meta, x_true)
}

/// Default spectral margin for [`example4_instance`]: `n/4`.
pub fn example4_default_margin(n: usize) -> f64 {
    n as f64 / 4.0
}

/// Dense Toeplitz `A = B = C_A + S_A` built from random circulant and
/// skew-circulant parts shifted to have spectra at least `n/4` into the right
/// half-plane; the solution is all ones.
pub fn example4_instance(n: usize, seed: u64) -> Result<ProblemInstance> {
    example4_instance_with_margin(n, seed, example4_default_margin(n))
}

pub fn example4_instance_with_margin(n: usize, seed: u64, margin: f64) -> Result<ProblemInstance> {
    check_order(n, 2, "n")?;
    if !margin.is_finite() {
        return Err(Error::input(format!("margin must be finite, got {margin}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let circ: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let skew: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();

    let re = |x: f64| Complex64::new(x, 0.0);
    let col: Vec<Complex64> = (0..n).map(|l| re(circ[l] + skew[l])).collect();
    let row: Vec<Complex64> = (0..n)
        .map(|l| if l == 0 { col[0] } else { re(circ[n - l] - skew[n - l]) })
        .collect();
    let raw = ToeplitzSpec::new(col.clone(), row.clone())?;

    // The canonical splitting halves t_0 between the parts, so one common
    // shift μ of both parts is 2μ on the diagonal of T.
    let split = SpectralSplit::new(&raw);
    let min_re = |v: &[Complex64]| v.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let mu = margin - min_re(&split.circ_eigs).min(min_re(&split.skew_eigs));
    let mut col = col;
    let mut row = row;
    col[0] += 2.0 * mu;
    row[0] = col[0];
    let a = ToeplitzSpec::new(col, row)?;

    let (c, x) = ones_rhs(&a, &a);
    let meta = ProblemMeta::new("example4")
        .with("n", n)
        .with("seed", seed)
        .with("margin", margin)
        .with("mu", mu);
    ProblemInstance::new(a.clone(), a, c, meta, Some(x))
}
