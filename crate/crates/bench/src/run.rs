use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use cscs_core::baselines::{
    bartels_stewart_report, bssor_solve, hss_solve, kron_oracle_report, BssorOptions, HssOptions,
};
use cscs_core::cscs::{cscs_solve, shifts_for, CscsOptions, ShiftPolicy};
use cscs_core::problems::ProblemInstance;
use cscs_core::{DenseMatrix, SolveReport, SolveStatus};

use crate::config::{BenchConfig, Method};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordStatus {
    Converged,
    /// A direct method finished.
    Completed,
    MaxIterations,
    Breakdown,
    /// The solver rejected the problem (singular, too large for the oracle, ...).
    Failed,
}

impl RecordStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordStatus::Converged => "converged",
            RecordStatus::Completed => "completed",
            RecordStatus::MaxIterations => "max_iterations",
            RecordStatus::Breakdown => "breakdown",
            RecordStatus::Failed => "failed",
        }
    }

    pub fn is_success(self) -> bool {
        matches!(self, RecordStatus::Converged | RecordStatus::Completed)
    }
}

impl fmt::Display for RecordStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub method: Method,
    pub problem: String,
    pub n: usize,
    pub m: usize,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub omega: Option<f64>,
    pub iterations: usize,
    /// Final relative residual `‖C − AX − XB‖_F / ‖C‖_F`.
    pub residual: f64,
    /// Median wall time over the timed repetitions.
    pub seconds: f64,
    pub status: RecordStatus,
    /// Solver error message for failed cells.
    pub detail: Option<String>,
}

struct Prepared {
    instance: ProblemInstance,
    a: DenseMatrix,
    b: DenseMatrix,
}

/// Runs every (problem, method) cell in problem-major order.
///
/// Each cell starts from `X⁽⁰⁾ = 0`, runs once untimed, then `repetitions`
/// timed runs whose median is reported. Solver failures become record
/// statuses; only configuration and problem-construction errors abort.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    config.validate()?;
    let prepared = config
        .problems
        .iter()
        .map(|source| {
            let instance = source.build()?;
            let (a, b) = (instance.a.to_dense(), instance.b.to_dense());
            Ok(Prepared { instance, a, b })
        })
        .collect::<Result<Vec<_>>>()?;

    let cells: Vec<(usize, Method)> = (0..prepared.len())
        .flat_map(|p| config.methods.iter().map(move |&m| (p, m)))
        .collect();
    let run = |&(p, method): &(usize, Method)| run_cell(config, &prepared[p], method);

    if !config.parallel || cells.len() < 2 {
        return Ok(cells.iter().map(run).collect());
    }

    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(cells.len());
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<BenchRecord>>> = Mutex::new(vec![None; cells.len()]);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cell) = cells.get(i) else { break };
                let record = run(cell);
                slots.lock().unwrap()[i] = Some(record);
            });
        }
    });
    Ok(slots.into_inner().unwrap().into_iter().map(|r| r.expect("every cell ran")).collect())
}

/// Shift pair for the shift-based methods. HSS has no shift theory of its
/// own here, so `auto` and multipliers borrow the CSCS selection.
fn resolve_shifts(policy: ShiftPolicy, inst: &ProblemInstance) -> (f64, f64) {
    match policy {
        ShiftPolicy::Explicit { alpha, beta } => (alpha, beta),
        ShiftPolicy::Auto => {
            let s = shifts_for(&inst.a, &inst.b);
            (s.alpha, s.beta)
        }
        ShiftPolicy::Multiplier(k) => shifts_for(&inst.a, &inst.b).scaled(k),
    }
}

fn solve_once(config: &BenchConfig, cell: &Prepared, method: Method) -> cscs_core::Result<SolveReport> {
    let inst = &cell.instance;
    match method {
        Method::Cscs => {
            let opts = CscsOptions { shifts: config.shifts, tol: config.tol, maxit: config.maxit, ..CscsOptions::default() };
            cscs_solve(&inst.a, &inst.b, &inst.c, &opts)
        }
        Method::Hss => {
            let (alpha, beta) = resolve_shifts(config.shifts, inst);
            let opts = HssOptions::new(alpha, beta).tol(config.tol).maxit(config.maxit);
            hss_solve(&cell.a, &cell.b, &inst.c, &opts)
        }
        Method::Bssor => {
            let omega = config.omega.expect("validated");
            let opts = BssorOptions::new(omega).tol(config.tol).maxit(config.maxit);
            bssor_solve(&cell.a, &cell.b, &inst.c, &opts)
        }
        Method::BartelsStewart => bartels_stewart_report(&cell.a, &cell.b, &inst.c),
        Method::Oracle => kron_oracle_report(&cell.a, &cell.b, &inst.c),
    }
}

fn run_cell(config: &BenchConfig, cell: &Prepared, method: Method) -> BenchRecord {
    let inst = &cell.instance;
    let mut record = BenchRecord {
        method,
        problem: inst.id(),
        n: inst.n(),
        m: inst.m(),
        alpha: None,
        beta: None,
        omega: None,
        iterations: 0,
        residual: f64::NAN,
        seconds: f64::NAN,
        status: RecordStatus::Failed,
        detail: None,
    };
    match method {
        Method::Hss => {
            let (alpha, beta) = resolve_shifts(config.shifts, inst);
            record.alpha = Some(alpha);
            record.beta = Some(beta);
        }
        Method::Bssor => record.omega = config.omega,
        _ => {}
    }

    // Warmup doubles as the run whose numbers are reported; the solvers are
    // deterministic, so the timed repetitions only contribute wall time.
    let report = match solve_once(config, cell, method) {
        Ok(report) => report,
        Err(err) => {
            record.status = match err {
                cscs_core::Error::Breakdown(_) => RecordStatus::Breakdown,
                _ => RecordStatus::Failed,
            };
            record.detail = Some(err.to_string());
            return record;
        }
    };
    let mut times: Vec<f64> = (0..config.repetitions)
        .map(|_| {
            let start = Instant::now();
            let _ = solve_once(config, cell, method);
            start.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    record.seconds = median(&times);

    if let (Method::Cscs, Some((alpha, beta))) = (method, report.shifts) {
        record.alpha = Some(alpha);
        record.beta = Some(beta);
    }
    record.iterations = report.iterations;
    record.residual = report.final_residual();
    record.status = if method.is_direct() {
        RecordStatus::Completed
    } else {
        match report.status {
            SolveStatus::Converged => RecordStatus::Converged,
            SolveStatus::MaxIterations => RecordStatus::MaxIterations,
            SolveStatus::Breakdown => RecordStatus::Breakdown,
        }
    };
    record
}

fn median(sorted: &[f64]) -> f64 {
    let k = sorted.len();
    if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    }
}
