//! Benchmark harness around `cscs-core`: problem construction, solver
//! dispatch, timing and report emission.

pub mod config;
pub mod error;
pub mod problem_file;
pub mod report;
pub mod run;

pub use config::{BenchConfig, Method, OutputFormat, ProblemSource};
pub use error::{BenchError, Result};
pub use problem_file::{load_problem_file, parse_problem, render_problem, save_problem_file};
pub use report::{emit_report, sig6};
pub use run::{run_bench, BenchRecord, RecordStatus};
