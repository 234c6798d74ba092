//! Command-line front end for `spinpaint`.
//!
//! [`parse_args`] turns an argument vector into a [`CommandPlan`] without
//! touching the file system; [`run`] executes it. Every subcommand either
//! writes all of its outputs or, on failure, none of them.

mod plan;
mod run;

pub use plan::{parse_args, BenchArgs, BenchCell, CommandPlan, Kind, LossArgs};
pub use run::{bench, bench_csv, format_metric, run, run_to, BenchRow, BENCH_HEADER};
