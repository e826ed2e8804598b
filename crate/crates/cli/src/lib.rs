//! Std companion to `qsl-core`: a thread-pool sweep runner and the CSV/JSON
//! writers behind the `qsl` binary.

pub mod output;
pub mod parallel;

pub use output::{fmt_num, write_sweep_csv, ComputeRecord};
pub use parallel::run_sweep_parallel;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INVALID_INPUT: i32 = 2;
    pub const CONVERGENCE: i32 = 3;
}

/// Exit code for a core error.
pub fn exit_code(err: &qsl_core::Error) -> i32 {
    if err.is_convergence() {
        exit::CONVERGENCE
    } else {
        exit::INVALID_INPUT
    }
}
