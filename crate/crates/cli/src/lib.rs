//! Library side of the `qec` command-line tool.

pub mod commands;
pub mod corpus;
pub mod format;
pub mod record;
pub mod verify;

use qec_core::QecError;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VERIFY_FAILED: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const PRECONDITION: u8 = 3;
    pub const INTERNAL: u8 = 4;
}

/// Exit code for a solver error.
pub fn exit_code(err: &QecError) -> u8 {
    match err {
        e if e.is_parse_error() => exit::PARSE,
        QecError::Internal(_) => exit::INTERNAL,
        _ => exit::PRECONDITION,
    }
}

/// Worker count from `QEC_THREADS`; 0, unset or unparsable means automatic.
pub fn thread_count() -> usize {
    std::env::var("QEC_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

/// Runs `f` on a pool sized by [`thread_count`].
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(thread_count()).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
