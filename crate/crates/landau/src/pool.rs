//! Worker pool sized by `LANDAU_THREADS`.

use crate::error::{CliError, CliResult};

pub const THREADS_VAR: &str = "LANDAU_THREADS";

/// Parses the thread cap; `None` means available parallelism.
pub fn thread_cap(value: Option<&str>) -> CliResult<Option<usize>> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_VAR} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

pub fn build() -> CliResult<rayon::ThreadPool> {
    let cap = thread_cap(std::env::var(THREADS_VAR).ok().as_deref())?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cap {
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Runtime(format!("cannot start worker pool: {e}")))
}
