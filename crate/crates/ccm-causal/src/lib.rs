//! File formats, parallel batch runners and the `ccm-causal` command-line
//! tool on top of [`ccm_causal_core`].
//!
//! The core crate holds the compressors, causal models, benchmark generator
//! and statistics; everything here is plumbing around them: FASTA, pair and
//! manifest readers, CSV/JSON writers with reproducibility headers, and
//! worker pools whose results never depend on the number of threads.

#![forbid(unsafe_code)]

pub mod bench;
pub mod cli;
mod error;
pub mod formats;
pub mod pipeline;

pub use error::{Error, Result};

/// Runs `f` on a dedicated pool of `jobs` threads (0 = one per logical core).
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| Error::Pool(e.to_string()))?;
    Ok(pool.install(f))
}
