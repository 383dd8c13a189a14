//! Causal direction inference between discrete symbolic sequences using
//! grammar-based compression-complexity measures.
//!
//! Two measures are provided: LZ76 phrase complexity ([`lz`]) and
//! Effort-To-Compress via non-sequential recursive pair substitution
//! ([`etc`]). The grammar inferred from one sequence is used to compress the
//! other, and the direction in which this works better is taken as the
//! causal one ([`causal`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, parallel batch
//! runners and the command-line tool live in the `ccm-causal` crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod causal;
mod error;
pub mod etc;
pub mod eval;
pub mod lz;
pub mod rng;
pub mod sequence;
pub mod simulate;
pub mod stats;

pub use causal::{CausalConfig, CausalVerdict, Direction, Model};
pub use error::{Error, Result};
pub use etc::{etc_compress, etc_conditional, normalized_etc, Grammar};
pub use lz::{lz76, lz_joint, JoinOrder, LzCount};
pub use sequence::{RealSeries, Symbol, SymbolicSequence};
