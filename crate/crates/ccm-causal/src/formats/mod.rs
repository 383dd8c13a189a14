//! Readers and writers for the files the tool consumes and produces.

mod fasta;
mod header;
mod manifest;
mod pairs;
mod tables;

pub use fasta::{parse_fasta, write_fasta, FastaRecord};
pub use header::RunHeader;
pub use manifest::parse_manifest;
pub use pairs::{parse_pair, Binning};
pub use tables::{read_csv, write_csv, write_json};
