//! Symbolic sequences, real-valued series and the conversions between them.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type Symbol = u32;

/// A non-empty sequence of symbol ids, all below `alphabet_size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicSequence {
    symbols: Vec<Symbol>,
    alphabet_size: u32,
}

impl SymbolicSequence {
    pub fn new(symbols: Vec<Symbol>, alphabet_size: u32) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((index, &symbol)) = symbols.iter().enumerate().find(|(_, &s)| s >= alphabet_size) {
            return Err(Error::SymbolOutOfRange { index, symbol, alphabet_size });
        }
        Ok(Self { symbols, alphabet_size })
    }

    /// Builds a sequence whose alphabet is just large enough for its symbols.
    pub fn from_symbols(symbols: Vec<Symbol>) -> Result<Self> {
        let alphabet = symbols.iter().max().map_or(0, |&m| m + 1);
        Self::new(symbols, alphabet)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    /// Same symbols over a larger alphabet. Never shrinks the alphabet.
    pub fn widened(&self, alphabet_size: u32) -> Self {
        Self { symbols: self.symbols.clone(), alphabet_size: alphabet_size.max(self.alphabet_size) }
    }

    /// True when every symbol equals the first (includes length 1).
    pub fn is_constant(&self) -> bool {
        self.symbols.iter().all(|&s| s == self.symbols[0])
    }

    /// Concatenation over the union alphabet.
    pub fn concat(&self, other: &Self) -> Self {
        let mut symbols = Vec::with_capacity(self.len() + other.len());
        symbols.extend_from_slice(&self.symbols);
        symbols.extend_from_slice(&other.symbols);
        Self { symbols, alphabet_size: self.alphabet_size.max(other.alphabet_size) }
    }
}

/// A series of finite real values.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSeries(Vec<f64>);

impl RealSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Unbiased sample variance; zero for fewer than two values.
    pub fn variance(&self) -> f64 {
        let n = self.0.len();
        if n < 2 {
            return 0.0;
        }
        let mean = self.0.iter().sum::<f64>() / n as f64;
        self.0.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
    }
}

fn check_binning(series: &RealSeries, bins: u32) -> Result<()> {
    if bins < 2 {
        return Err(Error::InvalidParameter("bins must be at least 2"));
    }
    if series.is_empty() {
        return Err(Error::Empty);
    }
    Ok(())
}

/// Equi-width binning over `[min, max]`.
///
/// Bins are half-open `[lo, hi)` except the last, which is closed at `max`,
/// so a value sitting on an interior edge lands in the upper bin. A constant
/// series maps to all zeros.
pub fn discretize_equiwidth(series: &RealSeries, bins: u32) -> Result<SymbolicSequence> {
    check_binning(series, bins)?;
    let values = series.values();
    let (min, max) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = max - min;
    let symbols = values
        .iter()
        .map(|&v| {
            if span <= 0.0 {
                return 0;
            }
            let k = libm::floor((v - min) * bins as f64 / span);
            if k < 0.0 {
                0
            } else {
                (k as u32).min(bins - 1)
            }
        })
        .collect();
    SymbolicSequence::new(symbols, bins)
}

/// Equi-frequency binning: value of stable rank `r` (of `n`) goes to bin
/// `floor(r * bins / n)`. Equal values share the bin of the lowest rank in
/// their tie group, so a constant series maps to all zeros.
pub fn discretize_equifrequency(series: &RealSeries, bins: u32) -> Result<SymbolicSequence> {
    check_binning(series, bins)?;
    let values = series.values();
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut symbols = alloc::vec![0u32; n];
    let mut group_bin = 0u32;
    for (rank, &idx) in order.iter().enumerate() {
        if rank == 0 || values[order[rank - 1]] != values[idx] {
            group_bin = ((rank as u64 * bins as u64) / n as u64) as u32;
        }
        symbols[idx] = group_bin;
    }
    SymbolicSequence::new(symbols, bins)
}

const NUCLEOTIDES: [char; 4] = ['A', 'C', 'G', 'T'];

/// Maps A, C, G, T (any case) to 1, 2, 3, 4. Id 0 is left unused so the
/// labels stay literal; the alphabet size is 5.
pub fn encode_nucleotides(text: &str) -> Result<SymbolicSequence> {
    let mut symbols = Vec::with_capacity(text.len());
    for (position, c) in text.chars().enumerate() {
        let id = match c.to_ascii_uppercase() {
            'A' => 1,
            'C' => 2,
            'G' => 3,
            'T' => 4,
            found => return Err(Error::AmbiguousNucleotide { position, found }),
        };
        symbols.push(id);
    }
    SymbolicSequence::new(symbols, 5)
}

/// Inverse of [`encode_nucleotides`]; `None` if a symbol is not 1..=4.
pub fn decode_nucleotides(seq: &SymbolicSequence) -> Option<String> {
    seq.symbols()
        .iter()
        .map(|&s| match s {
            1..=4 => Some(NUCLEOTIDES[s as usize - 1]),
            _ => None,
        })
        .collect()
}
