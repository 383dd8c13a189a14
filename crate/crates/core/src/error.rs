use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// A sequence or series with no elements.
    Empty,
    /// A symbol id at or above the declared alphabet size.
    SymbolOutOfRange { index: usize, symbol: u32, alphabet_size: u32 },
    /// NaN or infinity in a real-valued series.
    NonFinite { index: usize },
    /// A sequence shorter than an operation requires.
    TooShort { len: usize, min: usize },
    /// A parameter outside its domain (bins, trim, confidence, ...).
    InvalidParameter(&'static str),
    /// A character that is not one of A, C, G, T.
    AmbiguousNucleotide { position: usize, found: char },
    /// Both sequences of a pair are the same.
    IdenticalSequences,
    /// Paired inputs with different lengths.
    LengthMismatch { left: usize, right: usize },
    /// Target symbols overlap the fresh ids of a grammar.
    GrammarCollision { symbol: u32, first_fresh: u32 },
    /// Malformed grammar text.
    GrammarSyntax { line: usize },
    /// Both groups have zero winsorized variance.
    DegenerateVariance,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Empty => f.write_str("empty input"),
            Error::SymbolOutOfRange { index, symbol, alphabet_size } => {
                write!(f, "symbol {symbol} at index {index} is outside alphabet of size {alphabet_size}")
            }
            Error::NonFinite { index } => write!(f, "non-finite value at index {index}"),
            Error::TooShort { len, min } => {
                write!(f, "sequence of length {len} is too short (need at least {min})")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::AmbiguousNucleotide { position, found } => {
                write!(f, "ambiguous nucleotide {found:?} at position {position}")
            }
            Error::IdenticalSequences => f.write_str("identical sequences"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::GrammarCollision { symbol, first_fresh } => {
                write!(f, "target symbol {symbol} collides with grammar ids starting at {first_fresh}")
            }
            Error::GrammarSyntax { line } => write!(f, "malformed grammar rule on line {line}"),
            Error::DegenerateVariance => f.write_str("both groups have zero winsorized variance"),
        }
    }
}

impl core::error::Error for Error {}
