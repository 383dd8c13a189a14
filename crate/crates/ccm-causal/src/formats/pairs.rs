use ccm_causal_core::sequence::{discretize_equifrequency, discretize_equiwidth};
use ccm_causal_core::{RealSeries, SymbolicSequence};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Binning {
    #[default]
    Equiwidth,
    Equifrequency,
}

/// Reads a two-line pair file: line 1 is x, line 2 is y, values separated by
/// whitespace and/or commas. Blank lines are ignored.
///
/// With `discretize = Some((bins, binning))` the values are real numbers
/// binned per line; otherwise they must be non-negative integers and each
/// line's alphabet is one past its largest symbol.
pub fn parse_pair(text: &str, discretize: Option<(u32, Binning)>) -> Result<(SymbolicSequence, SymbolicSequence)> {
    let lines: Vec<(usize, &str)> =
        text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty()).collect();
    if lines.len() != 2 {
        let at = lines.get(2).map_or(1, |l| l.0);
        return Err(Error::format(at, format!("expected 2 non-empty lines, found {}", lines.len())));
    }
    let mut out = lines.iter().map(|&(no, line)| -> Result<SymbolicSequence> {
        let tokens = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty());
        match discretize {
            Some((bins, binning)) => {
                let values = tokens
                    .map(|t| t.parse::<f64>().map_err(|_| Error::format(no, format!("not a number: {t:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                let series = RealSeries::new(values)?;
                Ok(match binning {
                    Binning::Equiwidth => discretize_equiwidth(&series, bins)?,
                    Binning::Equifrequency => discretize_equifrequency(&series, bins)?,
                })
            }
            None => {
                let symbols = tokens
                    .map(|t| {
                        t.parse::<u32>().map_err(|_| Error::format(no, format!("not a non-negative integer: {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SymbolicSequence::from_symbols(symbols)?)
            }
        }
    });
    let x = out.next().expect("two lines")?;
    let y = out.next().expect("two lines")?;
    Ok((x, y))
}
