use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::RunHeader;
use crate::error::Result;

/// Writes the header comment line, a column row, then one row per item.
pub fn write_csv<W: Write, T: Serialize>(
    mut out: W,
    header: &RunHeader,
    rows: impl IntoIterator<Item = T>,
) -> Result<()> {
    writeln!(out, "{}", header.comment_line()).map_err(csv::Error::from)?;
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Reads rows written by [`write_csv`]; `#` lines are skipped.
pub fn read_csv<R: Read, T: DeserializeOwned>(input: R) -> Result<Vec<T>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    Ok(r.deserialize().collect::<Result<Vec<T>, _>>()?)
}

/// Pretty-printed `{"run": <header>, "results": <value>}` plus a newline.
pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, header: &RunHeader, results: &T) -> Result<()> {
    let doc = serde_json::json!({ "run": header.to_json(), "results": results });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n").map_err(serde_json::Error::io)?;
    Ok(())
}
