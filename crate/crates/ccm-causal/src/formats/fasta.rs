use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    /// First whitespace-delimited word of the header line.
    pub id: String,
    /// Body lines joined with all whitespace removed; not yet validated.
    pub sequence: String,
}

/// Splits FASTA text into records, one per `>` line.
///
/// Bodies may span several lines. Encoding is left to the caller so that an
/// ambiguous record can be skipped without failing the whole file.
pub fn parse_fasta(text: &str) -> Result<Vec<FastaRecord>> {
    let mut records: Vec<FastaRecord> = Vec::new();
    let mut header_line = 0;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if let Some(header) = line.strip_prefix('>') {
            close(&records, header_line)?;
            let id = header.split_whitespace().next().unwrap_or_default();
            if id.is_empty() {
                return Err(Error::format(line_no, "header without identifier"));
            }
            records.push(FastaRecord { id: id.to_owned(), sequence: String::new() });
            header_line = line_no;
        } else if let Some(rec) = records.last_mut() {
            rec.sequence.extend(line.chars().filter(|c| !c.is_whitespace()));
        } else if !line.trim().is_empty() {
            return Err(Error::format(line_no, "sequence data before the first header"));
        }
    }
    if records.is_empty() {
        return Err(Error::format(1, "no FASTA records"));
    }
    close(&records, header_line)?;
    Ok(records)
}

fn close(records: &[FastaRecord], header_line: usize) -> Result<()> {
    match records.last() {
        Some(r) if r.sequence.is_empty() => {
            Err(Error::format(header_line, format!("record {:?} has an empty body", r.id)))
        }
        _ => Ok(()),
    }
}

/// FASTA text with bodies wrapped at `width` characters (0 = no wrapping).
pub fn write_fasta(records: &[FastaRecord], width: usize) -> String {
    let mut out = String::new();
    for r in records {
        out.push('>');
        out.push_str(&r.id);
        out.push('\n');
        let chars: Vec<char> = r.sequence.chars().collect();
        let chunk = if width == 0 { chars.len().max(1) } else { width };
        for line in chars.chunks(chunk) {
            out.extend(line);
            out.push('\n');
        }
    }
    out
}
