use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Reads a `sequence_id,group` CSV (with that header row) into a map.
/// Duplicate ids are an error.
pub fn parse_manifest(text: &str) -> Result<BTreeMap<String, String>> {
    #[derive(serde::Deserialize)]
    struct Row {
        sequence_id: String,
        group: String,
    }
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes());
    let mut out = BTreeMap::new();
    for row in reader.deserialize::<Row>() {
        let row = row?;
        let line = out.len() + 2;
        if out.insert(row.sequence_id.clone(), row.group).is_some() {
            return Err(Error::format(line, format!("duplicate sequence id {:?}", row.sequence_id)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_groups() {
        let m = parse_manifest("sequence_id,group\ns1, Italy\ns2,USA\n").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m["s1"], "Italy");
    }

    #[test]
    fn header_is_required_and_ids_unique() {
        assert!(parse_manifest("id,country\ns1,X\n").is_err());
        assert!(parse_manifest("sequence_id,group\ns1,X\ns1,Y\n").is_err());
    }
}
