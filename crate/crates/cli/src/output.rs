use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

/// A CSV side table, already rendered.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub text: String,
}

impl Table {
    pub fn build<I, R>(name: &str, header: &[&str], rows: I) -> csv::Result<Table>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
    {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(Table {
            name: name.to_string(),
            text: String::from_utf8(bytes).expect("csv output is UTF-8"),
        })
    }
}

/// `sha256` over the canonical config and the bytes of every input file, in
/// a fixed order.
pub fn inputs_digest(config: &Value, inputs: &[(String, Vec<u8>)]) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(config).expect("config serializes"));
    for (name, bytes) in inputs {
        h.update((name.len() as u64).to_le_bytes());
        h.update(name.as_bytes());
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    let hex: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a half-written file.
pub fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> std::io::Result<()> {
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(dir.join(name)).map_err(|e| e.error)?;
    Ok(())
}

/// Side files first, `report.json` last.
pub fn write_outputs(dir: &Path, files: &[(String, Vec<u8>)], report: &Value) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for (name, bytes) in files {
        write_atomic(dir, name, bytes)?;
    }
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    write_atomic(dir, "report.json", text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_depends_on_inputs() {
        let cfg = serde_json::json!({"command": "chow"});
        let a = inputs_digest(&cfg, &[("toric".into(), b"{}".to_vec())]);
        let b = inputs_digest(&cfg, &[("toric".into(), b"{ }".to_vec())]);
        assert_ne!(a, b);
        assert_eq!(a, inputs_digest(&cfg, &[("toric".into(), b"{}".to_vec())]));
        assert!(a.starts_with("sha256:") && a.len() == 7 + 64);
    }

    #[test]
    fn tables_render_with_header() {
        let t = Table::build("t.csv", &["m", "w"], vec![vec!["1".to_string(), "-1/2".to_string()]]).unwrap();
        assert_eq!(t.text, "m,w\n1,-1/2\n");
    }
}
