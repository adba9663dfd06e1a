//! CSV and text rendering.

use std::path::Path;

use crate::CliError;

/// A file produced by a command, rendered in memory before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct OutFile {
    pub name: &'static str,
    pub contents: String,
}

/// 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn csv(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Usage(format!("csv encoding failed: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Usage(format!("csv encoding failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `# fracres <command>` header with a UTC timestamp.
pub fn report_header(command: &str) -> String {
    format!(
        "# fracres {command}\n# generated {}\n",
        chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
    )
}

pub fn write_all(dir: &Path, files: &[OutFile]) -> Result<(), CliError> {
    if files.is_empty() {
        return Ok(());
    }
    std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })?;
    for f in files {
        let path = dir.join(f.name);
        std::fs::write(&path, &f.contents).map_err(|source| CliError::Write { path, source })?;
    }
    Ok(())
}
