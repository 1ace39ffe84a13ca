//! JSON envelopes and CSV writers shared by the subcommands.

use std::path::{Path, PathBuf};
use std::time::Instant;

use qsw::{QswError, Result};
use serde::Serialize;

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    command: &'a str,
    version: &'a str,
    seed: u64,
    wall_clock_s: f64,
    config: &'a C,
    result: &'a R,
}

/// Writes `{command, version, seed, wall_clock_s, config, result}`.
pub fn write_envelope<C: Serialize, R: Serialize>(
    path: &Path,
    command: &str,
    seed: u64,
    started: Instant,
    config: &C,
    result: &R,
) -> Result<()> {
    let env = Envelope {
        command,
        version: env!("CARGO_PKG_VERSION"),
        seed,
        wall_clock_s: started.elapsed().as_secs_f64(),
        config,
        result,
    };
    let text = serde_json::to_string_pretty(&env).map_err(|e| QswError::Io(e.to_string()))?;
    ensure_parent(path)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    ensure_parent(path)?;
    let io = |e: csv::Error| QswError::Io(e.to_string());
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// `prefix` with `ext` appended, keeping any dots already in the name.
pub fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => Ok(std::fs::create_dir_all(p)?),
        _ => Ok(()),
    }
}
