use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::args::Cli;
use crate::CliError;

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a Value,
    config_hash: String,
    timestamp: u64,
    passed: bool,
    result: Value,
}

/// Seconds since the epoch, or `SOURCE_DATE_EPOCH` when set.
fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or_else(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        })
}

pub fn config_of(cli: &Cli) -> Value {
    serde_json::json!({
        "seed": cli.seed,
        "out": cli.out,
        "format": cli.format,
        "symbolic_limit": cli.symbolic_limit,
        "command": cli.command,
    })
}

pub fn hash(config: &Value) -> String {
    let bytes = serde_json::to_vec(config).expect("config serializes");
    hex::encode(Sha256::digest(bytes))
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn write_json(cli: &Cli, command: &str, passed: bool, result: Value) -> Result<(), CliError> {
    let config = config_of(cli);
    let env = Envelope {
        tool: "distsep",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config_hash: hash(&config),
        config: &config,
        timestamp: timestamp(),
        passed,
        result,
    };
    let mut text = serde_json::to_string_pretty(&env).expect("report serializes");
    text.push('\n');
    emit(cli, &text)
}

pub fn write_csv<T: Serialize>(cli: &Cli, rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.into()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    emit(cli, &String::from_utf8(bytes).expect("csv is utf-8"))
}
