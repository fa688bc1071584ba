use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::GameResult;
use crate::auction::Transaction;

/// One line of a `transactions.jsonl` file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LogRecord {
    Result { result: GameResult },
    Transaction(Transaction),
}

/// Writes one transaction per line followed by the result record.
pub fn write_log<W: Write>(mut w: W, transactions: &[Transaction], result: &GameResult) -> io::Result<()> {
    for t in transactions {
        serde_json::to_writer(&mut w, t)?;
        w.write_all(b"\n")?;
    }
    serde_json::to_writer(&mut w, &LogRecord::Result { result: result.clone() })?;
    w.write_all(b"\n")?;
    w.flush()
}

pub fn read_log<R: BufRead>(r: R) -> io::Result<Vec<LogRecord>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?);
    }
    Ok(out)
}

/// Hex SHA-256 of a log's bytes.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
