use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, Result};

/// Fixed-width scientific notation; 17 significant digits round-trip.
pub fn num(x: f64) -> String {
    // adding zero folds -0 into 0
    format!("{:.16e}", x + 0.0)
}

pub fn to_json<T: Serialize>(value: &T, indent: usize) -> String {
    let mut buf = Vec::new();
    if indent == 0 {
        serde_json::to_writer(&mut buf, value).expect("serializable");
    } else {
        let pad = vec![b' '; indent];
        let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
        value.serialize(&mut ser).expect("serializable");
    }
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// Comma-separated table held in memory until written.
pub struct Table {
    rows: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut rows = csv::Writer::from_writer(Vec::new());
        rows.write_record(header).expect("in-memory write");
        Table { rows }
    }

    pub fn push(&mut self, values: &[f64]) {
        self.rows.write_record(values.iter().map(|&x| num(x))).expect("in-memory write");
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.rows.into_inner().expect("in-memory flush")
    }
}

/// Writes `bytes` to `path`, or to standard output without one.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
