//! CSV and JSON artifacts.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A table with a header row. Cells are formatted by the caller.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Body plus the `# invlab <version> config_hash=<hash>` trailer.
    pub fn render(&self, config_hash: &str) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        let _ = writeln!(out, "# invlab {VERSION} config_hash={config_hash}");
        out
    }

    pub fn write(&self, path: &Path, config_hash: &str) -> anyhow::Result<()> {
        fs::write(path, self.render(config_hash))
            .with_context(|| format!("writing {}", path.display()))
    }
}

/// Shortest round-trip representation, so output is exact and stable.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn flag(b: bool) -> String {
    b.to_string()
}

pub fn vector(v: &[f64]) -> String {
    v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(";")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_has_header_and_trailer() {
        let mut c = Csv::new(&["a", "b"]);
        c.push(vec![num(0.1), flag(true)]);
        let text = c.render("abc");
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "a,b");
        assert_eq!(lines[1], "1e-1,true");
        assert_eq!(lines[2], format!("# invlab {VERSION} config_hash=abc"));
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, -3.25e-300, 1.0 / 3.0, f64::INFINITY] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
