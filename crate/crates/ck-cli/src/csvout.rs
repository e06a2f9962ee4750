//! Deterministic CSV emission: comma separated, `.` decimal point, 17
//! significant digits, LF line endings, header row first. Identical input
//! produces byte-identical output.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * self.rows.len() * self.header.len());
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                // 17 significant digits: 1 leading + 16 fractional.
                out.push_str(&format!("{v:.16e}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)
            .with_context(|| format!("creating {}", path.display()))?;
        f.write_all(self.to_csv().as_bytes())
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

/// Write the metadata sidecar next to a CSV: `<path>.meta.json`.
pub fn write_sidecar(path: &Path, meta: &serde_json::Value) -> Result<()> {
    let sidecar = sidecar_path(path);
    let text = serde_json::to_string_pretty(meta)?;
    std::fs::write(&sidecar, text.as_bytes())
        .with_context(|| format!("writing {}", sidecar.display()))?;
    Ok(())
}

pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(".meta.json");
    std::path::PathBuf::from(s)
}
