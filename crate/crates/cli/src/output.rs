use anyhow::{Context, Result};
use num_complex::Complex64;
use painleve_core::format::sci;
use serde::Serialize;
use std::path::{Path, PathBuf};

pub struct Sink {
    pub dir: PathBuf,
    pub written: Vec<PathBuf>,
}

impl Sink {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Sink { dir: dir.to_path_buf(), written: Vec::new() })
    }

    pub fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.text(name, &s)
    }
}

/// CSV with a header row and `%.12e` cells.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.iter().map(|x| sci(*x)).collect::<Vec<_>>().join(","));
        s.push('\n');
    }
    s
}

pub fn points_csv(points: &[Complex64]) -> String {
    csv(&["re", "im"], points.iter().map(|z| vec![z.re, z.im]))
}
