use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};

/// Floats are written with 17 significant digits, independent of locale.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn numbers(&mut self, values: &[f64]) {
        self.row(values.iter().map(|&v| num(v)).collect());
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Book-keeping for one command: resolved configuration and written files,
/// flushed into a key=value manifest at the end.
pub struct Run {
    argv: Vec<String>,
    started: Instant,
    config: Vec<(String, String)>,
    outputs: Vec<PathBuf>,
    manifest: Option<PathBuf>,
}

pub const MANIFEST_NAME: &str = "manifest.txt";

impl Run {
    pub fn new(argv: Vec<String>) -> Self {
        Self {
            argv,
            started: Instant::now(),
            config: Vec::new(),
            outputs: Vec::new(),
            manifest: None,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Display) {
        self.config.push((key.to_string(), value.to_string()));
    }

    /// Writes `csv` to `path`, or to stdout when `path` is `None`. The
    /// manifest goes next to the first file written.
    pub fn emit(&mut self, path: Option<&Path>, csv: &Csv) -> Result<()> {
        match path {
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                }
                fs::write(path, csv.render()).with_context(|| format!("writing {}", path.display()))?;
                if self.manifest.is_none() {
                    let mut name = path.as_os_str().to_owned();
                    name.push(".manifest.txt");
                    self.manifest = Some(PathBuf::from(name));
                }
                self.outputs.push(path.to_path_buf());
            }
            None => {
                std::io::stdout()
                    .lock()
                    .write_all(csv.render().as_bytes())
                    .context("writing to stdout")?;
            }
        }
        Ok(())
    }

    /// Writes `csv` as `dir/name`.
    pub fn emit_in(&mut self, dir: &Path, name: &str, csv: &Csv) -> Result<()> {
        self.manifest = Some(dir.join(MANIFEST_NAME));
        self.emit(Some(&dir.join(name)), csv)
    }

    pub fn render_manifest(&self) -> Result<String> {
        let mut out = String::from("# heralding run manifest\n");
        out.push_str(&format!("version={}\n", env!("CARGO_PKG_VERSION")));
        for arg in &self.argv {
            if arg.contains('\n') {
                bail!("command line arguments must not contain newlines");
            }
            out.push_str(&format!("arg={arg}\n"));
        }
        for (k, v) in &self.config {
            out.push_str(&format!("config.{k}={v}\n"));
        }
        for path in &self.outputs {
            out.push_str(&format!("output={}\n", path.display()));
        }
        out.push_str(&format!("duration_s={:.3}\n", self.started.elapsed().as_secs_f64()));
        Ok(out)
    }

    /// Writes the manifest next to the outputs, or to stderr if everything
    /// went to stdout.
    pub fn finish(self) -> Result<Option<PathBuf>> {
        let text = self.render_manifest()?;
        match &self.manifest {
            Some(path) => {
                fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            None => eprint!("{text}"),
        }
        Ok(self.manifest)
    }
}

/// Parsed manifest: the recorded command line and output files.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub argv: Vec<String>,
    pub config: Vec<(String, String)>,
    pub outputs: Vec<PathBuf>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        let mut m = Manifest {
            argv: Vec::new(),
            config: Vec::new(),
            outputs: Vec::new(),
        };
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("manifest line {}: expected key=value", i + 1);
            };
            match key {
                "arg" => m.argv.push(value.to_string()),
                "output" => m.outputs.push(PathBuf::from(value)),
                _ => {
                    if let Some(k) = key.strip_prefix("config.") {
                        m.config.push((k.to_string(), value.to_string()));
                    }
                }
            }
        }
        if m.argv.is_empty() {
            bail!("manifest records no command line");
        }
        Ok(m)
    }

    pub fn config(&self, key: &str) -> Option<&str> {
        self.config.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}
