//! Deterministic artifact writing: fixed float formatting and atomic
//! write-temp-then-rename persistence, staged so a failing job never leaves
//! a partial file behind.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use tempfile::NamedTempFile;

/// Shortest round-trip decimal form (≤ 17 significant digits for f64);
/// negative zero collapses to "0" so equal values print identically, and
/// extreme magnitudes switch to exponent notation to stay readable.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs();
    if (1e-4..1e16).contains(&magnitude) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Real values print as plain floats; complex ones as `re+imi` / `re-imi`.
pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_f64(z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", fmt_f64(z.re), fmt_f64(-z.im))
    } else {
        format!("{}+{}i", fmt_f64(z.re), fmt_f64(z.im))
    }
}

pub fn tool_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// Collects finished file contents and renames them into place only when
/// every output of the job has been produced.
#[derive(Default)]
pub struct StagedOutputs {
    staged: Vec<(NamedTempFile, PathBuf)>,
}

impl StagedOutputs {
    pub fn new() -> Self {
        Self::default()
    }

    /// Write `contents` to a temporary file next to the final destination.
    pub fn stage(&mut self, destination: &Path, contents: &str) -> io::Result<()> {
        let dir = match destination.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&dir)?;
        let mut file = NamedTempFile::new_in(&dir)?;
        file.write_all(contents.as_bytes())?;
        file.flush()?;
        self.staged.push((file, destination.to_path_buf()));
        Ok(())
    }

    /// Atomically rename every staged file into place, returning the final
    /// paths in staging order.
    pub fn commit(self) -> io::Result<Vec<PathBuf>> {
        let mut written = Vec::with_capacity(self.staged.len());
        for (file, destination) in self.staged {
            file.persist(&destination).map_err(|e| e.error)?;
            written.push(destination);
        }
        Ok(written)
    }
}
