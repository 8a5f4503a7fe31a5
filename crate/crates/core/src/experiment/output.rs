use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use tempfile::TempDir;

use crate::error::Result;

/// Collects a run's files in a hidden directory next to the destination
/// and moves them into place only once the whole run succeeded.
pub struct OutputWriter {
    staging: TempDir,
    comment: String,
    files: Vec<String>,
}

impl OutputWriter {
    pub fn new(out_dir: &Path, seed: u64) -> Result<Self> {
        let parent = match out_dir.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&parent)?;
        let staging = tempfile::Builder::new()
            .prefix(".predgain-")
            .tempdir_in(&parent)?;
        Ok(Self {
            staging,
            comment: format!("# seed={seed},version={}", super::VERSION),
            files: Vec::new(),
        })
    }

    /// CSV whose header and rows are produced by `body`; the seed/version
    /// comment line is written first.
    pub fn csv_with(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut dyn Write) -> Result<()>,
    ) -> Result<()> {
        let mut out = BufWriter::new(File::create(self.staging.path().join(name))?);
        writeln!(out, "{}", self.comment)?;
        body(&mut out)?;
        out.flush()?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn csv<I, R>(&mut self, name: &str, header: &str, rows: I) -> Result<()>
    where
        I: IntoIterator<Item = R>,
        R: std::fmt::Display,
    {
        self.csv_with(name, |out| {
            writeln!(out, "{header}")?;
            for row in rows {
                writeln!(out, "{row}")?;
            }
            Ok(())
        })
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(self.staging.path().join(name), text)?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    /// Moves every staged file into `out_dir`, replacing same-named files.
    pub fn promote(self, out_dir: &Path) -> Result<Vec<PathBuf>> {
        let targets: Vec<PathBuf> = self.files.iter().map(|f| out_dir.join(f)).collect();
        if !out_dir.exists() {
            let staged = self.staging.keep();
            if fs::rename(&staged, out_dir).is_ok() {
                return Ok(targets);
            }
            fs::create_dir_all(out_dir)?;
            for f in &self.files {
                fs::rename(staged.join(f), out_dir.join(f))?;
            }
            fs::remove_dir_all(&staged)?;
            return Ok(targets);
        }
        for f in &self.files {
            fs::rename(self.staging.path().join(f), out_dir.join(f))?;
        }
        Ok(targets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_lands_until_promoted() {
        let root = tempfile::tempdir().unwrap();
        let out = root.path().join("run");
        let mut w = OutputWriter::new(&out, 7).unwrap();
        w.csv("a.csv", "x,y", ["1,2"]).unwrap();
        assert!(!out.exists());
        let files = w.promote(&out).unwrap();
        let text = fs::read_to_string(&files[0]).unwrap();
        assert_eq!(
            text,
            format!("# seed=7,version={}\nx,y\n1,2\n", super::super::VERSION)
        );
        // a second run into the existing directory replaces the file
        let mut w = OutputWriter::new(&out, 8).unwrap();
        w.csv("a.csv", "x", ["3"]).unwrap();
        w.promote(&out).unwrap();
        assert!(fs::read_to_string(out.join("a.csv"))
            .unwrap()
            .ends_with("x\n3\n"));
        let leftovers = fs::read_dir(root.path()).unwrap().count();
        assert_eq!(leftovers, 1);
    }
}
