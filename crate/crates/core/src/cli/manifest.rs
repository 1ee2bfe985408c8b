use std::io::Write;
use std::path::Path;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Record of one run: provenance, emitted files, stage timings and checks.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunManifest {
    pub config_hash: String,
    /// Paths relative to the output directory, in emission order.
    pub files: Vec<String>,
    pub stages: Vec<(String, f64)>,
    pub checks: Vec<CheckOutcome>,
}

impl RunManifest {
    pub fn new(config_hash: String) -> Self {
        Self {
            config_hash,
            ..Self::default()
        }
    }

    pub fn add_file(&mut self, name: &str) {
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_string());
        }
    }

    pub fn record(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    /// True when every executed check passed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "config_hash {}", self.config_hash)?;
        for f in &self.files {
            writeln!(w, "file {f}")?;
        }
        for (stage, secs) in &self.stages {
            writeln!(w, "stage {stage} {secs:.3}s")?;
        }
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            writeln!(w, "check {} {verdict} {}", c.name, c.detail)?;
        }
        writeln!(w, "result {}", if self.all_passed() { "PASS" } else { "FAIL" })?;
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        std::fs::write(path, buf)?;
        Ok(())
    }
}
