//! Run manifests: a plain-text record of what a command read, which
//! parameters it ran with, and what it wrote.
//!
//! The manifest is deliberately timestamp-free and written in a fixed field
//! order, so re-running the same command on the same inputs produces a
//! byte-identical `manifest.txt` — any drift in inputs shows up as a hash
//! change, and any drift in outputs can be caught by comparing the files the
//! manifest lists.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const MANIFEST_FILE: &str = "manifest.txt";

#[derive(Debug, Clone)]
pub struct RunManifest {
    lines: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        let lines = vec![
            format!("tool = {} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            format!("command = {subcommand}"),
        ];
        RunManifest { lines }
    }

    /// Hashes the input file now, before any processing touches it.
    pub fn record_input(&mut self, label: &str, path: &Path) -> Result<(), CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        let digest = Sha256::digest(&bytes);
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        self.lines
            .push(format!("input {label} = {} sha256={hex}", path.display()));
        Ok(())
    }

    pub fn record_param(&mut self, key: &str, value: impl Display) {
        self.lines.push(format!("param {key} = {value}"));
    }

    pub fn record_output(&mut self, label: &str, path: &Path) {
        self.lines
            .push(format!("output {label} = {}", path.display()));
    }

    /// Writes `manifest.txt` into the output directory.
    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(MANIFEST_FILE);
        let mut text = self.lines.join("\n");
        text.push('\n');
        std::fs::write(&path, text)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_is_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.txt");
        std::fs::write(&input, b"payload").unwrap();

        let build = || {
            let mut m = RunManifest::new("image");
            m.record_input("echo", &input).unwrap();
            m.record_param("upsample", 8);
            m.record_output("bp", &dir.path().join("bp.img"));
            m
        };
        let first = dir.path().join("a");
        let second = dir.path().join("b");
        std::fs::create_dir(&first).unwrap();
        std::fs::create_dir(&second).unwrap();
        build().write(&first).unwrap();
        build().write(&second).unwrap();
        assert_eq!(
            std::fs::read(first.join(MANIFEST_FILE)).unwrap(),
            std::fs::read(second.join(MANIFEST_FILE)).unwrap()
        );
    }

    #[test]
    fn input_hash_tracks_content() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.txt");

        std::fs::write(&input, b"one").unwrap();
        let mut a = RunManifest::new("image");
        a.record_input("echo", &input).unwrap();

        std::fs::write(&input, b"two").unwrap();
        let mut b = RunManifest::new("image");
        b.record_input("echo", &input).unwrap();

        let out_a = dir.path().join("a");
        let out_b = dir.path().join("b");
        std::fs::create_dir(&out_a).unwrap();
        std::fs::create_dir(&out_b).unwrap();
        a.write(&out_a).unwrap();
        b.write(&out_b).unwrap();
        assert_ne!(
            std::fs::read(out_a.join(MANIFEST_FILE)).unwrap(),
            std::fs::read(out_b.join(MANIFEST_FILE)).unwrap()
        );
    }

    #[test]
    fn known_hash_appears_in_manifest() {
        // sha256 of the empty string is a fixed, well-known value.
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("empty");
        std::fs::write(&input, b"").unwrap();
        let mut m = RunManifest::new("simulate");
        m.record_input("scene", &input).unwrap();
        m.write(dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap();
        assert!(text.contains("e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"));
    }
}
