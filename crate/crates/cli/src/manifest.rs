//! Run manifests: what went in, what came out, and the digests of both.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "bibliorank";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub argv: Vec<String>,
    pub timestamp: String,
    pub inputs: Vec<FileDigest>,
    pub configs: Vec<FileDigest>,
    /// Paths relative to the output directory.
    pub outputs: Vec<FileDigest>,
    pub summary: BTreeMap<String, serde_json::Value>,
}

impl RunManifest {
    pub fn read(path: &Path) -> Result<RunManifest> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn output(&self, path: &str) -> Option<&FileDigest> {
        self.outputs.iter().find(|o| o.path == path)
    }
}

/// An output file could not be written. Marks the failure as internal
/// rather than a problem with the user's input.
#[derive(Debug)]
pub struct OutputFailure(pub PathBuf);

impl fmt::Display for OutputFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot write {}", self.0.display())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn digest_file(path: &Path, shown: String) -> Result<FileDigest> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(FileDigest {
        path: shown,
        sha256: sha256_hex(&bytes),
        bytes: bytes.len() as u64,
    })
}

/// Collects digests while a command runs and writes the manifest at the end.
pub struct Run {
    out_dir: PathBuf,
    manifest: RunManifest,
}

impl Run {
    pub fn new(out_dir: &Path, command: &str, argv: Vec<String>) -> Result<Run> {
        fs::create_dir_all(out_dir).with_context(|| OutputFailure(out_dir.to_path_buf()))?;
        Ok(Run {
            out_dir: out_dir.to_path_buf(),
            manifest: RunManifest {
                tool: TOOL.into(),
                version: VERSION.into(),
                command: command.into(),
                argv,
                timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                inputs: Vec::new(),
                configs: Vec::new(),
                outputs: Vec::new(),
                summary: BTreeMap::new(),
            },
        })
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        let d = digest_file(path, path.display().to_string())?;
        if !self.manifest.inputs.contains(&d) {
            self.manifest.inputs.push(d);
        }
        Ok(())
    }

    pub fn config(&mut self, path: &Path) -> Result<()> {
        let d = digest_file(path, path.display().to_string())?;
        if !self.manifest.configs.contains(&d) {
            self.manifest.configs.push(d);
        }
        Ok(())
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.manifest.summary.insert(key.to_string(), v);
    }

    pub fn path_of(&self, name: &Path) -> PathBuf {
        self.out_dir.join(name)
    }

    /// Creates `name` under the output directory, fills it with `fill` and
    /// records its digest.
    pub fn write_output<F>(&mut self, name: &Path, fill: F) -> Result<PathBuf>
    where
        F: FnOnce(&mut BufWriter<File>) -> Result<()>,
    {
        let path = self.path_of(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).with_context(|| OutputFailure(path.clone()))?;
        }
        let file = File::create(&path).with_context(|| OutputFailure(path.clone()))?;
        let mut w = BufWriter::new(file);
        fill(&mut w)?;
        w.flush().with_context(|| OutputFailure(path.clone()))?;
        drop(w);
        let d = digest_file(&path, name.display().to_string())?;
        self.manifest.outputs.retain(|o| o.path != d.path);
        self.manifest.outputs.push(d);
        log::info!("wrote {}", path.display());
        Ok(path)
    }

    pub fn finish(self) -> Result<RunManifest> {
        let path = self
            .out_dir
            .join(format!("{}.manifest.json", self.manifest.command));
        let text = serde_json::to_string_pretty(&self.manifest)?;
        fs::write(&path, text + "\n").with_context(|| OutputFailure(path.clone()))?;
        Ok(self.manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn records_outputs_once() {
        let dir = tempfile::tempdir().unwrap();
        let mut run = Run::new(dir.path(), "test", vec!["x".into()]).unwrap();
        for _ in 0..2 {
            run.write_output(Path::new("a.txt"), |w| Ok(w.write_all(b"abc")?))
                .unwrap();
        }
        run.note("rows", 3);
        let m = run.finish().unwrap();
        assert_eq!(m.outputs.len(), 1);
        assert_eq!(m.output("a.txt").unwrap().bytes, 3);
        let back = RunManifest::read(&dir.path().join("test.manifest.json")).unwrap();
        assert_eq!(back, m);
    }
}
