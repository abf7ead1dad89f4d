//! Output files, staged so that a failed run leaves nothing behind, and the
//! run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

use crate::CliError;

pub const MANIFEST: &str = "manifest.json";

fn io_error(context: &str, path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{context} {}: {e}", path.display()))
}

/// Files written into temporaries beside their destination and renamed into
/// place only by [`Staging::commit`]. Dropping without committing deletes
/// them.
pub struct Staging {
    dir: PathBuf,
    files: Vec<(String, NamedTempFile)>,
}

impl Staging {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| io_error("cannot create", dir, e))?;
        Ok(Staging {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Opens a staged file; `name` is relative to the output directory.
    pub fn create(&mut self, name: &str) -> Result<&mut NamedTempFile, CliError> {
        let tmp = NamedTempFile::new_in(&self.dir)
            .map_err(|e| io_error("cannot stage in", &self.dir, e))?;
        self.files.push((name.to_string(), tmp));
        Ok(&mut self.files.last_mut().expect("just pushed").1)
    }

    /// Writes `rows` as CSV with a header row.
    pub fn write_csv<R: Serialize>(&mut self, name: &str, rows: &[R]) -> Result<(), CliError> {
        let dir = self.dir.clone();
        let file = self.create(name)?;
        let mut writer = csv::Writer::from_writer(BufWriter::new(file.as_file_mut()));
        for row in rows {
            writer
                .serialize(row)
                .map_err(|e| io_error("cannot write", &dir.join(name), e))?;
        }
        writer
            .flush()
            .map_err(|e| io_error("cannot write", &dir.join(name), e))?;
        Ok(())
    }

    /// Renames every staged file into place and writes the manifest.
    pub fn commit(self, mut manifest: Manifest) -> Result<Manifest, CliError> {
        let mut written = Vec::new();
        for (name, tmp) in self.files {
            let dest = self.dir.join(&name);
            tmp.as_file()
                .sync_all()
                .map_err(|e| io_error("cannot sync", &dest, e))?;
            if let Err(e) = tmp.persist(&dest) {
                for path in written {
                    let _ = fs::remove_file(path);
                }
                return Err(io_error("cannot move into place", &dest, e.error));
            }
            manifest.add_file(&name, &dest)?;
            written.push(dest);
        }
        manifest.end = now();
        manifest.merge_previous(&self.dir);
        let path = self.dir.join(MANIFEST);
        let mut tmp = NamedTempFile::new_in(&self.dir)
            .map_err(|e| io_error("cannot stage in", &self.dir, e))?;
        let json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
        tmp.write_all(&json)
            .and_then(|_| tmp.write_all(b"\n"))
            .map_err(|e| io_error("cannot write", &path, e))?;
        tmp.persist(&path)
            .map_err(|e| io_error("cannot move into place", &path, e.error))?;
        Ok(manifest)
    }
}

pub fn now() -> String {
    let t: DateTime<Utc> = Utc::now();
    t.to_rfc3339_opts(SecondsFormat::Millis, true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub sha256: String,
    pub bytes: u64,
}

/// Provenance of a run directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config_hash: String,
    pub tool_version: String,
    pub command: String,
    pub start: String,
    pub end: String,
    /// Output files keyed by name relative to the run directory.
    pub files: BTreeMap<String, FileDigest>,
}

impl Manifest {
    pub fn start(config_hash: &str, command: &str) -> Self {
        Manifest {
            config_hash: config_hash.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            start: now(),
            end: String::new(),
            files: BTreeMap::new(),
        }
    }

    fn add_file(&mut self, name: &str, path: &Path) -> Result<(), CliError> {
        self.files.insert(name.to_string(), digest(path)?);
        Ok(())
    }

    /// Keeps entries from an earlier manifest of the same config whose files
    /// are still intact, so successive commands share one manifest.
    fn merge_previous(&mut self, dir: &Path) {
        let Ok(previous) = read_manifest(dir) else {
            return;
        };
        if previous.config_hash != self.config_hash {
            return;
        }
        for (name, entry) in previous.files {
            if self.files.contains_key(&name) {
                continue;
            }
            if digest(&dir.join(&name)).is_ok_and(|d| d == entry) {
                self.files.insert(name, entry);
            }
        }
    }
}

pub fn digest(path: &Path) -> Result<FileDigest, CliError> {
    let bytes = fs::read(path).map_err(|e| io_error("cannot read", path, e))?;
    Ok(FileDigest {
        sha256: hex::encode(Sha256::digest(&bytes)),
        bytes: bytes.len() as u64,
    })
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, CliError> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(|e| io_error("cannot read", &path, e))?;
    serde_json::from_str(&text).map_err(|e| io_error("cannot parse", &path, e))
}

/// One estimate per (estimand, parameter point).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub estimand: String,
    pub parameter: String,
    pub method: String,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub standard_error: f64,
    pub samples: u64,
    pub successes: Option<u64>,
    pub seed: u64,
    pub config_hash: String,
    pub warnings: String,
}

/// One bound check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub check: String,
    pub parameter: String,
    pub method: String,
    pub direction: String,
    pub bound: f64,
    pub bound_se: f64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub standard_error: f64,
    pub slack: f64,
    pub verdict: String,
    pub caveat: String,
    pub seed: u64,
    pub config_hash: String,
}

/// One size of an isoperimetric profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub profile: String,
    pub anchor: String,
    pub n: usize,
    pub ratio: f64,
    pub boundary: Option<usize>,
    pub volume: Option<usize>,
    pub normalization: String,
    pub exact_flag: bool,
    pub witness: String,
    pub config_hash: String,
}

/// Long-format plot data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub estimand: String,
    pub parameter: String,
    pub series: String,
    pub x: f64,
    pub y: f64,
    pub config_hash: String,
}
