//! Config files, the result cache and atomic file output.
//!
//! A cache entry lives in `<cache_dir>/<config hash>/` and holds the rendered
//! output, an optional plot and `manifest.json`. The hash covers the tool
//! version and the canonical form of the command, so two configs that spell
//! the same group differently share an entry.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::Command;

pub const CACHE_ENV: &str = "NILGROWTH_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".nilgrowth-cache";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A config file: an optional cache directory and one `[run]` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    pub run: Command,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).context("invalid config")
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text)
    }

    /// Explicit setting, then the environment variable, then the default.
    pub fn resolved_cache_dir(&self) -> PathBuf {
        self.cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
    }
}

/// The command with its group written in canonical form.
pub fn canonical(command: &Command) -> Result<Command> {
    let mut c = command.clone();
    if let Some(group) = c.group_mut() {
        let spec: nilgrowth::GroupSpec = group.parse().map_err(anyhow::Error::from)?;
        *group = spec.normalized().to_string();
    }
    Ok(c)
}

pub fn config_hash(command: &Command) -> Result<String> {
    let json = serde_json::to_string(&canonical(command)?)?;
    let mut h = Sha256::new();
    h.update(TOOL_VERSION.as_bytes());
    h.update([0]);
    h.update(json.as_bytes());
    Ok(hex::encode(h.finalize()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes through a temporary file in the same directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = path.file_name().context("output path has no file name")?.to_string_lossy();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultManifest {
    pub schema: u32,
    pub config_hash: String,
    pub tool_version: String,
    pub config: serde_json::Value,
    pub outputs: Vec<OutputRecord>,
    pub created_unix: u64,
    pub completed_unix: u64,
}

pub fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

pub struct CacheEntry {
    pub dir: PathBuf,
    pub hash: String,
}

/// Result of a cached lookup: the stored files, keyed by their names in the manifest.
pub struct Cached {
    pub manifest: ResultManifest,
    pub files: Vec<(String, Vec<u8>)>,
}

impl CacheEntry {
    pub fn new(root: &Path, command: &Command) -> Result<Self> {
        let hash = config_hash(command)?;
        Ok(CacheEntry {
            dir: root.join(&hash),
            hash,
        })
    }

    fn manifest_path(&self) -> PathBuf {
        self.dir.join("manifest.json")
    }

    /// The stored results, if present and intact. A checksum mismatch is an error.
    pub fn lookup(&self) -> Result<Option<Cached>> {
        let path = self.manifest_path();
        if !path.exists() {
            return Ok(None);
        }
        let manifest: ResultManifest = serde_json::from_slice(&fs::read(&path)?)
            .with_context(|| format!("corrupt manifest {}", path.display()))?;
        if manifest.config_hash != self.hash {
            bail!("manifest {} belongs to another config", path.display());
        }
        let mut files = Vec::new();
        for rec in &manifest.outputs {
            let bytes = fs::read(self.dir.join(&rec.path))
                .with_context(|| format!("cached output {} is missing", rec.path))?;
            if sha256_hex(&bytes) != rec.sha256 {
                bail!("cached output {} fails its checksum", rec.path);
            }
            files.push((rec.path.clone(), bytes));
        }
        Ok(Some(Cached { manifest, files }))
    }

    pub fn store(&self, command: &Command, started: u64, files: &[(String, Vec<u8>)]) -> Result<ResultManifest> {
        let mut outputs = Vec::new();
        for (name, bytes) in files {
            write_atomic(&self.dir.join(name), bytes)?;
            outputs.push(OutputRecord {
                path: name.clone(),
                sha256: sha256_hex(bytes),
                bytes: bytes.len(),
            });
        }
        let manifest = ResultManifest {
            schema: 1,
            config_hash: self.hash.clone(),
            tool_version: TOOL_VERSION.to_string(),
            config: serde_json::to_value(canonical(command)?)?,
            outputs,
            created_unix: started,
            completed_unix: now_unix(),
        };
        write_atomic(&self.manifest_path(), &serde_json::to_vec_pretty(&manifest)?)?;
        Ok(manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{Format, SolveArgs};

    fn solve(group: &str) -> Command {
        Command::Solve(SolveArgs {
            group: group.into(),
            out: Format::Text,
        })
    }

    #[test]
    fn hash_is_semantic() {
        assert_eq!(config_hash(&solve("heisenberg")).unwrap(), config_hash(&solve("u(3)")).unwrap());
        assert_ne!(config_hash(&solve("heisenberg")).unwrap(), config_hash(&solve("u(4)")).unwrap());
    }

    #[test]
    fn config_round_trips() {
        let cfg = RunConfig {
            cache_dir: Some("/tmp/c".into()),
            run: solve("gamma"),
        };
        let text = cfg.to_toml().unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml("[run]\ncommand = \"solve\"\ngroup = \"z\"\ncolour = 1\n").is_err());
        assert!(RunConfig::from_toml("extra = 1\n[run]\ncommand = \"solve\"\ngroup = \"z\"\n").is_err());
        assert!(RunConfig::from_toml("[run]\ncommand = \"solve\"\ngroup = \"z\"\n").is_ok());
    }
}
