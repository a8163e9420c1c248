//! On-disk resolution cache: one directory per (algebra, bounds) with a
//! JSON payload and a manifest holding its sha256. Writers take an
//! exclusive lock on `<cache>/.lock`, readers a shared one.

use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use ext_forge::hopf::Profile;
use ext_forge::resolve::{algebra_for, minimal_resolution, FreeResolution};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: u32 = 1;
const PAYLOAD: &str = "resolution.json";
const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheManifest {
    pub format_version: u32,
    pub producer_version: String,
    pub algebra: String,
    pub max_s: usize,
    pub max_t: i32,
    pub selections: Vec<String>,
    pub payload_sha256: String,
}

#[derive(Debug)]
pub enum Outcome {
    Hit(PathBuf),
    Computed(PathBuf),
}

pub struct Cache {
    root: PathBuf,
    force: bool,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>, force: bool) -> Result<Cache> {
        let root = root.into();
        fs::create_dir_all(&root).with_context(|| format!("creating cache directory {}", root.display()))?;
        Ok(Cache { root, force })
    }

    fn lock(&self, exclusive: bool) -> Result<File> {
        let f = File::options()
            .create(true)
            .truncate(false)
            .write(true)
            .open(self.root.join(".lock"))
            .context("opening cache lock")?;
        if exclusive {
            f.lock()?;
        } else {
            f.lock_shared()?;
        }
        Ok(f)
    }

    fn entry_dir(&self, p: &Profile, max_s: usize, max_t: i32) -> PathBuf {
        let name: String = p.name().chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        self.root.join(format!("{name}-s{max_s}-t{max_t}"))
    }

    fn read_manifest(dir: &Path) -> Result<Option<CacheManifest>> {
        let path = dir.join(MANIFEST);
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path)?;
        let m = serde_json::from_str(&text).with_context(|| format!("cache manifest {} is corrupt", path.display()))?;
        Ok(Some(m))
    }

    /// Smallest cached entry over `p` covering the bounds.
    fn covering(&self, p: &Profile, max_s: usize, max_t: i32) -> Result<Option<(PathBuf, CacheManifest)>> {
        let mut best: Option<(PathBuf, CacheManifest)> = None;
        let mut dirs: Vec<PathBuf> = fs::read_dir(&self.root)?.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.is_dir()).collect();
        dirs.sort();
        for d in dirs {
            let Some(m) = Self::read_manifest(&d)? else { continue };
            if m.algebra == p.name() && m.max_s >= max_s && m.max_t >= max_t {
                let size = |m: &CacheManifest| (m.max_s, m.max_t);
                if best.as_ref().is_none_or(|(_, b)| size(&m) < size(b)) {
                    best = Some((d, m));
                }
            }
        }
        Ok(best)
    }

    fn load(dir: &Path, m: &CacheManifest, p: &Profile) -> Result<FreeResolution> {
        if m.format_version != FORMAT_VERSION || m.producer_version != env!("CARGO_PKG_VERSION") {
            bail!(
                "cache entry {} was written by format {} / version {}; rerun with --force",
                dir.display(),
                m.format_version,
                m.producer_version
            );
        }
        let bytes = fs::read(dir.join(PAYLOAD)).with_context(|| format!("reading {}", dir.display()))?;
        if sha256_hex(&bytes) != m.payload_sha256 {
            bail!("cache entry {} is corrupt (payload hash mismatch); rerun with --force", dir.display());
        }
        let text = String::from_utf8(bytes).context("cache payload is not UTF-8")?;
        Ok(FreeResolution::from_json(algebra_for(p, m.max_t), &text)?)
    }

    /// Load a covering resolution, or compute and store one.
    pub fn resolution(&self, p: &Profile, max_s: usize, max_t: i32) -> Result<(Arc<FreeResolution>, Outcome)> {
        if !self.force {
            let _guard = self.lock(false)?;
            if let Some((dir, m)) = self.covering(p, max_s, max_t)? {
                let r = Self::load(&dir, &m, p)?;
                return Ok((Arc::new(r), Outcome::Hit(dir)));
            }
        }
        let r = minimal_resolution(algebra_for(p, max_t), max_s, max_t)?;
        let dir = self.entry_dir(p, max_s, max_t);
        let payload = r.to_json();
        let manifest = CacheManifest {
            format_version: FORMAT_VERSION,
            producer_version: env!("CARGO_PKG_VERSION").into(),
            algebra: p.name(),
            max_s,
            max_t,
            selections: Vec::new(),
            payload_sha256: sha256_hex(payload.as_bytes()),
        };
        let _guard = self.lock(true)?;
        fs::create_dir_all(&dir)?;
        fs::write(dir.join(PAYLOAD), payload)?;
        fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(&manifest)?)?;
        Ok((Arc::new(r), Outcome::Computed(dir)))
    }

    /// Record a self-map selection in the manifest of `dir`.
    pub fn record_selection(&self, dir: &Path, selection: &str) -> Result<()> {
        let _guard = self.lock(true)?;
        let Some(mut m) = Self::read_manifest(dir)? else { return Ok(()) };
        if !m.selections.iter().any(|s| s == selection) {
            m.selections.push(selection.into());
            fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(&m)?)?;
        }
        Ok(())
    }
}

impl Outcome {
    pub fn dir(&self) -> &Path {
        match self {
            Outcome::Hit(d) | Outcome::Computed(d) => d,
        }
    }
}
