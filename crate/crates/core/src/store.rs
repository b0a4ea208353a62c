//! Content-addressed result store on the local filesystem.
//!
//! Matrices of class representatives live at `<root>/md/<d>/<sha256>.mat`,
//! keyed by the SHA-256 of their canonical form. Every write goes to a
//! temporary file in the target directory and is renamed into place, so
//! readers never observe partial files. Writing an existing key with
//! different bytes is an error; writing identical bytes is a no-op.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::binmat::BinaryMatrix;
use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};

/// Namespaces under the store root.
pub const NAMESPACES: [&str; 4] = ["md", "faces", "census", "compressed"];

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone)]
pub struct Store {
    root: PathBuf,
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Store(format!("{}: {e}", path.display()))
}

/// Progress marker for an interrupted enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub order: String,
    pub seeds_done: u64,
}

impl Store {
    /// Opens (creating if needed) a store rooted at `root`.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| io_err(&root, e))?;
        Ok(Store { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
        let dir = path.parent().expect("store paths have a parent");
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let tmp = dir.join(format!(
            ".tmp-{}-{}",
            std::process::id(),
            TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let mut f = fs::File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
        f.write_all(bytes).map_err(|e| io_err(&tmp, e))?;
        f.sync_all().map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| io_err(path, e))
    }

    /// Stores immutable content under `rel`. Returns whether a new file was written.
    pub fn put(&self, rel: &str, bytes: &[u8]) -> Result<bool> {
        let path = self.path(rel);
        if let Some(existing) = self.get(rel)? {
            if existing == bytes {
                return Ok(false);
            }
            return Err(Error::Store(format!(
                "{} already holds different content",
                path.display()
            )));
        }
        Self::write_atomic(&path, bytes)?;
        Ok(true)
    }

    pub fn get(&self, rel: &str) -> Result<Option<Vec<u8>>> {
        let path = self.path(rel);
        match fs::read(&path) {
            Ok(b) => Ok(Some(b)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(io_err(&path, e)),
        }
    }

    /// Stores a class representative; returns its relative path.
    pub fn put_class(&self, d: usize, form: &CanonicalForm) -> Result<String> {
        let rel = format!("md/{d}/{}.mat", form.sha256_hex());
        self.put(&rel, form.matrix().emit().as_bytes())?;
        Ok(rel)
    }

    /// Canonical forms of all stored classes for dimension `d`, sorted.
    pub fn load_classes(&self, d: usize) -> Result<Vec<CanonicalForm>> {
        let dir = self.path(&format!("md/{d}"));
        let entries = match fs::read_dir(&dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(io_err(&dir, e)),
        };
        let mut out = Vec::new();
        for entry in entries {
            let entry = entry.map_err(|e| io_err(&dir, e))?;
            let path = entry.path();
            if path.extension().and_then(|e| e.to_str()) != Some("mat") {
                continue;
            }
            let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
            let m = BinaryMatrix::parse(&text)
                .map_err(|e| Error::Store(format!("{}: {e}", path.display())))?;
            out.push(canonical_form(&m));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Dimensions with a directory under `md/`, ascending.
    pub fn dims(&self) -> Result<Vec<usize>> {
        let dir = self.path("md");
        let entries = match fs::read_dir(&dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(io_err(&dir, e)),
        };
        let mut out: Vec<usize> = entries
            .filter_map(|e| e.ok())
            .filter_map(|e| e.file_name().to_str().and_then(|s| s.parse().ok()))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    pub fn read_checkpoint(&self, d: usize) -> Result<Option<Checkpoint>> {
        let Some(bytes) = self.get(&format!("md/{d}/checkpoint"))? else {
            return Ok(None);
        };
        let text = String::from_utf8_lossy(&bytes);
        let mut order = None;
        let mut seeds = None;
        for line in text.lines() {
            match line.split_once(' ') {
                Some(("order", v)) => order = Some(v.to_string()),
                Some(("seeds", v)) => seeds = v.parse().ok(),
                _ => {}
            }
        }
        match (order, seeds) {
            (Some(order), Some(seeds_done)) => Ok(Some(Checkpoint { order, seeds_done })),
            _ => Err(Error::Store(format!("md/{d}/checkpoint is malformed"))),
        }
    }

    /// Checkpoints are the one mutable file kind; they are replaced atomically.
    pub fn write_checkpoint(&self, d: usize, cp: &Checkpoint) -> Result<()> {
        let text = format!("order {}\nseeds {}\n", cp.order, cp.seeds_done);
        Self::write_atomic(&self.path(&format!("md/{d}/checkpoint")), text.as_bytes())
    }
}
