//! On-disk persistence of the largest-prime-factor table.
//!
//! Layout (little-endian): 8-byte magic, 1-byte version, `y_bound: u64`,
//! `table_limit: u64`, then `table_limit + 1` values of `u32`.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{check_limits, lpf_table, SmoothContext, DEFAULT_CAPACITY};
use crate::{Error, Result};

pub const CACHE_ENV: &str = "FRIABLE_CACHE_DIR";

const MAGIC: &[u8; 8] = b"FRIABLE\x01";
const VERSION: u8 = 1;
const HEADER: usize = 8 + 1 + 8 + 8;

pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

impl SmoothContext {
    /// Like [`SmoothContext::with_capacity`], reusing a table cached in `dir` when its
    /// header matches and rewriting the file otherwise.
    pub fn load_or_build(
        y_bound: u64,
        table_limit: u64,
        capacity: u64,
        dir: &Path,
    ) -> Result<Self> {
        check_limits(y_bound, table_limit, capacity)?;
        if table_limit == 0 {
            return Self::with_capacity(y_bound, 0, capacity);
        }
        let path = Self::cache_path(dir, y_bound, table_limit);
        let table = match read_table(&path, y_bound, table_limit) {
            Ok(Some(t)) => t,
            Ok(None) | Err(_) => {
                let t = lpf_table(table_limit as usize);
                write_table(&path, y_bound, table_limit, &t)?;
                t
            }
        };
        Ok(Self::from_parts(
            y_bound,
            Some(table),
            table_limit,
            capacity,
        ))
    }

    /// Uses the directory named by `FRIABLE_CACHE_DIR` when set.
    pub fn from_env(y_bound: u64, table_limit: u64) -> Result<Self> {
        match cache_dir_from_env() {
            Some(dir) => Self::load_or_build(y_bound, table_limit, DEFAULT_CAPACITY, &dir),
            None => Self::new(y_bound, table_limit),
        }
    }

    pub fn cache_path(dir: &Path, y_bound: u64, table_limit: u64) -> PathBuf {
        dir.join(format!("lpf-{y_bound}-{table_limit}.bin"))
    }
}

/// `Ok(None)` on any header mismatch or truncation.
fn read_table(path: &Path, y_bound: u64, table_limit: u64) -> Result<Option<Vec<u32>>> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    if bytes.len() < HEADER || &bytes[..8] != MAGIC || bytes[8] != VERSION {
        return Ok(None);
    }
    let yb = u64::from_le_bytes(bytes[9..17].try_into().unwrap());
    let tl = u64::from_le_bytes(bytes[17..25].try_into().unwrap());
    let body = &bytes[HEADER..];
    if yb != y_bound || tl != table_limit || body.len() as u64 != 4 * (table_limit + 1) {
        return Ok(None);
    }
    let table: Vec<u32> = body
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if table[1] != 1 {
        return Ok(None);
    }
    Ok(Some(table))
}

fn write_table(path: &Path, y_bound: u64, table_limit: u64, table: &[u32]) -> Result<()> {
    let fail = |reason: String| Error::Cache {
        path: path.to_path_buf(),
        reason,
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| fail(e.to_string()))?;
    }
    let tmp = path.with_extension("tmp");
    let file = fs::File::create(&tmp).map_err(|e| fail(e.to_string()))?;
    let mut w = BufWriter::new(file);
    let mut write = || -> std::io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&[VERSION])?;
        w.write_all(&y_bound.to_le_bytes())?;
        w.write_all(&table_limit.to_le_bytes())?;
        for v in table {
            w.write_all(&v.to_le_bytes())?;
        }
        w.flush()
    };
    write().map_err(|e| fail(e.to_string()))?;
    fs::rename(&tmp, path).map_err(|e| fail(e.to_string()))?;
    Ok(())
}
