//! On-disk cache of solved IC tables.
//!
//! Entries are keyed by the graph's canonical hash, the length cap and the
//! schema version. Loads are re-verified; a stale or corrupt entry is
//! recomputed and overwritten.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::HarnessError;
use crate::coxeter::CoxElt;
use crate::ic_solver::{table_from_json, table_to_json, verify_ic, IcTable};
use crate::tl_algebra::TLAlgebra;

/// Bumped whenever the stored layout or its meaning changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "TLCANON_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Disabled,
    Hit,
    Miss,
    /// An entry existed but failed verification and was replaced.
    Rejected,
}

pub fn entry_path(dir: &Path, tl: &TLAlgebra, cap: Option<usize>) -> PathBuf {
    let hash = tl.group().graph().canonical_hash();
    let cap = cap.map_or_else(|| "all".to_string(), |c| c.to_string());
    dir.join(format!("ic-{}-{cap}-v{SCHEMA_VERSION}.json", &hash[..16]))
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), HarnessError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::Io(format!("{}: {e}", dir.display())))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| HarnessError::Io(e.to_string()))?;
    tmp.write_all(contents).map_err(|e| HarnessError::Io(e.to_string()))?;
    tmp.persist(path)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}

pub enum Lookup {
    Missing,
    /// Present but unreadable, for another graph or cap, or failing verification.
    Invalid,
    Valid(IcTable<CoxElt>),
}

/// Loads a cached table covering exactly `targets`.
pub fn load(path: &Path, tl: &TLAlgebra, cap: Option<usize>, targets: &[CoxElt]) -> Lookup {
    let Ok(text) = std::fs::read_to_string(path) else {
        return Lookup::Missing;
    };
    let parsed: Option<IcTable<CoxElt>> = (|| {
        let value: Value = serde_json::from_str(&text).ok()?;
        let graph = tl.group().graph();
        if value.get("schema")?.as_u64()? != SCHEMA_VERSION as u64
            || value.get("graph")?.as_str()? != graph.canonical_json()
            || value.get("cap")? != &json!(cap)
        {
            return None;
        }
        table_from_json(value.get("table")?, |labels| {
            tl.group().from_reduced_labels(labels).ok()
        })
    })();
    let Some(table) = parsed else {
        return Lookup::Invalid;
    };
    let complete = table.len() == targets.len() && targets.iter().all(|w| table.get(*w).is_some());
    if !complete || !verify_ic(tl, &table, false).passed() {
        return Lookup::Invalid;
    }
    Lookup::Valid(table)
}

pub fn store(path: &Path, tl: &TLAlgebra, cap: Option<usize>, table: &IcTable<CoxElt>) -> Result<(), HarnessError> {
    let value = json!({
        "schema": SCHEMA_VERSION,
        "graph": tl.group().graph().canonical_json(),
        "cap": cap,
        "table": table_to_json(tl, table),
    });
    write_atomic(path, value.to_string().as_bytes())
}
