//! On-disk cache of group tables, keyed by the canonical type spec.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::group::GroupTable;
use super::types::CoxeterSystem;
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "COXSIG_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    type_spec: String,
    order: usize,
    rank: usize,
    coxeter_matrix: Vec<Vec<u32>>,
    gen_mult: Vec<u32>,
    lengths: Vec<u16>,
}

/// File name for a system. Systems whose generators are not in the
/// canonical diagram order get the node order appended.
pub fn cache_key(sys: &CoxeterSystem) -> String {
    let spec = sys.type_spec();
    let standard = CoxeterSystem::parse(&spec).map(|s| s.matrix() == sys.matrix()).unwrap_or(false);
    if standard {
        spec
    } else {
        let nodes: Vec<String> = sys
            .components()
            .iter()
            .map(|c| c.nodes.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join("-"))
            .collect();
        format!("{spec}@{}", nodes.join("_"))
    }
}

fn path_for(dir: &Path, sys: &CoxeterSystem) -> PathBuf {
    let key: String = cache_key(sys)
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '@' || c == '-' || c == '_' { c } else { '_' })
        .collect();
    dir.join(format!("{key}.json"))
}

pub fn save(dir: &Path, sys: &CoxeterSystem, t: &GroupTable) -> Result<()> {
    fs::create_dir_all(dir)?;
    let file = CacheFile {
        format_version: FORMAT_VERSION,
        type_spec: cache_key(sys),
        order: t.order(),
        rank: t.rank(),
        coxeter_matrix: sys.matrix().to_vec(),
        gen_mult: t.gen_mult_flat().to_vec(),
        lengths: t.lengths().to_vec(),
    };
    let tmp = path_for(dir, sys).with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec(&file)?)?;
    fs::rename(&tmp, path_for(dir, sys))?;
    Ok(())
}

/// Load a cached table; `Ok(None)` when absent, an error when present but invalid.
pub fn load(dir: &Path, sys: &CoxeterSystem) -> Result<Option<GroupTable>> {
    let path = path_for(dir, sys);
    let bytes = match fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let file: CacheFile = serde_json::from_slice(&bytes)?;
    if file.format_version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "{}: cache format {} (expected {FORMAT_VERSION})",
            path.display(),
            file.format_version
        )));
    }
    if file.type_spec != cache_key(sys)
        || file.coxeter_matrix != sys.matrix()
        || file.order as u128 != sys.order()
        || file.rank != sys.rank()
    {
        return Err(Error::Format(format!("{}: header does not match {}", path.display(), sys)));
    }
    Ok(Some(GroupTable::from_parts(file.rank, file.gen_mult, file.lengths)?))
}

/// Enumerate through the cache directory when one is given.
pub fn enumerate_cached(sys: &CoxeterSystem, cap: u128, dir: Option<&Path>) -> Result<GroupTable> {
    if let Some(dir) = dir {
        if let Some(t) = load(dir, sys)? {
            return Ok(t);
        }
        let t = GroupTable::enumerate(sys, cap)?;
        save(dir, sys, &t)?;
        return Ok(t);
    }
    GroupTable::enumerate(sys, cap)
}

/// The cache directory from the environment, if set.
pub fn env_cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::group::DEFAULT_CAP;

    fn tmpdir(name: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("coxsig-cache-test-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn round_trip() {
        let dir = tmpdir("rt");
        let sys = CoxeterSystem::parse("B3").unwrap();
        let a = enumerate_cached(&sys, DEFAULT_CAP, Some(&dir)).unwrap();
        assert!(dir.join("B3.json").exists());
        let b = enumerate_cached(&sys, DEFAULT_CAP, Some(&dir)).unwrap();
        assert_eq!(a, b);
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn relabeled_key_differs() {
        let sys = CoxeterSystem::parse("H3").unwrap().relabel(&[2, 1, 0]).unwrap();
        assert_eq!(cache_key(&sys), "H3@3-2-1");
        assert_eq!(cache_key(&CoxeterSystem::parse("H3").unwrap()), "H3");
    }

    #[test]
    fn rejects_bad_version() {
        let dir = tmpdir("ver");
        let sys = CoxeterSystem::parse("A2").unwrap();
        enumerate_cached(&sys, DEFAULT_CAP, Some(&dir)).unwrap();
        let p = dir.join("A2.json");
        let text = fs::read_to_string(&p).unwrap().replace("\"format_version\":1", "\"format_version\":9");
        fs::write(&p, text).unwrap();
        assert!(matches!(load(&dir, &sys), Err(Error::Format(_))));
        let _ = fs::remove_dir_all(&dir);
    }
}
