//! Versioned JSON cache of the exact solve: the c_n table and the Mellin
//! X_nm table, with decimal-string integers throughout (no binary floats
//! for exact data). Writes are atomic (temp file + rename); reload
//! reproduces bit-identical exact values.

use serde_json::{json, Map, Value};
use std::path::{Path, PathBuf};
use wzresum::coeffring::ZetaPoly;
use wzresum::model::MellinTable;
use wzresum::series::SeriesA;

pub const CACHE_VERSION: &str = "1";
pub const MODEL_TAG: &str = "wz-sde-rge-one-loop";

pub struct CacheFile {
    pub order: usize,
    pub gamma: SeriesA<ZetaPoly>,
    pub table: MellinTable,
}

/// Cache directory: RESURGENCE_CACHE_DIR when set, else ./.wzr-cache.
pub fn cache_dir() -> PathBuf {
    std::env::var_os("RESURGENCE_CACHE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".wzr-cache"))
}

pub fn cache_path() -> PathBuf {
    cache_dir().join("coefficients.json")
}

pub fn to_json(cache: &CacheFile) -> Value {
    let c: Vec<Value> = (1..=cache.order)
        .map(|n| cache.gamma.coeff(n).to_json())
        .collect();
    let x: Vec<Value> = cache
        .table
        .rows()
        .iter()
        .map(|row| Value::Array(row.iter().map(|p| p.to_json()).collect()))
        .collect();
    let mut root = Map::new();
    root.insert("version".into(), json!(CACHE_VERSION));
    root.insert("model".into(), json!(MODEL_TAG));
    root.insert("order".into(), json!(cache.order));
    root.insert("c".into(), Value::Array(c));
    root.insert("x".into(), Value::Array(x));
    root.insert(
        "created".into(),
        json!({"tool": format!("wzr {}", env!("CARGO_PKG_VERSION"))}),
    );
    Value::Object(root)
}

pub fn from_json(v: &Value) -> Result<CacheFile, String> {
    let version = v
        .get("version")
        .and_then(Value::as_str)
        .ok_or("cache missing version")?;
    if version != CACHE_VERSION {
        return Err(format!("unsupported cache version {version:?}"));
    }
    let order = v
        .get("order")
        .and_then(Value::as_u64)
        .ok_or("cache missing order")? as usize;
    let c = v
        .get("c")
        .and_then(Value::as_array)
        .ok_or("cache missing c table")?;
    if c.len() != order {
        return Err(format!(
            "c table has {} entries, declared order {order}",
            c.len()
        ));
    }
    let mut coeffs = vec![ZetaPoly::zero()];
    for (i, entry) in c.iter().enumerate() {
        coeffs.push(
            ZetaPoly::from_json(entry)
                .map_err(|e| format!("bad c_{} in cache: {e}", i + 1))?,
        );
    }
    let x = v
        .get("x")
        .and_then(Value::as_array)
        .ok_or("cache missing x table")?;
    if x.len() != order {
        return Err(format!(
            "x table has {} rows, declared order {order}",
            x.len()
        ));
    }
    let mut rows = Vec::with_capacity(x.len());
    for (n, row) in x.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| format!("x row {n} is not an array"))?;
        let mut out = Vec::with_capacity(row.len());
        for (m, entry) in row.iter().enumerate() {
            out.push(
                ZetaPoly::from_json(entry)
                    .map_err(|e| format!("bad X_{n}{m} in cache: {e}"))?,
            );
        }
        rows.push(out);
    }
    let table = MellinTable::from_rows(rows).map_err(|e| format!("inconsistent x table: {e}"))?;
    Ok(CacheFile {
        order,
        gamma: SeriesA::from_coeffs(coeffs),
        table,
    })
}

pub fn load(path: &Path) -> Result<Option<CacheFile>, String> {
    match std::fs::read_to_string(path) {
        Ok(text) => {
            let v: Value =
                serde_json::from_str(&text).map_err(|e| format!("cache parse error: {e}"))?;
            from_json(&v).map(Some)
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(format!("cache read error: {e}")),
    }
}

/// Serialize and write atomically. Returns the serialized bytes.
pub fn store(path: &Path, cache: &CacheFile) -> Result<Vec<u8>, String> {
    let bytes = serde_json::to_vec_pretty(&to_json(cache))
        .map_err(|e| format!("cache serialize error: {e}"))?;
    write_atomic(path, &bytes)?;
    Ok(bytes)
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), String> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes).map_err(|e| format!("cannot write {}: {e}", tmp.display()))?;
    std::fs::rename(&tmp, path).map_err(|e| format!("cannot rename into {}: {e}", path.display()))
}
