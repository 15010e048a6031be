//! Versioned JSON cache of count tables.
//!
//! A file is only trusted if its header matches, every value parses, no key
//! repeats and every `(p, n, k)` and `(p, n)` inside the header's range is
//! present. Anything else is reported as invalid and the caller recomputes.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use commperm::counting::CountTable;
use commperm::records::{parse_decimal, CountRecord};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// `B` values and `A` rows with every slot not yet read left empty.
type PartialLayer = (Vec<Option<BigUint>>, Vec<Vec<Option<BigUint>>>);

pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_PATH: &str = "commperm-cache.json";
pub const ENV_VAR: &str = "COMMPERM_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BRecord {
    pub p: u32,
    pub n: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub version: u32,
    pub p_max: u32,
    pub n_max: usize,
    /// The `p` layers stored; a subset of `0..=p_max`.
    pub ps: Vec<u32>,
    pub a: Vec<CountRecord>,
    pub b: Vec<BRecord>,
}

/// `--cache` flag, then `COMMPERM_CACHE`, then `./commperm-cache.json`.
pub fn resolve_path(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(ENV_VAR) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(DEFAULT_PATH),
    }
}

impl CacheFile {
    pub fn from_table(table: &CountTable) -> Self {
        let ps: Vec<u32> = table.ps().collect();
        let mut b = Vec::new();
        for &p in &ps {
            for n in 1..=table.n_max() {
                let value = table.b(p, n).expect("table covers its own range");
                b.push(BRecord {
                    p,
                    n,
                    value: value.to_str_radix(10),
                });
            }
        }
        CacheFile {
            version: FORMAT_VERSION,
            p_max: ps.iter().copied().max().unwrap_or(0),
            n_max: table.n_max(),
            ps,
            a: table.records(),
            b,
        }
    }

    /// Validates everything and rebuilds the table.
    pub fn to_table(&self) -> Result<CountTable, String> {
        if self.version != FORMAT_VERSION {
            return Err(format!("version {} (expected {})", self.version, FORMAT_VERSION));
        }
        let ps: BTreeSet<u32> = self.ps.iter().copied().collect();
        if ps.len() != self.ps.len() {
            return Err("repeated p in header".into());
        }
        if ps.iter().any(|&p| p > self.p_max) {
            return Err("header p exceeds p_max".into());
        }
        let n_max = self.n_max;
        let mut parts: BTreeMap<u32, PartialLayer> = ps
            .iter()
            .map(|&p| (p, (vec![None; n_max + 1], (0..=n_max).map(|n| vec![None; n + 1]).collect())))
            .collect();
        for rec in &self.a {
            let layer = parts
                .get_mut(&rec.p)
                .ok_or_else(|| format!("A record for p={} not in header", rec.p))?;
            let slot = layer
                .1
                .get_mut(rec.n)
                .and_then(|row| row.get_mut(rec.k))
                .ok_or_else(|| format!("A record ({},{},{}) out of range", rec.p, rec.n, rec.k))?;
            if slot.is_some() {
                return Err(format!("duplicate A record ({},{},{})", rec.p, rec.n, rec.k));
            }
            *slot = Some(rec.parse_value().map_err(|e| e.to_string())?);
        }
        for rec in &self.b {
            let layer = parts
                .get_mut(&rec.p)
                .ok_or_else(|| format!("B record for p={} not in header", rec.p))?;
            if rec.n == 0 || rec.n > n_max {
                return Err(format!("B record ({},{}) out of range", rec.p, rec.n));
            }
            let slot = &mut layer.0[rec.n];
            if slot.is_some() {
                return Err(format!("duplicate B record ({},{})", rec.p, rec.n));
            }
            *slot = Some(parse_decimal(&rec.value).map_err(|e| e.to_string())?);
        }
        let mut complete = BTreeMap::new();
        for (p, (b, rows)) in parts {
            let mut b_full = vec![BigUint::default()];
            for (n, v) in b.into_iter().enumerate().skip(1) {
                b_full.push(v.ok_or_else(|| format!("missing B({},{})", p, n))?);
            }
            let mut rows_full = Vec::with_capacity(rows.len());
            for (n, row) in rows.into_iter().enumerate() {
                let row: Option<Vec<BigUint>> = row.into_iter().collect();
                rows_full.push(row.ok_or_else(|| format!("missing A({},{},k)", p, n))?);
            }
            complete.insert(p, (b_full, rows_full));
        }
        CountTable::from_parts(n_max, complete).map_err(|e| e.to_string())
    }

    pub fn read(path: &Path) -> Result<CountTable, String> {
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        let file: CacheFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        file.to_table()
    }

    pub fn write(table: &CountTable, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string(&CacheFile::from_table(table))?;
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, text)?;
        fs::rename(&tmp, path)
    }
}

pub enum Loaded {
    /// The cache covered the request.
    Hit(CountTable),
    /// No usable cache; the table was computed (and the cache rewritten).
    Computed { table: CountTable, reason: String },
}

impl Loaded {
    pub fn table(&self) -> &CountTable {
        match self {
            Loaded::Hit(t) | Loaded::Computed { table: t, .. } => t,
        }
    }
}

/// Returns a table covering `ps` up to `n_max`, from the cache if it is valid
/// and large enough, otherwise freshly computed and written back. A rewritten
/// cache keeps the layers of a valid old one when the range allows.
pub fn load_or_build(path: &Path, ps: &[u32], n_max: usize) -> commperm::Result<Loaded> {
    let old = if path.exists() {
        Some(CacheFile::read(path))
    } else {
        None
    };
    let reason = match &old {
        None => "no cache file".to_string(),
        Some(Err(why)) => format!("cache rejected: {}", why),
        Some(Ok(t)) if t.n_max() >= n_max && ps.iter().all(|&p| t.has_p(p)) => {
            return Ok(Loaded::Hit(old.unwrap().unwrap()));
        }
        Some(Ok(_)) => "cache does not cover the request".to_string(),
    };
    let mut want: BTreeSet<u32> = ps.iter().copied().collect();
    let mut n_target = n_max;
    if let Some(Ok(t)) = &old {
        want.extend(t.ps());
        n_target = n_target.max(t.n_max());
    }
    let table = CountTable::build_for(&want.into_iter().collect::<Vec<_>>(), n_target)?;
    CacheFile::write(&table, path)?;
    Ok(Loaded::Computed { table, reason })
}
