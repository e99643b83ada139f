//! Shared memo table for moduli integrals, with optional text persistence.
//!
//! The table behaves as a single logical map under concurrent access. The
//! on-disk form is a versioned, self-describing text file; a file with an
//! unknown header or corrupt lines is ignored (recomputation is always safe),
//! and loading merges entries so concurrent runs never lose each other's work.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Mutex, OnceLock};

use crate::rational::Rat;

const CACHE_HEADER: &str = "gwloc-cache v1";

/// Key of a memoized integral over a moduli space of pointed curves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegralKey {
    pub genus: u8,
    /// Cotangent-class exponents, sorted descending (zeros kept: the number
    /// of points is part of the key).
    pub exponents: Vec<u32>,
    /// Power of the genus-1 Hodge class in the integrand (0 or 1).
    pub lambda_power: u8,
}

#[derive(Default)]
pub struct IntegralCache {
    map: Mutex<HashMap<IntegralKey, Rat>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl IntegralCache {
    pub fn get(&self, key: &IntegralKey) -> Option<Rat> {
        let found = self.map.lock().unwrap().get(key).cloned();
        if found.is_some() {
            self.hits.fetch_add(1, Ordering::Relaxed);
        } else {
            self.misses.fetch_add(1, Ordering::Relaxed);
        }
        found
    }

    pub fn insert(&self, key: IntegralKey, value: Rat) {
        self.map.lock().unwrap().insert(key, value);
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    /// Merge entries from `path` into the in-memory table. Returns the number
    /// of records read, or a human-readable warning; never fails the caller.
    pub fn load(&self, path: &Path) -> std::result::Result<usize, String> {
        let file = std::fs::File::open(path).map_err(|e| format!("cannot read {path:?}: {e}"))?;
        let mut lines = BufReader::new(file).lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == CACHE_HEADER => {}
            _ => return Err(format!("{path:?}: unknown cache version, ignoring")),
        }
        let mut count = 0usize;
        let mut map = self.map.lock().unwrap();
        for line in lines {
            let Ok(line) = line else { break };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = parse_line(line) else {
                return Err(format!("{path:?}: corrupt line {line:?}, ignoring file"));
            };
            map.entry(key).or_insert(value);
            count += 1;
        }
        Ok(count)
    }

    /// Write the table to `path`, merging with any records already there so
    /// that concurrently appended entries survive.
    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        if path.exists() {
            let _ = self.load(path);
        }
        let mut entries: Vec<(IntegralKey, Rat)> = {
            let map = self.map.lock().unwrap();
            map.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
        };
        entries.sort_by(|a, b| {
            (a.0.genus, &a.0.exponents, a.0.lambda_power).cmp(&(
                b.0.genus,
                &b.0.exponents,
                b.0.lambda_power,
            ))
        });
        let mut out = String::new();
        out.push_str(CACHE_HEADER);
        out.push('\n');
        for (k, v) in entries {
            let exps: Vec<String> = k.exponents.iter().map(|e| e.to_string()).collect();
            out.push_str(&format!("{};{};{};{}\n", k.genus, exps.join(","), k.lambda_power, v));
        }
        let tmp = path.with_extension("tmp");
        {
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(out.as_bytes())?;
        }
        std::fs::rename(&tmp, path)
    }
}

fn parse_line(line: &str) -> Option<(IntegralKey, Rat)> {
    let mut fields = line.split(';');
    let genus: u8 = fields.next()?.trim().parse().ok()?;
    let exps_field = fields.next()?.trim();
    let exponents: Vec<u32> = if exps_field.is_empty() {
        Vec::new()
    } else {
        exps_field
            .split(',')
            .map(|t| t.trim().parse().ok())
            .collect::<Option<Vec<u32>>>()?
    };
    let lambda_power: u8 = fields.next()?.trim().parse().ok()?;
    let value: Rat = fields.next()?.trim().parse().ok()?;
    if fields.next().is_some() {
        return None;
    }
    Some((IntegralKey { genus, exponents, lambda_power }, value))
}

/// The process-wide integral memo.
pub fn global() -> &'static IntegralCache {
    static CACHE: OnceLock<IntegralCache> = OnceLock::new();
    CACHE.get_or_init(IntegralCache::default)
}
