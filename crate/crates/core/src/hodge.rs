//! User-supplied tables of higher-genus Hodge integrals.
//!
//! One record per line:
//!
//! ```text
//! g; a_1,...,a_n; k1,k2,...; p/q
//! ```
//!
//! meaning the integral over the moduli of `n`-pointed genus-`g` curves of
//! `prod psi_i^{a_i} * prod c_{k_j}(E)` equals `p/q` (`E` the Hodge bundle).
//! The Chern list may be empty. Blank lines and `#` comments are skipped.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Identifies one tabulated integral: genus, sorted psi exponents (zeros
/// kept — the number of points matters), and the sorted Chern indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HodgeKey {
    pub genus: u32,
    pub psi: Vec<u32>,
    pub chern: Vec<u32>,
}

impl HodgeKey {
    pub fn new(genus: u32, mut psi: Vec<u32>, mut chern: Vec<u32>) -> Self {
        psi.sort_unstable_by(|a, b| b.cmp(a));
        chern.sort_unstable();
        HodgeKey { genus, psi, chern }
    }
}

impl fmt::Display for HodgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let psi: Vec<String> = self.psi.iter().map(|a| a.to_string()).collect();
        let chern: Vec<String> = self.chern.iter().map(|k| k.to_string()).collect();
        write!(f, "{}; {}; {}", self.genus, psi.join(","), chern.join(","))
    }
}

#[derive(Clone, Debug, Default)]
pub struct HodgeTable {
    map: HashMap<HodgeKey, Rat>,
}

impl HodgeTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(';').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(Error::HodgeTable(format!(
                    "line {}: expected 4 ';'-separated fields, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let genus: u32 = fields[0]
                .parse()
                .map_err(|_| Error::HodgeTable(format!("line {}: bad genus", lineno + 1)))?;
            let psi = parse_list(fields[1])
                .ok_or_else(|| Error::HodgeTable(format!("line {}: bad exponent list", lineno + 1)))?;
            if psi.is_empty() {
                return Err(Error::HodgeTable(format!(
                    "line {}: at least one marked point is required",
                    lineno + 1
                )));
            }
            let chern = parse_list(fields[2])
                .ok_or_else(|| Error::HodgeTable(format!("line {}: bad Chern list", lineno + 1)))?;
            let value: Rat = fields[3]
                .parse()
                .map_err(|e| Error::HodgeTable(format!("line {}: {e}", lineno + 1)))?;
            map.insert(HodgeKey::new(genus, psi, chern), value);
        }
        Ok(HodgeTable { map })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &HodgeKey) -> Option<&Rat> {
        self.map.get(key)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

fn parse_list(field: &str) -> Option<Vec<u32>> {
    if field.is_empty() {
        return Some(Vec::new());
    }
    field.split(',').map(|t| t.trim().parse().ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_records_and_comments() {
        let table = HodgeTable::parse(
            "# genus-2 one-point integrals\n\
             2; 4; ; 1/1152\n\
             2; 3; 1; 1/480\n\
             \n\
             2; 2; 2; 7/5760\n",
        )
        .unwrap();
        assert_eq!(table.len(), 3);
        assert_eq!(
            table.get(&HodgeKey::new(2, vec![4], vec![])),
            Some(&Rat::new(1, 1152))
        );
        assert_eq!(
            table.get(&HodgeKey::new(2, vec![2], vec![2])),
            Some(&Rat::new(7, 5760))
        );
    }

    #[test]
    fn key_normalization() {
        let a = HodgeKey::new(2, vec![0, 3, 1], vec![2, 1]);
        let b = HodgeKey::new(2, vec![3, 1, 0], vec![1, 2]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "2; 3,1,0; 1,2");
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(HodgeTable::parse("2; 4; 1").is_err());
        assert!(HodgeTable::parse("x; 4; ; 1/2").is_err());
        assert!(HodgeTable::parse("2; 4; ; one half").is_err());
    }
}
