//! Maximal p-relative canonical dimensions of the inner exceptional indices.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TitsError};
use crate::rootkit::Kind;

const EMBEDDED: &str = include_str!("../../../data/candim.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeValue {
    pub p: u32,
    pub value: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandimRow {
    /// The table cell as printed.
    pub cell: String,
    pub values: Vec<PrimeValue>,
    /// Value for every prime, for rows given as a bare number.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub all: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandimTable {
    pub comment: String,
    pub rows: BTreeMap<String, CandimRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Candim {
    Value(u32),
    NotListed,
}

impl Candim {
    /// Value used when comparing rows: unlisted primes count as 0.
    pub fn or_zero(self) -> u32 {
        match self {
            Candim::Value(v) => v,
            Candim::NotListed => 0,
        }
    }
}

impl fmt::Display for Candim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Candim::Value(v) => write!(f, "{v}"),
            Candim::NotListed => f.write_str("not listed"),
        }
    }
}

/// A pair of labels with the first prime at which the table separates them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub left: String,
    pub right: String,
    pub p: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Distinguishing {
    pub ok: bool,
    pub witnesses: Vec<Witness>,
}

impl CandimTable {
    pub fn embedded() -> Self {
        serde_json::from_str(EMBEDDED).expect("embedded table parses")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| TitsError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| TitsError::Json {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn max_candim(&self, label: &str, p: u32) -> Result<Candim> {
        let row = self
            .rows
            .get(label)
            .ok_or_else(|| TitsError::Table(format!("unknown label {label}")))?;
        if let Some(v) = row.all {
            return Ok(Candim::Value(v));
        }
        Ok(row
            .values
            .iter()
            .find(|pv| pv.p == p)
            .map_or(Candim::NotListed, |pv| Candim::Value(pv.value)))
    }

    /// Labels of one type: the `1E6`, `E7`, `E8`, `F4` or `G2` prefix.
    pub fn labels_of(&self, kind: Kind) -> Vec<String> {
        let prefix = match kind {
            Kind::E => return ["1E6_", "E7_", "E8_"].iter().flat_map(|p| self.with_prefix(p)).collect(),
            Kind::F => "F4_",
            Kind::G => "G2_",
            _ => return Vec::new(),
        };
        self.with_prefix(prefix)
    }

    pub fn with_prefix(&self, prefix: &str) -> Vec<String> {
        self.rows.keys().filter(|l| l.starts_with(prefix)).cloned().collect()
    }

    fn primes(&self) -> Vec<u32> {
        self.rows
            .values()
            .flat_map(|r| r.values.iter().map(|pv| pv.p))
            .sorted()
            .dedup()
            .collect()
    }

    /// Every pair of labels with the given prefix differs at some prime.
    pub fn verify_distinguishing(&self, prefix: &str) -> Distinguishing {
        let primes = self.primes();
        let labels = self.with_prefix(prefix);
        let witnesses: Vec<Witness> = labels
            .iter()
            .tuple_combinations()
            .map(|(a, b)| {
                let p = primes.iter().copied().find(|&p| {
                    let va = self.max_candim(a, p).map(Candim::or_zero).unwrap_or(0);
                    let vb = self.max_candim(b, p).map(Candim::or_zero).unwrap_or(0);
                    va != vb
                });
                Witness { left: a.clone(), right: b.clone(), p }
            })
            .collect();
        Distinguishing {
            ok: witnesses.iter().all(|w| w.p.is_some()),
            witnesses,
        }
    }
}

/// Label prefixes of the five inner exceptional types.
pub const PREFIXES: [&str; 5] = ["1E6_", "E7_", "E8_", "F4_", "G2_"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        let t = CandimTable::embedded();
        assert_eq!(t.rows.len(), 24);
        assert_eq!(t.max_candim("E8_0_248", 5).unwrap(), Candim::Value(24));
        assert_eq!(t.max_candim("G2_0_14", 2).unwrap(), Candim::Value(3));
        assert_eq!(t.max_candim("E7_7_0", 7).unwrap(), Candim::Value(0));
        assert_eq!(t.max_candim("E7_1_66", 3).unwrap(), Candim::NotListed);
        assert!(t.max_candim("E9_0_0", 2).is_err());
    }

    #[test]
    fn every_type_is_distinguished() {
        let t = CandimTable::embedded();
        for prefix in PREFIXES {
            let d = t.verify_distinguishing(prefix);
            assert!(d.ok, "{prefix}: {:?}", d.witnesses);
        }
        let e7 = t.verify_distinguishing("E7_");
        let w = e7
            .witnesses
            .iter()
            .find(|w| (w.left.as_str(), w.right.as_str()) == ("E7_1_66", "E7_1_78"))
            .unwrap();
        assert_eq!(w.p, Some(2));
    }

    #[test]
    fn cells_mention_every_listed_value() {
        for (label, row) in &CandimTable::embedded().rows {
            for pv in &row.values {
                assert!(row.cell.contains(&format!("${}$, $p={}$", pv.value, pv.p)), "{label}");
            }
        }
    }
}
