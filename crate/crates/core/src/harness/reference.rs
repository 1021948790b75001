use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit in which a packing value is tabulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unit {
    /// Angle in degrees (lines and points).
    Degrees,
    /// Squared chordal or spectral distance.
    SquaredDiameter,
    /// Fubini–Study distance divided by π/2.
    ScaledFs,
}

impl Unit {
    pub fn name(self) -> &'static str {
        match self {
            Unit::Degrees => "degrees",
            Unit::SquaredDiameter => "squared_diameter",
            Unit::ScaledFs => "scaled_fs",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "degrees" | "deg" => Ok(Unit::Degrees),
            "squared_diameter" => Ok(Unit::SquaredDiameter),
            "scaled_fs" => Ok(Unit::ScaledFs),
            other => Err(Error::invalid(format!("unknown unit '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValue {
    pub value: f64,
    pub unit: Unit,
}

/// Best known values keyed by (d, K, N).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceTable {
    rows: BTreeMap<(usize, usize, usize), ReferenceValue>,
}

#[derive(Deserialize)]
struct Record {
    d: usize,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "N")]
    n: usize,
    value: f64,
    unit: String,
}

impl ReferenceTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fails if the key is already present.
    pub fn insert(&mut self, d: usize, k: usize, n: usize, value: f64, unit: Unit) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::invalid(format!("reference value for ({d}, {k}, {n}) is not finite")));
        }
        if self.rows.insert((d, k, n), ReferenceValue { value, unit }).is_some() {
            return Err(Error::invalid(format!("duplicate reference row ({d}, {k}, {n})")));
        }
        Ok(())
    }

    pub fn get(&self, d: usize, k: usize, n: usize) -> Option<ReferenceValue> {
        self.rows.get(&(d, k, n)).copied()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), ReferenceValue)> + '_ {
        self.rows.iter().map(|(k, v)| (*k, *v))
    }

    /// Reads `d,K,N,value,unit` CSV with a header line; `#` starts a comment.
    pub fn from_reader<R: std::io::Read>(reader: R, source: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut table = ReferenceTable::new();
        for (idx, rec) in rdr.deserialize::<Record>().enumerate() {
            let ctx = || format!("{source}, record {}", idx + 1);
            let rec = rec.map_err(|e| Error::parse(ctx(), e))?;
            let unit: Unit = rec.unit.parse().map_err(|e: Error| Error::parse(ctx(), e))?;
            table
                .insert(rec.d, rec.k, rec.n, rec.value, unit)
                .map_err(|e| Error::parse(ctx(), e))?;
        }
        Ok(table)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(file, &path.display().to_string())
    }
}
