//! Registry of class representatives in a line-oriented text format:
//!
//! ```text
//! id | n | function | families | N | Nm | orbit multiset or - | splits
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::field::make_field;
use crate::planarfn::PlanarFn;

use super::orbits::OrbitMultiset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Splits {
    No,
    NotApplicable,
    Partner(String),
    Unknown,
}

impl fmt::Display for Splits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Splits::No => write!(f, "No"),
            Splits::NotApplicable => write!(f, "NA"),
            Splits::Partner(id) => write!(f, "{id}"),
            Splits::Unknown => write!(f, "-"),
        }
    }
}

impl Splits {
    fn parse(s: &str) -> Splits {
        match s {
            "No" => Splits::No,
            "NA" => Splits::NotApplicable,
            "-" | "" => Splits::Unknown,
            id => Splits::Partner(id.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRecord {
    pub id: String,
    pub representative: PlanarFn,
    pub families: Vec<String>,
    /// `(|N|, |N_m|)`; `None` when not applicable or not known.
    pub nuclei: Option<(u64, u64)>,
    pub orbits: Option<OrbitMultiset>,
    pub splits: Splits,
}

impl ClassRecord {
    pub fn new(id: impl Into<String>, representative: PlanarFn, families: Vec<String>) -> Self {
        ClassRecord {
            id: id.into(),
            representative,
            families,
            nuclei: None,
            orbits: None,
            splits: Splits::Unknown,
        }
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 8 {
            return Err(Error::Parse(format!("catalog line needs 8 fields: `{line}`")));
        }
        let n: usize = fields[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad degree `{}`", fields[1])))?;
        let representative = PlanarFn::parse(make_field(n)?, fields[2])?;
        let families = match fields[3] {
            "-" | "" => Vec::new(),
            s => s.split(',').map(|t| t.trim().to_string()).collect(),
        };
        let order = |s: &str| -> Result<Option<u64>> {
            match s {
                "NA" | "-" => Ok(None),
                s => s.parse().map(Some).map_err(|_| Error::Parse(format!("bad nucleus order `{s}`"))),
            }
        };
        let nuclei = match (order(fields[4])?, order(fields[5])?) {
            (Some(a), Some(b)) => Some((a, b)),
            (None, None) => None,
            _ => return Err(Error::Parse(format!("incomplete nuclei in `{line}`"))),
        };
        let orbits = match fields[6] {
            "-" | "" => None,
            s => Some(s.parse()?),
        };
        Ok(ClassRecord {
            id: fields[0].to_string(),
            representative,
            families,
            nuclei,
            orbits,
            splits: Splits::parse(fields[7]),
        })
    }

    pub fn to_line(&self) -> String {
        let (nu, nm) = match (self.nuclei, self.representative.is_do()) {
            (_, false) => ("NA".to_string(), "NA".to_string()),
            (Some((a, b)), true) => (a.to_string(), b.to_string()),
            (None, true) => ("-".to_string(), "-".to_string()),
        };
        let families = if self.families.is_empty() {
            "-".to_string()
        } else {
            self.families.join(",")
        };
        let orbits = self.orbits.as_ref().map_or("-".to_string(), |o| o.to_string());
        format!(
            "{} | {} | {} | {} | {} | {} | {} | {}",
            self.id,
            self.representative.n(),
            self.representative,
            families,
            nu,
            nm,
            orbits,
            self.splits
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Catalog {
    pub records: Vec<ClassRecord>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses catalog text; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let records = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(ClassRecord::parse_line)
            .collect::<Result<Vec<_>>>()?;
        Ok(Catalog { records })
    }

    pub fn to_text(&self) -> String {
        self.records.iter().map(|r| r.to_line() + "\n").collect()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&ClassRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    /// Records over GF(3^n), in order.
    pub fn restricted(&self, n: usize) -> Catalog {
        Catalog {
            records: self.records.iter().filter(|r| r.representative.n() == n).cloned().collect(),
        }
    }
}
