//! Append-only JSON-lines cache of class decompositions.
//!
//! Each line is
//! `{"datum_hash": .., "element_key": .., "decomposition": {class_id: [[power, coeff], ..]}, "engine_version": ..}`.
//! Coefficients that fit in an `i64` are JSON numbers, larger ones strings.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{ClassDecomposition, LaurentPoly};
use crate::error::{Error, Result};
use crate::root_datum::RootDatum;

/// Version tag written into every cache line; lines with another tag are
/// ignored on load.
pub const ENGINE_VERSION: &str = concat!("adlv-core/", env!("CARGO_PKG_VERSION"), "/enc1");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub datum_hash: String,
    pub element_key: String,
    pub decomposition: BTreeMap<String, Vec<(i64, Value)>>,
    pub engine_version: String,
}

impl CacheRecord {
    pub fn from_decomposition(d: &RootDatum, dec: &ClassDecomposition) -> Self {
        CacheRecord {
            datum_hash: dec.datum_hash.clone(),
            element_key: d.encode(&dec.source),
            decomposition: dec
                .terms
                .iter()
                .map(|(id, t)| (id.clone(), poly_to_json(&t.poly)))
                .collect(),
            engine_version: ENGINE_VERSION.to_string(),
        }
    }

    pub fn polynomials(&self) -> Result<BTreeMap<String, LaurentPoly>> {
        self.decomposition
            .iter()
            .map(|(id, terms)| Ok((id.clone(), poly_from_json(terms)?)))
            .collect()
    }
}

pub fn poly_to_json(p: &LaurentPoly) -> Vec<(i64, Value)> {
    p.terms()
        .map(|(e, c)| {
            let v = match c.to_i64() {
                Some(x) => Value::from(x),
                None => Value::from(c.to_string()),
            };
            (e, v)
        })
        .collect()
}

pub fn poly_from_json(terms: &[(i64, Value)]) -> Result<LaurentPoly> {
    let mut p = LaurentPoly::zero();
    for (e, v) in terms {
        let c: BigInt = match v {
            Value::Number(n) => n
                .as_i64()
                .map(BigInt::from)
                .ok_or_else(|| Error::Integrity(format!("bad coefficient {n}")))?,
            Value::String(s) => s
                .parse()
                .map_err(|_| Error::Integrity(format!("bad coefficient {s:?}")))?,
            other => return Err(Error::Integrity(format!("bad coefficient {other}"))),
        };
        p.add_term(*e, c);
    }
    Ok(p)
}

/// A cache file for one datum.
pub struct CacheFile {
    path: PathBuf,
    datum_hash: String,
    entries: BTreeMap<String, BTreeMap<String, LaurentPoly>>,
}

impl CacheFile {
    /// Loads every line for `datum_hash`; duplicate keys must agree exactly.
    pub fn open(path: &Path, datum_hash: &str) -> Result<Self> {
        let mut cache = CacheFile {
            path: path.to_path_buf(),
            datum_hash: datum_hash.to_string(),
            entries: BTreeMap::new(),
        };
        if !path.exists() {
            return Ok(cache);
        }
        let reader = BufReader::new(File::open(path)?);
        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: CacheRecord = serde_json::from_str(&line)
                .map_err(|e| Error::Integrity(format!("{}:{}: {e}", path.display(), n + 1)))?;
            if rec.datum_hash != datum_hash || rec.engine_version != ENGINE_VERSION {
                continue;
            }
            let polys = rec.polynomials()?;
            cache.merge(&rec.element_key, polys)?;
        }
        Ok(cache)
    }

    fn merge(&mut self, key: &str, polys: BTreeMap<String, LaurentPoly>) -> Result<bool> {
        match self.entries.get(key) {
            Some(existing) if *existing == polys => Ok(false),
            Some(_) => Err(Error::Integrity(format!(
                "conflicting cached decompositions for {key}"
            ))),
            None => {
                self.entries.insert(key.to_string(), polys);
                Ok(true)
            }
        }
    }

    pub fn entries(&self) -> &BTreeMap<String, BTreeMap<String, LaurentPoly>> {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&BTreeMap<String, LaurentPoly>> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Appends the decompositions not yet present; checks the rest for equality.
    pub fn append(&mut self, d: &RootDatum, decs: &[ClassDecomposition]) -> Result<usize> {
        let mut lines = Vec::new();
        for dec in decs {
            if dec.datum_hash != self.datum_hash {
                return Err(Error::Integrity("decomposition from another datum".into()));
            }
            let rec = CacheRecord::from_decomposition(d, dec);
            if self.merge(&rec.element_key, dec.polynomials())? {
                lines.push(serde_json::to_string(&rec)?);
            }
        }
        if !lines.is_empty() {
            let mut f = OpenOptions::new()
                .create(true)
                .append(true)
                .open(&self.path)?;
            for l in &lines {
                writeln!(f, "{l}")?;
            }
        }
        Ok(lines.len())
    }
}
