//! Flat `(p, n, k, value)` records shared by table and histogram exports.
//!
//! Values are decimal strings; they leave the 64-bit range around `n = 20`.

use std::io::Write;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub p: u32,
    pub n: usize,
    pub k: usize,
    pub value: String,
}

impl CountRecord {
    pub fn new(p: u32, n: usize, k: usize, value: &BigUint) -> Self {
        CountRecord {
            p,
            n,
            k,
            value: value.to_str_radix(10),
        }
    }

    pub fn parse_value(&self) -> Result<BigUint> {
        parse_decimal(&self.value)
    }
}

pub fn parse_decimal(s: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a nonnegative decimal: {:?}", s)));
    }
    BigUint::parse_bytes(s.as_bytes(), 10)
        .ok_or_else(|| Error::Parse(format!("not a nonnegative decimal: {:?}", s)))
}

/// CSV with header `p,n,k,value`.
pub fn write_csv<W: Write>(records: &[CountRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for rec in records {
        w.serialize(rec).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<CountRecord>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize()
        .map(|rec| rec.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

/// One JSON object per line: `{"p":2,"n":3,"k":1,"value":"8"}`.
pub fn write_jsonl<W: Write>(records: &[CountRecord], mut out: W) -> Result<()> {
    for rec in records {
        let line = serde_json::to_string(rec).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out, "{}", line)?;
    }
    Ok(())
}
