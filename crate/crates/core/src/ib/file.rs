//! JSON persistence of lookup-table sets.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use super::{LutHeader, LutSet};
use crate::error::{Error, Result};

impl LutSet {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::checked(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        serde_json::to_writer(&mut out, self)?;
        out.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let input = BufReader::new(File::open(path)?);
        Self::checked(serde_json::from_reader(input)?)
    }

    fn checked(set: Self) -> Result<Self> {
        if set.header.version != LutHeader::FORMAT_VERSION {
            return Err(Error::Format(format!(
                "table file version {} is not supported (expected {})",
                set.header.version,
                LutHeader::FORMAT_VERSION
            )));
        }
        Ok(set)
    }
}
