//! Certificates written next to compiled programs:
//!
//! ```text
//! ordinal: w^2+1
//! sha256: 3f…
//! ```

use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use sha2::{Digest, Sha256};

use ion_core::ordinals::{parse_ordinal, Ordinal};

pub struct Certificate {
    pub ordinal: Ordinal,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Certificate {
    pub fn for_program(ordinal: &Ordinal, program: &[u8]) -> Self {
        Certificate {
            ordinal: ordinal.clone(),
            sha256: sha256_hex(program),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        text.parse()
            .with_context(|| format!("bad certificate {}", path.display()))
    }
}

impl std::str::FromStr for Certificate {
    type Err = anyhow::Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut ordinal = None;
        let mut sha256 = None;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let Some((key, value)) = line.split_once(':') else {
                bail!("expected `key: value`, got `{line}`");
            };
            match key.trim() {
                "ordinal" => ordinal = Some(parse_ordinal(value.trim())?),
                "sha256" => sha256 = Some(value.trim().to_ascii_lowercase()),
                _ => {}
            }
        }
        match (ordinal, sha256) {
            (Some(ordinal), Some(sha256)) => Ok(Certificate { ordinal, sha256 }),
            _ => bail!("certificate needs both `ordinal` and `sha256` lines"),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ordinal: {}", self.ordinal)?;
        writeln!(f, "sha256: {}", self.sha256)
    }
}
