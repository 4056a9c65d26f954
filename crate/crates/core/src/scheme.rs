//! Edge weights: the exponent carried by each child in the defining products.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::index_seq::Alpha;
use crate::ordinal::Ordinal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightScheme {
    /// Every child appears with exponent `w >= 2`.
    Constant(u64),
    /// A child of a vertex of height `h` appears with exponent `h + 1`.
    HeightPlusOne,
}

impl Default for WeightScheme {
    fn default() -> Self {
        WeightScheme::Constant(2)
    }
}

impl WeightScheme {
    pub fn constant(w: u64) -> Result<Self> {
        if w < 2 {
            return Err(Error::InvalidScheme(format!(
                "constant weight must be at least 2, got {w}"
            )));
        }
        Ok(WeightScheme::Constant(w))
    }

    /// The weight of an edge leaving a vertex of height `h > 0`.
    pub fn weight(&self, h: &Ordinal) -> Result<u64> {
        match self {
            WeightScheme::Constant(w) => Ok(*w),
            WeightScheme::HeightPlusOne => {
                h.as_nat().and_then(|n| n.checked_add(1)).ok_or_else(|| {
                    Error::InvalidScheme(format!("height+1 weight undefined at height {h}"))
                })
            }
        }
    }

    pub fn check_alpha(&self, alpha: &Alpha) -> Result<()> {
        match self {
            WeightScheme::Constant(w) if *w < 2 => Err(Error::InvalidScheme(format!(
                "constant weight must be at least 2, got {w}"
            ))),
            WeightScheme::HeightPlusOne if *alpha.value() > Ordinal::omega() => {
                Err(Error::InvalidScheme(format!(
                    "height+1 needs finite heights, i.e. alpha <= w (got {alpha})"
                )))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightScheme::Constant(w) => write!(f, "const:{w}"),
            WeightScheme::HeightPlusOne => f.write_str("height+1"),
        }
    }
}

impl FromStr for WeightScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "height+1" {
            return Ok(WeightScheme::HeightPlusOne);
        }
        let w = s
            .strip_prefix("const:")
            .and_then(|n| n.trim().parse::<u64>().ok())
            .ok_or_else(|| {
                Error::InvalidScheme(format!("expected const:N or height+1, got {s:?}"))
            })?;
        WeightScheme::constant(w)
    }
}

impl Serialize for WeightScheme {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WeightScheme {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
