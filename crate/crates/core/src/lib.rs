//! Exact combinatorial model of the Brill-Noether curve `W^1_{a+2}` on a
//! chain of `2a+1` elliptic curves, its invariants, and the genus-5
//! gonality analysis.

pub mod bn_curve;
pub mod chain_model;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod gonality5;
pub mod selftest;

pub use combinatorics::Count;
pub use error::{ChainError, CombinatoricsError, CurveError, GonalityError};

/// Serializes a [`Count`] as a decimal string.
pub mod serde_count {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Count;

    pub fn serialize<S: Serializer>(value: &Count, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Count, D::Error> {
        let s = String::deserialize(d)?;
        Count::parse_bytes(s.as_bytes(), 10)
            .ok_or_else(|| serde::de::Error::custom("not a decimal count"))
    }
}
