use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An integer or `-∞`, which compares below every integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum ExtInt {
    #[default]
    NegInf,
    Finite(i64),
}

pub use ExtInt::{Finite, NegInf};

impl ExtInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            Finite(v) => Some(v),
            NegInf => None,
        }
    }

    pub fn is_neg_inf(self) -> bool {
        self == NegInf
    }

    /// Top degree of a finite set of degrees, `-∞` when empty.
    pub fn top<I: IntoIterator<Item = i64>>(it: I) -> Self {
        it.into_iter().max().map_or(NegInf, Finite)
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        Finite(v)
    }
}

impl From<Option<i64>> for ExtInt {
    fn from(v: Option<i64>) -> Self {
        v.map_or(NegInf, Finite)
    }
}

impl Add<i64> for ExtInt {
    type Output = ExtInt;
    fn add(self, rhs: i64) -> ExtInt {
        match self {
            Finite(v) => Finite(v + rhs),
            NegInf => NegInf,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(v) => write!(f, "{v}"),
            NegInf => write!(f, "-inf"),
        }
    }
}

impl Serialize for ExtInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Finite(v) => s.serialize_i64(*v),
            NegInf => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Finite(v)),
            Raw::Str(s) if s == "-inf" => Ok(NegInf),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("expected integer or \"-inf\", got {s:?}"))),
        }
    }
}
