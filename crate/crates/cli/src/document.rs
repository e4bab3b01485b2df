//! JSON documents read and written by the command-line tool.

use std::fmt;
use std::path::Path;

use hstarkit::LatticeSimplex;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

/// Largest magnitude written as a bare JSON number, `2^53 - 1`.
pub const MAX_SAFE_INTEGER: i64 = (1 << 53) - 1;

/// Arbitrary-precision integer that serializes as a JSON number when it is
/// exactly representable as a double and as a decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JsonInt(pub BigInt);

impl From<BigInt> for JsonInt {
    fn from(x: BigInt) -> Self {
        JsonInt(x)
    }
}

impl From<&BigInt> for JsonInt {
    fn from(x: &BigInt) -> Self {
        JsonInt(x.clone())
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.abs() <= MAX_SAFE_INTEGER => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonInt;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                v.trim().parse::<BigInt>().map(JsonInt).map_err(|_| E::custom(format!("not an integer: {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexDocument {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<JsonInt>>,
    /// Known h*-vector, checked by `verify-suite` and `hstar`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_hstar: Option<Vec<u64>>,
}

impl SimplexDocument {
    pub fn from_simplex(name: Option<String>, s: &LatticeSimplex) -> Self {
        SimplexDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            name,
            ambient_dim: s.ambient_dim(),
            vertices: s.vertices().iter().map(|v| v.iter().map(JsonInt::from).collect()).collect(),
            expected_hstar: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: SimplexDocument =
            serde_json::from_str(text).map_err(|e| CliError::Parse(format!("invalid document: {e}")))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(CliError::Parse(format!("unsupported schema_version {:?}", doc.schema_version)));
        }
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn simplex(&self) -> Result<LatticeSimplex, CliError> {
        let vertices = self.vertices.iter().map(|v| v.iter().map(|x| x.0.clone()).collect()).collect();
        LatticeSimplex::from_vertices(self.ambient_dim, vertices).map_err(|e| CliError::Parse(e.to_string()))
    }

    /// Compact single-line JSON followed by a newline.
    pub fn to_json_line(&self) -> String {
        to_json_line(self)
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| "unnamed".to_string())
    }
}

pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("documents always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_integers_become_strings() {
        let small = JsonInt(BigInt::from(MAX_SAFE_INTEGER));
        let big = JsonInt(BigInt::from(MAX_SAFE_INTEGER) + 1);
        let neg = JsonInt(-BigInt::from(MAX_SAFE_INTEGER) - 1);
        assert_eq!(serde_json::to_string(&small).unwrap(), "9007199254740991");
        assert_eq!(serde_json::to_string(&big).unwrap(), "\"9007199254740992\"");
        assert_eq!(serde_json::to_string(&neg).unwrap(), "\"-9007199254740992\"");
        for x in [small, big, neg] {
            let back: JsonInt = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn document_round_trip_and_field_order() {
        let text = r#"{"schema_version":"1","name":"t","ambient_dim":2,"vertices":[[0,0],[1,0],["0","1"]]}"#;
        let doc = SimplexDocument::parse(text).unwrap();
        let line = doc.to_json_line();
        assert_eq!(
            line,
            "{\"schema_version\":\"1\",\"name\":\"t\",\"ambient_dim\":2,\"vertices\":[[0,0],[1,0],[0,1]]}\n"
        );
        assert_eq!(SimplexDocument::parse(&line).unwrap(), doc);
        assert_eq!(doc.simplex().unwrap().normalized_volume(), BigInt::from(1));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(SimplexDocument::parse("{").is_err());
        assert!(SimplexDocument::parse(r#"{"schema_version":"2","ambient_dim":0,"vertices":[[]]}"#).is_err());
        let doc =
            SimplexDocument::parse(r#"{"schema_version":"1","ambient_dim":2,"vertices":[[0,0],[1,1],[2,2]]}"#).unwrap();
        assert!(doc.simplex().is_err());
        assert!(SimplexDocument::parse(r#"{"schema_version":"1","ambient_dim":1,"vertices":[[0],["x"]]}"#).is_err());
    }
}
