//! JSON documents describing pmfs, channels and distortion matrices.
//!
//! ```json
//! { "alphabet_sizes": [2, 3], "values": [0, 1, "inf", "inf", 1, 0] }
//! ```
//!
//! `values` is row-major over `alphabet_sizes`; the string `"inf"` stands for
//! `+inf` and is only meaningful in distortion matrices. For a channel, the
//! last size is the output alphabet and the leading sizes are the
//! conditioning alphabets.

use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::info::{Channel, DistortionMatrix, FinitePmf, JointPmf, JointTable};

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayDocument {
    pub alphabet_sizes: Vec<usize>,
    pub values: Vec<f64>,
}

impl ArrayDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text).map_err(|e| Error::format("document", e.to_string()))?;
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::format("document", "expected a JSON object"))?;

        let sizes = obj
            .get("alphabet_sizes")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::format("alphabet_sizes", "missing or not an array"))?;
        let alphabet_sizes = sizes
            .iter()
            .enumerate()
            .map(|(i, v)| match v.as_u64() {
                Some(n) if n > 0 => Ok(n as usize),
                _ => Err(Error::format(
                    format!("alphabet_sizes[{i}]"),
                    format!("expected a positive integer, got {v}"),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        if alphabet_sizes.is_empty() {
            return Err(Error::format("alphabet_sizes", "empty"));
        }

        let raw = obj
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::format("values", "missing or not an array"))?;
        let values = raw
            .iter()
            .enumerate()
            .map(|(i, v)| match v {
                Value::Number(n) => n
                    .as_f64()
                    .ok_or_else(|| Error::format(format!("values[{i}]"), "not representable as f64")),
                Value::String(s) if s.trim().eq_ignore_ascii_case("inf") => Ok(f64::INFINITY),
                other => Err(Error::format(
                    format!("values[{i}]"),
                    format!("expected a number or \"inf\", got {other}"),
                )),
            })
            .collect::<Result<Vec<_>>>()?;

        let expected: usize = alphabet_sizes.iter().product();
        if values.len() != expected {
            return Err(Error::format(
                "values",
                format!(
                    "alphabet_sizes {alphabet_sizes:?} need {expected} values, got {}",
                    values.len()
                ),
            ));
        }
        Ok(Self { alphabet_sizes, values })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn require_rank(&self, rank: usize, what: &str) -> Result<()> {
        if self.alphabet_sizes.len() != rank {
            return Err(Error::format(
                "alphabet_sizes",
                format!("a {what} needs {rank} sizes, got {}", self.alphabet_sizes.len()),
            ));
        }
        Ok(())
    }

    pub fn into_pmf(self) -> Result<FinitePmf> {
        self.require_rank(1, "pmf")?;
        FinitePmf::new(self.values)
    }

    pub fn into_joint(self) -> Result<JointPmf> {
        self.require_rank(2, "joint pmf")?;
        JointPmf::new(self.alphabet_sizes[0], self.alphabet_sizes[1], self.values)
    }

    pub fn into_table(self) -> Result<JointTable> {
        JointTable::new(self.alphabet_sizes, self.values)
    }

    pub fn into_channel(self) -> Result<Channel> {
        if self.alphabet_sizes.len() < 2 {
            return Err(Error::format("alphabet_sizes", "a channel needs at least 2 sizes"));
        }
        let (outputs, conditioning) = self.alphabet_sizes.split_last().expect("nonempty");
        Channel::new(conditioning.iter().product(), *outputs, self.values)
    }

    pub fn into_distortion(self) -> Result<DistortionMatrix> {
        self.require_rank(2, "distortion matrix")?;
        DistortionMatrix::new(self.alphabet_sizes[0], self.alphabet_sizes[1], self.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_erasure_distortion() {
        let doc = ArrayDocument::parse(r#"{"alphabet_sizes":[2,3],"values":[0,1,"inf","inf",1,0]}"#).unwrap();
        assert_eq!(doc.into_distortion().unwrap(), DistortionMatrix::erasure());
    }

    #[test]
    fn parses_joint_and_channel() {
        let joint = ArrayDocument::parse(r#"{"alphabet_sizes":[2,2],"values":[0.375,0.125,0.125,0.375]}"#)
            .unwrap()
            .into_joint()
            .unwrap();
        assert_eq!(joint, JointPmf::dsbs(0.25).unwrap());
        let ch = ArrayDocument::parse(r#"{"alphabet_sizes":[2,2,3],"values":[1,0,0, 0,1,0, 0,1,0, 0,0,1]}"#)
            .unwrap()
            .into_channel()
            .unwrap();
        assert_eq!((ch.inputs(), ch.outputs()), (4, 3));
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (r#"[1,2]"#, "document"),
            (r#"{"values":[1]}"#, "alphabet_sizes"),
            (r#"{"alphabet_sizes":[0],"values":[]}"#, "alphabet_sizes[0]"),
            (r#"{"alphabet_sizes":[2]}"#, "values"),
            (r#"{"alphabet_sizes":[2],"values":[0.5,"x"]}"#, "values[1]"),
            (r#"{"alphabet_sizes":[2],"values":[1]}"#, "values"),
        ];
        for (text, field) in cases {
            match ArrayDocument::parse(text) {
                Err(Error::Format { field: f, .. }) => assert_eq!(f, field, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn rank_is_checked() {
        let doc = ArrayDocument::parse(r#"{"alphabet_sizes":[4],"values":[0.25,0.25,0.25,0.25]}"#).unwrap();
        assert!(doc.clone().into_joint().is_err());
        assert_eq!(doc.into_pmf().unwrap().len(), 4);
    }
}
