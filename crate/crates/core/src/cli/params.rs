//! Parameter lookup and sweep ranges.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};

/// Every parameter flag, in the order sweeps nest them (outermost first).
pub const PARAMETERS: [&str; 13] = [
    "p",
    "q",
    "alpha0e",
    "alpha",
    "distortion",
    "dsbs-p",
    "joint",
    "dist",
    "grid-res",
    "refine",
    "margin",
    "L",
    "slope",
];

/// Flags naming input files; these cannot be swept.
pub const FILE_PARAMETERS: [&str; 2] = ["joint", "dist"];

/// Sweeps larger than this are rejected before any evaluation.
pub const MAX_SWEEP_POINTS: usize = 1_000_000;

/// Reads parameters for one evaluation and records the values actually used,
/// defaults included.
pub(crate) struct Lookup<'a> {
    raw: &'a BTreeMap<String, String>,
    command: &'static str,
    resolved: BTreeMap<String, String>,
}

impl<'a> Lookup<'a> {
    pub fn new(raw: &'a BTreeMap<String, String>, command: &'static str) -> Self {
        Self {
            raw,
            command,
            resolved: BTreeMap::new(),
        }
    }

    pub fn into_resolved(self) -> BTreeMap<String, String> {
        self.resolved
    }

    pub fn has(&self, name: &str) -> bool {
        self.raw.contains_key(name)
    }

    pub fn number(&mut self, name: &'static str) -> Result<Option<f64>> {
        let Some(text) = self.raw.get(name) else {
            return Ok(None);
        };
        let value = parse_number(name, text)?;
        self.resolved.insert(name.to_string(), text.clone());
        Ok(Some(value))
    }

    pub fn required(&mut self, name: &'static str) -> Result<f64> {
        self.number(name)?
            .ok_or_else(|| Error::format(format!("--{name}"), format!("required by `{}`", self.command)))
    }

    pub fn or(&mut self, name: &'static str, default: f64) -> Result<f64> {
        match self.number(name)? {
            Some(v) => Ok(v),
            None => {
                self.resolved.insert(name.to_string(), plain(default));
                Ok(default)
            }
        }
    }

    pub fn count(&mut self, name: &'static str, default: u32) -> Result<u32> {
        let Some(text) = self.raw.get(name) else {
            self.resolved.insert(name.to_string(), default.to_string());
            return Ok(default);
        };
        let value = text.trim().parse::<u32>().map_err(|_| {
            Error::format(
                format!("--{name}"),
                format!("expected a nonnegative integer, got `{text}`"),
            )
        })?;
        self.resolved.insert(name.to_string(), text.clone());
        Ok(value)
    }

    pub fn path(&mut self, name: &'static str) -> Option<PathBuf> {
        let text = self.raw.get(name)?;
        self.resolved.insert(name.to_string(), text.clone());
        Some(PathBuf::from(text))
    }
}

pub(crate) fn parse_number(name: &str, text: &str) -> Result<f64> {
    match text.trim().parse::<f64>() {
        Ok(v) if !v.is_nan() => Ok(v),
        _ => Err(Error::format(
            format!("--{name}"),
            format!("expected a number, got `{text}`"),
        )),
    }
}

/// A swept parameter value: `lin:a:b:n` (n evenly spaced points from a to b),
/// `geom:a:b:n` (n log-spaced points), a comma list, or a single value.
/// The empty string is an empty list.
pub(crate) fn parse_range(name: &str, text: &str) -> Result<Vec<String>> {
    let field = format!("--{name}");
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((kind, spec)) = text.split_once(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 || !(kind == "lin" || kind == "geom") {
            return Err(Error::format(
                field,
                format!("expected lin:a:b:n or geom:a:b:n, got `{text}`"),
            ));
        }
        let a = parse_number(name, parts[0])?;
        let b = parse_number(name, parts[1])?;
        let n: usize = parts[2]
            .parse()
            .map_err(|_| Error::format(field.clone(), format!("bad point count `{}`", parts[2])))?;
        if n > MAX_SWEEP_POINTS {
            return Err(Error::format(
                field,
                format!("{n} points exceed the limit of {MAX_SWEEP_POINTS}"),
            ));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::format(field, "range endpoints must be finite"));
        }
        let values: Vec<f64> = if kind == "lin" {
            grid(n, |t| a + (b - a) * t)
        } else {
            if !(a > 0.0 && b > 0.0) {
                return Err(Error::format(field, "geometric ranges need positive endpoints"));
            }
            let (la, lb) = (a.log10(), b.log10());
            grid(n, |t| 10f64.powf(la + (lb - la) * t))
        };
        return Ok(values.into_iter().map(plain).collect());
    }
    text.split(',')
        .map(|item| {
            let item = item.trim();
            parse_number(name, item)?;
            Ok(item.to_string())
        })
        .collect()
}

/// Shortest round-trip text for `v`, in exponent form when very small or large.
pub(crate) fn plain(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e6) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn grid(n: usize, at: impl Fn(f64) -> f64) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![at(0.0)],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    at(1.0)
                } else {
                    at(i as f64 / (n - 1) as f64)
                }
            })
            .collect(),
    }
}

/// True when the value uses range syntax rather than a single literal.
pub(crate) fn is_ranged(text: &str) -> bool {
    let text = text.trim();
    text.is_empty() || text.contains(',') || text.starts_with("lin:") || text.starts_with("geom:")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_ranges() {
        assert_eq!(parse_range("distortion", "lin:0:1:3").unwrap(), ["0", "0.5", "1"]);
        assert_eq!(parse_range("distortion", "lin:0.2:1:1").unwrap(), ["0.2"]);
        assert!(parse_range("distortion", "lin:0:1:0").unwrap().is_empty());
        assert!(parse_range("distortion", "").unwrap().is_empty());
    }

    #[test]
    fn geometric_ranges() {
        let v = parse_range("p", "geom:1e-2:1e-20:19").unwrap();
        assert_eq!(v.len(), 19);
        assert_eq!(v[0], "0.01");
        assert_eq!(v[1], "0.001");
        assert_eq!(v[18], "1e-20");
        assert!(parse_range("p", "geom:0:1:3").is_err());
    }

    #[test]
    fn lists_and_errors() {
        assert_eq!(parse_range("q", "0.1, 0.2").unwrap(), ["0.1", "0.2"]);
        assert!(parse_range("q", "0.1,x").is_err());
        assert!(parse_range("q", "log:1:2:3").is_err());
        assert!(parse_range("q", "lin:1:2").is_err());
        assert!(is_ranged("lin:0:1:2") && is_ranged("1,2") && !is_ranged("0.5"));
    }

    #[test]
    fn lookup_records_defaults() {
        let raw: BTreeMap<String, String> = [("p".to_string(), "0.1".to_string())].into();
        let mut l = Lookup::new(&raw, "test");
        assert_eq!(l.required("p").unwrap(), 0.1);
        assert_eq!(l.or("margin", 1e-9).unwrap(), 1e-9);
        assert!(l.required("q").is_err());
        let resolved = l.into_resolved();
        assert_eq!(resolved["margin"], "1e-9");
    }

    #[test]
    fn malformed_numbers_name_the_flag() {
        let err = parse_number("alpha", "abc").unwrap_err();
        assert!(err.to_string().contains("--alpha"));
        assert!(parse_number("alpha", "NaN").is_err());
    }
}
