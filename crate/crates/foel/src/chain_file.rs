//! JSON chain specifications.
//!
//! ```json
//! {
//!   "spins": ["1/2", "1", "3/2"],
//!   "couplings": [1.0, 0.5],
//!   "model": { "type": "heisenberg" }
//! }
//! ```
//!
//! Spins are exact strings, so `"0.5"` is rejected. `model` defaults to the
//! Heisenberg bond; the spin-1 alternative is
//! `{ "type": "bilinear-biquadratic", "t": 0.25 }`.

use std::fmt;
use std::path::Path;

use foel_core::{HalfInteger, ModelKind, SpinChainSpec};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpecFile {
    pub spins: Vec<SpinString>,
    #[serde(default)]
    pub couplings: Vec<f64>,
    #[serde(default)]
    pub model: ModelSpec,
}

/// A site spin written as an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinString(pub HalfInteger);

impl Serialize for SpinString {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for SpinString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        let spin: HalfInteger = raw
            .parse()
            .map_err(|e| de::Error::custom(format!("spin {raw:?}: {e}")))?;
        if spin.doubled() < 1 {
            return Err(de::Error::custom(format!("spin {raw:?} must be at least 1/2")));
        }
        Ok(Self(spin))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    #[default]
    Heisenberg,
    BilinearBiquadratic { t: f64 },
}

impl From<ModelSpec> for ModelKind {
    fn from(m: ModelSpec) -> Self {
        match m {
            ModelSpec::Heisenberg => ModelKind::Heisenberg,
            ModelSpec::BilinearBiquadratic { t } => ModelKind::BilinearBiquadratic { t },
        }
    }
}

impl From<ModelKind> for ModelSpec {
    fn from(m: ModelKind) -> Self {
        match m {
            ModelKind::Heisenberg => ModelSpec::Heisenberg,
            ModelKind::BilinearBiquadratic { t } => ModelSpec::BilinearBiquadratic { t },
        }
    }
}

impl ChainSpecFile {
    pub fn from_chain(chain: &SpinChainSpec) -> Self {
        Self {
            spins: chain.spins().iter().map(|&s| SpinString(s)).collect(),
            couplings: chain.couplings().to_vec(),
            model: chain.model().into(),
        }
    }

    pub fn to_chain(&self) -> Result<SpinChainSpec, ChainFileError> {
        let spins = self.spins.iter().map(|s| s.0).collect();
        SpinChainSpec::new(spins, self.couplings.clone(), self.model.into()).map_err(|e| ChainFileError {
            source_name: None,
            line: None,
            column: None,
            field: Some(chain_error_field(&e)),
            message: e.to_string(),
        })
    }
}

/// Best guess at the field a chain validation error is about.
fn chain_error_field(e: &foel_core::Error) -> String {
    let msg = e.to_string();
    if msg.contains("coupling") {
        "couplings".into()
    } else if msg.contains("biquadratic") {
        "model".into()
    } else {
        "spins".into()
    }
}

/// A chain file that could not be read or does not describe a valid chain.
/// `line` and `column` are 1-based and present for syntax and value errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainFileError {
    pub source_name: Option<String>,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ChainFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.source_name {
            write!(f, "{name}:")?;
        }
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, "{l}:{c}: ")?;
        } else if self.source_name.is_some() {
            f.write_str(" ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "{field}: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ChainFileError {}

pub fn parse_chain(text: &str) -> Result<SpinChainSpec, ChainFileError> {
    let file: ChainSpecFile = serde_json::from_str(text).map_err(|e| ChainFileError {
        source_name: None,
        line: Some(e.line()),
        column: Some(e.column()),
        field: None,
        message: strip_position(&e.to_string()),
    })?;
    file.to_chain()
}

pub fn read_chain(path: &Path) -> Result<SpinChainSpec, ChainFileError> {
    let name = Some(path.display().to_string());
    let text = std::fs::read_to_string(path).map_err(|e| ChainFileError {
        source_name: name.clone(),
        line: None,
        column: None,
        field: None,
        message: e.to_string(),
    })?;
    parse_chain(&text).map_err(|e| ChainFileError { source_name: name, ..e })
}

/// serde_json appends " at line L column C"; the position is kept separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_mixed_chain() {
        let c = parse_chain(r#"{"spins": ["1/2", "1", "3/2"], "couplings": [1, 0.5]}"#).unwrap();
        let doubled: Vec<i64> = c.spins().iter().map(|s| s.doubled()).collect();
        assert_eq!(doubled, [1, 2, 3]);
        assert_eq!(c.couplings(), [1.0, 0.5]);
        assert_eq!(c.model(), ModelKind::Heisenberg);
    }

    #[test]
    fn parses_the_biquadratic_model() {
        let c = parse_chain(
            r#"{"spins": ["1", "1"], "couplings": [1], "model": {"type": "bilinear-biquadratic", "t": 0.25}}"#,
        )
        .unwrap();
        assert_eq!(c.model(), ModelKind::BilinearBiquadratic { t: 0.25 });
    }

    #[test]
    fn single_site_needs_no_couplings() {
        assert_eq!(parse_chain(r#"{"spins": ["2"]}"#).unwrap().len(), 1);
    }

    #[test]
    fn decimal_spins_are_rejected_with_a_location() {
        let e = parse_chain("{\n  \"spins\": [\"1/2\",\n    \"0.5\"],\n  \"couplings\": [1]\n}").unwrap_err();
        assert_eq!(e.line, Some(3));
        assert!(e.message.contains("0.5"), "{e}");
    }

    #[test]
    fn non_positive_couplings_name_the_field() {
        let e = parse_chain(r#"{"spins": ["1/2", "1/2"], "couplings": [-1]}"#).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("couplings"));
        let e = parse_chain(r#"{"spins": ["1/2", "1/2"], "couplings": []}"#).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("couplings"));
    }

    #[test]
    fn unknown_fields_and_bad_syntax_fail() {
        let e = parse_chain(r#"{"spins": ["1/2"], "colour": 3}"#).unwrap_err();
        assert_eq!(e.line, Some(1));
        assert!(e.message.contains("colour"));
        let e = parse_chain("{\"spins\": [\"1/2\"").unwrap_err();
        assert!(e.line.is_some());
        assert!(parse_chain(r#"{"spins": ["0"]}"#).is_err());
        assert!(parse_chain(r#"{"spins": ["1/2", "1/2"], "couplings": [1], "model": {"type": "bilinear-biquadratic", "t": 0}}"#)
            .is_err());
    }

    #[test]
    fn round_trips_through_json() {
        let c = parse_chain(r#"{"spins": ["3/2", "1/2"], "couplings": [0.7]}"#).unwrap();
        let text = serde_json::to_string(&ChainSpecFile::from_chain(&c)).unwrap();
        assert!(text.contains(r#""3/2""#));
        assert_eq!(parse_chain(&text).unwrap(), c);
    }
}
