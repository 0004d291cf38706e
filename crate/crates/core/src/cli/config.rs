//! The JSON run configuration.
//!
//! ```json
//! {
//!   "coefficients": {"kind": "periodic", "a": ["2", "3"], "b": "1", "c": "1", "d": "1"},
//!   "initial": {"x_prev": "1", "x0": "1", "y_prev": "1", "y0": "1"},
//!   "defaults": {"format": "csv", "horizon": 10}
//! }
//! ```
//!
//! Rationals are strings in the `[-]digits[/digits]` grammar. A coefficient
//! may be written as a single literal or a list; constant kind needs exactly
//! one value. Unknown keys are rejected.

use serde::Deserialize;

use crate::coefficients::{CoefficientQuad, SequenceKind};
use crate::engine::InitialState;
use crate::error::Error;
use crate::numeric::ExactRational;

use super::Format;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(ExactRational),
    Many(Vec<ExactRational>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<ExactRational> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindSpec {
    Constant,
    Periodic,
    Table,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefficientSpec {
    kind: KindSpec,
    a: OneOrMany,
    b: OneOrMany,
    c: OneOrMany,
    d: OneOrMany,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct InitialSpec {
    x_prev: ExactRational,
    x0: ExactRational,
    y_prev: ExactRational,
    y0: ExactRational,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    pub format: Option<Format>,
    pub horizon: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDocument {
    coefficients: CoefficientSpec,
    initial: InitialSpec,
    #[serde(default)]
    defaults: Defaults,
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub coefficients: CoefficientQuad,
    pub initial: InitialState,
    pub defaults: Defaults,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Invalid(#[from] Error),
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let doc: ConfigDocument = serde_json::from_str(text)?;
        let kind = match doc.coefficients.kind {
            KindSpec::Constant => SequenceKind::Constant,
            KindSpec::Periodic => SequenceKind::Periodic,
            KindSpec::Table => SequenceKind::Table,
        };
        let c = doc.coefficients;
        let coefficients = CoefficientQuad::new(
            kind,
            c.a.into_vec(),
            c.b.into_vec(),
            c.c.into_vec(),
            c.d.into_vec(),
        )?;
        let i = doc.initial;
        let initial = InitialState::new(i.x_prev, i.x0, i.y_prev, i.y0)?;
        Ok(RunConfig {
            coefficients,
            initial,
            defaults: doc.defaults,
        })
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIT: &str = r#"{
        "coefficients": {"kind": "constant", "a": "1", "b": "1", "c": "1", "d": "1"},
        "initial": {"x_prev": "1", "x0": "1", "y_prev": "1", "y0": "1"}
    }"#;

    #[test]
    fn parses_constant_config() {
        let cfg = RunConfig::from_json(UNIT).unwrap();
        assert_eq!(cfg.coefficients.kind(), SequenceKind::Constant);
        assert_eq!(cfg.initial, InitialState::unit());
        assert!(cfg.defaults.format.is_none());
    }

    #[test]
    fn parses_periodic_with_mixed_forms_and_defaults() {
        let text = r#"{
            "coefficients": {"kind": "periodic", "a": ["2", "3"], "b": "1", "c": ["-1/2"], "d": "7"},
            "initial": {"x_prev": "1/2", "x0": "-3", "y_prev": "5", "y0": "2/9"},
            "defaults": {"format": "json", "horizon": 12}
        }"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert_eq!(cfg.coefficients.kind(), SequenceKind::Periodic);
        assert_eq!(cfg.defaults.format, Some(Format::Json));
        assert_eq!(cfg.defaults.horizon, Some(12));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let unknown = UNIT.replace("\"y0\": \"1\"", "\"y0\": \"1\", \"z\": \"2\"");
        assert!(matches!(
            RunConfig::from_json(&unknown),
            Err(ConfigError::Syntax(_))
        ));

        let float = UNIT.replace("\"a\": \"1\"", "\"a\": 1.5");
        assert!(RunConfig::from_json(&float).is_err());

        let zero = UNIT.replace("\"b\": \"1\"", "\"b\": \"0\"");
        assert!(matches!(
            RunConfig::from_json(&zero),
            Err(ConfigError::Invalid(Error::ZeroCoefficient { .. }))
        ));

        let zero_init = UNIT.replace("\"x0\": \"1\"", "\"x0\": \"0/5\"");
        assert!(matches!(
            RunConfig::from_json(&zero_init),
            Err(ConfigError::Invalid(Error::ZeroInitial("x0")))
        ));

        let err = RunConfig::from_json("{\n  \"coefficients\": 3\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
