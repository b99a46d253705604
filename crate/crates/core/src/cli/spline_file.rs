//! JSON spline and knot files.
//!
//! ```json
//! {
//!   "degree": 3,
//!   "knots": [0, 1, 2, 3, 4, 5, 6, 7],
//!   "control_points": [[0.0], [1.0], [2.0], [3.0]]
//! }
//! ```
//!
//! `knots` may also be `{"start": 0, "delta": "1/2", "count": 8}`. Knot values
//! are JSON numbers or strings holding an exact rational (`"1/3"`, `"0.125"`);
//! numbers are read through their shortest decimal form, so `0.1` means `1/10`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knots::KnotVector;
use crate::scalar::{parse_rational, Rational};
use crate::SplineCurve;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KnotValue {
    Number(serde_json::Number),
    Text(String),
}

impl KnotValue {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            KnotValue::Text(s) => parse_rational(s),
            KnotValue::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Rational::from_integer(i.into()))
                } else if let Some(u) = n.as_u64() {
                    Ok(Rational::from_integer(u.into()))
                } else {
                    let x = n.as_f64().filter(|x| x.is_finite()).ok_or_else(|| {
                        Error::Parse(format!("knot value {n} is not a finite number"))
                    })?;
                    parse_rational(&x.to_string())
                }
            }
        }
    }
}

impl From<&Rational> for KnotValue {
    fn from(q: &Rational) -> Self {
        KnotValue::Text(q.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KnotSpec {
    Uniform {
        start: KnotValue,
        delta: KnotValue,
        count: usize,
    },
    Explicit(Vec<KnotValue>),
}

impl KnotSpec {
    pub fn to_knots(&self) -> Result<KnotVector<Rational>> {
        match self {
            KnotSpec::Uniform { start, delta, count } => {
                KnotVector::uniform(start.to_rational()?, delta.to_rational()?, *count)
            }
            KnotSpec::Explicit(values) => {
                KnotVector::new(values.iter().map(KnotValue::to_rational).collect::<Result<_>>()?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplineFile {
    pub degree: usize,
    pub knots: KnotSpec,
    pub control_points: Vec<Vec<f64>>,
}

impl SplineFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("spline file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spline files always serialize")
    }

    pub fn to_curve(&self) -> Result<SplineCurve<f64>> {
        SplineCurve::new(self.degree, self.knots.to_knots()?, self.control_points.clone())
    }

    /// Knots are written as exact rational strings.
    pub fn from_curve(curve: &SplineCurve<f64>) -> Self {
        Self {
            degree: curve.degree(),
            knots: KnotSpec::Explicit(curve.knots().values().iter().map(KnotValue::from).collect()),
            control_points: curve.points().to_vec(),
        }
    }

    pub fn read(path: &Path) -> std::result::Result<Self, super::CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| super::CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| super::CliError::Validation(e.to_string()))
    }
}

/// A knot file for `basis-matrix`: a bare knot spec or any object with a `knots` field.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum KnotsDocument {
    Wrapped { knots: KnotSpec },
    Bare(KnotSpec),
}

pub fn parse_knots_document(text: &str) -> Result<KnotVector<Rational>> {
    let doc: KnotsDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("knots file: {e}")))?;
    match doc {
        KnotsDocument::Wrapped { knots } | KnotsDocument::Bare(knots) => knots.to_knots(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn reads_explicit_and_uniform_knots() {
        let f = SplineFile::from_json(
            r#"{"degree": 1, "knots": [0, "1/3", 0.5, 2], "control_points": [[1.0], [2.0]]}"#,
        )
        .unwrap();
        assert_eq!(f.knots.to_knots().unwrap().values(), &[q(0, 1), q(1, 3), q(1, 2), q(2, 1)]);

        let f = SplineFile::from_json(
            r#"{"degree": 0, "knots": {"start": 1, "delta": "1/2", "count": 3}, "control_points": [[0], [1]]}"#,
        )
        .unwrap();
        assert_eq!(f.knots.to_knots().unwrap().values(), &[q(1, 1), q(3, 2), q(2, 1)]);
    }

    #[test]
    fn decimal_numbers_are_exact() {
        let kv = parse_knots_document("[0.1, 0.2, 0.30000000000000004]").unwrap();
        assert_eq!(kv.values()[0], q(1, 10));
        assert_eq!(kv.values()[1], q(1, 5));
        assert!(!kv.is_uniform());
        let kv = parse_knots_document(r#"{"knots": [0, 1, 2], "degree": 4}"#).unwrap();
        assert!(kv.is_uniform());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SplineFile::from_json(r#"{"degree": 1, "knots": [0, 1e400], "control_points": []}"#).is_err());
        assert!(SplineFile::from_json(r#"{"degree": 1}"#).is_err());
        let f = SplineFile::from_json(r#"{"degree": 1, "knots": [0, "x", 2], "control_points": [[0]]}"#).unwrap();
        assert!(f.to_curve().is_err());
        let f = SplineFile::from_json(r#"{"degree": 1, "knots": [2, 1, 0, 3], "control_points": [[0], [1]]}"#).unwrap();
        assert!(matches!(f.to_curve(), Err(Error::InvalidKnots(_))));
    }
}
