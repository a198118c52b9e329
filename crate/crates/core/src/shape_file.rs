//! Text serialization of bodies and point sets.
//!
//! A shape file is a JSON object:
//!
//! ```text
//! {
//!   "dim": 2,
//!   "generators": [[0.0, 0.0, 1.0], [1.0, 0.0, 1.0]],
//!   "label": "optional free text"
//! }
//! ```
//!
//! `dim` is the sphere dimension `n`; every row of `generators` has `n + 1`
//! finite coordinates and a nonzero norm. Rows are normalized on load unless
//! they are already unit to within construction tolerance, in which case they
//! are kept bit for bit. Numbers are written in shortest round-trip form, so
//! writing and re-reading a file reproduces every coordinate exactly.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::body::SphericalBody;
use crate::error::Result as GeoResult;
use crate::point::UnitPoint;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeSpec {
    pub dim: usize,
    pub generators: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// A shape file that could not be read, with the position of the offence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeFileError {
    pub line: usize,
    pub column: usize,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ShapeFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}: {}", self.line, self.column, self.field, self.message)
    }
}

impl std::error::Error for ShapeFileError {}

impl ShapeSpec {
    pub fn from_points<S: Scalar>(points: &[UnitPoint<S>], label: Option<String>) -> Self {
        Self {
            dim: points.first().map_or(0, UnitPoint::ambient_dim),
            generators: points
                .iter()
                .map(|p| p.coords().iter().map(|c| c.as_f64()).collect())
                .collect(),
            label,
        }
    }

    pub fn from_body<S: Scalar>(body: &SphericalBody<S>, label: Option<String>) -> Self {
        let mut spec = Self::from_points(body.generators(), label);
        spec.dim = body.ambient_dim();
        spec
    }

    /// Parses and validates a shape file.
    pub fn parse(text: &str) -> Result<Self, ShapeFileError> {
        let spec: ShapeSpec = serde_json::from_str(text).map_err(|e| ShapeFileError {
            line: e.line(),
            column: e.column(),
            field: field_hint(&e.to_string()),
            message: e.to_string(),
        })?;
        spec.validate(text)?;
        Ok(spec)
    }

    pub fn read(path: &Path) -> Result<Self, ShapeFileError> {
        let text = std::fs::read_to_string(path).map_err(|e| ShapeFileError {
            line: 0,
            column: 0,
            field: "file".into(),
            message: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    /// Pretty JSON followed by a newline.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_text())
    }

    fn validate(&self, text: &str) -> Result<(), ShapeFileError> {
        let whole = |field: &str, message: String| {
            let (line, column) = key_position(text, field);
            ShapeFileError { line, column, field: field.into(), message }
        };
        if self.dim < 1 {
            return Err(whole("dim", "sphere dimension must be at least 1".into()));
        }
        if self.generators.is_empty() {
            return Err(whole("generators", "at least one generator is required".into()));
        }
        for (i, row) in self.generators.iter().enumerate() {
            let at = |message: String| {
                let (line, column) = row_position(text, i);
                ShapeFileError { line, column, field: format!("generators[{i}]"), message }
            };
            if row.len() != self.dim + 1 {
                return Err(at(format!(
                    "expected {} coordinates for dim {}, found {}",
                    self.dim + 1,
                    self.dim,
                    row.len()
                )));
            }
            if row.iter().any(|c| !c.is_finite()) {
                return Err(at("coordinates must be finite".into()));
            }
            let norm = row.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm < <f64 as Scalar>::MIN_NORM {
                return Err(at(format!("row of norm {norm:e} cannot be normalized")));
            }
        }
        Ok(())
    }

    /// The rows as unit points.
    pub fn points<S: Scalar>(&self) -> GeoResult<Vec<UnitPoint<S>>> {
        self.generators
            .iter()
            .map(|row| {
                let v: Vec<S> = row.iter().map(|&c| S::lit(c)).collect();
                let norm = v.iter().fold(S::zero(), |acc, &c| acc + c * c).sqrt();
                if (norm - S::one()).abs() <= S::tol_construction() {
                    Ok(UnitPoint::from_unit_unchecked(v))
                } else {
                    UnitPoint::new(v)
                }
            })
            .collect()
    }

    /// The canonical body generated by the rows.
    pub fn body<S: Scalar>(&self) -> GeoResult<SphericalBody<S>> {
        SphericalBody::from_generators(&self.points()?)
    }
}

fn field_hint(message: &str) -> String {
    for field in ["dim", "generators", "label"] {
        if message.contains(&format!("`{field}`")) {
            return field.into();
        }
    }
    "document".into()
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |nl| before.len() - nl - 1) + 1;
    (line, column)
}

fn key_position(text: &str, key: &str) -> (usize, usize) {
    match text.find(&format!("\"{key}\"")) {
        Some(off) => line_col(text, off),
        None => (1, 1),
    }
}

/// Position of the `index`-th inner array of the `generators` value.
fn row_position(text: &str, index: usize) -> (usize, usize) {
    let Some(start) = text.find("\"generators\"") else {
        return (1, 1);
    };
    let mut depth = 0usize;
    let mut seen = 0usize;
    let mut in_string = false;
    for (off, ch) in text[start + 12..].char_indices() {
        match ch {
            '"' => in_string = !in_string,
            _ if in_string => {}
            '[' => {
                depth += 1;
                if depth == 2 {
                    if seen == index {
                        return line_col(text, start + 12 + off);
                    }
                    seen += 1;
                }
            }
            ']' => {
                if depth <= 1 {
                    break;
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    key_position(text, "generators")
}
