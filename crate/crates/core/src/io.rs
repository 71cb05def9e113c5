//! Versioned file documents for frames, POVM decompositions and ray sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{GVector, QuadHermitian};

pub const FORMAT_VERSION: u32 = 1;

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::invalid(format!("unsupported format version {v}")));
    }
    Ok(())
}

/// A list of (not necessarily exact) POVM elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub format_version: u32,
    pub dimension: usize,
    pub elements: Vec<QuadHermitian>,
}

impl DecompositionFile {
    pub fn new(elements: Vec<QuadHermitian>) -> Self {
        let dimension = elements.first().map_or(0, QuadHermitian::dim);
        DecompositionFile {
            format_version: FORMAT_VERSION,
            dimension,
            elements,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_version(self.format_version)?;
        if self.elements.is_empty() {
            return Err(Error::invalid("decomposition has no elements"));
        }
        if let Some(m) = self.elements.iter().find(|m| m.dim() != self.dimension) {
            return Err(Error::invalid(format!(
                "element of dimension {} in a dimension {} file",
                m.dim(),
                self.dimension
            )));
        }
        Ok(())
    }
}

/// A list of rays meant to form an orthogonal frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub format_version: u32,
    pub dimension: usize,
    pub legs: Vec<GVector>,
}

impl FrameFile {
    pub fn new(legs: Vec<GVector>) -> Self {
        let dimension = legs.first().map_or(0, GVector::dim);
        FrameFile {
            format_version: FORMAT_VERSION,
            dimension,
            legs,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_version(self.format_version)?;
        if let Some(v) = self.legs.iter().find(|v| v.dim() != self.dimension) {
            return Err(Error::invalid(format!(
                "leg of length {} in a dimension {} file",
                v.dim(),
                self.dimension
            )));
        }
        Ok(())
    }
}

/// Either kind of decomposition document, told apart by its list field.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum AnyDecomposition {
    Frame(FrameFile),
    Povm(DecompositionFile),
}

pub fn parse_any_decomposition(text: &str) -> Result<AnyDecomposition> {
    let doc: AnyDecomposition = serde_json::from_str(text)
        .map_err(|e| Error::invalid(format!("not a frame or decomposition document: {e}")))?;
    match &doc {
        AnyDecomposition::Frame(f) => f.validate()?,
        AnyDecomposition::Povm(d) => d.validate()?,
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_round_trip() {
        let d = DecompositionFile::new(vec![QuadHermitian::identity(2)]);
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<DecompositionFile>(&text).unwrap(), d);
        assert!(matches!(
            parse_any_decomposition(&text).unwrap(),
            AnyDecomposition::Povm(_)
        ));
    }

    #[test]
    fn frame_document() {
        let text =
            r#"{"format_version":1,"dimension":2,"legs":[["1","0","0","0"],["0","0","1","0"]]}"#;
        let AnyDecomposition::Frame(f) = parse_any_decomposition(text).unwrap() else {
            panic!()
        };
        assert_eq!(f.legs.len(), 2);
        let bad = r#"{"format_version":2,"dimension":2,"legs":[]}"#;
        assert!(parse_any_decomposition(bad).is_err());
    }
}
