//! JSON schema for ideal specification files.
//!
//! ```json
//! {
//!   "domain": { "kind": "polydisc", "dim": 2 },
//!   "generators": [
//!     [ { "c": [1.0, 0.0], "e": [2, 0] } ],
//!     [ { "c": [1.0, 0.0], "e": [0, 1] } ]
//!   ],
//!   "model_hint": "intro_pair"
//! }
//! ```
//!
//! Each generator is a list of terms; `c` is `[re, im]`, `e` the exponent
//! vector. Serialization uses shortest round-trip floats, so files survive a
//! load/save cycle losslessly.

use green_core::{DomainKind, DomainSpec, IdealSpec, MultiPoly};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermFile {
    /// Coefficient as [re, im].
    pub c: [f64; 2],
    /// Exponent vector.
    pub e: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainFile {
    pub kind: String,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealFile {
    pub domain: DomainFile,
    pub generators: Vec<Vec<TermFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_hint: Option<String>,
}

impl IdealFile {
    pub fn parse(text: &str) -> Result<IdealFile, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid ideal file: {e}"))
    }

    pub fn load(path: &std::path::Path) -> Result<IdealFile, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        IdealFile::parse(&text)
    }

    /// Convert to a validated ideal.
    pub fn to_spec(&self) -> Result<IdealSpec, String> {
        let kind = match self.domain.kind.as_str() {
            "polydisc" => DomainKind::Polydisc,
            "ball" => DomainKind::Ball,
            other => return Err(format!("unknown domain kind {other:?}")),
        };
        let domain = DomainSpec {
            kind,
            dim: self.domain.dim,
        };
        if self.generators.is_empty() {
            return Err("ideal file has no generators".into());
        }
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, terms)| {
                if terms.is_empty() {
                    return Err(format!("generator {i} has no terms"));
                }
                MultiPoly::from_terms(
                    domain.dim,
                    terms
                        .iter()
                        .map(|t| (t.e.clone(), Complex64::new(t.c[0], t.c[1]))),
                )
                .map_err(|e| format!("generator {i}: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        IdealSpec::new(domain, gens).map_err(|e| e.to_string())
    }

    /// Canonical file form of an ideal (terms in lexicographic exponent
    /// order, no hint).
    pub fn from_spec(spec: &IdealSpec) -> IdealFile {
        let kind = match spec.domain().kind {
            DomainKind::Polydisc => "polydisc",
            DomainKind::Ball => "ball",
        };
        IdealFile {
            domain: DomainFile {
                kind: kind.to_string(),
                dim: spec.domain().dim,
            },
            generators: spec
                .generators()
                .iter()
                .map(|g| {
                    g.terms()
                        .map(|(e, c)| TermFile {
                            c: [c.re, c.im],
                            e: e.clone(),
                        })
                        .collect()
                })
                .collect(),
            model_hint: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_canonical() {
        let text = r#"{
            "domain": {"kind": "polydisc", "dim": 2},
            "generators": [
                [{"c": [0.0, 1.0], "e": [0, 1]}, {"c": [1.0, 0.0], "e": [2, 0]}],
                [{"c": [0.5, -0.25], "e": [1, 1]}]
            ]
        }"#;
        let file = IdealFile::parse(text).unwrap();
        let spec = file.to_spec().unwrap();
        let file2 = IdealFile::from_spec(&spec);
        let spec2 = file2.to_spec().unwrap();
        assert_eq!(spec, spec2);
        // Serialization is stable once canonical.
        let s1 = serde_json::to_string_pretty(&file2).unwrap();
        let s2 =
            serde_json::to_string_pretty(&IdealFile::from_spec(&spec2)).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(IdealFile::parse("{not json").is_err());
        let missing = r#"{"domain": {"kind": "torus", "dim": 2}, "generators": [[{"c": [1,0], "e": [1,0]}]]}"#;
        assert!(IdealFile::parse(missing).unwrap().to_spec().is_err());
        let zero_gen = r#"{"domain": {"kind": "polydisc", "dim": 2}, "generators": [[{"c": [0,0], "e": [1,0]}]]}"#;
        assert!(IdealFile::parse(zero_gen).unwrap().to_spec().is_err());
    }
}
