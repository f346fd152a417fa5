//! Input presentations: a quiver, relations, field, and optional grading and
//! trace data, as read from a JSON file.
//!
//! Scalars are serialized as decimal strings (`"3/2"` over the rationals,
//! least residues over a prime field) and paths as arrays of arrow names in
//! traversal order.

use crate::scalar::{FieldSpec, Scalar, ScalarError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("duplicate vertex name {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate arrow name {0:?}")]
    DuplicateArrow(String),
    #[error("arrow {arrow:?} references unknown vertex {vertex:?}")]
    UnknownVertex { arrow: String, vertex: String },
    #[error("unknown arrow {0:?} in path")]
    UnknownArrow(String),
    #[error("path is not composable at step {step}: {detail}")]
    NotComposable { step: usize, detail: String },
    #[error("relation {index} is not a sum of parallel paths")]
    NotParallel { index: usize },
    #[error("relation {index} is empty or has only zero coefficients")]
    EmptyRelation { index: usize },
    #[error("degree_cap must be at least 1")]
    DegreeCapZero,
    #[error("grading assigns degree {degree} to arrow {arrow:?}; degrees must be >= 1")]
    NonPositiveDegree { arrow: String, degree: i64 },
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// One summand of a relation: a coefficient and a path written as the list
/// of arrow names in traversal order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathTerm {
    pub coeff: String,
    pub path: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceEntry {
    pub path: Vec<String>,
    pub value: String,
}

/// Testing hook for negative fixtures: a deliberate corruption applied to a
/// built category so that downstream certification runs against a broken
/// structure. Never used by the regular pipeline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tamper {
    /// Zero out the composition (src -> mid) . (mid -> tgt) at every level,
    /// where mid/tgt are given by vertex name and level offset from src.
    ZeroComposition {
        src_vertex: String,
        mid_vertex: String,
        mid_offset: i64,
        tgt_vertex: String,
        tgt_offset: i64,
    },
    /// Delete one hom-basis vector at a single slot.
    DropHomVector {
        src_vertex: String,
        src_level: i64,
        tgt_vertex: String,
        tgt_level: i64,
        index: usize,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraPresentation {
    pub field: FieldSpec,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    #[serde(default)]
    pub relations: Vec<Vec<PathTerm>>,
    pub degree_cap: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tamper: Option<Tamper>,
}

impl AlgebraPresentation {
    pub fn from_json(text: &str) -> Result<Self, PresentationError> {
        serde_json::from_str(text).map_err(|e| PresentationError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    /// Canonical bytes used for input digests and deterministic seeding.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("presentation serializes")
    }

    pub fn validate(&self) -> Result<ValidatedPresentation, PresentationError> {
        self.field.validate()?;
        if self.degree_cap == 0 {
            return Err(PresentationError::DegreeCapZero);
        }
        let mut vertex_ids = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if vertex_ids.insert(v.clone(), i).is_some() {
                return Err(PresentationError::DuplicateVertex(v.clone()));
            }
        }
        let mut arrow_ids = BTreeMap::new();
        let mut arrows = Vec::new();
        for (i, a) in self.arrows.iter().enumerate() {
            if arrow_ids.insert(a.name.clone(), i).is_some() {
                return Err(PresentationError::DuplicateArrow(a.name.clone()));
            }
            let src = *vertex_ids.get(&a.source).ok_or_else(|| PresentationError::UnknownVertex {
                arrow: a.name.clone(),
                vertex: a.source.clone(),
            })?;
            let tgt = *vertex_ids.get(&a.target).ok_or_else(|| PresentationError::UnknownVertex {
                arrow: a.name.clone(),
                vertex: a.target.clone(),
            })?;
            let degree = match &self.grading {
                Some(g) => *g.get(&a.name).unwrap_or(&1),
                None => 1,
            };
            if degree < 1 {
                return Err(PresentationError::NonPositiveDegree { arrow: a.name.clone(), degree });
            }
            arrows.push(ArrowData { src, tgt, degree: degree as u32 });
        }

        let resolve_path = |path: &[String]| -> Result<ResolvedPath, PresentationError> {
            let ids: Vec<usize> = path
                .iter()
                .map(|n| arrow_ids.get(n).copied().ok_or_else(|| PresentationError::UnknownArrow(n.clone())))
                .collect::<Result<_, _>>()?;
            // Traversal order: consecutive arrows must link target -> source.
            for w in 1..ids.len() {
                let prev = &arrows[ids[w - 1]];
                let next = &arrows[ids[w]];
                if prev.tgt != next.src {
                    return Err(PresentationError::NotComposable {
                        step: w,
                        detail: format!(
                            "{} ends at {:?} but {} starts at {:?}",
                            path[w - 1],
                            self.vertices[prev.tgt],
                            path[w],
                            self.vertices[next.src]
                        ),
                    });
                }
            }
            let (src, tgt) = if ids.is_empty() {
                (None, None)
            } else {
                (Some(arrows[ids[0]].src), Some(arrows[*ids.last().unwrap()].tgt))
            };
            Ok(ResolvedPath { arrows: ids, src, tgt })
        };

        let mut relations = Vec::new();
        for (index, rel) in self.relations.iter().enumerate() {
            let mut terms = Vec::new();
            for term in rel {
                let coeff = self.field.parse(&term.coeff)?;
                if coeff.is_zero() {
                    continue;
                }
                let rp = resolve_path(&term.path)?;
                terms.push((coeff, rp));
            }
            if terms.is_empty() {
                return Err(PresentationError::EmptyRelation { index });
            }
            // Parallel: all terms share source and target. Length-0 terms
            // (vertex idempotents) cannot appear in a path written as arrows,
            // so endpoints are always defined here.
            let (s0, t0) = (terms[0].1.src, terms[0].1.tgt);
            for (_, rp) in &terms {
                if rp.arrows.is_empty() || rp.src != s0 || rp.tgt != t0 {
                    return Err(PresentationError::NotParallel { index });
                }
            }
            relations.push(Relation { terms });
        }

        let trace = match &self.trace {
            None => None,
            Some(entries) => {
                let mut out = Vec::new();
                for e in entries {
                    let value = self.field.parse(&e.value)?;
                    let rp = resolve_path(&e.path)?;
                    out.push((value, rp));
                }
                Some(out)
            }
        };

        Ok(ValidatedPresentation {
            field: self.field,
            vertex_names: self.vertices.clone(),
            arrows,
            arrow_names: self.arrows.iter().map(|a| a.name.clone()).collect(),
            relations,
            degree_cap: self.degree_cap,
            trace,
            tamper: self.tamper.clone(),
            graded_explicitly: self.grading.is_some(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct ArrowData {
    pub src: usize,
    pub tgt: usize,
    pub degree: u32,
}

#[derive(Debug, Clone)]
pub struct ResolvedPath {
    pub arrows: Vec<usize>,
    pub src: Option<usize>,
    pub tgt: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Relation {
    /// Nonzero coefficient and resolved path per term; all terms parallel.
    pub terms: Vec<(Scalar, ResolvedPath)>,
}

/// A presentation after name resolution and structural validation.
#[derive(Debug, Clone)]
pub struct ValidatedPresentation {
    pub field: FieldSpec,
    pub vertex_names: Vec<String>,
    pub arrows: Vec<ArrowData>,
    pub arrow_names: Vec<String>,
    pub relations: Vec<Relation>,
    pub degree_cap: u32,
    pub trace: Option<Vec<(Scalar, ResolvedPath)>>,
    pub tamper: Option<Tamper>,
    pub graded_explicitly: bool,
}

#[cfg(test)]
pub mod fixtures {
    use super::*;

    pub fn k() -> AlgebraPresentation {
        AlgebraPresentation {
            field: FieldSpec::Rational,
            vertices: vec!["1".into()],
            arrows: vec![],
            relations: vec![],
            degree_cap: 2,
            grading: None,
            trace: Some(vec![TraceEntry { path: vec![], value: "1".into() }]),
            tamper: None,
        }
    }

    pub fn a2() -> AlgebraPresentation {
        AlgebraPresentation {
            field: FieldSpec::Rational,
            vertices: vec!["1".into(), "2".into()],
            arrows: vec![ArrowSpec { name: "a".into(), source: "1".into(), target: "2".into() }],
            relations: vec![],
            degree_cap: 4,
            grading: None,
            trace: None,
            tamper: None,
        }
    }

    pub fn d() -> AlgebraPresentation {
        AlgebraPresentation {
            field: FieldSpec::Rational,
            vertices: vec!["1".into()],
            arrows: vec![ArrowSpec { name: "x".into(), source: "1".into(), target: "1".into() }],
            relations: vec![vec![PathTerm { coeff: "1".into(), path: vec!["x".into(), "x".into()] }]],
            degree_cap: 4,
            grading: None,
            trace: Some(vec![TraceEntry { path: vec!["x".into()], value: "1".into() }]),
            tamper: None,
        }
    }

    pub fn n3() -> AlgebraPresentation {
        AlgebraPresentation {
            field: FieldSpec::Rational,
            vertices: vec!["1".into()],
            arrows: vec![ArrowSpec { name: "x".into(), source: "1".into(), target: "1".into() }],
            relations: vec![vec![PathTerm {
                coeff: "1".into(),
                path: vec!["x".into(), "x".into(), "x".into()],
            }]],
            degree_cap: 5,
            grading: None,
            trace: Some(vec![TraceEntry { path: vec!["x".into(), "x".into()], value: "1".into() }]),
            tamper: None,
        }
    }

    /// One loop with no relations: infinite-dimensional, must be rejected.
    pub fn infinite() -> AlgebraPresentation {
        AlgebraPresentation {
            field: FieldSpec::Rational,
            vertices: vec!["1".into()],
            arrows: vec![ArrowSpec { name: "x".into(), source: "1".into(), target: "1".into() }],
            relations: vec![],
            degree_cap: 6,
            grading: None,
            trace: None,
            tamper: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_corpus_presentations() {
        for p in [fixtures::k(), fixtures::a2(), fixtures::d(), fixtures::n3()] {
            p.validate().unwrap();
        }
    }

    #[test]
    fn rejects_noncomposable_relation_path() {
        let mut p = fixtures::a2();
        p.relations = vec![vec![PathTerm { coeff: "1".into(), path: vec!["a".into(), "a".into()] }]];
        assert!(matches!(p.validate(), Err(PresentationError::NotComposable { .. })));
    }

    #[test]
    fn rejects_nonparallel_relation() {
        let mut p = fixtures::d();
        p.arrows.push(ArrowSpec { name: "y".into(), source: "1".into(), target: "1".into() });
        p.relations = vec![vec![
            PathTerm { coeff: "1".into(), path: vec!["x".into(), "x".into()] },
            PathTerm { coeff: "1".into(), path: vec!["y".into()] },
        ]];
        // x.x and y are parallel (same endpoints), so this is accepted;
        // a genuinely nonparallel pair must differ in endpoints.
        p.vertices.push("2".into());
        p.arrows.push(ArrowSpec { name: "z".into(), source: "1".into(), target: "2".into() });
        p.relations = vec![vec![
            PathTerm { coeff: "1".into(), path: vec!["x".into()] },
            PathTerm { coeff: "1".into(), path: vec!["z".into()] },
        ]];
        assert!(matches!(p.validate(), Err(PresentationError::NotParallel { .. })));
    }

    #[test]
    fn json_round_trip() {
        let p = fixtures::d();
        let q = AlgebraPresentation::from_json(&p.to_json()).unwrap();
        assert_eq!(p.canonical_bytes(), q.canonical_bytes());
    }
}
