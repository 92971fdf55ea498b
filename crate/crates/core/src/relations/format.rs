//! JSON relation files.
//!
//! ```json
//! {"r": 2, "field": "Q", "relations": [
//!   {"degree": 2, "terms": [{"word": [1, 2], "coeff": "1"}, {"word": [2, 1], "coeff": "-1"}]},
//!   {"factors": [["1", "0"], ["0", "1"]]}
//! ]}
//! ```
//!
//! Words are one-based; coefficients are decimal strings, rationals as `a/b`.

use serde::{Deserialize, Serialize};

use super::{LinearForm, MultilinearRelation, Relation, SplitRelation};
use crate::error::{Error, Result};
use crate::scalar::{FieldScalar, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRepr {
    pub word: Vec<usize>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RelationRepr {
    Dense {
        degree: usize,
        terms: Vec<TermRepr>,
    },
    Split {
        factors: Vec<Vec<String>>,
    },
}

/// A relation file before its coefficients are interpreted in a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub r: usize,
    pub field: String,
    pub relations: Vec<RelationRepr>,
}

impl RelationFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn field_spec(&self) -> Result<FieldSpec> {
        self.field.parse()
    }

    /// Interprets the coefficients in `S`, which must match the declared field.
    pub fn relations<S: FieldScalar>(&self) -> Result<Vec<Relation<S>>> {
        let declared = self.field_spec()?.to_string();
        if declared != S::label() {
            return Err(Error::FieldMismatch {
                expected: S::label(),
                found: declared,
            });
        }
        self.relations
            .iter()
            .map(|repr| relation_from_repr(repr, self.r))
            .collect()
    }

    pub fn from_relations<S: FieldScalar>(r: usize, relations: &[Relation<S>]) -> Self {
        RelationFile {
            r,
            field: S::label(),
            relations: relations.iter().map(relation_to_repr).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("relation files always serialize")
    }
}

fn scalar<S: FieldScalar>(text: &str) -> Result<S> {
    S::parse(text).ok_or_else(|| {
        Error::parse(format!("coefficient {text:?} is not an element of {}", S::label()))
    })
}

pub fn relation_from_repr<S: FieldScalar>(repr: &RelationRepr, r: usize) -> Result<Relation<S>> {
    match repr {
        RelationRepr::Dense { degree, terms } => {
            let terms = terms
                .iter()
                .map(|t| {
                    if t.word.iter().any(|&k| k == 0 || k > r) {
                        return Err(Error::InvalidWord {
                            word: t.word.clone(),
                            r,
                        });
                    }
                    let word = t.word.iter().map(|k| k - 1).collect();
                    Ok((word, scalar(&t.coeff)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Relation::Dense(MultilinearRelation::new(r, *degree, terms)?))
        }
        RelationRepr::Split { factors } => {
            let forms = factors
                .iter()
                .map(|f| {
                    if f.len() != r {
                        return Err(Error::DimensionMismatch {
                            expected: r,
                            found: f.len(),
                        });
                    }
                    LinearForm::new(f.iter().map(|c| scalar(c)).collect::<Result<_>>()?)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Relation::Split(SplitRelation::new(forms)?))
        }
    }
}

pub fn relation_to_repr<S: FieldScalar>(relation: &Relation<S>) -> RelationRepr {
    match relation {
        Relation::Dense(f) => RelationRepr::Dense {
            degree: f.degree(),
            terms: f
                .terms()
                .map(|(word, coeff)| TermRepr {
                    word: word.iter().map(|k| k + 1).collect(),
                    coeff: coeff.to_string(),
                })
                .collect(),
        },
        Relation::Split(s) => RelationRepr::Split {
            factors: s
                .factors()
                .iter()
                .map(|f| f.coeffs().iter().map(ToString::to_string).collect())
                .collect(),
        },
    }
}

/// Parses a single relation object.
pub fn parse_relation<S: FieldScalar>(text: &str, r: usize) -> Result<Relation<S>> {
    let repr: RelationRepr = serde_json::from_str(text)?;
    relation_from_repr(&repr, r)
}

pub fn serialize_relation<S: FieldScalar>(relation: &Relation<S>) -> String {
    serde_json::to_string(&relation_to_repr(relation)).expect("relations always serialize")
}
