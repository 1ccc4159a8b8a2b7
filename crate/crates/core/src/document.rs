//! JSON matroid documents.
//!
//! Two shapes are accepted: an explicit basis list
//! `{"ground_size": m, "bases": [[..], ..]}` or a constructor call
//! `{"constructor": "uniform"|"schubert"|"graphic"|"sparse_paving",
//!   "params": {..}}`.
//!
//! Parsing is done by direct `Value` inspection so that documents behave
//! identically regardless of which `serde_json` number representation the
//! embedding application enables.

use serde_json::Value;
use thiserror::Error;

use crate::matroid::{Matroid, MatroidError};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matroid document must be a JSON object")]
    NotAnObject,
    #[error("document needs either \"constructor\"/\"params\" or \"ground_size\"/\"bases\"")]
    UnknownShape,
    #[error("unknown constructor {0:?}")]
    UnknownConstructor(String),
    #[error("field {0:?} is missing or has the wrong type")]
    BadField(&'static str),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatroidDocument {
    Explicit {
        ground_size: usize,
        bases: Vec<Vec<usize>>,
    },
    Uniform {
        rank: usize,
        ground_size: usize,
    },
    Schubert {
        bits: String,
    },
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    SparsePaving {
        n: usize,
        d: usize,
        circuit_hyperplanes: Vec<Vec<usize>>,
    },
}

fn get_usize(v: &Value, key: &'static str) -> Result<usize, DocumentError> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or(DocumentError::BadField(key))
}

fn get_set_list(v: &Value, key: &'static str) -> Result<Vec<Vec<usize>>, DocumentError> {
    let arr = v.get(key).and_then(Value::as_array).ok_or(DocumentError::BadField(key))?;
    arr.iter()
        .map(|row| {
            row.as_array()
                .ok_or(DocumentError::BadField(key))?
                .iter()
                .map(|e| e.as_u64().map(|x| x as usize).ok_or(DocumentError::BadField(key)))
                .collect()
        })
        .collect()
}

impl MatroidDocument {
    pub fn from_json(s: &str) -> Result<Self, DocumentError> {
        let value: Value = serde_json::from_str(s)?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self, DocumentError> {
        let obj = value.as_object().ok_or(DocumentError::NotAnObject)?;
        if let Some(constructor) = obj.get("constructor") {
            let name = constructor.as_str().ok_or(DocumentError::BadField("constructor"))?;
            let params = obj.get("params").ok_or(DocumentError::BadField("params"))?;
            return match name {
                "uniform" => Ok(MatroidDocument::Uniform {
                    rank: get_usize(params, "rank")?,
                    ground_size: get_usize(params, "ground_size")?,
                }),
                "schubert" => Ok(MatroidDocument::Schubert {
                    bits: params
                        .get("bits")
                        .and_then(Value::as_str)
                        .ok_or(DocumentError::BadField("bits"))?
                        .to_owned(),
                }),
                "graphic" => {
                    let edges = get_set_list(params, "edges")?
                        .into_iter()
                        .map(|pair| match pair[..] {
                            [a, b] => Ok((a, b)),
                            _ => Err(DocumentError::BadField("edges")),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(MatroidDocument::Graphic {
                        vertices: get_usize(params, "vertices")?,
                        edges,
                    })
                }
                "sparse_paving" => Ok(MatroidDocument::SparsePaving {
                    n: get_usize(params, "n")?,
                    d: get_usize(params, "d")?,
                    circuit_hyperplanes: get_set_list(params, "circuit_hyperplanes")?,
                }),
                other => Err(DocumentError::UnknownConstructor(other.to_owned())),
            };
        }
        if obj.contains_key("ground_size") && obj.contains_key("bases") {
            return Ok(MatroidDocument::Explicit {
                ground_size: get_usize(value, "ground_size")?,
                bases: get_set_list(value, "bases")?,
            });
        }
        Err(DocumentError::UnknownShape)
    }

    pub fn build(&self) -> Result<Matroid, DocumentError> {
        let m = match self {
            MatroidDocument::Explicit { ground_size, bases } => {
                Matroid::from_bases(*ground_size, bases)?
            }
            MatroidDocument::Uniform { rank, ground_size } => {
                Matroid::uniform(*rank, *ground_size)?
            }
            MatroidDocument::Schubert { bits } => {
                let b = bits.parse().map_err(MatroidError::BadSequence)?;
                Matroid::schubert(&b)?
            }
            MatroidDocument::Graphic { vertices, edges } => Matroid::graphic(*vertices, edges)?,
            MatroidDocument::SparsePaving { n, d, circuit_hyperplanes } => {
                Matroid::sparse_paving(*n, *d, circuit_hyperplanes)?
            }
        };
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_document() {
        let doc = MatroidDocument::from_json(
            r#"{"ground_size": 4, "bases": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#,
        )
        .unwrap();
        assert_eq!(doc.build().unwrap(), Matroid::uniform(2, 4).unwrap());
    }

    #[test]
    fn constructor_documents() {
        let doc = MatroidDocument::from_json(
            r#"{"constructor": "uniform", "params": {"rank": 3, "ground_size": 6}}"#,
        )
        .unwrap();
        assert_eq!(doc.build().unwrap(), Matroid::uniform(3, 6).unwrap());

        let doc = MatroidDocument::from_json(
            r#"{"constructor": "schubert", "params": {"bits": "11010"}}"#,
        )
        .unwrap();
        assert_eq!(doc.build().unwrap().bases().len(), 9);

        let doc = MatroidDocument::from_json(
            r#"{"constructor": "graphic",
               "params": {"vertices": 4, "edges": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}}"#,
        )
        .unwrap();
        assert_eq!(doc.build().unwrap().bases().len(), 16);

        let doc = MatroidDocument::from_json(
            r#"{"constructor": "sparse_paving",
               "params": {"n": 5, "d": 2, "circuit_hyperplanes": [[0,1,2],[0,3,4]]}}"#,
        )
        .unwrap();
        assert_eq!(doc.build().unwrap().bases().len(), 18);
    }

    #[test]
    fn bad_documents() {
        assert!(matches!(
            MatroidDocument::from_json("{}"),
            Err(DocumentError::UnknownShape)
        ));
        assert!(matches!(
            MatroidDocument::from_json(r#"{"constructor": "mystery", "params": {}}"#),
            Err(DocumentError::UnknownConstructor(_))
        ));
        assert!(MatroidDocument::from_json("[1,2]").is_err());
        assert!(MatroidDocument::from_json("not json").is_err());
        let doc = MatroidDocument::from_json(r#"{"ground_size": 3, "bases": [[0,1],[2]]}"#).unwrap();
        assert!(doc.build().is_err());
        let doc =
            MatroidDocument::from_json(r#"{"constructor": "schubert", "params": {"bits": "0110"}}"#)
                .unwrap();
        assert!(doc.build().is_err());
        let doc = MatroidDocument::from_json(r#"{"constructor": "graphic", "params": {"vertices": 2, "edges": [[0,1,2]]}}"#);
        assert!(doc.is_err());
    }
}
