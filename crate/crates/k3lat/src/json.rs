//! Lattice description format:
//!
//! ```json
//! { "basis": ["E", "F", "R"],
//!   "gram": [[0, 2, 1], [2, 0, 1], [1, 1, -2]],
//!   "parameter": null }
//! ```
//!
//! Gram entries are integers or strings in the canonical scalar grammar
//! (`"-5/2"`, `"2 - 9*n + 1*n^2"`). Non-symmetric matrices are rejected.

use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::PicardLattice;
use crate::scalar::{parse_scalar, Scalar};

#[derive(Deserialize)]
struct LatticeDoc {
    basis: Vec<String>,
    gram: Vec<Vec<Value>>,
    #[serde(default)]
    parameter: Option<String>,
}

pub fn lattice_from_json(text: &str) -> Result<Arc<PicardLattice>> {
    let doc: LatticeDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        what: "lattice JSON".into(),
        detail: e.to_string(),
    })?;
    let param = doc.parameter.as_deref();
    let gram = doc
        .gram
        .iter()
        .map(|row| row.iter().map(|v| entry_to_scalar(v, param)).collect())
        .collect::<Result<Vec<Vec<Scalar>>>>()?;
    PicardLattice::new(doc.basis, gram, doc.parameter)
}

fn entry_to_scalar(v: &Value, param: Option<&str>) -> Result<Scalar> {
    match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| Error::Parse {
                what: "gram entry".into(),
                detail: format!("`{n}` is not an integer"),
            })?;
            Ok(Scalar::from_int(i))
        }
        Value::String(s) => parse_scalar(s, param),
        other => Err(Error::Parse {
            what: "gram entry".into(),
            detail: format!("unsupported JSON value `{other}`"),
        }),
    }
}

pub fn lattice_to_json(lat: &PicardLattice) -> serde_json::Value {
    let gram: Vec<Vec<Value>> = lat
        .gram()
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e.as_rational() {
                    Some(r) if num_traits::One::is_one(r.denom()) => {
                        match i64::try_from(r.numer().clone()) {
                            Ok(i) => Value::from(i),
                            Err(_) => Value::from(e.to_string()),
                        }
                    }
                    _ => Value::from(e.to_string()),
                })
                .collect()
        })
        .collect();
    serde_json::json!({
        "basis": lat.basis_names(),
        "gram": gram,
        "parameter": lat.parameter(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_plain_lattice() {
        let lat = lattice_from_json(
            r#"{ "basis": ["F","G"], "gram": [[2,6],[6,4]], "parameter": null }"#,
        )
        .unwrap();
        assert_eq!(lat.rank(), 2);
        assert!(lat.is_rational());
    }

    #[test]
    fn parse_symbolic_lattice() {
        let lat = lattice_from_json(
            r#"{ "basis": ["F","G"], "gram": [[2, "1*n"], ["1*n", 4]], "parameter": "n" }"#,
        )
        .unwrap();
        assert_eq!(lat.parameter(), Some("n"));
        let round = lattice_to_json(&lat);
        let again = lattice_from_json(&round.to_string()).unwrap();
        assert_eq!(*lat, *again);
    }

    #[test]
    fn rejects_asymmetric() {
        let res = lattice_from_json(r#"{ "basis": ["a","b"], "gram": [[0,1],[2,0]] }"#);
        assert!(res.is_err());
    }

    #[test]
    fn rejects_undeclared_parameter() {
        let res = lattice_from_json(
            r#"{ "basis": ["a","b"], "gram": [[0,"1*n"],["1*n",0]], "parameter": null }"#,
        );
        assert!(res.is_err());
    }
}
