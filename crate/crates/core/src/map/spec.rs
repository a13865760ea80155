//! JSON map specifications.
//!
//! ```json
//! {"dim": 1, "R": 1, "poly": [[{"idx": [1], "re": 1, "im": 0}]]}
//! {"dim": 2, "R": 1, "builtin": "spiral_ref", "theta": 0.0}
//! ```

use super::{Builtin, HoloMap, MapBody, Monomial, PolyMap};
use crate::error::{validation, Error, Result};
use crate::linalg::{CMatrix, C64};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialSpec {
    pub idx: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub dim: i64,
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<Vec<MonomialSpec>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Map<String, Value>>,
}

pub fn load_map(text: &str) -> Result<HoloMap> {
    let spec: MapSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    spec.build()
}

pub fn load_map_file(path: impl AsRef<Path>) -> Result<HoloMap> {
    load_map(&std::fs::read_to_string(path)?)
}

impl MapSpec {
    pub fn build(&self) -> Result<HoloMap> {
        if self.dim < 1 {
            return Err(validation("dim", "must be at least 1"));
        }
        let dim = self.dim as usize;
        match (&self.poly, &self.builtin) {
            (Some(_), Some(_)) => Err(validation("", "`poly` and `builtin` are mutually exclusive")),
            (None, None) => Err(validation("", "one of `poly` or `builtin` is required")),
            (Some(poly), None) => {
                if self.theta.is_some() || self.params.is_some() {
                    return Err(validation("", "`theta`/`params` only apply to builtins"));
                }
                if poly.len() != dim {
                    return Err(validation(
                        "poly",
                        format!("expected {dim} components, got {}", poly.len()),
                    ));
                }
                let mut comps = Vec::with_capacity(dim);
                for (i, comp) in poly.iter().enumerate() {
                    let mut out = Vec::with_capacity(comp.len());
                    for (j, m) in comp.iter().enumerate() {
                        let mut idx = Vec::with_capacity(m.idx.len());
                        for (k, &e) in m.idx.iter().enumerate() {
                            let e = u32::try_from(e).map_err(|_| {
                                validation(format!("poly[{i}][{j}].idx[{k}]"), "exponent must be a non-negative integer")
                            })?;
                            idx.push(e);
                        }
                        out.push(Monomial::new(idx, C64::new(m.re, m.im)));
                    }
                    comps.push(out);
                }
                HoloMap::poly(self.radius, PolyMap::new(comps)?)
            }
            (None, Some(tag)) => {
                let b = self.builtin_body(tag, dim)?;
                HoloMap::builtin(dim, self.radius, b)
            }
        }
    }

    fn builtin_body(&self, tag: &str, dim: usize) -> Result<Builtin> {
        let empty = Map::new();
        let params = self.params.as_ref().unwrap_or(&empty);
        let allowed: &[&str] = match tag {
            "cayley_i" | "spiral_ref" => &[],
            "moebius_auto" => &["a_re", "a_im", "phase"],
            "linear" => &["re", "im"],
            other => return Err(validation("builtin", format!("unknown builtin `{other}`"))),
        };
        if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(validation(format!("params.{k}"), format!("not a parameter of {tag}")));
        }
        if self.theta.is_some() && tag != "spiral_ref" {
            return Err(validation("theta", format!("not a parameter of {tag}")));
        }
        let num = |key: &str| -> Result<f64> {
            match params.get(key) {
                None => Ok(0.0),
                Some(v) => v.as_f64().ok_or_else(|| validation(format!("params.{key}"), "expected a number")),
            }
        };
        Ok(match tag {
            "cayley_i" => Builtin::CayleyI,
            "spiral_ref" => {
                let theta = self.theta.unwrap_or(0.0);
                if !theta.is_finite() {
                    return Err(validation("theta", "must be finite"));
                }
                Builtin::SpiralRef { theta }
            }
            "moebius_auto" => {
                let a = C64::new(num("a_re")?, num("a_im")?);
                if a.norm() >= 1.0 {
                    return Err(validation("params", "|a| must be < 1"));
                }
                Builtin::MoebiusAuto { a, phase: num("phase")? }
            }
            _ => {
                let re = matrix_param(params, "re", dim)?
                    .ok_or_else(|| validation("params.re", "required for linear"))?;
                let im = matrix_param(params, "im", dim)?.unwrap_or_else(|| vec![0.0; dim * dim]);
                let vals: Vec<C64> = re.iter().zip(&im).map(|(&a, &b)| C64::new(a, b)).collect();
                Builtin::Linear(CMatrix::from_row_slice(dim, dim, &vals))
            }
        })
    }

    pub fn from_map(map: &HoloMap) -> Self {
        let mut spec = MapSpec {
            dim: map.dim() as i64,
            radius: map.radius(),
            poly: None,
            builtin: None,
            theta: None,
            params: None,
        };
        match map.body() {
            MapBody::Poly(p) => {
                spec.poly = Some(
                    p.components()
                        .iter()
                        .map(|comp| {
                            comp.iter()
                                .map(|m| MonomialSpec {
                                    idx: m.idx.iter().map(|&e| i64::from(e)).collect(),
                                    re: m.coef.re,
                                    im: m.coef.im,
                                })
                                .collect()
                        })
                        .collect(),
                );
            }
            MapBody::Builtin(b) => {
                spec.builtin = Some(b.tag().to_string());
                match b {
                    Builtin::CayleyI => {}
                    Builtin::SpiralRef { theta } => spec.theta = Some(*theta),
                    Builtin::MoebiusAuto { a, phase } => {
                        let mut m = Map::new();
                        m.insert("a_re".into(), a.re.into());
                        m.insert("a_im".into(), a.im.into());
                        m.insert("phase".into(), (*phase).into());
                        spec.params = Some(m);
                    }
                    Builtin::Linear(a) => {
                        let rows = |f: fn(&C64) -> f64| -> Value {
                            (0..a.nrows())
                                .map(|i| (0..a.ncols()).map(|j| f(&a[(i, j)])).collect::<Vec<_>>())
                                .collect::<Vec<_>>()
                                .into()
                        };
                        let mut m = Map::new();
                        m.insert("re".into(), rows(|z| z.re));
                        m.insert("im".into(), rows(|z| z.im));
                        spec.params = Some(m);
                    }
                }
            }
        }
        spec
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("map specs always serialize")
    }
}

fn matrix_param(params: &Map<String, Value>, key: &str, dim: usize) -> Result<Option<Vec<f64>>> {
    let Some(v) = params.get(key) else { return Ok(None) };
    let path = format!("params.{key}");
    let rows = v.as_array().ok_or_else(|| validation(&path, "expected an array of rows"))?;
    if rows.len() != dim {
        return Err(validation(&path, format!("expected {dim} rows, got {}", rows.len())));
    }
    let mut out = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == dim)
            .ok_or_else(|| validation(format!("{path}[{i}]"), format!("expected {dim} numbers")))?;
        for (j, x) in row.iter().enumerate() {
            out.push(x.as_f64().ok_or_else(|| validation(format!("{path}[{i}][{j}]"), "expected a number"))?);
        }
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_identity() {
        let h = load_map(r#"{"dim":1,"R":1,"poly":[[{"idx":[1],"re":1,"im":0}]]}"#).unwrap();
        assert_eq!(h.eval(&[C64::new(0.5, 0.0)]).unwrap()[0], C64::new(0.5, 0.0));
    }

    #[test]
    fn loads_builtins() {
        let h = load_map(r#"{"dim":1,"R":1,"builtin":"cayley_i"}"#).unwrap();
        assert!(matches!(h.body(), MapBody::Builtin(Builtin::CayleyI)));
        let f = load_map(r#"{"dim":2,"R":1,"builtin":"spiral_ref","theta":0.0}"#).unwrap();
        let v = f.eval(&[C64::new(0.5, 0.0), C64::new(0.0, 0.0)]).unwrap();
        assert!((v[0] - C64::new(2.0, 0.0)).norm() < 1e-14);
        let l = load_map(r#"{"dim":2,"R":1,"builtin":"linear","params":{"re":[[1,0],[0,0]],"im":[[0,0],[0,2]]}}"#)
            .unwrap();
        assert_eq!(l.derivative_at_zero().unwrap()[(1, 1)], C64::new(0.0, 2.0));
    }

    #[test]
    fn reports_field_paths() {
        let err = load_map(r#"{"dim":1,"R":1,"poly":[[{"idx":[-1],"re":1,"im":0}]]}"#).unwrap_err();
        assert!(matches!(&err, Error::Validation { path, .. } if path == "poly[0][0].idx[0]"), "{err}");
        let err = load_map(r#"{"dim":2,"R":1,"poly":[[{"idx":[1],"re":1,"im":0}],[]]}"#).unwrap_err();
        assert!(matches!(&err, Error::Validation { path, .. } if path == "poly[0][0].idx"), "{err}");
        let err = load_map(r#"{"dim":1,"R":-1,"builtin":"cayley_i"}"#).unwrap_err();
        assert!(matches!(&err, Error::Validation { path, .. } if path == "R"), "{err}");
        let err = load_map(r#"{"dim":1,"R":1,"builtin":"nope"}"#).unwrap_err();
        assert!(matches!(&err, Error::Validation { path, .. } if path == "builtin"), "{err}");
    }

    #[test]
    fn rejects_non_json_numbers() {
        assert!(matches!(load_map(r#"{"dim":1,"R":NaN,"builtin":"cayley_i"}"#), Err(Error::Parse(_))));
        assert!(matches!(load_map(r#"{"dim":1,"R":1e999,"builtin":"cayley_i"}"#), Err(Error::Parse(_)) | Err(Error::Validation { .. })));
        assert!(matches!(load_map("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn builtin_round_trip() {
        for text in [
            r#"{"dim":1,"R":1.0,"builtin":"cayley_i"}"#,
            r#"{"dim":3,"R":0.5,"builtin":"spiral_ref","theta":0.3}"#,
            r#"{"dim":1,"R":1.0,"builtin":"moebius_auto","params":{"a_re":0.1,"a_im":-0.2,"phase":1.5}}"#,
        ] {
            let h = load_map(text).unwrap();
            assert_eq!(load_map(&MapSpec::from_map(&h).to_json()).unwrap(), h);
        }
    }
}
