//! Problem files: TOML for hand-written specs, JSON for machine artifacts.
//! Both are read into a `serde_json::Value` and decoded from there.
//!
//! Layout:
//!
//! ```toml
//! [chart]
//! even = ["t"]
//! odd = []
//! params = ["s1", "s2"]
//!
//! [algebra]
//! kind = "gl"          # gl | t134 | iso134 | osp14
//! p = 1
//! q = 1
//!
//! [connection.E11]     # one super form per generator label
//! terms = [{ dx = ["t"], coef = { terms = [{ coef = -1 }] } }]
//! ```

use std::path::Path;
use std::sync::Arc;

use serde_json::Value;

use crate::cartan::SugraFields;
use crate::clifford::{GammaBasis, Representation};
use crate::error::{Error, Result};
use crate::forms::{self, Chart, LieValuedForm, SuperForm};
use crate::poly::Poly;
use crate::scalar::{ComplexField, Scalar};
use crate::superfield::{self, Superfield};
use crate::superlie::{self, SuperLieAlgebra};
use crate::transport::{GaugeMap, PathSpec};

/// Reads a TOML or JSON file; the extension decides, otherwise JSON is
/// tried first.
pub fn load(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    match ext {
        "toml" => parse_toml(&text),
        "json" => parse_json(&text),
        _ => parse_json(&text).or_else(|_| parse_toml(&text)),
    }
    .map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_toml(text: &str) -> Result<Value> {
    let v: toml::Value = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    serde_json::to_value(v).map_err(|e| Error::Parse(e.to_string()))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing '{key}'")))
}

fn names(v: Option<&Value>, key: &str) -> Result<Vec<String>> {
    match v {
        None => Ok(vec![]),
        Some(Value::Array(a)) => a
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| Error::Parse(format!("{key} must list names"))))
            .collect(),
        Some(_) => Err(Error::Parse(format!("{key} must be a list"))),
    }
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

pub fn chart_from_value(v: &Value) -> Result<Chart> {
    let c = field(v, "chart")?;
    let even = names(c.get("even"), "chart.even")?;
    let odd = names(c.get("odd"), "chart.odd")?;
    let params = names(c.get("params"), "chart.params")?;
    let chart = Chart::new(&strs(&even), &strs(&odd), &strs(&params))?;
    if let Some(d) = c.get("domain") {
        let d = d.as_array().ok_or_else(|| Error::Parse("chart.domain must be a list of [lo, hi]".into()))?;
        if d.len() != chart.m() {
            return Err(Error::Parse(format!("chart.domain has {} boxes for {} even coordinates", d.len(), chart.m())));
        }
        let mut chart = chart;
        chart.domain = d
            .iter()
            .map(|b| match b.as_array().map(|a| (a.first().and_then(Value::as_f64), a.get(1).and_then(Value::as_f64))) {
                Some((Some(lo), Some(hi))) if lo < hi => Ok((lo, hi)),
                _ => Err(Error::Parse("domain entries must be [lo, hi] with lo < hi".into())),
            })
            .collect::<Result<_>>()?;
        return Ok(chart);
    }
    Ok(chart)
}

pub fn representation(v: &Value) -> Result<Representation> {
    match v.get("representation").and_then(Value::as_str) {
        None => Ok(Representation::Standard),
        Some(s) => Representation::parse(s),
    }
}

fn scalar_field<S: Scalar>(v: &Value, key: &str, default: S) -> Result<S> {
    match v.get(key) {
        None => Ok(default),
        Some(x) => S::from_json(x),
    }
}

/// `{"kind": "gl", "p": 1, "q": 1}`, `{"kind": "t134"}`, `{"kind": "iso134"}`
/// or `{"kind": "osp14", "L": 2}`.
pub fn algebra_from_value<S: ComplexField>(v: &Value) -> Result<Arc<SuperLieAlgebra<S>>> {
    let a = field(v, "algebra")?;
    let kind = a.get("kind").and_then(Value::as_str).ok_or_else(|| Error::Parse("algebra.kind must be a string".into()))?;
    let gb = || GammaBasis::<S>::build(representation(v)?);
    let alg = match kind {
        "gl" => {
            let p = a.get("p").and_then(Value::as_u64).ok_or_else(|| Error::Parse("gl needs integer p".into()))?;
            let q = a.get("q").and_then(Value::as_u64).unwrap_or(0);
            superlie::gl(p as usize, q as usize)?
        }
        "t134" => superlie::t134(&gb()?)?,
        "iso134" => superlie::iso134(&gb()?)?,
        "osp14" => superlie::osp14(&gb()?, &scalar_field(a, "L", S::one())?)?,
        other => return Err(Error::Parse(format!("unknown algebra kind '{other}' (gl, t134, iso134, osp14)"))),
    };
    Ok(Arc::new(alg))
}

/// Either `{label: form, …}` or `{"components": [{"generator", "form"}, …]}`.
pub fn connection_from_value<S: Scalar>(chart: &Chart, alg: Arc<SuperLieAlgebra<S>>, v: &Value) -> Result<LieValuedForm<S>> {
    let c = field(v, "connection")?;
    let mut comps: Vec<SuperForm<S>> = vec![Poly::zero(); alg.dim()];
    let mut set = |label: &str, form: &Value| -> Result<()> {
        let i = alg.labels.iter().position(|l| l == label).ok_or_else(|| Error::Parse(format!("'{label}' is not a generator of {}", alg.name)))?;
        comps[i] = forms::form_from_json(chart, form)?;
        Ok(())
    };
    match c.get("components") {
        Some(Value::Array(list)) => {
            for item in list {
                let label = item.get("generator").and_then(Value::as_str).ok_or_else(|| Error::Parse("component needs a generator".into()))?;
                set(label, field(item, "form")?)?;
            }
        }
        Some(_) => return Err(Error::Parse("connection.components must be a list".into())),
        None => {
            let obj = c.as_object().ok_or_else(|| Error::Parse("connection must be a table".into()))?;
            for (label, form) in obj {
                set(label, form)?;
            }
        }
    }
    let a = LieValuedForm::new(alg, comps)?;
    if a.total_parity() != Some(0) && !a.is_zero() {
        return Err(Error::Parity("connection must be even".into()));
    }
    if a.degree().is_some_and(|d| d != 1) {
        return Err(Error::Parse("connection must be a 1-form".into()));
    }
    Ok(a)
}

/// `{"path": {"x": [...], "theta": [...]}}` with superfields in `t`, or
/// `{"path": {"line": {"from": [...], "to": [...]}, "theta": [...]}}`.
pub fn path_from_value<S: Scalar>(chart: &Chart, v: &Value) -> Result<PathSpec<S>> {
    let p = v.get("path").unwrap_or(v);
    let sf = |x: &Value| superfield::from_json::<S>(x, 1, &chart.gens);
    let list = |key: &str, n: usize| -> Result<Vec<Superfield<S>>> {
        match p.get(key) {
            None => Ok(vec![Poly::zero(); n]),
            Some(Value::Array(a)) => a.iter().map(sf).collect(),
            Some(_) => Err(Error::Parse(format!("path.{key} must be a list"))),
        }
    };
    let theta = list("theta", chart.n())?;
    let path = if let Some(line) = p.get("line") {
        let pts = |key: &str| -> Result<Vec<S>> {
            field(line, key)?
                .as_array()
                .ok_or_else(|| Error::Parse(format!("line.{key} must be a list")))?
                .iter()
                .map(S::from_json)
                .collect()
        };
        PathSpec::line(&pts("from")?, &pts("to")?, theta)
    } else {
        PathSpec { x: list("x", chart.m())?, theta }
    };
    path.validate(chart)?;
    Ok(path)
}

/// `{"gauge": {"constant": {label: number}, "nilpotent": {label: superfield}}}`.
pub fn gauge_from_value<S: Scalar>(chart: &Chart, alg: &SuperLieAlgebra<S>, v: &Value) -> Result<GaugeMap<S>> {
    let g = v.get("gauge").unwrap_or(v);
    let mut out = GaugeMap::identity(alg);
    let index = |label: &str| alg.labels.iter().position(|l| l == label).ok_or_else(|| Error::Parse(format!("'{label}' is not a generator of {}", alg.name)));
    if let Some(c) = g.get("constant") {
        for (label, x) in c.as_object().ok_or_else(|| Error::Parse("gauge.constant must be a table".into()))? {
            out.constant[index(label)?] = S::from_json(x)?;
        }
    }
    if let Some(n) = g.get("nilpotent") {
        for (label, x) in n.as_object().ok_or_else(|| Error::Parse("gauge.nilpotent must be a table".into()))? {
            out.nilpotent[index(label)?] = superfield::from_json(x, chart.m(), &chart.gens)?;
        }
    }
    Ok(out)
}

/// `{"chart": …, "e": [4 forms], "omega": [6 forms, I<J], "psi": [4 forms]}`.
pub fn sugra_fields_from_value<S: Scalar>(chart: &Chart, v: &Value) -> Result<SugraFields<S>> {
    let list = |key: &str| -> Result<Vec<SuperForm<S>>> {
        field(v, key)?
            .as_array()
            .ok_or_else(|| Error::Parse(format!("'{key}' must be a list of forms")))?
            .iter()
            .map(|f| forms::form_from_json(chart, f))
            .collect()
    };
    SugraFields::new(list("e")?, list("omega")?, list("psi")?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;

    const CONN: &str = r#"
[chart]
even = ["t"]
params = ["s1"]

[algebra]
kind = "gl"
p = 1
q = 1

[connection.E11]
terms = [{ dx = ["t"], coef = { terms = [{ coef = -1 }] } }]

[connection.E12]
terms = [{ dx = ["t"], coef = { terms = [{ idx = ["s1"], coef = "1/2" }] } }]
"#;

    #[test]
    fn toml_connection_round_trip() {
        let v = parse_toml(CONN).unwrap();
        let ch = chart_from_value(&v).unwrap();
        let alg = algebra_from_value::<C64>(&v).unwrap();
        let a = connection_from_value(&ch, alg.clone(), &v).unwrap();
        assert!(!a.comps[0].is_zero() && !a.comps[1].is_zero());
        // the JSON written by LieValuedForm::to_json reads back
        let mut w = v.clone();
        w["connection"] = a.to_json(&ch);
        assert_eq!(connection_from_value(&ch, alg, &w).unwrap().comps, a.comps);
    }

    #[test]
    fn bad_inputs_are_parse_errors() {
        assert!(matches!(parse_json("{"), Err(Error::Parse(_))));
        let mut v = parse_toml(CONN).unwrap();
        v["algebra"]["kind"] = "sl".into();
        assert!(matches!(algebra_from_value::<C64>(&v), Err(Error::Parse(_))));
        let v = parse_toml(&CONN.replace("E12", "E99")).unwrap();
        let ch = chart_from_value(&v).unwrap();
        let alg = algebra_from_value::<C64>(&v).unwrap();
        assert!(matches!(connection_from_value(&ch, alg, &v), Err(Error::Parse(_))));
    }

    #[test]
    fn line_path() {
        let v = parse_json(r#"{"chart": {"even": ["t"], "params": ["s"]}, "path": {"line": {"from": [0], "to": [1]}}}"#).unwrap();
        let ch = chart_from_value(&v).unwrap();
        let p: PathSpec<C64> = path_from_value(&ch, &v).unwrap();
        assert_eq!(p.eval(&C64::new(0.5, 0.0)).0[0].constant(), C64::new(0.5, 0.0));
    }
}
