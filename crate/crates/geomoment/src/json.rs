//! JSON encodings of polynomials, invariants, moment tensors, invariance
//! reports, and voxel grids.

use std::collections::BTreeMap;
use std::str::FromStr;

use geomoment_core::invariants::NamedInvariant;
use geomoment_core::moments::{MomentKind, MomentTensor, VoxelGrid};
use geomoment_core::parse::parse_variable;
use geomoment_core::verify::InvarianceReport;
use geomoment_core::{GaussianRational, Monomial, MomentIndex, Polynomial};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("{0}")]
pub struct FormatError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError(msg.into()))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffJson {
    re: String,
    im: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    coeff: CoeffJson,
    monomial: Map<String, Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialJson {
    terms: Vec<TermJson>,
}

/// `num/den`, always with an explicit denominator.
fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rational(s: &str) -> Result<BigRational, FormatError> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n = num_bigint::BigInt::from_str(n.trim()).map_err(|e| FormatError(format!("bad numerator in `{s}`: {e}")))?;
    let d = num_bigint::BigInt::from_str(d.trim()).map_err(|e| FormatError(format!("bad denominator in `{s}`: {e}")))?;
    if num_traits::Zero::is_zero(&d) {
        return err(format!("zero denominator in `{s}`"));
    }
    Ok(BigRational::new(n, d))
}

fn polynomial_json(p: &Polynomial) -> PolynomialJson {
    let terms = p
        .terms()
        .map(|(m, c)| TermJson {
            coeff: CoeffJson { re: rational_string(c.re()), im: rational_string(c.im()) },
            monomial: m.factors().iter().map(|(v, e)| (v.to_string(), Value::from(*e))).collect(),
        })
        .collect();
    PolynomialJson { terms }
}

fn polynomial_from_json(j: PolynomialJson) -> Result<Polynomial, FormatError> {
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in j.terms {
        let c = GaussianRational::new(parse_rational(&t.coeff.re)?, parse_rational(&t.coeff.im)?);
        let mut factors = Vec::with_capacity(t.monomial.len());
        for (name, e) in t.monomial {
            let v = parse_variable(&name).map_err(|e| FormatError(e.to_string()))?;
            let e = e
                .as_u64()
                .and_then(|e| u32::try_from(e).ok())
                .filter(|e| *e > 0)
                .ok_or_else(|| FormatError(format!("exponent of {name} must be a positive integer")))?;
            factors.push((v, e));
        }
        terms.push((c, Monomial::from_factors(factors)));
    }
    Ok(Polynomial::from_terms(terms))
}

pub fn polynomial_to_value(p: &Polynomial) -> Value {
    serde_json::to_value(polynomial_json(p)).expect("plain data")
}

pub fn polynomial_from_value(v: &Value) -> Result<Polynomial, FormatError> {
    let j: PolynomialJson = serde_json::from_value(v.clone()).map_err(|e| FormatError(e.to_string()))?;
    polynomial_from_json(j)
}

pub fn polynomial_to_string(p: &Polynomial) -> String {
    serde_json::to_string(&polynomial_to_value(p)).expect("plain data")
}

pub fn polynomial_from_str(s: &str) -> Result<Polynomial, FormatError> {
    let v: Value = serde_json::from_str(s).map_err(|e| FormatError(e.to_string()))?;
    polynomial_from_value(&v)
}

pub fn invariant_to_value(inv: &NamedInvariant) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), Value::from(inv.name.clone()));
    m.insert("order".into(), Value::from(inv.order));
    m.insert("degree".into(), Value::from(inv.degree));
    m.insert("polynomial".into(), polynomial_to_value(&inv.polynomial));
    Value::Object(m)
}

/// Reads an invariant and checks the stated order and degree.
pub fn invariant_from_value(v: &Value) -> Result<NamedInvariant, FormatError> {
    let obj = v.as_object().ok_or_else(|| FormatError("invariant must be an object".into()))?;
    let name = obj.get("name").and_then(Value::as_str).ok_or_else(|| FormatError("missing `name`".into()))?;
    let poly = polynomial_from_value(obj.get("polynomial").ok_or_else(|| FormatError("missing `polynomial`".into()))?)?;
    let inv = NamedInvariant::new(name, poly).map_err(|e| FormatError(e.to_string()))?;
    for (key, want) in [("order", inv.order), ("degree", inv.degree)] {
        if obj.get(key).and_then(Value::as_u64) != Some(u64::from(want)) {
            return err(format!("`{key}` of {name} does not match its polynomial ({want})"));
        }
    }
    Ok(inv)
}

pub fn tensor_to_value(t: &MomentTensor) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), Value::from(t.kind.as_str()));
    m.insert("max_order".into(), Value::from(t.max_order));
    let entries: Map<String, Value> = t.entries.iter().map(|(i, x)| (i.to_string(), Value::from(*x))).collect();
    m.insert("entries".into(), Value::Object(entries));
    Value::Object(m)
}

fn parse_index(key: &str) -> Option<MomentIndex> {
    let mut it = key.split('_').map(|s| s.parse::<u32>().ok());
    let idx = MomentIndex::new(it.next()??, it.next()??, it.next()??);
    it.next().is_none().then_some(idx)
}

pub fn tensor_from_value(v: &Value) -> Result<MomentTensor, FormatError> {
    let obj = v.as_object().ok_or_else(|| FormatError("tensor must be an object".into()))?;
    let kind: MomentKind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| FormatError("missing `kind`".into()))?
        .parse()
        .map_err(|e: geomoment_core::Error| FormatError(e.to_string()))?;
    let max_order = obj
        .get("max_order")
        .and_then(Value::as_u64)
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| FormatError("missing `max_order`".into()))?;
    let mut entries = BTreeMap::new();
    for (k, x) in obj.get("entries").and_then(Value::as_object).ok_or_else(|| FormatError("missing `entries`".into()))? {
        let idx = parse_index(k).ok_or_else(|| FormatError(format!("bad moment index `{k}`")))?;
        if idx.order() > max_order {
            return err(format!("entry {k} exceeds max_order {max_order}"));
        }
        let x = x.as_f64().ok_or_else(|| FormatError(format!("entry {k} is not a number")))?;
        entries.insert(idx, x);
    }
    Ok(MomentTensor { max_order, kind, entries })
}

#[derive(Serialize)]
struct RecordJson<'a> {
    name: &'a str,
    baseline: f64,
    max_abs_dev: f64,
    max_rel_dev: Option<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    seed: u64,
    trials: usize,
    tolerance: f64,
    absolute_tolerance: f64,
    degenerate: bool,
    error_model: &'a str,
    pass: bool,
    records: Vec<RecordJson<'a>>,
}

pub fn report_to_value(r: &InvarianceReport) -> Value {
    let j = ReportJson {
        seed: r.seed,
        trials: r.trials,
        tolerance: r.tolerance,
        absolute_tolerance: r.absolute_tolerance,
        degenerate: r.degenerate,
        error_model: &r.error_model,
        pass: r.all_passed(),
        records: r
            .records
            .iter()
            .map(|x| RecordJson {
                name: &x.name,
                baseline: x.baseline,
                max_abs_dev: x.max_abs_dev,
                max_rel_dev: x.max_rel_dev,
                pass: x.pass,
            })
            .collect(),
    };
    serde_json::to_value(j).expect("plain data")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VoxelJson {
    dims: [usize; 3],
    spacing: [f64; 3],
    origin: [f64; 3],
    values: Vec<f64>,
}

/// Parses a voxel grid; the error carries serde's line and column.
pub fn voxel_from_str(s: &str) -> Result<VoxelGrid, (Option<(usize, usize)>, String)> {
    let j: VoxelJson = serde_json::from_str(s).map_err(|e| (Some((e.line(), e.column())), e.to_string()))?;
    VoxelGrid::new(j.dims, j.spacing, j.origin, j.values).map_err(|e| (None, e.to_string()))
}

pub fn voxel_to_value(g: &VoxelGrid) -> Value {
    serde_json::json!({
        "dims": g.dims(),
        "spacing": g.spacing(),
        "origin": g.origin(),
        "values": g.values(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use geomoment_core::parse::parse_polynomial;

    #[test]
    fn polynomial_schema() {
        let p = parse_polynomial("a_2_0_0^2 - 1/3*I*a_0_1_1 + 2").unwrap();
        let s = polynomial_to_string(&p);
        assert_eq!(
            s,
            r#"{"terms":[{"coeff":{"re":"1/1","im":"0/1"},"monomial":{"a_2_0_0":2}},{"coeff":{"re":"0/1","im":"-1/3"},"monomial":{"a_0_1_1":1}},{"coeff":{"re":"2/1","im":"0/1"},"monomial":{}}]}"#
        );
        assert_eq!(polynomial_from_str(&s).unwrap(), p);
    }

    #[test]
    fn rejects_malformed_polynomials() {
        for bad in [
            r#"{"terms":[{"coeff":{"re":"1/0","im":"0/1"},"monomial":{}}]}"#,
            r#"{"terms":[{"coeff":{"re":"x","im":"0/1"},"monomial":{}}]}"#,
            r#"{"terms":[{"coeff":{"re":"1/1","im":"0/1"},"monomial":{"q_1":1}}]}"#,
            r#"{"terms":[{"coeff":{"re":"1/1","im":"0/1"},"monomial":{"a_1_0_0":0}}]}"#,
            r#"{"terms":[],"extra":1}"#,
        ] {
            assert!(polynomial_from_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn tensor_round_trip() {
        let t = MomentTensor {
            max_order: 2,
            kind: MomentKind::Central,
            entries: [(MomentIndex::new(0, 0, 0), 2.0), (MomentIndex::new(2, 0, 0), 0.5)].into_iter().collect(),
        };
        let v = tensor_to_value(&t);
        assert_eq!(v["entries"]["2_0_0"], 0.5);
        assert_eq!(tensor_from_value(&v).unwrap(), t);
    }

    #[test]
    fn voxel_errors_carry_position() {
        let (pos, _) = voxel_from_str("{\"dims\": [1,1,1],\n \"spacing\": [1,1,1], \"origin\": [0,0,0], \"values\": [1,]}").unwrap_err();
        assert_eq!(pos.map(|p| p.0), Some(2));
        let (pos, msg) = voxel_from_str(r#"{"dims":[2,1,1],"spacing":[1,1,1],"origin":[0,0,0],"values":[1]}"#).unwrap_err();
        assert!(pos.is_none() && msg.contains("voxel"), "{msg}");
    }
}
