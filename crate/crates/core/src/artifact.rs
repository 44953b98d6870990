//! JSON form of a constructed code.
//!
//! Field elements are written as their integer encodings. The reader keeps
//! only what verification needs (field, points, generator matrix) and ignores
//! any stored report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{ConstructionParams, Theorem};
use crate::ff::{make_field, FieldCtx, FieldElement, FieldError};
use crate::grs::{CodeArtifact, ConstructionTrace};
use crate::matrix::Matrix;
use crate::verify::VerificationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArtifactError {
    #[error("malformed artifact JSON: {0}")]
    Json(String),
    #[error("inconsistent artifact: {0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Serialize)]
struct ConstructionOut<'a> {
    label: &'a str,
    theorem: Theorem,
    params: BTreeMap<&'static str, u64>,
    extended: bool,
    trace: &'a ConstructionTrace,
}

#[derive(Serialize)]
struct ArtifactOut<'a> {
    q: u64,
    p: u64,
    d: u32,
    modulus: String,
    n: usize,
    k: usize,
    construction: ConstructionOut<'a>,
    a: Vec<u64>,
    v: Vec<u64>,
    #[serde(rename = "G")]
    g: Vec<Vec<u64>>,
    verification: &'a VerificationReport,
}

fn encodings(xs: &[FieldElement]) -> Vec<u64> {
    xs.iter().map(|x| x.value()).collect()
}

/// Pretty-printed artifact JSON. Output depends only on the inputs.
pub fn to_json(
    art: &CodeArtifact,
    params: &ConstructionParams,
    trace: &ConstructionTrace,
    report: &VerificationReport,
) -> String {
    let ctx = art.ctx();
    let out = ArtifactOut {
        q: ctx.order(),
        p: ctx.characteristic(),
        d: ctx.degree(),
        modulus: ctx.format_poly(ctx.modulus()),
        n: art.length(),
        k: art.dimension(),
        construction: ConstructionOut {
            label: art.label(),
            theorem: params.theorem(),
            params: params.fields().into_iter().collect(),
            extended: art.eval_vector().is_extended(),
            trace,
        },
        a: encodings(art.eval_vector().points()),
        v: encodings(art.scaling().weights()),
        g: art
            .generator()
            .to_rows()
            .iter()
            .map(|r| encodings(r))
            .collect(),
        verification: report,
    };
    serde_json::to_string_pretty(&out).expect("artifact serializes")
}

#[derive(Deserialize)]
struct ConstructionIn {
    #[serde(default)]
    label: String,
    #[serde(default)]
    extended: bool,
}

#[derive(Deserialize)]
struct ArtifactIn {
    q: u64,
    p: u64,
    d: u32,
    modulus: String,
    n: usize,
    k: usize,
    construction: ConstructionIn,
    a: Vec<u64>,
    #[serde(rename = "G")]
    g: Vec<Vec<u64>>,
}

/// The parts of an artifact that verification uses.
#[derive(Debug, Clone)]
pub struct ParsedArtifact {
    pub ctx: FieldCtx,
    pub label: String,
    pub extended: bool,
    pub points: Vec<FieldElement>,
    pub generator: Matrix,
}

pub fn parse(text: &str) -> Result<ParsedArtifact, ArtifactError> {
    let raw: ArtifactIn =
        serde_json::from_str(text).map_err(|e| ArtifactError::Json(e.to_string()))?;
    let ctx = make_field(raw.p, raw.d)?;
    let invalid = |msg: String| Err(ArtifactError::Invalid(msg));
    if ctx.order() != raw.q {
        return invalid(format!("q = {} but p^d = {}", raw.q, ctx.order()));
    }
    let modulus = ctx.format_poly(ctx.modulus());
    if raw.modulus != modulus {
        return invalid(format!("modulus {} differs from {modulus}", raw.modulus));
    }
    let elem = |v: u64| ctx.element(v).map_err(ArtifactError::from);
    let rows = raw
        .g
        .iter()
        .map(|r| r.iter().map(|&v| elem(v)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let generator = Matrix::from_rows(rows)
        .ok_or_else(|| ArtifactError::Invalid("ragged generator matrix".into()))?;
    if generator.rows() != raw.k || generator.cols() != raw.n {
        return invalid(format!(
            "G is {}x{}, header says {}x{}",
            generator.rows(),
            generator.cols(),
            raw.k,
            raw.n
        ));
    }
    let finite = raw.n - usize::from(raw.construction.extended);
    if raw.a.len() != finite {
        return invalid(format!(
            "{} evaluation points for length {}",
            raw.a.len(),
            raw.n
        ));
    }
    let points = raw
        .a
        .iter()
        .map(|&v| elem(v))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ParsedArtifact {
        ctx,
        label: raw.construction.label,
        extended: raw.construction.extended,
        points,
        generator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::construct;
    use crate::verify::{verify_artifact, verify_matrix, VerifyOptions};

    fn sample() -> String {
        let ctx = make_field(3, 2).unwrap();
        let params = ConstructionParams::T1ii { m: 4, t: 1 };
        let (art, trace) = construct(&ctx, &params).unwrap();
        let report = verify_artifact(&art, VerifyOptions::default()).unwrap();
        to_json(&art, &params, &trace, &report)
    }

    #[test]
    fn round_trip() {
        let text = sample();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["q"], 9);
        assert_eq!(v["modulus"], "x^2+1");
        assert_eq!(v["construction"]["label"], "T1ii(m=4,t=1)");
        assert_eq!(v["construction"]["theorem"], "T1ii");
        assert_eq!(v["construction"]["params"]["m"], 4);
        assert_eq!(v["construction"]["extended"], true);
        assert_eq!(v["construction"]["trace"]["I"], serde_json::json!([0]));
        assert_eq!(v["verification"]["self_dual"], true);
        assert!(v["verification"].get("elapsed").is_none());

        let parsed = parse(&text).unwrap();
        assert_eq!(parsed.generator.cols(), 6);
        assert_eq!(parsed.points.len(), 5);
        let report = verify_matrix(
            &parsed.ctx,
            &parsed.generator,
            &parsed.points,
            VerifyOptions::default(),
        )
        .unwrap();
        assert!(report.passed());
        assert_eq!(text, sample());
    }

    #[test]
    fn rejects_bad_input() {
        let text = sample();
        assert!(matches!(
            parse(&text[..text.len() / 2]),
            Err(ArtifactError::Json(_))
        ));
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["G"][0][0] = serde_json::json!(9);
        assert!(matches!(
            parse(&v.to_string()),
            Err(ArtifactError::Field(_))
        ));
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["modulus"] = serde_json::json!("x^2+x+2");
        assert!(matches!(
            parse(&v.to_string()),
            Err(ArtifactError::Invalid(_))
        ));
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["G"][1].as_array_mut().unwrap().pop();
        assert!(matches!(
            parse(&v.to_string()),
            Err(ArtifactError::Invalid(_))
        ));
    }
}
