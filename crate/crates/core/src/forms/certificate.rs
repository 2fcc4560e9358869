//! JSON encoding of certificates and validation of loaded documents.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::maps::{LinearMap, Permutation};

use super::biquad::BiquadraticForm;
use super::decomposition::{
    DecomposabilityCertificate, DecompositionCertificate, Summand, SummandKind, DECOMPOSABILITY_SCHEMA,
    DECOMPOSITION_SCHEMA,
};
use super::nonneg::NonnegScan;

#[derive(Serialize, Deserialize)]
struct SummandRepr {
    kind: SummandKind,
    form: String,
    map: LinearMap,
    completely_positive: bool,
    completely_copositive: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    psd_evidence: Option<NonnegScan>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionRepr {
    schema: String,
    n: usize,
    q: usize,
    k: usize,
    mu: Permutation,
    variables: Vec<String>,
    target: String,
    target_map: LinearMap,
    summands: Vec<SummandRepr>,
}

impl Serialize for DecompositionCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionRepr {
            schema: DECOMPOSITION_SCHEMA.to_string(),
            n: self.n,
            q: self.q,
            k: self.k,
            mu: self.mu.clone(),
            variables: self.target.registry().names().to_vec(),
            target: self.target.to_string(),
            target_map: self.target_map.clone(),
            summands: self
                .summands
                .iter()
                .map(|x| SummandRepr {
                    kind: x.kind,
                    form: x.form.to_string(),
                    map: x.map.clone(),
                    completely_positive: x.completely_positive,
                    completely_copositive: x.completely_copositive,
                    psd_evidence: x.psd_evidence.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl DecompositionCertificate {
    fn from_repr(r: DecompositionRepr) -> Result<Self> {
        if r.schema != DECOMPOSITION_SCHEMA {
            return Err(Error::InvalidCertificate(format!("unexpected schema {}", r.schema)));
        }
        let form = |text: &str| BiquadraticForm::parse(r.n, text);
        let target = form(&r.target)?;
        if target.registry().names() != r.variables.as_slice() {
            return Err(Error::InvalidCertificate("variable list does not match the dimension".into()));
        }
        let summands = r
            .summands
            .into_iter()
            .map(|s| {
                Ok(Summand {
                    kind: s.kind,
                    form: form(&s.form)?,
                    map: s.map,
                    completely_positive: s.completely_positive,
                    completely_copositive: s.completely_copositive,
                    psd_evidence: s.psd_evidence,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n: r.n, q: r.q, k: r.k, mu: r.mu, target, target_map: r.target_map, summands })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl DecomposabilityCertificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Decomposition(DecompositionCertificate),
    Decomposability(DecomposabilityCertificate),
}

impl Certificate {
    pub fn check(&self) -> Result<()> {
        match self {
            Certificate::Decomposition(c) => c.check(),
            Certificate::Decomposability(c) => c.check(),
        }
    }

    pub fn schema(&self) -> &'static str {
        match self {
            Certificate::Decomposition(_) => DECOMPOSITION_SCHEMA,
            Certificate::Decomposability(_) => DECOMPOSABILITY_SCHEMA,
        }
    }
}

/// Parses a certificate document and re-checks it from scratch.
pub fn validate(json: &str) -> Result<Certificate> {
    let value: Value = serde_json::from_str(json)?;
    let schema = value.get("schema").and_then(Value::as_str).unwrap_or_default().to_string();
    let cert = match schema.as_str() {
        DECOMPOSITION_SCHEMA => {
            Certificate::Decomposition(DecompositionCertificate::from_repr(serde_json::from_value(value)?)?)
        }
        DECOMPOSABILITY_SCHEMA => Certificate::Decomposability(serde_json::from_value(value)?),
        other => return Err(Error::InvalidCertificate(format!("unknown schema {other:?}"))),
    };
    cert.check()?;
    Ok(cert)
}
