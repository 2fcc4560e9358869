//! Sums of nonnegative forms (and of positive maps) that certify
//! non-extremality and decomposability of the cyclic maps.

use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{is_psd_exact, qi_hou_map, BlockMatrix, LinearMap, Permutation, PsdVerdict};
use crate::poly::Rational;

use super::biquad::{block_term, cross_square, mu_permutation, qi_hou_form, BiquadraticForm};
use super::nonneg::{scan_biquadratic, NonnegScan, ScanOptions};

pub const DECOMPOSITION_SCHEMA: &str = "posmap.decomposition.v1";
pub const DECOMPOSABILITY_SCHEMA: &str = "posmap.decomposability.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummandKind {
    BlockTerm,
    CrossSquare,
}

/// Block terms for `d = 1..=k`, then `(x_i y_i − x_j y_j)²` for `i < j`, `i ≢ j (mod k)`.
pub fn divisor_summands(n: usize, k: usize) -> Result<Vec<(SummandKind, BiquadraticForm)>> {
    let mut out = Vec::new();
    for d in 1..=k {
        out.push((SummandKind::BlockTerm, block_term(n, k, d)?));
    }
    for i in 0..n {
        for j in i + 1..n {
            if i % k != j % k {
                out.push((SummandKind::CrossSquare, cross_square(n, i, j)));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summand {
    pub kind: SummandKind,
    pub form: BiquadraticForm,
    pub map: LinearMap,
    pub completely_positive: bool,
    pub completely_copositive: bool,
    pub psd_evidence: Option<NonnegScan>,
}

/// `target = Σ summands`, both as forms and as maps.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionCertificate {
    pub n: usize,
    pub q: usize,
    pub k: usize,
    pub mu: Permutation,
    pub target: BiquadraticForm,
    pub target_map: LinearMap,
    pub summands: Vec<Summand>,
}

fn build_summand(kind: SummandKind, form: BiquadraticForm, scan: Option<&ScanOptions>) -> Result<Summand> {
    let map = form.to_map();
    let class = map.classify();
    let psd_evidence = scan.map(|opts| scan_biquadratic(&form, opts)).transpose()?;
    Ok(Summand {
        kind,
        completely_positive: class.is_completely_positive(),
        completely_copositive: class.is_completely_copositive(),
        form,
        map,
        psd_evidence,
    })
}

/// The split of the cyclic form with shift `k | n` into block terms and
/// cross squares. Needs `k ≥ 2` so that there are at least two summands.
pub fn divisor_decomposition(n: usize, k: usize, scan: Option<&ScanOptions>) -> Result<DecompositionCertificate> {
    if k < 2 || !n.is_multiple_of(k) {
        return Err(Error::InvalidParameter(format!("need k >= 2 dividing n, got n = {n}, k = {k}")));
    }
    non_extremality_certificate(n, k, scan)
}

/// The divisor split for `k = gcd(n, q)` relabelled by `μ`, so that its
/// summands add up to the form and map of shift `q`.
pub fn non_extremality_certificate(n: usize, q: usize, scan: Option<&ScanOptions>) -> Result<DecompositionCertificate> {
    let mu = mu_permutation(n, q)?;
    let k = n.gcd(&q);
    if k == 1 {
        return Err(Error::InvalidParameter(format!(
            "no certificate: gcd({n}, {q}) = 1, the divisor split has a single summand"
        )));
    }
    let summands = divisor_summands(n, k)?
        .into_iter()
        .map(|(kind, form)| build_summand(kind, form.permute(&mu)?, scan))
        .collect::<Result<Vec<_>>>()?;
    let cert = DecompositionCertificate {
        n,
        q,
        k,
        mu,
        target: qi_hou_form(n, q)?,
        target_map: qi_hou_map(n, q)?,
        summands,
    };
    cert.check()?;
    Ok(cert)
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidCertificate(msg.into())
}

impl DecompositionCertificate {
    pub fn maps(&self) -> Vec<&LinearMap> {
        self.summands.iter().map(|s| &s.map).collect()
    }

    pub fn count(&self, kind: SummandKind) -> usize {
        self.summands.iter().filter(|s| s.kind == kind).count()
    }

    /// Re-derives every claim from `(n, q)` and the stored summands.
    pub fn check(&self) -> Result<()> {
        let (n, q) = (self.n, self.q);
        if self.k != n.gcd(&q) || self.k < 2 {
            return Err(invalid("k must be gcd(n, q) >= 2"));
        }
        if self.mu != mu_permutation(n, q)? {
            return Err(invalid("stored permutation is not μ(n, q)"));
        }
        if self.target != qi_hou_form(n, q)? {
            return Err(invalid("target is not the cyclic form of (n, q)"));
        }
        if self.target_map != qi_hou_map(n, q)? {
            return Err(invalid("target map is not the cyclic map of (n, q)"));
        }
        if self.summands.len() < 2 {
            return Err(invalid("fewer than two summands"));
        }
        let blocks: Vec<BiquadraticForm> = (1..=self.k)
            .map(|d| block_term(n, self.k, d).and_then(|b| b.permute(&self.mu)))
            .collect::<Result<_>>()?;
        let mut form_sum = BiquadraticForm::zero(n);
        for (idx, s) in self.summands.iter().enumerate() {
            if s.form.dim() != n {
                return Err(invalid(format!("summand {idx} has the wrong dimension")));
            }
            let shape_ok = match s.kind {
                SummandKind::BlockTerm => blocks.contains(&s.form),
                SummandKind::CrossSquare => (0..n).any(|i| {
                    (i + 1..n).any(|j| i % self.k != j % self.k && cross_square(n, i, j) == s.form)
                }),
            };
            if !shape_ok {
                return Err(invalid(format!("summand {idx} is not a {:?}", s.kind)));
            }
            if s.map != s.form.to_map() {
                return Err(invalid(format!("summand {idx}: map does not match its form")));
            }
            if s.form.polynomial().ratio_to(self.target.polynomial()).is_some() || s.map.ratio_to(&self.target_map).is_some() {
                return Err(invalid(format!("summand {idx} is proportional to the target")));
            }
            let class = s.map.classify();
            if class.is_completely_positive() != s.completely_positive
                || class.is_completely_copositive() != s.completely_copositive
            {
                return Err(invalid(format!("summand {idx}: recorded classification is wrong")));
            }
            if let Some(ev) = &s.psd_evidence {
                if !ev.all_nonneg_evidence || ev.min_found < -ev.tol {
                    return Err(invalid(format!("summand {idx}: scan found a negative value {}", ev.min_found)));
                }
            }
            form_sum = form_sum.checked_add(&s.form)?;
        }
        if form_sum != self.target {
            return Err(invalid("summand forms do not add up to the target"));
        }
        if LinearMap::sum(self.maps())? != self.target_map {
            return Err(invalid("summand maps do not add up to the target map"));
        }
        Ok(())
    }
}

/// `W = P + Q^Γ` with `P, Q ⪰ 0` for the witness of shift `n/2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposabilityCertificate {
    pub schema: String,
    pub n: usize,
    pub k: usize,
    pub p: BlockMatrix,
    pub q: BlockMatrix,
    pub p_verdict: PsdVerdict,
    pub q_verdict: PsdVerdict,
}

pub fn decomposability_certificate(n: usize) -> Result<DecomposabilityCertificate> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("n = {n}: need an even n >= 4")));
    }
    let k = n / 2;
    let mut p = BlockMatrix::zeros(n);
    let mut q_gamma = BlockMatrix::zeros(n);
    for (kind, form) in divisor_summands(n, k)? {
        let choi = form.to_map().choi();
        match kind {
            SummandKind::CrossSquare => p = p.checked_add(&choi)?,
            SummandKind::BlockTerm => q_gamma = q_gamma.checked_add(&choi)?,
        }
    }
    let scale = Rational::one() / Rational::from_integer(n.into());
    let p = p.scale(&scale);
    let q = q_gamma.partial_transpose().scale(&scale);
    let cert = DecomposabilityCertificate {
        schema: DECOMPOSABILITY_SCHEMA.to_string(),
        n,
        k,
        p_verdict: is_psd_exact(p.matrix())?,
        q_verdict: is_psd_exact(q.matrix())?,
        p,
        q,
    };
    cert.check()?;
    Ok(cert)
}

impl DecomposabilityCertificate {
    pub fn check(&self) -> Result<()> {
        if self.schema != DECOMPOSABILITY_SCHEMA {
            return Err(invalid(format!("unexpected schema {}", self.schema)));
        }
        if self.n < 4 || !self.n.is_multiple_of(2) || self.k != self.n / 2 {
            return Err(invalid("parameters must be (n, n/2) with n even, n >= 4"));
        }
        let w = qi_hou_map(self.n, self.k)?.witness();
        if self.p.checked_add(&self.q.partial_transpose())? != w {
            return Err(invalid("P + Q^Γ differs from the witness"));
        }
        for (name, m, verdict) in [("P", &self.p, &self.p_verdict), ("Q", &self.q, &self.q_verdict)] {
            if !verdict.is_psd() || !verdict.verify(m.matrix()) {
                return Err(invalid(format!("{name} lacks a valid PSD certificate")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_two_split() {
        let cert = divisor_decomposition(4, 2, None).unwrap();
        assert_eq!(cert.count(SummandKind::BlockTerm), 2);
        assert_eq!(cert.count(SummandKind::CrossSquare), 4);
        for s in &cert.summands {
            match s.kind {
                SummandKind::BlockTerm => assert!(s.completely_copositive && !s.completely_positive),
                SummandKind::CrossSquare => assert!(s.completely_positive),
            }
        }
        assert_eq!(cert.summands[0].form, super::super::biquad::antisymmetric_square(4, 0, 2));
    }

    #[test]
    fn summand_counts() {
        let c = divisor_decomposition(6, 2, None).unwrap();
        assert_eq!((c.count(SummandKind::BlockTerm), c.count(SummandKind::CrossSquare)), (2, 9));
        let c = divisor_decomposition(6, 3, None).unwrap();
        assert_eq!((c.count(SummandKind::BlockTerm), c.count(SummandKind::CrossSquare)), (3, 12));
        assert!(divisor_decomposition(6, 4, None).is_err());
        assert!(divisor_decomposition(6, 1, None).is_err());
    }

    #[test]
    fn relabelled_certificates() {
        let c = non_extremality_certificate(6, 4, None).unwrap();
        assert_eq!(c.k, 2);
        assert_eq!(c.mu.to_one_based(), vec![1, 2, 5, 6, 3, 4]);
        assert!(non_extremality_certificate(5, 2, None).is_err());
        assert!(non_extremality_certificate(8, 6, None).is_ok());
    }

    #[test]
    fn tampered_certificate_fails() {
        let mut c = divisor_decomposition(4, 2, None).unwrap();
        c.summands.pop();
        assert!(c.check().is_err());
        let mut c = divisor_decomposition(4, 2, None).unwrap();
        c.summands[1].completely_positive = true;
        assert!(c.check().is_err());
    }

    #[test]
    fn decomposability() {
        for n in [4, 6] {
            let c = decomposability_certificate(n).unwrap();
            assert!(c.p_verdict.is_psd() && c.q_verdict.is_psd());
        }
        assert!(decomposability_certificate(3).is_err());
        assert!(decomposability_certificate(2).is_err());
    }
}
