//! Plain-text renderings of command results.

use std::fmt::Write;

use posmap_core::forms::{
    DecomposabilityCertificate, DecompositionCertificate, IdentityCheck, NonnegScan, ReplayReport, SummandKind,
};
use posmap_core::maps::MapClassification;
use posmap_core::poly::rational::format_rational;
use posmap_core::span::SpanReport;
use posmap_core::{BlockMatrix, LinearMap, PsdVerdict};

fn verdict(v: &PsdVerdict) -> String {
    match v {
        PsdVerdict::Psd(cert) => format!(
            "yes (LDLᵀ pivots {})",
            cert.pivots.iter().map(format_rational).collect::<Vec<_>>().join(" ")
        ),
        PsdVerdict::NotPsd(w) => format!(
            "no (v = [{}], vᵀSv = {})",
            w.vector.iter().map(format_rational).collect::<Vec<_>>().join(", "),
            format_rational(&w.value)
        ),
    }
}

pub fn map(n: usize, k: usize, map: &LinearMap, witness: &BlockMatrix) -> String {
    let mut out = format!("Φ({n},{k}) on M{n}\n");
    for i in 0..n {
        for j in 0..n {
            let _ = writeln!(out, "Φ(E{}{}) =\n{}", i + 1, j + 1, map.block(i, j));
        }
    }
    let _ = write!(out, "witness W = C/{n}:\n{}", witness.matrix());
    out
}

pub fn classification(n: usize, k: usize, c: &MapClassification) -> String {
    format!(
        "Φ({n},{k})\ncompletely positive: {}\ncompletely copositive: {}",
        verdict(&c.completely_positive),
        verdict(&c.completely_copositive)
    )
}

pub fn identity(check: &IdentityCheck) -> String {
    let mut out = format!("{}: {}", check.identity, if check.holds() { "holds" } else { "FAILS" });
    for (label, r) in &check.residuals {
        let _ = write!(out, "\n  {label} = {r}");
    }
    out
}

pub fn decomposition(c: &DecompositionCertificate) -> String {
    let mut out = format!(
        "Φ({},{}) = sum of {} positive maps (k = {}, μ = {})\n{} block terms, {} cross squares",
        c.n,
        c.q,
        c.summands.len(),
        c.k,
        c.mu,
        c.count(SummandKind::BlockTerm),
        c.count(SummandKind::CrossSquare)
    );
    for s in &c.summands {
        let scan = s.psd_evidence.as_ref().map(|e| format!(", scan min {:.3e}", e.min_found)).unwrap_or_default();
        let _ = write!(
            out,
            "\n  {:?}: {} [CP {}, CCP {}{scan}]",
            s.kind, s.form, s.completely_positive, s.completely_copositive
        );
    }
    out
}

pub fn decomposability(c: &DecomposabilityCertificate) -> String {
    format!(
        "W(Φ({},{})) = P + Q^Γ\nP ⪰ 0: {}\nQ ⪰ 0: {}",
        c.n,
        c.k,
        verdict(&c.p_verdict),
        verdict(&c.q_verdict)
    )
}

pub fn replay(r: &ReplayReport) -> String {
    format!(
        "F = {}\nF(t=v², u=1) = {}\n-D(F,p) = {}\nq⁶ coefficient of D(-D(F,p), s) = {}\n\
         displayed -D(F,p) matches with a7 read as a4: {}\n\
         displayed -D(F,p) matches with a7 read as -a4: {}\n\
         displayed q⁶ coefficient matches literally: {}\n\
         displayed q⁶ coefficient matches with a7 read as a4: {}",
        r.f,
        r.f_restricted,
        r.neg_disc_p,
        r.q6_coefficient,
        r.neg_disc_matches_with_a7_as_a4,
        r.neg_disc_matches_with_a7_as_neg_a4,
        r.q6_matches_literal,
        r.q6_matches_with_a7_as_a4
    )
}

pub fn span(k: usize, r: &SpanReport) -> String {
    format!(
        "{}Φ({},{}): {} zero vectors ({} distinct) from {} restarts\nrank {} of {} (has spanning: {})\n\
         singular values: {}\n(sampling evidence: a rank below n² does not prove the absence of spanning)",
        if r.use_partial_transpose { "partial transpose of W of " } else { "W of " },
        r.n,
        k,
        r.zero_count,
        r.distinct_count,
        r.params.restarts,
        r.rank,
        r.n * r.n,
        r.has_spanning,
        r.singular_values.iter().map(|s| format!("{s:.3e}")).collect::<Vec<_>>().join(" ")
    )
}

pub fn nonneg(n: usize, k: usize, s: &NonnegScan) -> String {
    format!(
        "B(Φ({n},{k})) over unit x, y: min found {:.3e} ({} restarts, seed {}); nonnegative within {:e}: {}\n\
         value at the all-ones direction: {:.3e}",
        s.min_found,
        s.restarts,
        s.seed,
        s.tol,
        s.all_nonneg_evidence,
        s.probe_values.first().copied().unwrap_or(f64::NAN)
    )
}
