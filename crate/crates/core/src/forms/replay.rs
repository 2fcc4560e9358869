//! Symbolic replay of the discriminant argument for the senary quartic `Q`:
//! `F = a4 (st − uv)(pq − uv) + α Q` restricted to `t = v²`, `u = 1`.

use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::poly::{Polynomial, Substitution, VarRegistry};

use super::special::Q_TEXT;

pub const REPLAY_VARS: [&str; 9] = ["p", "q", "s", "t", "u", "v", "a4", "a7", "alpha"];

/// `−D(F, p)` as displayed in the argument, written with `a7`.
pub const NEG_DISC_DISPLAY: &str = "4*alpha^2*q^2*s^2 + 8*alpha^2*q^4*s^2 + 8*alpha^2*v^4*s^2 \
    - a7^2*q^2*v^4*s^2 + 4*a7*alpha*q^2*v^4*s^2 + 12*alpha^2*q^2*v^4*s^2 \
    - 4*a7*alpha*v^3*s - 16*alpha^2*v^3*s + 2*a7^2*q^2*v^3*s - 4*a7*alpha*q^2*v^3*s - 48*alpha^2*q^2*v^3*s \
    + 4*a7*alpha*v^2 + 8*alpha^2*v^2 - a7^2*q^2*v^2 + 8*alpha^2*v^4 + 16*alpha^2*q^2*v^4";

/// The displayed leading coefficient in `q`: `32 α² v² (a7² − 16 α² v²)`.
pub const Q6_DISPLAY: &str = "32*alpha^2*v^2*a7^2 - 512*alpha^4*v^4";

fn as_text<S: Serializer>(p: &Polynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub variables: Vec<String>,
    #[serde(serialize_with = "as_text")]
    pub f: Polynomial,
    #[serde(serialize_with = "as_text")]
    pub f_restricted: Polynomial,
    #[serde(serialize_with = "as_text")]
    pub neg_disc_p: Polynomial,
    #[serde(serialize_with = "as_text")]
    pub disc_s: Polynomial,
    #[serde(serialize_with = "as_text")]
    pub q6_coefficient: Polynomial,
    #[serde(serialize_with = "as_text")]
    pub neg_disc_display: Polynomial,
    #[serde(serialize_with = "as_text")]
    pub q6_display: Polynomial,
    /// The display equals the computation with `a7` read as `a4`.
    pub neg_disc_matches_with_a7_as_a4: bool,
    /// The display equals the computation with `a7` read as `−a4`.
    pub neg_disc_matches_with_a7_as_neg_a4: bool,
    /// The displayed `q⁶` coefficient equals the computed one verbatim (with `a7`).
    pub q6_matches_literal: bool,
    pub q6_matches_with_a7_as_a4: bool,
}

pub fn replay_registry() -> Arc<VarRegistry> {
    VarRegistry::new(REPLAY_VARS).expect("valid names")
}

/// Replaces the variable `from` by `image` everywhere.
fn replace(p: &Polynomial, from: &str, image: &Polynomial) -> Result<Polynomial> {
    let r = p.registry();
    let v = r.var(from)?;
    let mut sub = Substitution::identity(r);
    sub.set(v, image.clone())?;
    p.substitute(&sub)
}

pub fn proof_replay_q41() -> Result<ReplayReport> {
    let r = replay_registry();
    let parse = |t: &str| Polynomial::parse(t, &r);
    let q_form = parse(Q_TEXT)?;
    let f = parse("a4")? * parse("s*t - u*v")? * parse("p*q - u*v")? + parse("alpha")? * &q_form;
    let f_restricted = replace(&replace(&f, "t", &parse("v^2")?)?, "u", &parse("1")?)?;
    let neg_disc_p = -f_restricted.quadratic_discriminant(r.var("p")?)?;
    let disc_s = neg_disc_p.quadratic_discriminant(r.var("s")?)?;
    let q6_coefficient = disc_s.coefficient_of(r.var("q")?, 6);

    let neg_disc_display = parse(NEG_DISC_DISPLAY)?;
    let q6_display = parse(Q6_DISPLAY)?;
    let a4 = parse("a4")?;
    let as_a4 = |p: &Polynomial| replace(p, "a7", &a4);
    let as_neg_a4 = |p: &Polynomial| replace(p, "a7", &-&a4);
    Ok(ReplayReport {
        variables: r.names().to_vec(),
        neg_disc_matches_with_a7_as_a4: as_a4(&neg_disc_display)? == neg_disc_p,
        neg_disc_matches_with_a7_as_neg_a4: as_neg_a4(&neg_disc_display)? == neg_disc_p,
        q6_matches_literal: q6_display == q6_coefficient,
        q6_matches_with_a7_as_a4: as_a4(&q6_display)? == q6_coefficient,
        f,
        f_restricted,
        neg_disc_p,
        disc_s,
        q6_coefficient,
        neg_disc_display,
        q6_display,
    })
}
