//! The quaternary octics `O`, `O′` and the senary quartic `Q` built from
//! the cyclic form of size 4 and shift 1.

use std::sync::Arc;

use crate::error::Result;
use crate::poly::{Polynomial, Substitution, VarRegistry};

use super::biquad::cyclic_form;
use super::biquad::ShiftConvention;

pub const OCTIC_VARS: [&str; 4] = ["x", "y", "z", "w"];
pub const SENARY_VARS: [&str; 6] = ["p", "q", "s", "t", "u", "v"];

pub const O_TEXT: &str = "x^4*z^2*w^2 + y^4*x^2*w^2 + z^4*x^2*y^2 + w^4*y^2*z^2 - 4*x^2*y^2*z^2*w^2";
pub const O_PRIME_TEXT: &str = "w^8 + x^4*y^2*z^2 + y^4*x^2*z^2 + z^4*x^2*y^2 - 4*x^2*y^2*z^2*w^2";
pub const Q_TEXT: &str = "v^4 + 2*p^2*q^2 + 2*s^2*t^2 + 2*u^2*v^2 + q^2*s^2 + t^2*u^2 + p^2*u^2 \
                          - 2*p*q*s*t - 4*p*q*u*v - 4*s*t*u*v";

pub fn octic_registry() -> Arc<VarRegistry> {
    VarRegistry::new(OCTIC_VARS).expect("valid names")
}

pub fn senary_registry() -> Arc<VarRegistry> {
    VarRegistry::new(SENARY_VARS).expect("valid names")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialForms {
    pub o: Polynomial,
    pub o_prime: Polynomial,
    pub q: Polynomial,
}

/// Substitutes `x_i → images[i]`, `y_i → images[4 + i]` into the size-4 shift-1 form.
pub fn cyclic41_at(target: &Arc<VarRegistry>, images: [&str; 8]) -> Result<Polynomial> {
    let form = cyclic_form(4, 1, ShiftConvention::OnX);
    let images = images
        .iter()
        .map(|t| Polynomial::parse(t, target))
        .collect::<Result<Vec<_>>>()?;
    let sub = Substitution::from_images(form.registry(), target, images)?;
    form.polynomial().substitute(&sub)
}

/// `O` as the cyclic form at `x = (yzw, zwx, wxy, xyz)`, `y = (x, y, z, w)`.
pub fn octic_by_substitution() -> Polynomial {
    cyclic41_at(&octic_registry(), ["y*z*w", "z*w*x", "w*x*y", "x*y*z", "x", "y", "z", "w"]).expect("fixed substitution")
}

/// `Q` as the cyclic form at `x = (p, s, u, v)`, `y = (q, t, v, u)`.
pub fn senary_by_substitution() -> Polynomial {
    cyclic41_at(&senary_registry(), ["p", "s", "u", "v", "q", "t", "v", "u"]).expect("fixed substitution")
}

/// `O′` assembled term by term.
pub fn octic_prime_direct() -> Polynomial {
    let r = octic_registry();
    let v = |name| Polynomial::named(&r, name);
    let (x, y, z, w) = (v("x"), v("y"), v("z"), v("w"));
    let (x2, y2, z2, w2) = (x.pow(2), y.pow(2), z.pow(2), w.pow(2));
    w.pow(8) + x.pow(4) * &y2 * &z2 + y.pow(4) * &x2 * &z2 + z.pow(4) * &x2 * &y2
        - (&x2 * &y2 * &z2 * &w2).scale(&crate::poly::int(4))
}

pub fn special_forms() -> SpecialForms {
    SpecialForms { o: octic_by_substitution(), o_prime: octic_prime_direct(), q: senary_by_substitution() }
}
