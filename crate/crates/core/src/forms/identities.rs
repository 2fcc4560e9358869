//! Exact polynomial identities among the cyclic forms and the special forms.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::poly::{Polynomial, Substitution, VarRegistry};

use super::biquad::{cyclic_form, mu_permutation, qi_hou_form, rename_to_reduced, ShiftConvention};
use super::decomposition::divisor_summands;
use super::special::{cyclic41_at, octic_registry, senary_registry, special_forms};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "identity")]
pub enum Identity {
    /// `O′(xz², xyw, zw², xzw) = x⁴z⁶w⁶ O(x, y, z, w)`.
    OcticPrimePullback,
    /// `Q(zw³, xyw², yzw², xw³, xyzw, w⁴) = w⁸ O′(x, y, z, w)`.
    SenaryPullback,
    /// The cyclic form of size `n`, shift `k`, as block terms plus cross squares.
    DivisorSplit { n: usize, k: usize },
    /// Block `d` of the divisor split renamed onto `n/k` variables is the
    /// cyclic form of size `n/k`, shift 1 (shift on the x index).
    BlockRename { n: usize, k: usize, d: usize },
    /// Relabelling by `μ` carries shift `gcd(n, q)` to shift `q`.
    MuIntertwine { n: usize, q: usize },
    /// The size-4 shift-1 form is invariant under the simultaneous index
    /// rotation, and all four column rotations of the `(p s u v; q t v u)`
    /// substitution give `Q`.
    Cyclic,
    /// `O(y², y, z, w) = (1+z²)w²y⁸ + (z²−4w²)z²y⁶ + y²z²w⁴`.
    OcticSlice,
    /// `Q(s, t, t, s, s, t) = 2(s² − t²)²`.
    SenaryDiagonal,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identity::OcticPrimePullback => write!(f, "octic-prime-pullback"),
            Identity::SenaryPullback => write!(f, "senary-pullback"),
            Identity::DivisorSplit { n, k } => write!(f, "divisor-split({n},{k})"),
            Identity::BlockRename { n, k, d } => write!(f, "block-rename({n},{k},{d})"),
            Identity::MuIntertwine { n, q } => write!(f, "mu-intertwine({n},{q})"),
            Identity::Cyclic => write!(f, "cyclic"),
            Identity::OcticSlice => write!(f, "octic-slice"),
            Identity::SenaryDiagonal => write!(f, "senary-diagonal"),
        }
    }
}

/// One `left − right` residual per sub-equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub identity: Identity,
    pub residuals: Vec<(String, Polynomial)>,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    /// The first nonzero residual, or zero.
    pub fn residual(&self) -> &Polynomial {
        self.residuals.iter().map(|(_, r)| r).find(|r| !r.is_zero()).unwrap_or(&self.residuals[0].1)
    }
}

fn substitute_text(p: &Polynomial, target: &Arc<VarRegistry>, images: &[&str]) -> Result<Polynomial> {
    let images = images.iter().map(|t| Polynomial::parse(t, target)).collect::<Result<Vec<_>>>()?;
    p.substitute(&Substitution::from_images(p.registry(), target, images)?)
}

pub fn verify_identity(identity: Identity) -> Result<IdentityCheck> {
    let single = |label: &str, r: Polynomial| vec![(label.to_string(), r)];
    let residuals = match identity {
        Identity::OcticPrimePullback => {
            let f = special_forms();
            let r = octic_registry();
            let lhs = substitute_text(&f.o_prime, &r, &["x*z^2", "x*y*w", "z*w^2", "x*z*w"])?;
            let rhs = Polynomial::parse("x^4*z^6*w^6", &r)? * &f.o;
            single("lhs - rhs", lhs - rhs)
        }
        Identity::SenaryPullback => {
            let f = special_forms();
            let r = octic_registry();
            let lhs = substitute_text(&f.q, &r, &["z*w^3", "x*y*w^2", "y*z*w^2", "x*w^3", "x*y*z*w", "w^4"])?;
            let rhs = Polynomial::parse("w^8", &r)? * &f.o_prime;
            single("lhs - rhs", lhs - rhs)
        }
        Identity::DivisorSplit { n, k } => {
            let target = qi_hou_form(n, k)?;
            let mut sum = crate::forms::BiquadraticForm::zero(n);
            for (_, s) in divisor_summands(n, k)? {
                sum = sum.checked_add(&s)?;
            }
            single("target - summands", target.checked_sub(&sum)?.into_polynomial())
        }
        Identity::BlockRename { n, k, d } => {
            let report = rename_to_reduced(n, k, d)?;
            let reduced = cyclic_form(n / k, 1, ShiftConvention::OnX);
            single("renamed - reduced", report.renamed.checked_sub(&reduced)?.into_polynomial())
        }
        Identity::MuIntertwine { n, q } => {
            let mu = mu_permutation(n, q)?;
            let lhs = qi_hou_form(n, n.gcd(&q))?.permute(&mu)?;
            single("mu(B_k) - B_q", lhs.checked_sub(&qi_hou_form(n, q)?)?.into_polynomial())
        }
        Identity::Cyclic => {
            let b = cyclic_form(4, 1, ShiftConvention::OnX);
            let registry = b.registry().clone();
            let shifted = substitute_text(b.polynomial(), &registry, &["x2", "x3", "x4", "x1", "y2", "y3", "y4", "y1"])?;
            let mut out = vec![("B - B(rotated)".to_string(), b.polynomial() - &shifted)];
            let q = special_forms().q;
            let s = senary_registry();
            let columns = [["p", "q"], ["s", "t"], ["u", "v"], ["v", "u"]];
            for r in 0..4 {
                let mut images = [""; 8];
                for i in 0..4 {
                    images[i] = columns[(i + r) % 4][0];
                    images[4 + i] = columns[(i + r) % 4][1];
                }
                let rotated = cyclic41_at(&s, images)?;
                out.push((format!("rotation {r} - Q"), rotated - &q));
            }
            out
        }
        Identity::OcticSlice => {
            let f = special_forms();
            let r = octic_registry();
            let lhs = substitute_text(&f.o, &r, &["y^2", "y", "z", "w"])?;
            let rhs = Polynomial::parse(
                "w^2*y^8 + z^2*w^2*y^8 + z^4*y^6 - 4*w^2*z^2*y^6 + y^2*z^2*w^4",
                &r,
            )?;
            single("lhs - rhs", lhs - rhs)
        }
        Identity::SenaryDiagonal => {
            let st = VarRegistry::new(["s", "t"])?;
            let lhs = substitute_text(&special_forms().q, &st, &["s", "t", "t", "s", "s", "t"])?;
            let rhs = Polynomial::parse("2*s^4 - 4*s^2*t^2 + 2*t^4", &st)?;
            single("lhs - rhs", lhs - rhs)
        }
    };
    Ok(IdentityCheck { identity, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_identities_hold() {
        for id in [
            Identity::OcticPrimePullback,
            Identity::SenaryPullback,
            Identity::Cyclic,
            Identity::OcticSlice,
            Identity::SenaryDiagonal,
        ] {
            let check = verify_identity(id).unwrap();
            assert!(check.holds(), "{id}: {}", check.residual());
        }
        assert_eq!(verify_identity(Identity::Cyclic).unwrap().residuals.len(), 5);
    }

    #[test]
    fn parametrised_identities_hold() {
        for n in 3..=8 {
            for k in 1..n {
                assert!(verify_identity(Identity::MuIntertwine { n, q: k }).unwrap().holds());
                if n % k == 0 && n / k >= 2 {
                    assert!(verify_identity(Identity::DivisorSplit { n, k }).unwrap().holds());
                    for d in 1..=k {
                        assert!(verify_identity(Identity::BlockRename { n, k, d }).unwrap().holds());
                    }
                }
            }
        }
    }

    #[test]
    fn bad_parameters_error() {
        assert!(verify_identity(Identity::DivisorSplit { n: 6, k: 4 }).is_err());
        assert!(verify_identity(Identity::BlockRename { n: 6, k: 2, d: 3 }).is_err());
        assert!(verify_identity(Identity::MuIntertwine { n: 2, q: 1 }).is_err());
    }

    #[test]
    fn failing_check_reports_residual() {
        let check = IdentityCheck {
            identity: Identity::Cyclic,
            residuals: vec![
                ("a".into(), Polynomial::zero(&octic_registry())),
                ("b".into(), Polynomial::parse("x - y", &octic_registry()).unwrap()),
            ],
        };
        assert!(!check.holds());
        assert_eq!(check.residual().to_string(), "x - y");
    }
}
