//! Exact positive-semidefiniteness test by symmetric LDLᵀ over ℚ.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::RatMatrix;
use crate::error::{Error, Result};
use crate::poly::rational::{self, Rational};

/// Outcome of [`is_psd_exact`], carrying checkable evidence either way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PsdVerdict {
    Psd(LdlCertificate),
    NotPsd(NegativeWitness),
}

impl PsdVerdict {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdVerdict::Psd(_))
    }

    pub fn witness(&self) -> Option<&NegativeWitness> {
        match self {
            PsdVerdict::NotPsd(w) => Some(w),
            PsdVerdict::Psd(_) => None,
        }
    }

    /// Re-checks the attached evidence against `s`.
    pub fn verify(&self, s: &RatMatrix) -> bool {
        match self {
            PsdVerdict::Psd(cert) => cert.verify(s),
            PsdVerdict::NotPsd(w) => w.verify(s),
        }
    }
}

/// `P S Pᵀ = L D Lᵀ` with `P` the pivot order, `L` unit lower triangular and
/// `D = diag(pivots)`, all pivots nonnegative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LdlCertificate {
    pub order: Vec<usize>,
    #[serde(with = "rational_vec")]
    pub pivots: Vec<Rational>,
    pub lower: RatMatrix,
}

impl LdlCertificate {
    pub fn verify(&self, s: &RatMatrix) -> bool {
        let n = s.dim();
        if self.order.len() != n || self.pivots.len() != n || self.lower.dim() != n {
            return false;
        }
        let mut seen = vec![false; n];
        if self.order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return false;
        }
        if self.pivots.iter().any(Signed::is_negative) {
            return false;
        }
        for r in 0..n {
            if !self.lower.get(r, r).is_one() || (r + 1..n).any(|c| !self.lower.get(r, c).is_zero()) {
                return false;
            }
        }
        (0..n).all(|r| {
            (0..=r).all(|c| {
                let ldl: Rational =
                    (0..=c).map(|t| self.lower.get(r, t) * &self.pivots[t] * self.lower.get(c, t)).sum();
                &ldl == s.get(self.order[r], self.order[c])
            })
        })
    }
}

/// A vector `v` with `vᵀ S v = value < 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegativeWitness {
    #[serde(with = "rational_vec")]
    pub vector: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

impl NegativeWitness {
    pub fn verify(&self, s: &RatMatrix) -> bool {
        self.value.is_negative() && s.quadratic_form(&self.vector).is_ok_and(|q| q == self.value)
    }
}

mod rational_vec {
    use super::*;
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(rational::format_rational).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings.iter().map(|s| rational::parse_rational(s).map_err(de::Error::custom)).collect()
    }
}

/// Decides whether the symmetric matrix `s` is positive semidefinite.
///
/// Diagonal pivoting on Schur complements; the change of basis back to the
/// original coordinates is tracked so that a negative diagonal, or a zero
/// diagonal with a nonzero off-diagonal entry, turns into an explicit
/// rational vector with negative quadratic form.
pub fn is_psd_exact(s: &RatMatrix) -> Result<PsdVerdict> {
    if !s.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = s.dim();
    let mut a: Vec<Vec<Rational>> = s.rows().map(<[Rational]>::to_vec).collect();
    // basis[j] is the current reduced coordinate j expressed in the original basis
    let mut basis: Vec<Vec<Rational>> =
        (0..n).map(|j| (0..n).map(|i| if i == j { rational::int(1) } else { Rational::zero() }).collect()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    let mut pivots = Vec::with_capacity(n);
    // multipliers[j] holds (pivot index, l_j) pairs in elimination order
    let mut multipliers: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];

    let witness = |vector: Vec<Rational>| -> Result<PsdVerdict> {
        let value = s.quadratic_form(&vector)?;
        debug_assert!(value.is_negative());
        Ok(PsdVerdict::NotPsd(NegativeWitness { vector, value }))
    };

    while !active.is_empty() {
        if let Some(&j) = active.iter().find(|&&j| a[j][j].is_negative()) {
            return witness(basis[j].clone());
        }
        let best = active
            .iter()
            .copied()
            .filter(|&j| a[j][j].is_positive())
            .fold(None::<usize>, |best, j| match best {
                Some(b) if a[b][b] >= a[j][j] => Some(b),
                _ => Some(j),
            });
        let Some(p) = best else {
            // every remaining diagonal is zero
            for (x, &i) in active.iter().enumerate() {
                for &j in &active[x + 1..] {
                    if !a[i][j].is_zero() {
                        let sign = if a[i][j].is_positive() { rational::int(1) } else { rational::int(-1) };
                        let v = basis[i].iter().zip(&basis[j]).map(|(bi, bj)| bi - &sign * bj).collect();
                        return witness(v);
                    }
                }
            }
            for &j in &active {
                order.push(j);
                pivots.push(Rational::zero());
            }
            break;
        };
        let d = a[p][p].clone();
        active.retain(|&j| j != p);
        order.push(p);
        let ls: Vec<(usize, Rational)> = active.iter().map(|&j| (j, &a[p][j] / &d)).collect();
        for &(i, ref li) in &ls {
            if li.is_zero() {
                continue;
            }
            for &j in &active {
                let delta = li * &a[p][j];
                a[i][j] -= delta;
            }
        }
        for (j, lj) in ls {
            if lj.is_zero() {
                continue;
            }
            let pivot_col = basis[p].clone();
            for (bj, bp) in basis[j].iter_mut().zip(&pivot_col) {
                *bj -= &lj * bp;
            }
            multipliers[j].push((p, lj));
        }
        pivots.push(d);
    }

    let mut position = vec![0; n];
    for (r, &i) in order.iter().enumerate() {
        position[i] = r;
    }
    let mut lower = RatMatrix::identity(n);
    for (j, ms) in multipliers.into_iter().enumerate() {
        for (p, l) in ms {
            lower.set(position[j], position[p], l);
        }
    }
    Ok(PsdVerdict::Psd(LdlCertificate { order, pivots, lower }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn identity_is_psd() {
        let v = is_psd_exact(&RatMatrix::identity(3)).unwrap();
        assert!(v.is_psd());
        assert!(v.verify(&RatMatrix::identity(3)));
    }

    #[test]
    fn indefinite_diagonal() {
        let s = RatMatrix::diagonal(&[int(1), int(-1)]);
        let v = is_psd_exact(&s).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.vector, vec![int(0), int(1)]);
        assert_eq!(w.value, int(-1));
        assert!(v.verify(&s));
    }

    #[test]
    fn tridiagonal_pivots() {
        let s = RatMatrix::from_ints(2, &[2, -1, -1, 2]);
        match is_psd_exact(&s).unwrap() {
            PsdVerdict::Psd(cert) => {
                assert_eq!(cert.pivots, vec![int(2), ratio(3, 2)]);
                assert!(cert.verify(&s));
            }
            other => panic!("expected psd, got {other:?}"),
        }
    }

    #[test]
    fn zero_diagonal_breakdown() {
        let s = RatMatrix::from_ints(3, &[1, 1, 0, 1, 1, 3, 0, 3, 0]);
        let v = is_psd_exact(&s).unwrap();
        assert!(!v.is_psd());
        assert!(v.verify(&s));
    }

    #[test]
    fn rank_deficient_psd() {
        let s = RatMatrix::from_ints(3, &[1, 1, 0, 1, 1, 0, 0, 0, 0]);
        let v = is_psd_exact(&s).unwrap();
        assert!(v.is_psd());
        assert!(v.verify(&s));
    }

    #[test]
    fn nonsymmetric_rejected() {
        assert!(matches!(is_psd_exact(&RatMatrix::from_ints(2, &[1, 2, 0, 1])), Err(Error::NotSymmetric)));
    }

    fn sym(dim: usize, vals: &[(i64, i64)]) -> RatMatrix {
        let mut m = RatMatrix::zeros(dim);
        let mut k = 0;
        for i in 0..dim {
            for j in i..dim {
                let (n, d) = vals[k];
                k += 1;
                m.set(i, j, ratio(n, d));
                m.set(j, i, ratio(n, d));
            }
        }
        m
    }

    /// Sign test through the characteristic polynomial: a real symmetric
    /// matrix is psd iff every coefficient of det(tI + S) is nonnegative.
    fn psd_by_char_poly(s: &RatMatrix) -> bool {
        let g = |i, j| s.get(i, j).clone();
        match s.dim() {
            2 => {
                let tr = g(0, 0) + g(1, 1);
                let det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
                tr >= int(0) && det >= int(0)
            }
            3 => {
                let tr = g(0, 0) + g(1, 1) + g(2, 2);
                let minors = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1) + g(0, 0) * g(2, 2) - g(0, 2) * g(0, 2)
                    + g(1, 1) * g(2, 2)
                    - g(1, 2) * g(1, 2);
                let det = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1))
                    - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
                    + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
                tr >= int(0) && minors >= int(0) && det >= int(0)
            }
            _ => unreachable!(),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn agrees_with_characteristic_polynomial(
            dim in 2usize..=3,
            vals in prop::collection::vec((-3i64..=3, 1i64..=2), 6),
            gram in any::<bool>(),
        ) {
            let mut s = sym(dim, &vals);
            if gram {
                // push towards the psd boundary: SᵀS is psd and often singular
                s = s.transpose().matmul(&s).unwrap();
            }
            let v = is_psd_exact(&s).unwrap();
            prop_assert_eq!(v.is_psd(), psd_by_char_poly(&s));
            prop_assert!(v.verify(&s));
        }
    }
}
