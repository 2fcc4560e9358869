use std::cmp::Ordering;

use super::registry::{VarId, VarRegistry};

/// A power product stored as `(variable, exponent)` pairs sorted by variable,
/// with no zero exponents.
///
/// Ordering is graded lexicographic: total degree first, then the exponent of
/// the lowest-indexed variable where the two differ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    powers: Vec<(VarId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: VarId) -> Self {
        Self { powers: vec![(v, 1)] }
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs; repeated variables
    /// are merged and zero exponents dropped.
    pub fn from_powers<I: IntoIterator<Item = (VarId, u32)>>(powers: I) -> Self {
        let mut powers: Vec<(VarId, u32)> = powers.into_iter().filter(|&(_, e)| e > 0).collect();
        powers.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(VarId, u32)> = Vec::with_capacity(powers.len());
        for (v, e) in powers {
            match merged.last_mut() {
                Some((last, acc)) if *last == v => *acc += e,
                _ => merged.push((v, e)),
            }
        }
        Self { powers: merged }
    }

    pub fn powers(&self) -> &[(VarId, u32)] {
        &self.powers
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.powers
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.powers[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.powers, &other.powers);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self { powers: out }
    }

    /// `self / other` when every exponent of `other` fits inside `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.powers.len());
        let mut j = 0;
        for &(v, e) in &self.powers {
            if j < other.powers.len() && other.powers[j].0 < v {
                return None;
            }
            if j < other.powers.len() && other.powers[j].0 == v {
                let d = other.powers[j].1;
                j += 1;
                match e.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - d)),
                }
            } else {
                out.push((v, e));
            }
        }
        (j == other.powers.len()).then_some(Self { powers: out })
    }

    /// Drops `v` and returns its former exponent.
    pub fn without(&self, v: VarId) -> (Self, u32) {
        let e = self.degree_in(v);
        let powers = self.powers.iter().copied().filter(|&(w, _)| w != v).collect();
        (Self { powers }, e)
    }

    pub fn render(&self, registry: &VarRegistry) -> String {
        self.powers
            .iter()
            .map(|&(v, e)| match e {
                1 => registry.name(v).to_string(),
                _ => format!("{}^{e}", registry.name(v)),
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.powers.iter().zip(&other.powers) {
                if a.0 != b.0 {
                    // the side holding the smaller variable index is larger
                    return if a.0 < b.0 { Ordering::Greater } else { Ordering::Less };
                }
                if a.1 != b.1 {
                    return a.1.cmp(&b.1);
                }
            }
            self.powers.len().cmp(&other.powers.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
