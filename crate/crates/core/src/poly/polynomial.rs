use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::rational::{format_rational, int, Rational};
use super::registry::{VarId, VarRegistry};
use crate::error::{Error, Result};

/// A sparse polynomial with rational coefficients over a fixed variable
/// registry.
///
/// Terms are kept in a map ordered by graded lexicographic order and never
/// store a zero coefficient, so structural equality is polynomial equality.
#[derive(Clone, Debug)]
pub struct Polynomial {
    registry: Arc<VarRegistry>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.registry.same_as(&other.registry) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(registry: &Arc<VarRegistry>) -> Self {
        Self { registry: Arc::clone(registry), terms: BTreeMap::new() }
    }

    pub fn constant(registry: &Arc<VarRegistry>, c: Rational) -> Self {
        Self::term(registry, Monomial::one(), c)
    }

    pub fn var(registry: &Arc<VarRegistry>, v: VarId) -> Self {
        assert!(v.index() < registry.len(), "variable index out of range");
        Self::term(registry, Monomial::var(v), Rational::one())
    }

    /// Convenience lookup by name; panics on unknown names.
    pub fn named(registry: &Arc<VarRegistry>, name: &str) -> Self {
        let v = registry.var(name).unwrap_or_else(|e| panic!("{e}"));
        Self::var(registry, v)
    }

    pub fn term(registry: &Arc<VarRegistry>, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(registry);
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I>(registry: &Arc<VarRegistry>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(registry);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        if let Some((v, _)) = m.powers().last() {
            assert!(v.index() < self.registry.len(), "monomial uses a variable outside the registry");
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.registry
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: VarId) -> Option<u32> {
        self.terms.keys().map(|m| m.degree_in(v)).max()
    }

    /// Variables that occur with positive exponent.
    pub fn variables(&self) -> Vec<VarId> {
        let mut seen: Vec<VarId> =
            self.terms.keys().flat_map(|m| m.powers().iter().map(|&(v, _)| v)).collect();
        seen.sort();
        seen.dedup();
        seen
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    fn check_registry(&self, other: &Self) -> Result<()> {
        if self.registry.same_as(&other.registry) {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_registry(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_registry(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_registry(other)?;
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += c;
            }
        }
        Ok(Self::from_terms(&self.registry, acc))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.registry);
        }
        Self {
            registry: Arc::clone(&self.registry),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::constant(&self.registry, Rational::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Replaces every variable by its image under `sub`.
    pub fn substitute(&self, sub: &Substitution) -> Result<Self> {
        if !self.registry.same_as(&sub.source) {
            return Err(Error::RegistryMismatch);
        }
        let mut power_cache: HashMap<(VarId, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(&sub.target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&sub.target, c.clone());
            for &(v, e) in m.powers() {
                let image = sub.images[v.index()]
                    .as_ref()
                    .ok_or_else(|| Error::MissingImage(self.registry.name(v).to_string()))?;
                let power = power_cache.entry((v, e)).or_insert_with(|| image.pow(e));
                term = &term * &*power;
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Exact value at a (possibly partial) assignment covering every used variable.
    pub fn evaluate(&self, point: &BTreeMap<VarId, Rational>) -> Result<Rational> {
        self.evaluate_with(|v| point.get(&v).cloned())
    }

    /// Exact value with one entry per registry variable.
    pub fn evaluate_dense(&self, values: &[Rational]) -> Result<Rational> {
        if values.len() != self.registry.len() {
            return Err(Error::DimensionMismatch { expected: self.registry.len(), found: values.len() });
        }
        self.evaluate_with(|v| Some(values[v.index()].clone()))
    }

    fn evaluate_with(&self, lookup: impl Fn(VarId) -> Option<Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.powers() {
                let x = lookup(v).ok_or_else(|| Error::Unassigned(self.registry.name(v).to_string()))?;
                t *= num_traits::pow(x, e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    /// Floating-point value with one entry per registry variable.
    pub fn evaluate_f64(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.registry.len());
        self.terms
            .iter()
            .map(|(m, c)| {
                m.powers().iter().fold(super::rational::to_f64(c), |acc, &(v, e)| acc * values[v.index()].powi(e as i32))
            })
            .sum()
    }

    /// The polynomial multiplying `v^d`, free of `v`.
    pub fn coefficient_of(&self, v: VarId, d: u32) -> Self {
        let mut out = Self::zero(&self.registry);
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            if e == d {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Average of `p` over all sign flips of `vars`: keeps exactly the terms
    /// of even degree in every listed variable.
    pub fn sign_symmetrize(&self, vars: &[VarId]) -> Self {
        Self {
            registry: Arc::clone(&self.registry),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m.degree_in(v) % 2 == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `B^2 - 4AC` for `p = A v^2 + B v + C`.
    pub fn quadratic_discriminant(&self, v: VarId) -> Result<Self> {
        let degree = self.degree_in(v).unwrap_or(0);
        if degree != 2 {
            return Err(Error::NotQuadratic { var: self.registry.name(v).to_string(), degree });
        }
        let a = self.coefficient_of(v, 2);
        let b = self.coefficient_of(v, 1);
        let c = self.coefficient_of(v, 0);
        Ok(&(&b * &b) - &(&a * &c).scale(&int(4)))
    }

    /// Exact quotient `p / q`, or `None` when `q` does not divide `p`.
    ///
    /// Repeatedly cancels the graded-lex leading term of the remainder. If
    /// `q | p` every remainder stays a multiple of `q`, so its leading term is
    /// divisible by `lt(q)`; the first failure therefore proves non-divisibility.
    pub fn exact_divide(&self, q: &Self) -> Result<Option<Self>> {
        self.check_registry(q)?;
        let (lead_m, lead_c) = q.leading_term().ok_or(Error::DivisionByZero)?;
        let mut remainder = self.clone();
        let mut quotient = Self::zero(&self.registry);
        while let Some((m, c)) = remainder.leading_term() {
            let Some(qm) = m.div(lead_m) else {
                return Ok(None);
            };
            let qc = c / lead_c;
            for (tm, tc) in &q.terms {
                remainder.add_term(tm.mul(&qm), -(tc * &qc));
            }
            quotient.add_term(qm, qc);
        }
        Ok(Some(quotient))
    }

    /// Moves the polynomial into `target`, renaming each variable through `rename`.
    pub fn rename(&self, target: &Arc<VarRegistry>, rename: impl Fn(VarId) -> Option<VarId>) -> Result<Self> {
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut powers = Vec::with_capacity(m.powers().len());
            for &(v, e) in m.powers() {
                let w = rename(v).ok_or_else(|| Error::MissingImage(self.registry.name(v).to_string()))?;
                if w.index() >= target.len() {
                    return Err(Error::UnknownVariable(format!("#{}", w.0)));
                }
                powers.push((w, e));
            }
            out.add_term(Monomial::from_powers(powers), c.clone());
        }
        Ok(out)
    }

    /// Scalar `c` with `self == c * other`, if one exists (`other` nonzero).
    pub fn ratio_to(&self, other: &Self) -> Option<Rational> {
        let (m, c) = other.leading_term()?;
        let factor = self.coefficient(m) / c;
        (other.scale(&factor) == *self).then_some(factor)
    }
}

/// Images of source-registry variables as polynomials over a target registry.
#[derive(Clone, Debug)]
pub struct Substitution {
    source: Arc<VarRegistry>,
    target: Arc<VarRegistry>,
    images: Vec<Option<Polynomial>>,
}

impl Substitution {
    pub fn new(source: &Arc<VarRegistry>, target: &Arc<VarRegistry>) -> Self {
        Self { source: Arc::clone(source), target: Arc::clone(target), images: vec![None; source.len()] }
    }

    pub fn set(&mut self, v: VarId, image: Polynomial) -> Result<&mut Self> {
        if !image.registry.same_as(&self.target) {
            return Err(Error::RegistryMismatch);
        }
        self.images[v.index()] = Some(image);
        Ok(self)
    }

    /// Assigns images in registry order to the first `images.len()` variables.
    pub fn from_images(source: &Arc<VarRegistry>, target: &Arc<VarRegistry>, images: Vec<Polynomial>) -> Result<Self> {
        if images.len() > source.len() {
            return Err(Error::DimensionMismatch { expected: source.len(), found: images.len() });
        }
        let mut sub = Self::new(source, target);
        for (i, image) in images.into_iter().enumerate() {
            sub.set(VarId(i as u32), image)?;
        }
        Ok(sub)
    }

    pub fn identity(registry: &Arc<VarRegistry>) -> Self {
        let images = registry.ids().map(|v| Polynomial::var(registry, v)).collect();
        Self::from_images(registry, registry, images).expect("same registry")
    }

    pub fn target(&self) -> &Arc<VarRegistry> {
        &self.target
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics when the operands live in different registries; use the
        /// `checked_*` variant to get an error instead.
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial registries differ")
            }
        }
        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $trait<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&int(-1))
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    /// Signed sum of `c*v1^e1*...` terms, highest graded-lex term first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c < &Rational::zero();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = if negative { -c.clone() } else { c.clone() };
            if m.is_one() {
                f.write_str(&format_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&m.render(&self.registry))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), m.render(&self.registry))?;
            }
        }
        Ok(())
    }
}
