//! Biquadratic forms `B(x; y)` and their correspondence with linear maps.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{check_qi_hou_params, LinearMap, Permutation, RatMatrix};
use crate::poly::{int, ratio, Monomial, Polynomial, Rational, VarId, VarRegistry};

/// A polynomial over `x1..xn, y1..yn` whose every monomial has degree 2 in
/// the `x` block and degree 2 in the `y` block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiquadraticForm {
    n: usize,
    poly: Polynomial,
}

pub fn x_var(n: usize, i: usize) -> VarId {
    debug_assert!(i < n);
    VarId(i as u32)
}

pub fn y_var(n: usize, i: usize) -> VarId {
    VarId((n + i) as u32)
}

impl BiquadraticForm {
    /// Checks the bidegree; `poly` must live on `VarRegistry::biquadratic(n)`.
    pub fn new(n: usize, poly: Polynomial) -> Result<Self> {
        let expected = VarRegistry::biquadratic(n);
        if !poly.registry().same_as(&expected) {
            return Err(Error::RegistryMismatch);
        }
        for (m, _) in poly.terms() {
            let (dx, dy) = m.powers().iter().fold((0, 0), |(dx, dy), &(v, e)| {
                if v.index() < n {
                    (dx + e, dy)
                } else {
                    (dx, dy + e)
                }
            });
            if (dx, dy) != (2, 2) {
                return Err(Error::WrongBidegree(format!(
                    "monomial {} has bidegree ({dx},{dy})",
                    m.render(poly.registry())
                )));
            }
        }
        Ok(Self { n, poly })
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        Self::new(n, Polynomial::parse(text, &VarRegistry::biquadratic(n))?)
    }

    pub fn zero(n: usize) -> Self {
        Self { n, poly: Polynomial::zero(&VarRegistry::biquadratic(n)) }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn into_polynomial(self) -> Polynomial {
        self.poly
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        self.poly.registry()
    }

    pub fn x(&self, i: usize) -> Polynomial {
        Polynomial::var(self.registry(), x_var(self.n, i))
    }

    pub fn y(&self, i: usize) -> Polynomial {
        Polynomial::var(self.registry(), y_var(self.n, i))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Ok(Self { n: self.n, poly: self.poly.checked_add(&other.poly)? })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        Ok(Self { n: self.n, poly: self.poly.checked_sub(&other.poly)? })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { n: self.n, poly: self.poly.scale(c) }
    }

    /// `B(x; y)` at rational points.
    pub fn evaluate(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        if x.len() != self.n || y.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len().min(y.len()) });
        }
        let point: Vec<Rational> = x.iter().chain(y).cloned().collect();
        self.poly.evaluate_dense(&point)
    }

    pub fn evaluate_f64(&self, x: &[f64], y: &[f64]) -> f64 {
        let point: Vec<f64> = x.iter().chain(y).copied().collect();
        self.poly.evaluate_f64(&point)
    }

    /// Simultaneous renaming `x_i → x_{μ(i)}`, `y_i → y_{μ(i)}`.
    pub fn permute(&self, mu: &Permutation) -> Result<Self> {
        if mu.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: mu.len() });
        }
        let n = self.n;
        let poly = self.poly.rename(self.registry(), |v| {
            let i = v.index();
            Some(if i < n { x_var(n, mu.apply(i)) } else { y_var(n, mu.apply(i - n)) })
        })?;
        Ok(Self { n, poly })
    }

    /// The map `φ` with `yᵀ φ(x xᵀ) y = B(x; y)`.
    ///
    /// For `x_i x_j y_k y_l` with `i < j`, `k < l` the coefficient is split
    /// evenly between `φ(E_ij)[k,l]` and `φ(E_ji)[l,k]`, so that `E_ij` is
    /// paired with `E_kl` rather than `E_lk`. This reproduces `φ(E_ij) = −E_ij`
    /// for the cross terms `−2 x_i y_i x_j y_j` and keeps `φ(E_ji) = φ(E_ij)ᵀ`.
    pub fn to_map(&self) -> LinearMap {
        let n = self.n;
        let half = ratio(1, 2);
        let mut blocks = vec![RatMatrix::zeros(n); n * n];
        for (m, c) in self.poly.terms() {
            let (xs, ys) = split_indices(n, m);
            let (i, j) = (xs[0], xs[1]);
            let (k, l) = (ys[0], ys[1]);
            let mut bump = |bi: usize, bj: usize, r: usize, s: usize, v: Rational| {
                *blocks[bi * n + bj].entry_mut(r, s) += v;
            };
            match (i == j, k == l) {
                (true, true) => bump(i, i, k, k, c.clone()),
                (true, false) => {
                    bump(i, i, k, l, c * &half);
                    bump(i, i, l, k, c * &half);
                }
                (false, _) => {
                    bump(i, j, k, l, c * &half);
                    bump(j, i, l, k, c * &half);
                }
            }
        }
        LinearMap::from_blocks(n, blocks).expect("aligned extraction preserves hermiticity")
    }

    /// `yᵀ φ(x xᵀ) y` expanded symbolically.
    pub fn of_map(map: &LinearMap) -> Self {
        let n = map.dim();
        let registry = VarRegistry::biquadratic(n);
        let mut terms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let block = map.block(i, j);
                for k in 0..n {
                    for l in 0..n {
                        let c = block.get(k, l);
                        if !c.is_zero() {
                            let m = Monomial::from_powers([
                                (x_var(n, i), 1),
                                (x_var(n, j), 1),
                                (y_var(n, k), 1),
                                (y_var(n, l), 1),
                            ]);
                            terms.push((m, c.clone()));
                        }
                    }
                }
            }
        }
        Self { n, poly: Polynomial::from_terms(&registry, terms) }
    }
}

impl fmt::Display for BiquadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// The x-indices and y-indices of a bidegree-(2,2) monomial, each sorted.
fn split_indices(n: usize, m: &Monomial) -> ([usize; 2], [usize; 2]) {
    let mut xs = Vec::with_capacity(2);
    let mut ys = Vec::with_capacity(2);
    for &(v, e) in m.powers() {
        let target = if v.index() < n { &mut xs } else { &mut ys };
        for _ in 0..e {
            target.push(v.index() % n);
        }
    }
    ([xs[0], xs[1]], [ys[0], ys[1]])
}

/// `map_from_biquadratic`: see [`BiquadraticForm::to_map`].
pub fn map_from_biquadratic(form: &BiquadraticForm) -> LinearMap {
    form.to_map()
}

/// `biquadratic_of_map`: see [`BiquadraticForm::of_map`].
pub fn biquadratic_of_map(map: &LinearMap) -> BiquadraticForm {
    BiquadraticForm::of_map(map)
}

/// Where the cyclic shift acts in the third sum of a cyclic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftConvention {
    /// `Σ x_{σ(i)}² y_i²`, as in the defining form of the maps.
    OnX,
    /// `Σ x_i² y_{σ(i)}²`.
    OnY,
}

/// `(n−2) Σ x_i² y_i² + Σ x_{σ(i)}² y_i² − 2 Σ_{i<j} x_i y_i x_j y_j` with
/// `σ(i) = i + k (mod n)`, for any `n ≥ 2` and any shift.
pub fn cyclic_form(n: usize, k: usize, convention: ShiftConvention) -> BiquadraticForm {
    assert!(n >= 2);
    let registry = VarRegistry::biquadratic(n);
    let mut terms = Vec::new();
    let sq = |a: VarId, b: VarId| Monomial::from_powers([(a, 2), (b, 2)]);
    for i in 0..n {
        terms.push((sq(x_var(n, i), y_var(n, i)), int(n as i64 - 2)));
        let s = (i + k) % n;
        let m = match convention {
            ShiftConvention::OnX => sq(x_var(n, s), y_var(n, i)),
            ShiftConvention::OnY => sq(x_var(n, i), y_var(n, s)),
        };
        terms.push((m, int(1)));
        for j in i + 1..n {
            let m = Monomial::from_powers([(x_var(n, i), 1), (y_var(n, i), 1), (x_var(n, j), 1), (y_var(n, j), 1)]);
            terms.push((m, int(-2)));
        }
    }
    BiquadraticForm { n, poly: Polynomial::from_terms(&registry, terms) }
}

/// The biquadratic form `yᵀ Φ(x xᵀ) y` of [`crate::maps::qi_hou_map`], in closed form.
pub fn qi_hou_form(n: usize, k: usize) -> Result<BiquadraticForm> {
    check_qi_hou_params(n, k)?;
    Ok(cyclic_form(n, k, ShiftConvention::OnX))
}

fn check_divisor(n: usize, k: usize) -> Result<usize> {
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidParameter(format!("k = {k} does not divide n = {n}")));
    }
    let m = n / k;
    if m < 2 {
        return Err(Error::InvalidParameter(format!("n/k = {m}: need n/k >= 2")));
    }
    Ok(m)
}

/// The part of `qi_hou_form(n, k)` supported on the residue class
/// `i ≡ d (mod k)`, `d` in `1..=k`, with diagonal weight `n/k − 2`.
pub fn block_term(n: usize, k: usize, d: usize) -> Result<BiquadraticForm> {
    let m = check_divisor(n, k)?;
    if d == 0 || d > k {
        return Err(Error::InvalidParameter(format!("d = {d}: need 1 <= d <= k = {k}")));
    }
    let registry = VarRegistry::biquadratic(n);
    // 0-based members of the class: d-1, d-1+k, ...
    let class: Vec<usize> = (0..m).map(|t| d - 1 + t * k).collect();
    let mut terms = Vec::new();
    let sq = |a: VarId, b: VarId| Monomial::from_powers([(a, 2), (b, 2)]);
    for (a, &i) in class.iter().enumerate() {
        terms.push((sq(x_var(n, i), y_var(n, i)), int(m as i64 - 2)));
        terms.push((sq(x_var(n, (i + k) % n), y_var(n, i)), int(1)));
        for &j in &class[a + 1..] {
            let mono = Monomial::from_powers([(x_var(n, i), 1), (y_var(n, i), 1), (x_var(n, j), 1), (y_var(n, j), 1)]);
            terms.push((mono, int(-2)));
        }
    }
    Ok(BiquadraticForm { n, poly: Polynomial::from_terms(&registry, terms) })
}

/// `(x_i y_i − x_j y_j)²` (0-based indices).
pub fn cross_square(n: usize, i: usize, j: usize) -> BiquadraticForm {
    let registry = VarRegistry::biquadratic(n);
    let xy = |t: usize| Polynomial::var(&registry, x_var(n, t)) * Polynomial::var(&registry, y_var(n, t));
    let diff = xy(i) - xy(j);
    BiquadraticForm { n, poly: &diff * &diff }
}

/// `(x_i y_j − x_j y_i)²` (0-based indices).
pub fn antisymmetric_square(n: usize, i: usize, j: usize) -> BiquadraticForm {
    let registry = VarRegistry::biquadratic(n);
    let v = |t| Polynomial::var(&registry, t);
    let diff = v(x_var(n, i)) * v(y_var(n, j)) - v(x_var(n, j)) * v(y_var(n, i));
    BiquadraticForm { n, poly: &diff * &diff }
}

/// `μ(d + k j) = d + q j (mod n)` with `k = gcd(n, q)`; intertwines the
/// shifts: `μ ∘ σ_k = σ_q ∘ μ`.
pub fn mu_permutation(n: usize, q: usize) -> Result<Permutation> {
    check_qi_hou_params(n, q)?;
    let k = n.gcd(&q);
    let mut image = vec![0; n];
    for d in 0..k {
        for j in 0..n / k {
            image[d + k * j] = (d + q * j) % n;
        }
    }
    let mu = Permutation::new(image)?;
    let lhs = mu.compose(&Permutation::shift(n, k))?;
    let rhs = Permutation::shift(n, q).compose(&mu)?;
    if lhs != rhs {
        return Err(Error::InvalidPermutation(format!("μ fails to intertwine σ_{k} and σ_{q} for n = {n}")));
    }
    Ok(mu)
}

/// Result of renaming one residue-class block onto `m = n/k` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenameReport {
    pub renamed: BiquadraticForm,
    /// Equal to `cyclic_form(m, 1, OnX)`.
    pub matches_shift_on_x: bool,
    /// Equal to `cyclic_form(m, 1, OnY)`.
    pub matches_shift_on_y: bool,
    /// The two reduced forms are the same polynomial (only when `m = 2`).
    pub conventions_coincide: bool,
}

impl RenameReport {
    /// Number of distinct reduced polynomials that the renamed block equals.
    pub fn distinct_matches(&self) -> usize {
        match (self.matches_shift_on_x, self.matches_shift_on_y) {
            (false, false) => 0,
            (true, true) if self.conventions_coincide => 1,
            (true, true) => 2,
            _ => 1,
        }
    }
}

/// Renames `x_{d+ik} → x_{i+1}`, `y_{d+ik} → y_{i+1}` in `block_term(n, k, d)`
/// and compares against both shift conventions of the reduced form.
pub fn rename_to_reduced(n: usize, k: usize, d: usize) -> Result<RenameReport> {
    let m = check_divisor(n, k)?;
    let block = block_term(n, k, d)?;
    let target = VarRegistry::biquadratic(m);
    let poly = block.poly.rename(&target, |v| {
        let (is_x, idx) = if v.index() < n { (true, v.index()) } else { (false, v.index() - n) };
        if idx % k != d - 1 {
            return None;
        }
        let t = idx / k;
        Some(if is_x { x_var(m, t) } else { y_var(m, t) })
    })?;
    let renamed = BiquadraticForm { n: m, poly };
    let on_x = cyclic_form(m, 1, ShiftConvention::OnX);
    let on_y = cyclic_form(m, 1, ShiftConvention::OnY);
    Ok(RenameReport {
        matches_shift_on_x: renamed == on_x,
        matches_shift_on_y: renamed == on_y,
        conventions_coincide: on_x == on_y,
        renamed,
    })
}
