//! Numerical search for product vectors `|ξ, η⟩` with `⟨ξ, η| W |ξ, η⟩ = 0`
//! and the rank of their span.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::maps::BlockMatrix;
use crate::poly::rational::{format_rational, to_f64};

mod polish;
pub use polish::newton_polish;

pub type C64 = Complex<f64>;

/// Unit vectors `ξ`, `η`, each with its largest entry made real and positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProductVectorRepr", into = "ProductVectorRepr")]
pub struct ProductVector {
    xi: Vec<C64>,
    eta: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct ProductVectorRepr {
    xi: Vec<[f64; 2]>,
    eta: Vec<[f64; 2]>,
}

impl TryFrom<ProductVectorRepr> for ProductVector {
    type Error = Error;
    fn try_from(r: ProductVectorRepr) -> Result<Self> {
        let c = |v: Vec<[f64; 2]>| v.into_iter().map(|[re, im]| C64::new(re, im)).collect::<Vec<_>>();
        let (xi, eta) = (c(r.xi), c(r.eta));
        let unit = |v: &[C64]| (v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() - 1.0).abs() <= 1e-12;
        if xi.len() != eta.len() || !unit(&xi) || !unit(&eta) {
            return Err(Error::InvalidParameter("product vector factors must be unit vectors of equal length".into()));
        }
        Ok(ProductVector { xi, eta })
    }
}

impl From<ProductVector> for ProductVectorRepr {
    fn from(v: ProductVector) -> Self {
        let c = |v: Vec<C64>| v.into_iter().map(|z| [z.re, z.im]).collect();
        Self { xi: c(v.xi), eta: c(v.eta) }
    }
}

fn normalized(mut v: Vec<C64>) -> Result<Vec<C64>> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidParameter("product vector factor must be nonzero and finite".into()));
    }
    let pivot = v.iter().copied().fold(C64::new(0.0, 0.0), |best, z| if z.norm() > best.norm() + 1e-12 { z } else { best });
    let phase = pivot.conj() / pivot.norm();
    v.iter_mut().for_each(|z| *z = *z * phase / norm);
    Ok(v)
}

impl ProductVector {
    pub fn new(xi: Vec<C64>, eta: Vec<C64>) -> Result<Self> {
        if xi.len() != eta.len() {
            return Err(Error::DimensionMismatch { expected: xi.len(), found: eta.len() });
        }
        Ok(Self { xi: normalized(xi)?, eta: normalized(eta)? })
    }

    pub fn real(xi: &[f64], eta: &[f64]) -> Result<Self> {
        let c = |v: &[f64]| v.iter().map(|&a| C64::new(a, 0.0)).collect();
        Self::new(c(xi), c(eta))
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    pub fn xi(&self) -> &[C64] {
        &self.xi
    }

    pub fn eta(&self) -> &[C64] {
        &self.eta
    }

    /// `ξ ⊗ η`, index `i*n + k`.
    pub fn tensor(&self) -> Vec<C64> {
        self.xi.iter().flat_map(|a| self.eta.iter().map(move |b| a * b)).collect()
    }

    fn random(n: usize, rng: &mut ChaCha8Rng, complex: bool) -> Self {
        let mut draw = || {
            (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = if complex { StandardNormal.sample(rng) } else { 0.0 };
                    C64::new(re, im)
                })
                .collect::<Vec<_>>()
        };
        let xi = draw();
        let eta = draw();
        Self::new(xi, eta).expect("Gaussian draw is nonzero")
    }
}

/// A witness in floating point, with the fingerprint of its exact entries.
#[derive(Clone, Debug)]
pub struct WitnessOperator {
    n: usize,
    data: DMatrix<f64>,
    fingerprint: String,
}

impl WitnessOperator {
    pub fn new(w: &BlockMatrix) -> Self {
        let n = w.block_dim();
        let m = w.matrix();
        let mut hasher = Sha256::new();
        hasher.update(n.to_le_bytes());
        for row in m.rows() {
            for e in row {
                hasher.update(format_rational(e).as_bytes());
                hasher.update(b",");
            }
        }
        Self {
            n,
            data: DMatrix::from_fn(n * n, n * n, |r, c| to_f64(m.get(r, c))),
            fingerprint: hex::encode(hasher.finalize()),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub(crate) fn at(&self, i: usize, k: usize, j: usize, l: usize) -> f64 {
        self.data[(i * self.n + k, j * self.n + l)]
    }

    pub fn expectation(&self, v: &ProductVector) -> Result<f64> {
        if v.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: v.dim() });
        }
        let t = DVector::from_vec(v.tensor());
        let wt = self.data.map(|a| C64::new(a, 0.0)) * &t;
        Ok(t.dotc(&wt).re)
    }

    /// `M[k,l] = Σ_ij conj(ξ_i) ξ_j W[(i,k),(j,l)]`.
    pub(crate) fn contract_first(&self, xi: &[C64]) -> DMatrix<C64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |k, l| {
            let mut s = C64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    s += xi[i].conj() * xi[j] * self.at(i, k, j, l);
                }
            }
            s
        })
    }

    /// `N[i,j] = Σ_kl conj(η_k) η_l W[(i,k),(j,l)]`.
    pub(crate) fn contract_second(&self, eta: &[C64]) -> DMatrix<C64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |i, j| {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..n {
                for l in 0..n {
                    s += eta[k].conj() * eta[l] * self.at(i, k, j, l);
                }
            }
            s
        })
    }
}

pub fn product_expectation(w: &BlockMatrix, v: &ProductVector) -> Result<f64> {
    WitnessOperator::new(w).expectation(v)
}

/// Smallest eigenvalue and a unit eigenvector of a Hermitian matrix.
fn min_eigen(m: DMatrix<C64>) -> (f64, Vec<C64>) {
    let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let idx = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap();
    (eig.eigenvalues[idx], eig.eigenvectors.column(idx).iter().copied().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeesawResult {
    pub vector: ProductVector,
    pub value: f64,
    pub iterations: usize,
    /// Objective after each half-step.
    pub history: Vec<f64>,
}

impl SeesawResult {
    /// Nonincreasing up to the given slack.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.history.windows(2).all(|w| w[1] <= w[0] + slack)
    }
}

/// Alternating exact minimisation over `η` (fixed `ξ`) and `ξ` (fixed `η`).
pub fn seesaw_from(w: &WitnessOperator, start: ProductVector, max_iters: usize, tol: f64) -> Result<SeesawResult> {
    if max_iters == 0 {
        return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
    }
    let mut v = start;
    let mut history = vec![w.expectation(&v)?];
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        let prev = *history.last().unwrap();
        let (_, eta) = min_eigen(w.contract_first(&v.xi));
        v = ProductVector::new(v.xi, eta)?;
        history.push(w.expectation(&v)?);
        let (_, xi) = min_eigen(w.contract_second(&v.eta));
        v = ProductVector::new(xi, v.eta)?;
        let value = w.expectation(&v)?;
        history.push(value);
        if (prev - value).abs() < tol {
            break;
        }
    }
    let value = *history.last().unwrap();
    Ok(SeesawResult { vector: v, value, iterations, history })
}

/// Seesaw from the random complex start drawn with `seed`.
pub fn seesaw_minimize(w: &BlockMatrix, seed: u64, max_iters: usize, tol: f64) -> Result<SeesawResult> {
    let op = WitnessOperator::new(w);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = ProductVector::random(op.dim(), &mut rng, true);
    seesaw_from(&op, start, max_iters, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanParams {
    pub restarts: usize,
    pub seed: u64,
    pub zero_tol: f64,
    pub rank_tol: f64,
    pub max_iters: usize,
    pub converge_tol: f64,
    /// Draw complex starting points (real ones otherwise).
    pub complex: bool,
    /// Newton steps on the product of spheres after the seesaw stalls.
    pub polish_steps: usize,
}

impl Default for ScanParams {
    fn default() -> Self {
        Self {
            restarts: 10_000,
            seed: 0,
            zero_tol: 1e-9,
            rank_tol: 1e-6,
            max_iters: 500,
            converge_tol: 1e-15,
            complex: true,
            polish_steps: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub vectors: Vec<ProductVector>,
    pub values: Vec<f64>,
    pub zero_tol: f64,
    pub witness_fingerprint: String,
}

/// Restart `i` draws its start from seed `seed + i`; results are kept in
/// restart order.
pub fn collect_zero_set(w: &WitnessOperator, params: &ScanParams) -> Result<ZeroSet> {
    if params.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    let runs = (0..params.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(i as u64));
            let start = ProductVector::random(w.dim(), &mut rng, params.complex);
            let r = seesaw_from(w, start, params.max_iters, params.converge_tol)?;
            Ok(if params.polish_steps > 0 { newton_polish(w, &r.vector, params.polish_steps)? } else { (r.vector, r.value) })
        })
        .collect::<Result<Vec<_>>>()?;
    let (vectors, values) = runs.into_iter().filter(|(_, value)| value.abs() <= params.zero_tol).unzip();
    Ok(ZeroSet { vectors, values, zero_tol: params.zero_tol, witness_fingerprint: w.fingerprint.clone() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanReport {
    pub n: usize,
    pub use_partial_transpose: bool,
    pub params: ScanParams,
    pub witness_fingerprint: String,
    pub zero_count: usize,
    /// Zero vectors left after merging tensors that agree on a 1e-6 grid.
    pub distinct_count: usize,
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub has_spanning: bool,
    pub sample: Vec<ProductVector>,
}

fn grid_key(t: &[C64]) -> Vec<i64> {
    t.iter().flat_map(|z| [(z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64]).collect()
}

pub const SAMPLE_SIZE: usize = 8;

pub fn span_report(w: &BlockMatrix, params: &ScanParams, use_partial_transpose: bool) -> Result<SpanReport> {
    let target = if use_partial_transpose { w.partial_transpose() } else { w.clone() };
    let op = WitnessOperator::new(&target);
    let zeros = collect_zero_set(&op, params)?;
    let n = op.dim();
    let mut seen = HashSet::new();
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for v in &zeros.vectors {
        let t = v.tensor();
        if seen.insert(grid_key(&t)) {
            rows.push(t);
        }
    }
    let singular_values = if rows.is_empty() {
        Vec::new()
    } else {
        let a = DMatrix::from_fn(rows.len(), n * n, |r, c| rows[r][c]);
        let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    };
    let rank = match singular_values.first() {
        Some(&max) if max > 0.0 => singular_values.iter().filter(|&&s| s > params.rank_tol * max).count(),
        _ => 0,
    };
    Ok(SpanReport {
        n,
        use_partial_transpose,
        params: params.clone(),
        witness_fingerprint: zeros.witness_fingerprint,
        zero_count: zeros.vectors.len(),
        distinct_count: rows.len(),
        singular_values,
        rank,
        has_spanning: rank == n * n,
        sample: zeros.vectors.into_iter().take(SAMPLE_SIZE).collect(),
    })
}
