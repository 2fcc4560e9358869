//! Multistart descent over products of unit spheres: numerical evidence
//! (never a proof) that a block-homogeneous polynomial is nonnegative.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{rational::to_f64, Polynomial, VarId};

use super::biquad::{x_var, y_var, BiquadraticForm};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ScanOptions {
    pub restarts: usize,
    pub tol: f64,
    pub seed: u64,
    pub max_iters: usize,
    /// Extra points evaluated after per-block normalisation.
    pub probes: Vec<Vec<f64>>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { restarts: 1000, tol: DEFAULT_TOL, seed: 0, max_iters: 500, probes: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonnegScan {
    pub min_found: f64,
    pub argmin: Vec<f64>,
    pub all_nonneg_evidence: bool,
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
    pub probe_values: Vec<f64>,
}

/// Dense-coefficient `f64` image of a polynomial, for fast value and gradient.
#[derive(Clone, Debug)]
pub struct CompiledPolynomial {
    nvars: usize,
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPolynomial {
    pub fn new(p: &Polynomial) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| (to_f64(c), m.powers().iter().map(|&(v, e)| (v.index(), e as i32)).collect()))
            .collect();
        Self { nvars: p.registry().len(), terms }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, powers)| c * powers.iter().map(|&(v, e)| x[v].powi(e)).product::<f64>())
            .sum()
    }

    pub fn value_and_gradient(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut total = 0.0;
        for (c, powers) in &self.terms {
            let factors: Vec<f64> = powers.iter().map(|&(v, e)| x[v].powi(e)).collect();
            total += c * factors.iter().product::<f64>();
            for (a, &(v, e)) in powers.iter().enumerate() {
                let others: f64 = factors.iter().enumerate().filter(|&(b, _)| b != a).map(|(_, f)| f).product();
                grad[v] += c * e as f64 * x[v].powi(e - 1) * others;
            }
        }
        total
    }
}

/// The `x` block and the `y` block of a biquadratic form of size `n`.
pub fn biquadratic_blocks(n: usize) -> Vec<Vec<VarId>> {
    vec![(0..n).map(|i| x_var(n, i)).collect(), (0..n).map(|i| y_var(n, i)).collect()]
}

fn check_blocks(p: &Polynomial, blocks: &[Vec<VarId>]) -> Result<Vec<Vec<usize>>> {
    let nvars = p.registry().len();
    let mut owner = vec![None; nvars];
    for (b, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::InvalidParameter("empty variable block".into()));
        }
        for v in block {
            if v.index() >= nvars || owner[v.index()].replace(b).is_some() {
                return Err(Error::InvalidParameter(format!("variable {} misplaced in blocks", v.index())));
            }
        }
    }
    for v in p.variables() {
        if owner[v.index()].is_none() {
            return Err(Error::InvalidParameter(format!("variable {} is in no block", p.registry().name(v))));
        }
    }
    let mut degrees: Vec<Option<u32>> = vec![None; blocks.len()];
    for (m, _) in p.terms() {
        let mut d = vec![0u32; blocks.len()];
        for &(v, e) in m.powers() {
            d[owner[v.index()].unwrap()] += e;
        }
        for (b, &db) in d.iter().enumerate() {
            if *degrees[b].get_or_insert(db) != db {
                return Err(Error::InvalidParameter("polynomial is not homogeneous in each block".into()));
            }
        }
    }
    Ok(blocks.iter().map(|b| b.iter().map(|v| v.index()).collect()).collect())
}

fn normalize(x: &mut [f64], blocks: &[Vec<usize>]) {
    for block in blocks {
        let norm = block.iter().map(|&v| x[v] * x[v]).sum::<f64>().sqrt();
        if norm > 0.0 {
            block.iter().for_each(|&v| x[v] /= norm);
        }
    }
}

fn descend(f: &CompiledPolynomial, blocks: &[Vec<usize>], mut x: Vec<f64>, max_iters: usize) -> (f64, Vec<f64>) {
    let mut grad = vec![0.0; x.len()];
    let mut trial = vec![0.0; x.len()];
    let mut step = 1.0;
    let mut fx = f.value_and_gradient(&x, &mut grad);
    for _ in 0..max_iters {
        for block in blocks {
            let radial: f64 = block.iter().map(|&v| grad[v] * x[v]).sum();
            block.iter().for_each(|&v| grad[v] -= radial * x[v]);
        }
        let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
        if gnorm2 < 1e-30 {
            break;
        }
        let mut t = step;
        let accepted = loop {
            for (i, slot) in trial.iter_mut().enumerate() {
                *slot = x[i] - t * grad[i];
            }
            normalize(&mut trial, blocks);
            let ft = f.value(&trial);
            if ft <= fx - 1e-4 * t * gnorm2 {
                break Some(ft);
            }
            t *= 0.5;
            if t < 1e-12 {
                break None;
            }
        };
        let Some(ft) = accepted else { break };
        let decrease = fx - ft;
        std::mem::swap(&mut x, &mut trial);
        fx = f.value_and_gradient(&x, &mut grad);
        step = (t * 2.0).min(16.0);
        if decrease <= 1e-16 * fx.abs().max(1e-300) {
            break;
        }
    }
    (fx, x)
}

/// Restart `i` starts from a Gaussian point drawn with seed `seed + i`;
/// restarts run in parallel and the minimum is reduced on `(value, index)`.
pub fn nonnegativity_scan(p: &Polynomial, blocks: &[Vec<VarId>], opts: &ScanOptions) -> Result<NonnegScan> {
    if opts.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    let blocks = check_blocks(p, blocks)?;
    let f = CompiledPolynomial::new(p);
    let nvars = f.nvars;
    let used: Vec<usize> = blocks.iter().flatten().copied().collect();

    let best = (0..opts.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
            let mut x = vec![0.0; nvars];
            for &v in &used {
                x[v] = StandardNormal.sample(&mut rng);
            }
            normalize(&mut x, &blocks);
            let (val, x) = descend(&f, &blocks, x, opts.max_iters);
            (val, i, x)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("at least one restart");

    let mut probe_values = Vec::with_capacity(opts.probes.len());
    let (mut min_found, mut argmin) = (best.0, best.2);
    for probe in &opts.probes {
        if probe.len() != nvars {
            return Err(Error::DimensionMismatch { expected: nvars, found: probe.len() });
        }
        let mut x = probe.clone();
        normalize(&mut x, &blocks);
        let v = f.value(&x);
        probe_values.push(v);
        if v < min_found {
            min_found = v;
            argmin = x;
        }
    }
    Ok(NonnegScan {
        min_found,
        argmin,
        all_nonneg_evidence: min_found >= -opts.tol,
        restarts: opts.restarts,
        seed: opts.seed,
        tol: opts.tol,
        max_iters: opts.max_iters,
        probe_values,
    })
}

pub fn scan_biquadratic(form: &BiquadraticForm, opts: &ScanOptions) -> Result<NonnegScan> {
    nonnegativity_scan(form.polynomial(), &biquadratic_blocks(form.dim()), opts)
}
