//! Riemannian Newton refinement of a product vector on `S(ξ) × S(η)`.
//!
//! The seesaw stalls near zeros where the objective is flat to fourth
//! order; Newton still contracts there at a fixed linear rate.

use nalgebra::{DMatrix, DVector};

use super::{ProductVector, WitnessOperator, C64};
use crate::error::Result;

/// Real coordinates `(Re ξ, Im ξ, Re η, Im η)`.
fn to_real(v: &ProductVector) -> DVector<f64> {
    let n = v.dim();
    DVector::from_fn(4 * n, |r, _| {
        let (src, idx) = if r < 2 * n { (v.xi(), r) } else { (v.eta(), r - 2 * n) };
        if idx < n { src[idx].re } else { src[idx - n].im }
    })
}

fn from_real(z: &DVector<f64>, n: usize) -> (Vec<C64>, Vec<C64>) {
    let xi = (0..n).map(|i| C64::new(z[i], z[n + i])).collect();
    let eta = (0..n).map(|i| C64::new(z[2 * n + i], z[3 * n + i])).collect();
    (xi, eta)
}

fn value(w: &WitnessOperator, xi: &[C64], eta: &[C64]) -> f64 {
    let m = w.contract_first(xi);
    let eta_v = DVector::from_column_slice(eta);
    eta_v.dotc(&(m * &eta_v)).re
}

/// Writes `2 [[R, −S], [S, R]]` for `K = R + iS` at `(offset, offset)`.
fn put_hermitian_block(h: &mut DMatrix<f64>, k: &DMatrix<C64>, offset: usize) {
    let n = k.nrows();
    for a in 0..n {
        for b in 0..n {
            let z = k[(a, b)] * 2.0;
            h[(offset + a, offset + b)] = z.re;
            h[(offset + a, offset + n + b)] = -z.im;
            h[(offset + n + a, offset + b)] = z.im;
            h[(offset + n + a, offset + n + b)] = z.re;
        }
    }
}

/// Objective, gradient and Hessian in real coordinates.
pub(crate) fn derivatives(w: &WitnessOperator, xi: &[C64], eta: &[C64]) -> (f64, DVector<f64>, DMatrix<f64>) {
    let n = xi.len();
    let m_xi = w.contract_first(xi);
    let n_eta = w.contract_second(eta);
    let xi_v = DVector::from_column_slice(xi);
    let eta_v = DVector::from_column_slice(eta);
    let g_xi = &n_eta * &xi_v * C64::new(2.0, 0.0);
    let g_eta = &m_xi * &eta_v * C64::new(2.0, 0.0);
    let f = eta_v.dotc(&(&m_xi * &eta_v)).re;

    let mut g = DVector::zeros(4 * n);
    for i in 0..n {
        g[i] = g_xi[i].re;
        g[n + i] = g_xi[i].im;
        g[2 * n + i] = g_eta[i].re;
        g[3 * n + i] = g_eta[i].im;
    }

    let mut h = DMatrix::zeros(4 * n, 4 * n);
    put_hermitian_block(&mut h, &n_eta, 0);
    put_hermitian_block(&mut h, &m_xi, 2 * n);
    // g_ξ,i = 2 Σ_kl conj(η_k) η_l K_i[k,l] with K_i[k,l] = Σ_j W[(i,k),(j,l)] ξ_j
    let i_unit = C64::new(0.0, 1.0);
    for i in 0..n {
        let k_i = DMatrix::from_fn(n, n, |k, l| (0..n).map(|j| xi[j] * w.at(i, k, j, l)).sum::<C64>());
        let k_eta = &k_i * &eta_v;
        let kt_eta_bar = k_i.transpose() * eta_v.map(|z| z.conj());
        for m in 0..n {
            let d_c = (k_eta[m] + kt_eta_bar[m]) * 2.0;
            let d_d = (-i_unit * k_eta[m] + i_unit * kt_eta_bar[m]) * 2.0;
            for (row, part) in [(i, 0), (n + i, 1)] {
                let pick = |z: C64| if part == 0 { z.re } else { z.im };
                h[(row, 2 * n + m)] = pick(d_c);
                h[(row, 3 * n + m)] = pick(d_d);
                h[(2 * n + m, row)] = pick(d_c);
                h[(3 * n + m, row)] = pick(d_d);
            }
        }
    }
    (f, g, h)
}

/// Up to `steps` damped Newton steps; returns the refined vector and its value.
pub fn newton_polish(w: &WitnessOperator, start: &ProductVector, steps: usize) -> Result<(ProductVector, f64)> {
    let n = start.dim();
    let blocks = [0..2 * n, 2 * n..4 * n];
    let mut z = to_real(start);
    let (xi, eta) = from_real(&z, n);
    let mut f = value(w, &xi, &eta);
    for _ in 0..steps {
        if f <= 0.0 {
            break;
        }
        let (xi, eta) = from_real(&z, n);
        let (_, g, h) = derivatives(w, &xi, &eta);
        let mut shift = DMatrix::<f64>::zeros(4 * n, 4 * n);
        // normals and phase rotations of each factor are exact null directions
        let mut null = Vec::with_capacity(4);
        for b in &blocks {
            let zb = z.rows(b.start, b.len()).into_owned();
            let mu = zb.dot(&g.rows(b.start, b.len()));
            for r in b.clone() {
                shift[(r, r)] = mu;
            }
            let mut normal = DVector::zeros(4 * n);
            normal.rows_mut(b.start, b.len()).copy_from(&zb);
            let mut gauge = DVector::zeros(4 * n);
            for i in 0..n {
                gauge[b.start + i] = -zb[n + i];
                gauge[b.start + n + i] = zb[i];
            }
            null.push(normal);
            null.push(gauge);
        }
        let mut p = DMatrix::<f64>::identity(4 * n, 4 * n);
        for u in &null {
            p -= u * u.transpose();
        }
        let grad = &p * &g;
        let hess = &p * (h - shift) * &p;
        let eig = hess.symmetric_eigen();
        let lmax = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
        let thr = 1e-18 * lmax.max(1e-300);
        let mut step = DVector::zeros(4 * n);
        for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
            let u = eig.eigenvectors.column(idx);
            // skip what is left of the null space after rounding
            if lambda > thr && null.iter().all(|v| v.dot(&u).abs() < 0.5) {
                let c = (u.dot(&grad) / lambda).clamp(-0.1, 0.1);
                step -= u * c;
            }
        }
        if !(step.norm() > 0.0 && step.norm().is_finite()) {
            break;
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..20 {
            let mut trial = &z + &step * t;
            for b in &blocks {
                let len = trial.rows(b.start, b.len()).norm();
                trial.rows_mut(b.start, b.len()).scale_mut(1.0 / len);
            }
            let (xi, eta) = from_real(&trial, n);
            let ft = value(w, &xi, &eta);
            if ft < f {
                accepted = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some((trial, ft)) => {
                z = trial;
                f = ft;
            }
            None => break,
        }
    }
    let (xi, eta) = from_real(&z, n);
    let v = ProductVector::new(xi, eta)?;
    let value = w.expectation(&v)?;
    Ok((v, value))
}
