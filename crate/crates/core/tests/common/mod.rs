//! Dense reference constructions shared by integration tests. They build the
//! `n^k`-dimensional objects explicitly and are only usable at tiny sizes.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use tensor_spectra::simulator::BaseVectors;

pub fn kron(factors: &[&[Complex64]]) -> Vec<Complex64> {
    factors
        .iter()
        .fold(vec![Complex64::new(1.0, 0.0)], |acc, f| acc.iter().flat_map(|a| f.iter().map(move |b| a * b)).collect())
}

/// `n^k × m` matrix whose columns are the tensor products `Y_α`.
pub fn tensor_columns(v: &BaseVectors) -> DMatrix<Complex64> {
    let cols: Vec<Vec<Complex64>> = (0..v.m())
        .map(|a| {
            let factors: Vec<&[Complex64]> = (0..v.k()).map(|l| v.factor(a, l)).collect();
            kron(&factors)
        })
        .collect();
    DMatrix::from_fn(cols[0].len(), v.m(), |i, a| cols[a][i])
}

/// `M = Σ_α τ_α Y_α Y_α*`.
pub fn dense_m(v: &BaseVectors, taus: &[f64]) -> DMatrix<Complex64> {
    let y = tensor_columns(v);
    let t =
        DMatrix::from_fn(
            v.m(),
            v.m(),
            |a, b| {
                if a == b {
                    Complex64::new(taus[a], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            },
        );
    &y * t * y.adjoint()
}

/// `(1/n^k) Tr M^p` for `p = 1..=p_max` by repeated dense products.
pub fn dense_trace_moments(v: &BaseVectors, taus: &[f64], p_max: usize) -> Vec<f64> {
    let m = dense_m(v, taus);
    let dim = m.nrows() as f64;
    let mut pow = m.clone();
    let mut out = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        if p > 1 {
            pow = &pow * &m;
        }
        out.push(pow.trace().re / dim);
    }
    out
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}
