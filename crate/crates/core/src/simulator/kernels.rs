use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::HistogramConfig;
use crate::error::{Error, Result};
use crate::oracle::BaseDistribution;

/// Sampled factors `y_α^l ∈ C^n`, stored contiguously as `[α][l][i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseVectors {
    n: usize,
    k: usize,
    m: usize,
    data: Vec<Complex64>,
}

impl BaseVectors {
    pub fn from_fn(n: usize, k: usize, m: usize, mut f: impl FnMut(usize, usize) -> Vec<Complex64>) -> Result<Self> {
        let mut data = Vec::with_capacity(n * k * m);
        for a in 0..m {
            for l in 0..k {
                let v = f(a, l);
                if v.len() != n {
                    return Err(Error::Invalid(format!("factor ({a}, {l}) has length {} instead of {n}", v.len())));
                }
                data.extend(v);
            }
        }
        Ok(BaseVectors { n, k, m, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn factor(&self, alpha: usize, l: usize) -> &[Complex64] {
        let start = (alpha * self.k + l) * self.n;
        &self.data[start..start + self.n]
    }
}

fn stream_key(seed: u64, replica: u64, alpha: u64, l: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    for (chunk, word) in key.chunks_exact_mut(8).zip([seed, replica, alpha, l]) {
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    key
}

/// Draws `y_α^l = ξ/√n` for every column and slot. Each factor has its own
/// generator keyed by `(seed, replica, α, l)`, so a factor never depends on
/// the order in which others are drawn.
pub fn sample_base_vectors(
    n: usize,
    k: usize,
    m: usize,
    dist: &BaseDistribution,
    seed: u64,
    replica: u64,
) -> BaseVectors {
    let scale = 1.0 / (n as f64).sqrt();
    let mut data = Vec::with_capacity(n * k * m);
    for a in 0..m {
        for l in 0..k {
            let mut rng = ChaCha8Rng::from_seed(stream_key(seed, replica, a as u64, l as u64));
            data.extend((0..n).map(|_| dist.sample(&mut rng) * scale));
        }
    }
    BaseVectors { n, k, m, data }
}

/// `G[α][β] = Π_l ⟨y_α^l, y_β^l⟩`, conjugate-linear in the first slot.
pub fn gram_matrix(v: &BaseVectors) -> DMatrix<Complex64> {
    let mut g = DMatrix::from_element(v.m, v.m, Complex64::new(1.0, 0.0));
    for l in 0..v.k {
        let y = DMatrix::from_fn(v.n, v.m, |i, a| v.factor(a, l)[i]);
        g.component_mul_assign(&y.ad_mul(&y));
    }
    g
}

/// `(1/n^k) Tr((T G)^p)` for `p = 1..=p_max` with `T = diag(τ)`.
pub fn trace_moments_from_gram(
    g: &DMatrix<Complex64>,
    taus: &[f64],
    p_max: usize,
    n: usize,
    k: usize,
) -> Result<Vec<f64>> {
    let m = g.nrows();
    if g.ncols() != m {
        return Err(Error::Invalid("Gram matrix must be square".into()));
    }
    if taus.len() != m {
        return Err(Error::Invalid(format!("{} tau values for m = {m}", taus.len())));
    }
    let mut a = g.clone();
    for (mut row, &t) in a.row_iter_mut().zip(taus) {
        row *= Complex64::new(t, 0.0);
    }
    let half = p_max.div_ceil(2);
    let mut powers = vec![a.clone()];
    for _ in 1..half {
        let next = powers.last().unwrap() * &a;
        powers.push(next);
    }
    // |Tr (TG)^p| ≤ (Σ |τ_α| G_αα)^p bounds the size of each trace
    let reference: f64 = taus.iter().zip(g.diagonal().iter()).map(|(t, d)| t.abs() * d.re).sum();
    let nk = (n as f64).powi(k as i32);
    (1..=p_max)
        .map(|p| {
            let hi = p.div_ceil(2);
            let lo = p - hi;
            let tr = if lo == 0 {
                powers[hi - 1].trace()
            } else {
                powers[hi - 1].component_mul(&powers[lo - 1].transpose()).sum()
            };
            let scale = reference.powi(p as i32).max(tr.re.abs()).max(f64::MIN_POSITIVE);
            if tr.im.abs() > 1e-8 * scale {
                return Err(Error::Numerical(format!(
                    "trace of order {p} has imaginary residue {:e} against {:e}",
                    tr.im, scale
                )));
            }
            Ok(tr.re / nk)
        })
        .collect()
}

/// Eigenvalue distribution of `M` on fixed bins. Masses are fractions of the
/// `n^k` eigenvalues of `M`; the `(n^k − m)⁺` structural zeros are reported
/// separately and not binned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub overflow: u64,
    pub dimension: f64,
    pub zero_mass: f64,
    pub samples: u64,
    pub min_eigenvalue: f64,
}

impl Histogram {
    pub fn empty(cfg: &HistogramConfig, dimension: f64, zero_mass: f64) -> Self {
        let width = cfg.upper / cfg.bins as f64;
        Histogram {
            edges: (0..=cfg.bins).map(|j| j as f64 * width).collect(),
            counts: vec![0; cfg.bins],
            overflow: 0,
            dimension,
            zero_mass,
            samples: 0,
            min_eigenvalue: f64::INFINITY,
        }
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.overflow += other.overflow;
        self.samples += other.samples;
        self.min_eigenvalue = self.min_eigenvalue.min(other.min_eigenvalue);
    }

    /// Mass of each bin, averaged over the merged samples.
    pub fn masses(&self) -> Vec<f64> {
        let denom = self.dimension * self.samples.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / denom).collect()
    }

    /// Mass of nonzero eigenvalues falling in bins fully inside `[lo, hi]`.
    pub fn mass_between(&self, lo: f64, hi: f64) -> f64 {
        self.masses()
            .iter()
            .enumerate()
            .filter(|(j, _)| self.edges[*j] >= lo - 1e-12 && self.edges[j + 1] <= hi + 1e-12)
            .map(|(_, w)| w)
            .sum()
    }
}

/// Histogram of the nonzero spectrum of `M` through `T^{1/2} G T^{1/2}`.
pub fn eigen_histogram(
    g: &DMatrix<Complex64>,
    taus: &[f64],
    cfg: &HistogramConfig,
    n: usize,
    k: usize,
) -> Result<Histogram> {
    let m = g.nrows();
    if taus.len() != m {
        return Err(Error::Invalid(format!("{} tau values for m = {m}", taus.len())));
    }
    if let Some(t) = taus.iter().find(|t| **t <= 0.0) {
        return Err(Error::Unsupported(format!("eigenvalue histogram needs tau > 0, found {t}")));
    }
    if cfg.bins == 0 || cfg.upper.is_nan() || cfg.upper <= 0.0 {
        return Err(Error::Invalid("histogram needs bins >= 1 and a positive upper edge".into()));
    }
    let roots: Vec<f64> = taus.iter().map(|t| t.sqrt()).collect();
    let h = DMatrix::from_fn(m, m, |a, b| g[(a, b)] * (roots[a] * roots[b]));
    let mut eig = SymmetricEigen::new(h).eigenvalues.as_slice().to_vec();
    eig.sort_by(|a, b| b.total_cmp(a));
    let dimension = (n as f64).powi(k as i32);
    let nonzero = (m as f64).min(dimension) as usize;
    let norm = eig.first().copied().unwrap_or(0.0).abs().max(1.0);
    let min_eig = eig.last().copied().unwrap_or(0.0);
    if min_eig < -1e-9 * norm {
        return Err(Error::Numerical(format!("negative eigenvalue {min_eig:e} in a PSD spectrum")));
    }
    let zero_mass = ((dimension - m as f64) / dimension).max(0.0);
    let mut hist = Histogram::empty(cfg, dimension, zero_mass);
    let width = cfg.upper / cfg.bins as f64;
    for &lam in &eig[..nonzero] {
        let lam = lam.max(0.0);
        if lam > cfg.upper {
            hist.overflow += 1;
        } else {
            let j = ((lam / width) as usize).min(cfg.bins - 1);
            hist.counts[j] += 1;
        }
    }
    hist.samples = 1;
    hist.min_eigenvalue = min_eig;
    Ok(hist)
}
