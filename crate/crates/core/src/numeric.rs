//! Small integer helpers and compensated summation.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::One;

/// `C(n, k)`, zero when `k > n` (so `C(a, 2) = 0` for `a < 2`).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc as u64
}

/// Exact binomial coefficient for arbitrary sizes.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

/// Narayana number `N(p, s) = (1/p) C(p, s-1) C(p, s)`.
pub fn narayana(p: u64, s: u64) -> BigUint {
    if p == 0 || s == 0 || s > p {
        return BigUint::default();
    }
    binomial_big(p, s - 1) * binomial_big(p, s) / p
}

/// Catalan number `C(2p, p) / (p + 1)`.
pub fn catalan(p: u64) -> BigUint {
    binomial_big(2 * p, p) / (p + 1)
}

/// Stirling number of the second kind, `S(p, s)`.
pub fn stirling2(p: u64, s: u64) -> u64 {
    let mut row = vec![0u64; s as usize + 1];
    row[0] = 1;
    for i in 1..=p {
        for j in (1..=s.min(i) as usize).rev() {
            row[j] = j as u64 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[s as usize]
}

/// Falling factorial `n (n-1) ... (n-r+1)` as a float; zero when `r > n`.
pub fn falling_factorial(n: u64, r: u64) -> f64 {
    if r > n {
        return 0.0;
    }
    (0..r).map(|j| (n - j) as f64).product()
}

/// Neumaier-compensated accumulator for real values.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated accumulator for complex values (components summed separately).
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl CompensatedComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl std::iter::FromIterator<Complex64> for CompensatedComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = Self::default();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(1, 2), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial_big(30, 15), BigUint::from(155_117_520u64));
    }

    #[test]
    fn narayana_rows_sum_to_catalan() {
        for p in 1..=12u64 {
            let row: BigUint = (1..=p).map(|s| narayana(p, s)).sum();
            assert_eq!(row, catalan(p), "p = {p}");
        }
        let row4: Vec<u64> = (1..=4).map(|s| narayana(4, s).try_into().unwrap()).collect();
        assert_eq!(row4, vec![1, 6, 6, 1]);
    }

    #[test]
    fn stirling_matches_bell_numbers() {
        let bell: Vec<u64> = (1..=7).map(|p| (1..=p).map(|s| stirling2(p, s)).sum()).collect();
        assert_eq!(bell, vec![1, 2, 5, 15, 52, 203, 877]);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::default();
        acc.add(1e16);
        for _ in 0..10 {
            acc.add(1.0);
        }
        acc.add(-1e16);
        assert_eq!(acc.value(), 10.0);
    }
}
