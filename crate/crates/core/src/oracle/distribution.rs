use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Built-in laws for the base entries `ξ`: centered with `E|ξ|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseDistribution {
    /// `(N1 + i N2) / √2`; `m4 = 2`.
    ComplexGaussian,
    /// `e^{iφ}` with `φ` uniform on `[0, 2π)`; `m4 = 1`.
    Phase,
    /// Uniform on `{1, i, −1, −i}`; `m4 = 1`.
    Phase4,
    /// Uniform on `{−1, 1}`; `m4 = 1`.
    Rademacher,
    /// Real standard normal; `m4 = 3`.
    RealGaussian,
}

impl BaseDistribution {
    pub const ALL: [BaseDistribution; 5] = [
        BaseDistribution::ComplexGaussian,
        BaseDistribution::Phase,
        BaseDistribution::Phase4,
        BaseDistribution::Rademacher,
        BaseDistribution::RealGaussian,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BaseDistribution::ComplexGaussian => "complex-gaussian",
            BaseDistribution::Phase => "phase",
            BaseDistribution::Phase4 => "phase4",
            BaseDistribution::Rademacher => "rademacher",
            BaseDistribution::RealGaussian => "real-gaussian",
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, BaseDistribution::ComplexGaussian | BaseDistribution::Phase | BaseDistribution::Phase4)
    }

    /// `E[ξ^a · conj(ξ)^b]`.
    pub fn mixed_moment(&self, a: u32, b: u32) -> Complex64 {
        let v = match self {
            BaseDistribution::ComplexGaussian => {
                if a == b {
                    (1..=a).map(f64::from).product()
                } else {
                    0.0
                }
            }
            BaseDistribution::Phase => (a == b) as u8 as f64,
            BaseDistribution::Phase4 => ((a as i64 - b as i64).rem_euclid(4) == 0) as u8 as f64,
            BaseDistribution::Rademacher => (a + b).is_multiple_of(2) as u8 as f64,
            BaseDistribution::RealGaussian => {
                let q = a + b;
                if q % 2 == 1 {
                    0.0
                } else {
                    double_factorial(q.saturating_sub(1))
                }
            }
        };
        Complex64::new(v, 0.0)
    }

    /// `E|ξ|^q`.
    pub fn abs_moment(&self, q: u32) -> f64 {
        match self {
            BaseDistribution::Phase | BaseDistribution::Phase4 | BaseDistribution::Rademacher => 1.0,
            // |ξ|² ~ Exp(1), so E|ξ|^q = Γ(q/2 + 1)
            BaseDistribution::ComplexGaussian => {
                if q.is_multiple_of(2) {
                    (1..=q / 2).map(f64::from).product()
                } else {
                    PI.sqrt() * double_factorial(q) / 2f64.powi((q as i32 + 1) / 2)
                }
            }
            BaseDistribution::RealGaussian => {
                if q.is_multiple_of(2) {
                    double_factorial(q.saturating_sub(1))
                } else {
                    (2.0 / PI).sqrt() * double_factorial(q - 1)
                }
            }
        }
    }

    pub fn m4(&self) -> f64 {
        self.abs_moment(4)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        match self {
            BaseDistribution::ComplexGaussian => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
            }
            BaseDistribution::Phase => {
                let phi: f64 = rng.random::<f64>() * 2.0 * PI;
                Complex64::from_polar(1.0, phi)
            }
            BaseDistribution::Phase4 => match rng.random_range(0..4u8) {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            },
            BaseDistribution::Rademacher => Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0),
            BaseDistribution::RealGaussian => Complex64::new(rng.sample(StandardNormal), 0.0),
        }
    }
}

fn double_factorial(q: u32) -> f64 {
    let mut acc = 1.0;
    let mut j = q;
    while j > 1 {
        acc *= j as f64;
        j -= 2;
    }
    acc
}

impl fmt::Display for BaseDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaseDistribution {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "complex-gaussian" | "cgauss" | "gaussian" => Ok(BaseDistribution::ComplexGaussian),
            "phase" | "uniform-phase" => Ok(BaseDistribution::Phase),
            "phase4" | "qpsk" => Ok(BaseDistribution::Phase4),
            "rademacher" | "sign" => Ok(BaseDistribution::Rademacher),
            "real-gaussian" | "rgauss" => Ok(BaseDistribution::RealGaussian),
            other => Err(Error::UnknownDistribution(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn normalization_invariants() {
        for d in BaseDistribution::ALL {
            assert_eq!(d.mixed_moment(0, 0).re, 1.0, "{d}");
            assert_eq!(d.mixed_moment(1, 0).norm(), 0.0, "{d}");
            assert_eq!(d.mixed_moment(1, 1).re, 1.0, "{d}");
            assert_eq!(d.abs_moment(2), 1.0, "{d}");
            assert_eq!(d.abs_moment(4), d.mixed_moment(2, 2).re, "{d}");
            assert_eq!(d.mixed_moment(2, 2).im, 0.0);
        }
        let m4: Vec<f64> = BaseDistribution::ALL.iter().map(|d| d.m4()).collect();
        assert_eq!(m4, vec![2.0, 1.0, 1.0, 1.0, 3.0]);
    }

    #[test]
    fn odd_absolute_moments() {
        // E|N(0,1)| = sqrt(2/π); complex: Γ(3/2) = sqrt(π)/2
        approx::assert_relative_eq!(
            BaseDistribution::RealGaussian.abs_moment(1),
            (2.0 / PI).sqrt(),
            max_relative = 1e-15
        );
        approx::assert_relative_eq!(
            BaseDistribution::ComplexGaussian.abs_moment(1),
            PI.sqrt() / 2.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn parse_names() {
        for d in BaseDistribution::ALL {
            assert_eq!(d.name().parse::<BaseDistribution>().unwrap(), d);
        }
        assert!(matches!("cauchy".parse::<BaseDistribution>(), Err(Error::UnknownDistribution(_))));
    }

    #[test]
    fn sampled_moments_are_close() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in BaseDistribution::ALL {
            let draws: Vec<Complex64> = (0..200_000).map(|_| d.sample(&mut rng)).collect();
            let n = draws.len() as f64;
            let m2 = draws.iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
            let m4 = draws.iter().map(|z| z.norm_sqr().powi(2)).sum::<f64>() / n;
            assert!((m2 - 1.0).abs() < 0.02, "{d}: {m2}");
            assert!((m4 - d.m4()).abs() < 0.1 * d.m4(), "{d}: {m4}");
        }
    }
}
