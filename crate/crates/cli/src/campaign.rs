use std::path::Path;

use serde::Deserialize;
use tensor_spectra::simulator::HistogramConfig;
use tensor_spectra::{BaseDistribution, ExperimentConfig, Scheme, TauRule};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

/// Simulation campaign file: one experiment per listed `n`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Campaign {
    n: OneOrMany,
    #[serde(default)]
    k: Option<usize>,
    #[serde(default)]
    m: Option<usize>,
    pub p_max: usize,
    pub dist: BaseDistribution,
    #[serde(default)]
    pub tau: TauRule,
    pub replicas: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub scheme: Option<Scheme>,
    #[serde(default)]
    pub histogram: Option<HistogramConfig>,
}

impl Campaign {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::parse(path, e))
    }

    pub fn ns(&self) -> Vec<usize> {
        match &self.n {
            OneOrMany::One(n) => vec![*n],
            OneOrMany::Many(v) => v.clone(),
        }
    }

    pub fn experiments(&self) -> CliResult<Vec<ExperimentConfig>> {
        let ns = self.ns();
        if ns.is_empty() {
            return Err(CliError::Usage("campaign lists no values of n".into()));
        }
        if let Some(s) = self.scheme {
            Scheme::new(s.c, s.d)?;
        }
        ns.into_iter()
            .map(|n| {
                let cfg = ExperimentConfig {
                    n,
                    k: self.k,
                    m: self.m,
                    p_max: self.p_max,
                    dist: self.dist,
                    tau: self.tau.clone(),
                    replicas: self.replicas,
                    seed: self.seed,
                    scheme: self.scheme,
                    histogram: self.histogram,
                };
                cfg.resolve()?;
                Ok(cfg)
            })
            .collect()
    }
}
