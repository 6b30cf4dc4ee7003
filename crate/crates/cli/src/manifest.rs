use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use tensor_spectra::simulator::ResolvedSizes;

pub const SCHEMA_VERSION: u32 = 1;

/// Provenance block attached to every artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub tool_version: String,
    pub config_path: Option<String>,
    pub output: Option<String>,
    /// Seconds since the Unix epoch at start.
    pub started_at: u64,
    pub wall_seconds: f64,
    pub seed: Option<u64>,
    #[serde(default)]
    pub resolved: Vec<ResolvedSizes>,
}

pub struct ManifestClock {
    manifest: RunManifest,
    start: Instant,
}

impl ManifestClock {
    pub fn start(subcommand: &str) -> Self {
        let started_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        ManifestClock {
            manifest: RunManifest {
                subcommand: subcommand.to_string(),
                tool_version: tensor_spectra::VERSION.to_string(),
                config_path: None,
                output: None,
                started_at,
                wall_seconds: 0.0,
                seed: None,
                resolved: Vec::new(),
            },
            start: Instant::now(),
        }
    }

    pub fn config(mut self, path: &Path) -> Self {
        self.manifest.config_path = Some(path.display().to_string());
        self
    }

    pub fn output(mut self, path: Option<&Path>) -> Self {
        self.manifest.output = path.map(|p| p.display().to_string());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.manifest.seed = Some(seed);
        self
    }

    pub fn push_resolved(&mut self, sizes: ResolvedSizes) {
        self.manifest.resolved.push(sizes);
    }

    pub fn finish(&self) -> RunManifest {
        RunManifest { wall_seconds: self.start.elapsed().as_secs_f64(), ..self.manifest.clone() }
    }
}

impl RunManifest {
    /// `# key: value` lines for CSV headers.
    pub fn comment_lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("# tool: tensor-spectra {}", self.tool_version),
            format!("# subcommand: {}", self.subcommand),
            format!("# schema_version: {SCHEMA_VERSION}"),
            format!("# started_at: {}", self.started_at),
            format!("# wall_seconds: {:.3}", self.wall_seconds),
        ];
        if let Some(c) = &self.config_path {
            out.push(format!("# config: {c}"));
        }
        if let Some(o) = &self.output {
            out.push(format!("# output: {o}"));
        }
        if let Some(s) = self.seed {
            out.push(format!("# seed: {s}"));
        }
        for r in &self.resolved {
            out.push(format!("# resolved: n={} k={} m={} k/n={} m/n^k={}", r.n, r.k, r.m, r.k_over_n, r.m_over_nk));
        }
        out
    }
}
