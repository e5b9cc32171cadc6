//! `papertrail.toml`: defaults for every stage, overridable per run by CLI flags.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compositional::{PeriodWindows, ZeroReplacement};
use crate::hclust::Linkage;
use crate::par::Execution;
use crate::screening::ScreeningCriteria;
use crate::temporal::PipelineConfig;
use crate::trust::FunderExtractor;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid config {path}: {message}")]
    Parse { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScreenSection {
    pub phrase: String,
    pub max_authors: usize,
    pub exclude_reviewer_only: bool,
}

impl Default for ScreenSection {
    fn default() -> Self {
        let c = ScreeningCriteria::default();
        ScreenSection {
            phrase: c.phrase,
            max_authors: c.max_authors,
            exclude_reviewer_only: c.exclude_reviewer_only,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterSection {
    pub linkage: Linkage,
    pub k_min: usize,
    pub k_max: usize,
    pub gap_iterations: usize,
    pub zero_replacement: ZeroReplacement,
}

impl Default for ClusterSection {
    fn default() -> Self {
        let p = PipelineConfig::default();
        ClusterSection {
            linkage: p.linkage,
            k_min: p.k_min,
            k_max: p.k_max,
            gap_iterations: p.gap_iterations,
            zero_replacement: p.zero_replacement,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub flag_authors_above: usize,
    pub field_norm: Option<f64>,
}

impl Default for NetworkSection {
    fn default() -> Self {
        NetworkSection {
            flag_authors_above: 25,
            field_norm: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrustSection {
    pub cues: Vec<String>,
}

impl Default for TrustSection {
    fn default() -> Self {
        TrustSection {
            cues: FunderExtractor::default().cues,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    /// `false` forces the sequential code paths.
    pub parallel: bool,
    pub windows: PeriodWindows,
    pub screen: ScreenSection,
    pub cluster: ClusterSection,
    pub network: NetworkSection,
    pub trust: TrustSection,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 42,
            parallel: true,
            windows: PeriodWindows::default(),
            screen: ScreenSection::default(),
            cluster: ClusterSection::default(),
            network: NetworkSection::default(),
            trust: TrustSection::default(),
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Config::parse(&text).map_err(|message| ConfigError::Parse {
            path: path.display().to_string(),
            message,
        })
    }

    pub fn parse(text: &str) -> Result<Config, String> {
        let cfg: Config = toml::from_str(text).map_err(|e| e.to_string())?;
        cfg.windows.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    pub fn execution(&self) -> Execution {
        if self.parallel {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }

    pub fn screening_criteria(&self) -> ScreeningCriteria {
        ScreeningCriteria {
            phrase: self.screen.phrase.clone(),
            max_authors: self.screen.max_authors,
            exclude_reviewer_only: self.screen.exclude_reviewer_only,
            ..ScreeningCriteria::default()
        }
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            windows: self.windows,
            linkage: self.cluster.linkage,
            zero_replacement: self.cluster.zero_replacement,
            k_min: self.cluster.k_min,
            k_max: self.cluster.k_max,
            gap_iterations: self.cluster.gap_iterations,
            seed: self.seed,
            exec: self.execution(),
        }
    }

    pub fn extractor(&self) -> FunderExtractor {
        FunderExtractor {
            cues: self.trust.cues.clone(),
        }
    }
}
