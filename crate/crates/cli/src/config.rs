use std::path::Path;

use anyhow::{Context, Result};
use clap::Args;
use serde::Deserialize;

use loci_core::campaign::CampaignSpec;
use loci_core::LociConfig;

/// Algorithm flags shared by every subcommand that runs LoCI.
#[derive(Args, Debug, Clone, Default)]
pub struct AlgoFlags {
    /// Seed for pair order and random graphs.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest conditioning set to search.
    #[arg(long)]
    pub max_cond: Option<usize>,
    /// Close the statement list once after all pairs.
    #[arg(long)]
    pub batch_closure: bool,
    /// Confirm blocking-node sequences with extra dependence queries.
    #[arg(long)]
    pub strict_blocking: bool,
    /// Keep disjunctions with more than two node terms.
    #[arg(long)]
    pub keep_wide_disjunctions: bool,
    /// TOML file with defaults for these flags; flags win.
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub max_cond: Option<usize>,
    pub batch_closure: Option<bool>,
    pub strict_blocking: Option<bool>,
    pub keep_wide_disjunctions: Option<bool>,
    pub trials: Option<usize>,
    pub n_observed: Option<(usize, usize)>,
    pub n_latent: Option<(usize, usize)>,
    pub n_selection: Option<(usize, usize)>,
    pub edge_probabilities: Option<Vec<f64>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

impl AlgoFlags {
    pub fn file(&self) -> Result<FileConfig> {
        match &self.config {
            Some(p) => FileConfig::load(p),
            None => Ok(FileConfig::default()),
        }
    }

    pub fn loci(&self) -> Result<LociConfig> {
        let file = self.file()?;
        Ok(LociConfig {
            max_cond: self.max_cond.or(file.max_cond),
            seed: self.seed.or(file.seed).unwrap_or(0),
            batch_closure: self.batch_closure || file.batch_closure.unwrap_or(false),
            strict_blocking: self.strict_blocking || file.strict_blocking.unwrap_or(false),
            keep_wide_disjunctions: self.keep_wide_disjunctions || file.keep_wide_disjunctions.unwrap_or(false),
            ..LociConfig::default()
        })
    }

    pub fn campaign(&self, trials: Option<usize>) -> Result<CampaignSpec> {
        let file = self.file()?;
        let defaults = CampaignSpec::default();
        let mut loci = self.loci()?;
        loci.seed = 0;
        Ok(CampaignSpec {
            trials: trials.or(file.trials).unwrap_or(defaults.trials),
            n_observed: file.n_observed.unwrap_or(defaults.n_observed),
            n_latent: file.n_latent.unwrap_or(defaults.n_latent),
            n_selection: file.n_selection.unwrap_or(defaults.n_selection),
            edge_probabilities: file.edge_probabilities.unwrap_or(defaults.edge_probabilities),
            seed: self.seed.or(file.seed).unwrap_or(defaults.seed),
            loci,
            ..defaults
        })
    }
}
