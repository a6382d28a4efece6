//! Provenance metadata carried by every artifact.

use std::path::Path;

use draftopt::scenario::Scenario;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: &str = "1";
pub const TOOL: &str = concat!("draftopt ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lineage {
    pub artifact: String,
    pub scenario: Scenario,
    pub seed: u64,
    /// SHA-256 of the canonical run configuration.
    pub config: String,
}

impl Lineage {
    pub fn new(artifact: &str, cfg: &RunConfig) -> CliResult<Self> {
        Ok(Self { artifact: artifact.into(), scenario: cfg.scenario()?, seed: cfg.seed(), config: cfg.hash() })
    }

    pub fn meta(&self) -> Vec<(String, String)> {
        vec![
            ("artifact".into(), self.artifact.clone()),
            ("format".into(), FORMAT_VERSION.into()),
            ("tool".into(), TOOL.into()),
            ("scenario".into(), self.scenario.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("config".into(), self.config.clone()),
        ]
    }

    pub fn read(meta: &[(String, String)], origin: &Path) -> CliResult<Self> {
        let get = |k: &str| {
            meta.iter()
                .find(|(key, _)| key == k)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| CliError::data(format!("{}: missing lineage field '{k}'", origin.display())))
        };
        let format = get("format")?;
        if format != FORMAT_VERSION {
            return Err(CliError::data(format!("{}: unsupported artifact format '{format}'", origin.display())));
        }
        let bad = |k: &str| CliError::data(format!("{}: malformed lineage field '{k}'", origin.display()));
        Ok(Self {
            artifact: get("artifact")?.to_string(),
            scenario: get("scenario")?.parse().map_err(|_| bad("scenario"))?,
            seed: get("seed")?.parse().map_err(|_| bad("seed"))?,
            config: get("config")?.to_string(),
        })
    }

    pub fn expect(&self, artifact: &str, origin: &Path) -> CliResult<()> {
        if self.artifact != artifact {
            return Err(CliError::data(format!(
                "{}: expected a {artifact} artifact, found {}",
                origin.display(),
                self.artifact
            )));
        }
        Ok(())
    }

    /// Upstream artifacts must come from the same scenario.
    pub fn check_scenario(&self, scenario: Scenario, origin: &Path) -> CliResult<()> {
        if self.scenario != scenario {
            return Err(CliError::data(format!(
                "{}: scenario mismatch (artifact {}, run {scenario})",
                origin.display(),
                self.scenario
            )));
        }
        Ok(())
    }

    pub fn same_run(&self, other: &Lineage) -> bool {
        self.scenario == other.scenario && self.seed == other.seed && self.config == other.config
    }
}
