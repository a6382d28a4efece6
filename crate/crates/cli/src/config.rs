//! Run configuration: a flat `key = value` file with documented keys.
//!
//! Values are resolved from the built-in defaults, then the `DRAFTOPT_SEED`
//! environment variable (seed only), then the config file, then command-line
//! overrides. The canonical form lists every key in sorted order; its SHA-256
//! identifies the run in artifact metadata.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use draftopt::dataset::PrepConfig;
use draftopt::multi::{MoeadConfig, NsgaConfig, SpeaConfig};
use draftopt::scenario::Scenario;
use draftopt::single::{FwaConfig, LshadeConfig, PsoConfig};
use draftopt::surrogate::{MlpConfig, TuneOptions};

use crate::error::{CliError, CliResult};

pub const SEED_ENV: &str = "DRAFTOPT_SEED";

/// `(key, default, description)`
pub const KEYS: &[(&str, &str, &str)] = &[
    ("scenario", "II.a", "I.a, I.b, II.a or II.b; fixes the variable count and bounds"),
    ("seed", "0", "global seed; every stage derives its own stream from it"),
    ("samples", "5000", "Latin hypercube sample count"),
    ("oracle", "builtin", "synthetic evaluator constants: 'builtin' or a constants file"),
    ("lof_neighbors", "20", "LOF neighbourhood size"),
    ("lof_threshold", "1.5", "rows scoring above this LOF value are dropped"),
    ("train_ratio", "0.8", "training share of the filtered dataset"),
    ("network", "preset", "network settings, or 'preset' for the scenario's tuned network"),
    ("epochs", "512", "maximum training epochs"),
    ("patience", "32", "early-stopping patience in epochs"),
    ("batch_size", "32", "mini-batch size"),
    ("validation", "0.1", "share of training rows monitored for early stopping"),
    ("tune_trials", "6", "random configurations scored by the tuner (0 skips tuning in the pipeline)"),
    ("tune_folds", "3", "cross-validation folds per configuration"),
    ("tune_subsample", "1500", "rows used for tuning (0 = all training rows)"),
    ("algorithm", "moead", "nsga2, spea2, moead, pso, fwa or lshade"),
    ("objective", "cp", "single-objective target: cp (maximized) or cd (minimized)"),
    ("generations", "500", "optimizer generations or iterations"),
    ("topsis_weights", "0.5,0.5", "TOPSIS weights of Cp (benefit) and Cd (cost)"),
    ("nsga2.population", "200", ""),
    ("nsga2.crossover_prob", "0.9", ""),
    ("nsga2.mutation_prob", "0.1", ""),
    ("nsga2.eta", "20", "SBX and polynomial mutation distribution index"),
    ("spea2.population", "200", ""),
    ("spea2.archive", "200", ""),
    ("spea2.crossover_prob", "0.9", ""),
    ("spea2.mutation_prob", "0.1", ""),
    ("spea2.eta", "20", ""),
    ("moead.population", "200", "subproblem count"),
    ("moead.neighbours", "20", "neighbourhood size T"),
    ("moead.delta", "0.9", "probability of mating within the neighbourhood"),
    ("moead.max_replace", "2", "replacements per offspring"),
    ("moead.f", "0.5", "differential weight"),
    ("moead.cr", "1.0", "differential crossover rate"),
    ("moead.mutation_prob", "0.1", ""),
    ("moead.eta", "20", ""),
    ("pso.particles", "20", ""),
    ("pso.cognitive", "2", ""),
    ("pso.social", "2", ""),
    ("pso.max_velocity", "0.2", "velocity limit as a share of the box width"),
    ("fwa.fireworks", "20", ""),
    ("fwa.explosion_sparks", "10", ""),
    ("fwa.gaussian_sparks", "10", ""),
    ("lshade.initial_population", "200", ""),
    ("lshade.memory_size", "6", ""),
    ("lshade.archive_rate", "2.6", ""),
    ("lshade.pbest_rate", "0.11", ""),
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { values: KEYS.iter().map(|(k, v, _)| (k.to_string(), v.to_string())).collect() }
    }
}

fn known(key: &str) -> bool {
    KEYS.iter().any(|(k, _, _)| *k == key)
}

impl RunConfig {
    /// Defaults with the seed taken from the environment when set.
    pub fn from_env() -> CliResult<Self> {
        let mut c = Self::default();
        if let Ok(s) = std::env::var(SEED_ENV) {
            c.set("seed", &s).map_err(|e| e.context(SEED_ENV))?;
        }
        Ok(c)
    }

    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let key = key.trim();
        if !known(key) {
            return Err(CliError::usage(format!("unknown config key '{key}'")));
        }
        self.values.insert(key.to_string(), value.trim().to_string());
        self.check(key)
    }

    /// `key=value` from the command line.
    pub fn set_pair(&mut self, pair: &str) -> CliResult<()> {
        let (k, v) = pair.split_once('=').ok_or_else(|| CliError::usage(format!("expected key=value, got '{pair}'")))?;
        self.set(k, v)
    }

    pub fn apply_text(&mut self, text: &str, origin: &Path) -> CliResult<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("{}:{}: expected 'key = value'", origin.display(), i + 1)))?;
            self.set(k, v).map_err(|e| e.context(format!("{}:{}", origin.display(), i + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> CliResult<()> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        self.apply_text(&text, path)
    }

    pub fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or_else(|| panic!("config key '{key}' is not declared"))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<T>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key).parse().map_err(|e| CliError::usage(format!("config key '{key}' = '{}': {e}", self.raw(key))))
    }

    /// Parses the value early so that bad input fails where it was given.
    fn check(&self, key: &str) -> CliResult<()> {
        match key {
            "scenario" => self.scenario().map(drop),
            "oracle" | "algorithm" | "objective" => Ok(()),
            "network" => self.network().map(drop),
            "topsis_weights" => self.topsis_weights().map(drop),
            "seed" => self.get::<u64>(key).map(drop),
            k if k.ends_with("population")
                || k.ends_with("archive")
                || k.ends_with("neighbours")
                || k.ends_with("max_replace")
                || k.ends_with("particles")
                || k.ends_with("fireworks")
                || k.ends_with("sparks")
                || k.ends_with("memory_size")
                || matches!(k, "samples" | "lof_neighbors" | "epochs" | "patience" | "batch_size" | "generations")
                || k.starts_with("tune_") =>
            {
                self.get::<usize>(key).map(drop)
            }
            _ => self.get::<f64>(key).map(drop),
        }
    }

    /// Sorted `key = value` lines of everything except the seed.
    pub fn canonical(&self) -> String {
        self.values.iter().filter(|(k, _)| k.as_str() != "seed").map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn seed(&self) -> u64 {
        self.get("seed").expect("checked on set")
    }

    pub fn scenario(&self) -> CliResult<Scenario> {
        self.raw("scenario").parse().map_err(|e: draftopt::Error| CliError::usage(e.to_string()))
    }

    pub fn network(&self) -> CliResult<Option<MlpConfig>> {
        match self.raw("network") {
            "preset" => Ok(None),
            s => s.parse().map(Some).map_err(|e: draftopt::Error| CliError::usage(format!("network: {e}"))),
        }
    }

    /// Training settings: the network (explicit or the scenario preset) with
    /// the configured epoch budget.
    pub fn mlp(&self) -> CliResult<MlpConfig> {
        let base = match self.network()? {
            Some(c) => c,
            None if self.scenario()?.free_width() => MlpConfig::scenario_two(),
            None => MlpConfig::scenario_one(),
        };
        self.with_budget(base)
    }

    pub fn with_budget(&self, cfg: MlpConfig) -> CliResult<MlpConfig> {
        let cfg = MlpConfig {
            epochs: self.get("epochs")?,
            patience: self.get("patience")?,
            batch_size: self.get("batch_size")?,
            validation: self.get("validation")?,
            ..cfg
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn prep(&self) -> CliResult<PrepConfig> {
        Ok(PrepConfig {
            lof_neighbors: self.get("lof_neighbors")?,
            lof_threshold: self.get("lof_threshold")?,
            train_ratio: self.get("train_ratio")?,
            seed: draftopt::rng::derive(self.seed(), 2, 0),
        })
    }

    pub fn tune_options(&self, seed: u64) -> CliResult<TuneOptions> {
        let subsample: usize = self.get("tune_subsample")?;
        Ok(TuneOptions {
            trials: self.get("tune_trials")?,
            folds: self.get("tune_folds")?,
            seed,
            template: self.with_budget(MlpConfig::default())?,
            subsample: (subsample > 0).then_some(subsample),
            include: vec![self.with_budget(MlpConfig::scenario_one())?, self.with_budget(MlpConfig::scenario_two())?],
        })
    }

    pub fn topsis_weights(&self) -> CliResult<[f64; 2]> {
        let parts: Vec<&str> = self.raw("topsis_weights").split(',').collect();
        let bad = || CliError::usage(format!("topsis_weights '{}' must be two numbers summing to 1", self.raw("topsis_weights")));
        if parts.len() != 2 {
            return Err(bad());
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        if !(a >= 0.0 && b >= 0.0 && (a + b - 1.0).abs() <= 1e-9) {
            return Err(bad());
        }
        Ok([a, b])
    }

    pub fn nsga2(&self) -> CliResult<NsgaConfig> {
        let eta = self.get("nsga2.eta")?;
        Ok(NsgaConfig {
            population: self.get("nsga2.population")?,
            crossover_prob: self.get("nsga2.crossover_prob")?,
            mutation_prob: self.get("nsga2.mutation_prob")?,
            eta_crossover: eta,
            eta_mutation: eta,
        })
    }

    pub fn spea2(&self) -> CliResult<SpeaConfig> {
        let eta = self.get("spea2.eta")?;
        Ok(SpeaConfig {
            population: self.get("spea2.population")?,
            archive: self.get("spea2.archive")?,
            crossover_prob: self.get("spea2.crossover_prob")?,
            mutation_prob: self.get("spea2.mutation_prob")?,
            eta_crossover: eta,
            eta_mutation: eta,
        })
    }

    pub fn moead(&self) -> CliResult<MoeadConfig> {
        Ok(MoeadConfig {
            population: self.get("moead.population")?,
            neighbours: self.get("moead.neighbours")?,
            delta: self.get("moead.delta")?,
            max_replace: self.get("moead.max_replace")?,
            differential_weight: self.get("moead.f")?,
            crossover_rate: self.get("moead.cr")?,
            mutation_prob: self.get("moead.mutation_prob")?,
            eta_mutation: self.get("moead.eta")?,
        })
    }

    pub fn pso(&self) -> CliResult<PsoConfig> {
        Ok(PsoConfig {
            particles: self.get("pso.particles")?,
            cognitive: self.get("pso.cognitive")?,
            social: self.get("pso.social")?,
            max_velocity: self.get("pso.max_velocity")?,
            ..PsoConfig::default()
        })
    }

    pub fn fwa(&self) -> CliResult<FwaConfig> {
        Ok(FwaConfig {
            fireworks: self.get("fwa.fireworks")?,
            explosion_sparks: self.get("fwa.explosion_sparks")?,
            gaussian_sparks: self.get("fwa.gaussian_sparks")?,
            ..FwaConfig::default()
        })
    }

    pub fn lshade(&self) -> CliResult<LshadeConfig> {
        Ok(LshadeConfig {
            initial_population: self.get("lshade.initial_population")?,
            memory_size: self.get("lshade.memory_size")?,
            archive_rate: self.get("lshade.archive_rate")?,
            pbest_rate: self.get("lshade.pbest_rate")?,
            ..LshadeConfig::default()
        })
    }

    /// Documented template with every key at its default.
    pub fn template() -> String {
        let mut s = String::from("# draftopt run configuration\n");
        for (k, v, doc) in KEYS {
            if !doc.is_empty() {
                s.push_str(&format!("# {doc}\n"));
            }
            // an explicit seed would mask the environment variable
            let off = if *k == "seed" { "# " } else { "" };
            s.push_str(&format!("{off}{k} = {v}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_override() {
        let mut c = RunConfig::default();
        c.apply_text("scenario = I.b  # inward only\nsamples=100\n", Path::new("run.cfg")).unwrap();
        c.set_pair("samples=50").unwrap();
        assert_eq!(c.scenario().unwrap(), Scenario::Ib);
        assert_eq!(c.get::<usize>("samples").unwrap(), 50);
    }

    #[test]
    fn unknown_and_malformed_keys() {
        let mut c = RunConfig::default();
        let e = c.apply_text("\nbogus = 1\n", Path::new("run.cfg")).unwrap_err();
        assert!(e.message.contains("run.cfg:2"), "{}", e.message);
        assert_eq!(e.code, crate::error::EXIT_USAGE);
        assert!(c.set("samples", "many").is_err());
        assert!(c.set("scenario", "III").is_err());
        assert!(c.set("topsis_weights", "0.7,0.7").is_err());
    }

    #[test]
    fn hash_ignores_seed_only() {
        let mut a = RunConfig::default();
        let h = a.hash();
        a.set("seed", "9").unwrap();
        assert_eq!(a.hash(), h);
        a.set("generations", "10").unwrap();
        assert_ne!(a.hash(), h);
        assert_eq!(h.len(), 64);
    }

    #[test]
    fn template_parses_to_defaults() {
        let mut c = RunConfig::default();
        c.set("samples", "7").unwrap();
        c.apply_text(&RunConfig::template(), Path::new("t.cfg")).unwrap();
        assert_eq!(c, RunConfig::default());
    }

    #[test]
    fn typed_sections() {
        let c = RunConfig::default();
        assert_eq!(c.moead().unwrap(), MoeadConfig::default());
        assert_eq!(c.nsga2().unwrap(), NsgaConfig::default());
        assert_eq!(c.spea2().unwrap(), SpeaConfig::default());
        assert_eq!(c.mlp().unwrap(), MlpConfig::scenario_two());
    }
}
