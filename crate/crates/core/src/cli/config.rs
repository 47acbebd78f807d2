//! Run configuration: `key=value` lines, one setting per line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::embed::Discretization;
use crate::error::{Error, Result};
use crate::meta::{AdaptConfig, Baseline, PretrainConfig, Selection};
use crate::simulator::{AnsatzFamily, GradientMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Heisenberg,
    Molecule,
    Embed,
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heisenberg" => Ok(Experiment::Heisenberg),
            "molecule" => Ok(Experiment::Molecule),
            "embed" => Ok(Experiment::Embed),
            other => Err(Error::Config(format!("unknown experiment \"{other}\""))),
        }
    }
}

impl std::fmt::Display for Experiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Experiment::Heisenberg => "heisenberg",
            Experiment::Molecule => "molecule",
            Experiment::Embed => "embed",
        })
    }
}

impl Experiment {
    fn default_ansatz(self) -> (AnsatzFamily, usize) {
        match self {
            Experiment::Heisenberg => (AnsatzFamily::XyzBlocks, 3),
            Experiment::Molecule => (AnsatzFamily::StronglyEntangling, 7),
            Experiment::Embed => (AnsatzFamily::SimplifiedTwoDesign, 4),
        }
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub qubits: usize,
    pub ansatz: AnsatzFamily,
    pub layers: usize,
    pub seed: u64,
    /// Generated training tasks (random-circuit targets for `embed`).
    pub train: usize,
    /// Held-out tasks used for adaptation and diagnostics.
    pub test: usize,
    pub manifest: Option<PathBuf>,
    pub hamiltonians: Vec<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub initializers: Vec<String>,
    pub uniform_alpha: f64,
    pub gaussian_s: usize,
    pub gaussian_layers: usize,
    pub discretization: Discretization,
    pub pretrain: PretrainConfig,
    pub adapt: AdaptConfig,
}

pub const KEYS: &[&str] = &[
    "experiment",
    "qubits",
    "ansatz",
    "layers",
    "seed",
    "train",
    "test",
    "manifest",
    "hamiltonians",
    "checkpoint",
    "init",
    "uniform_alpha",
    "gaussian_s",
    "gaussian_layers",
    "discretization",
    "epochs",
    "pretrain_lr",
    "batch",
    "selection",
    "method",
    "iterations",
    "adapt_lr",
    "stride",
    "wall_clock",
];

pub const INITIALIZERS: &[&str] = &["qmaml", "zero", "pi", "uniform", "gaussian"];

/// Raw settings before resolution. Later insertions win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected key=value, found \"{line}\""),
            })?;
            s.set(k.trim(), v.trim()).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
        }
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Settings::parse(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown setting \"{key}\"")));
        }
        self.values.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Overlays `other` on top of `self`.
    pub fn merge(&mut self, other: &Settings) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::Config(format!("invalid value \"{v}\" for {key}: {e}")))
            })
            .transpose()
    }
}

fn list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn parse_bool(v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::Config(format!("expected a boolean, found \"{other}\""))),
    }
}

impl RunConfig {
    pub fn resolve(s: &Settings) -> Result<Self> {
        let experiment = s.parsed::<Experiment>("experiment")?.unwrap_or(Experiment::Heisenberg);
        let qubits = s
            .parsed::<usize>("qubits")?
            .ok_or_else(|| Error::Config("the qubit count is required (--n or qubits=)".into()))?;
        let (family, layers) = experiment.default_ansatz();
        let ansatz = s.parsed("ansatz")?.unwrap_or(family);
        let layers = s.parsed("layers")?.unwrap_or(layers);
        let seed = s.parsed("seed")?.unwrap_or(0);
        let method = s.parsed::<GradientMethod>("method")?.unwrap_or_default();
        let wall_clock = s.get("wall_clock").map(parse_bool).transpose()?.unwrap_or(false);

        let pretrain_defaults = PretrainConfig::default();
        let pretrain = PretrainConfig {
            epochs: s.parsed("epochs")?.unwrap_or(pretrain_defaults.epochs),
            lr: s.parsed("pretrain_lr")?.unwrap_or(pretrain_defaults.lr),
            batch_size: s.parsed("batch")?.unwrap_or(pretrain_defaults.batch_size),
            seed,
            method,
            selection: s.parsed::<Selection>("selection")?.unwrap_or_default(),
            record_wall_clock: wall_clock,
        };
        let adapt_defaults = AdaptConfig::default();
        let adapt = AdaptConfig {
            iterations: s.parsed("iterations")?.unwrap_or(adapt_defaults.iterations),
            lr: s.parsed("adapt_lr")?.unwrap_or(adapt_defaults.lr),
            seed,
            method,
            stride: s.parsed("stride")?.unwrap_or(adapt_defaults.stride),
            record_wall_clock: wall_clock,
        };

        let initializers = s
            .get("init")
            .map(list)
            .unwrap_or_else(|| INITIALIZERS.iter().map(|s| s.to_string()).collect());
        if let Some(bad) = initializers.iter().find(|i| !INITIALIZERS.contains(&i.as_str())) {
            return Err(Error::Config(format!(
                "unknown initializer \"{bad}\" (expected one of {})",
                INITIALIZERS.join(", ")
            )));
        }
        let discretization = match s.get("discretization") {
            None | Some("pointwise") => Discretization::Pointwise,
            Some("bin") | Some("bin-integrated") => Discretization::BinIntegrated,
            Some(other) => return Err(Error::Config(format!("unknown discretization \"{other}\""))),
        };
        let default_train = if experiment == Experiment::Embed { 10_000 } else { 200 };
        let cfg = RunConfig {
            experiment,
            qubits,
            ansatz,
            layers,
            seed,
            train: s.parsed("train")?.unwrap_or(default_train),
            test: s.parsed("test")?.unwrap_or(16),
            manifest: s.get("manifest").map(PathBuf::from),
            hamiltonians: s.get("hamiltonians").map(list).unwrap_or_default().into_iter().map(PathBuf::from).collect(),
            checkpoint: s.get("checkpoint").map(PathBuf::from),
            initializers,
            uniform_alpha: s.parsed("uniform_alpha")?.unwrap_or(Baseline::DEFAULT_ALPHA),
            gaussian_s: s.parsed("gaussian_s")?.unwrap_or(2),
            gaussian_layers: s.parsed("gaussian_layers")?.unwrap_or(layers),
            discretization,
            pretrain,
            adapt,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.qubits == 0 {
            return Err(Error::Config("qubit count must be at least 1".into()));
        }
        if let Some(m) = &self.manifest {
            if !m.is_file() {
                return Err(Error::Config(format!("manifest {} does not exist", m.display())));
            }
        }
        if let Some(c) = &self.checkpoint {
            if !c.is_file() {
                return Err(Error::Config(format!("checkpoint {} does not exist", c.display())));
            }
        }
        if let Some(h) = self.hamiltonians.iter().find(|h| !h.is_file()) {
            return Err(Error::Config(format!("Hamiltonian file {} does not exist", h.display())));
        }
        Ok(())
    }

    pub fn baseline(&self, name: &str) -> Option<Baseline> {
        match name {
            "zero" => Some(Baseline::Zero),
            "pi" => Some(Baseline::Pi),
            "uniform" => Some(Baseline::ReducedUniform {
                alpha: self.uniform_alpha,
            }),
            "gaussian" => Some(Baseline::Gaussian {
                s: self.gaussian_s,
                layers: self.gaussian_layers,
            }),
            _ => None,
        }
    }

    /// The resolved configuration in the same `key=value` format it is read
    /// from, so an echo can be fed back as `--config`.
    pub fn to_text(&self) -> String {
        let paths = |v: &[PathBuf]| v.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(",");
        let mut out = String::new();
        let mut kv = |k: &str, v: String| writeln!(out, "{k}={v}").unwrap();
        kv("experiment", self.experiment.to_string());
        kv("qubits", self.qubits.to_string());
        kv("ansatz", self.ansatz.to_string());
        kv("layers", self.layers.to_string());
        kv("seed", self.seed.to_string());
        kv("train", self.train.to_string());
        kv("test", self.test.to_string());
        if let Some(m) = &self.manifest {
            kv("manifest", m.display().to_string());
        }
        if !self.hamiltonians.is_empty() {
            kv("hamiltonians", paths(&self.hamiltonians));
        }
        if let Some(c) = &self.checkpoint {
            kv("checkpoint", c.display().to_string());
        }
        kv("init", self.initializers.join(","));
        kv("uniform_alpha", self.uniform_alpha.to_string());
        kv("gaussian_s", self.gaussian_s.to_string());
        kv("gaussian_layers", self.gaussian_layers.to_string());
        kv(
            "discretization",
            match self.discretization {
                Discretization::Pointwise => "pointwise",
                Discretization::BinIntegrated => "bin-integrated",
            }
            .into(),
        );
        kv("epochs", self.pretrain.epochs.to_string());
        kv("pretrain_lr", self.pretrain.lr.to_string());
        kv("batch", self.pretrain.batch_size.to_string());
        kv("selection", self.pretrain.selection.to_string());
        kv("method", self.pretrain.method.to_string());
        kv("iterations", self.adapt.iterations.to_string());
        kv("adapt_lr", self.adapt.lr.to_string());
        kv("stride", self.adapt.stride.to_string());
        kv("wall_clock", self.adapt.record_wall_clock.to_string());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let mut s = Settings::parse("# comment\nqubits = 6\nexperiment=heisenberg\nepochs=5\n").unwrap();
        let cfg = RunConfig::resolve(&s).unwrap();
        assert_eq!(cfg.ansatz, AnsatzFamily::XyzBlocks);
        assert_eq!(cfg.pretrain.epochs, 5);
        assert_eq!(cfg.pretrain.batch_size, 16);
        assert_eq!(cfg.train, 200);

        let mut flags = Settings::default();
        flags.set("epochs", "7").unwrap();
        s.merge(&flags);
        assert_eq!(RunConfig::resolve(&s).unwrap().pretrain.epochs, 7);
    }

    #[test]
    fn echo_round_trips() {
        let s = Settings::parse("qubits=4\nexperiment=embed\ninit=qmaml,uniform\nstride=10\nwall_clock=true").unwrap();
        let cfg = RunConfig::resolve(&s).unwrap();
        assert_eq!(cfg.ansatz, AnsatzFamily::SimplifiedTwoDesign);
        let again = RunConfig::resolve(&Settings::parse(&cfg.to_text()).unwrap()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Settings::parse("qubits 4").is_err());
        assert!(Settings::parse("colour=blue").is_err());
        assert!(RunConfig::resolve(&Settings::parse("experiment=embed").unwrap()).is_err());
        assert!(RunConfig::resolve(&Settings::parse("qubits=2\ninit=qmaml,best").unwrap()).is_err());
        assert!(RunConfig::resolve(&Settings::parse("qubits=2\nmanifest=/no/such/file").unwrap()).is_err());
    }
}
