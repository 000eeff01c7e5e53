//! Line-oriented `key = value` experiment configs.
//!
//! ```text
//! # comment
//! algorithm = randomized_category
//! k = 1
//! generator = semi_complete
//! c = 30
//! trials = 10000
//! seed = 42
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::order::ArrivalOrder;

use super::generate::GeneratorSpec;

/// Raw key/value pairs with unique keys, remembered with their line numbers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeyValues {
    entries: BTreeMap<String, (usize, String)>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected `key = value`, got `{line}`") })?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(Error::Parse { line: i + 1, msg: "empty key".into() });
            }
            if entries.insert(key.clone(), (i + 1, value.trim().to_string())).is_some() {
                return Err(Error::Parse { line: i + 1, msg: format!("duplicate key `{key}`") });
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        let line = self.entries.get(key).map_or(0, |(l, _)| *l);
        self.entries.insert(key.to_string(), (line, value.to_string()));
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn typed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|e| Error::Parse { line: *line, msg: format!("bad value for `{key}`: {e}") }),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        self.typed(key)?.ok_or_else(|| Error::InvalidParameter(format!("missing key `{key}`")))
    }

    /// All pairs, sorted by key.
    pub fn pairs(&self) -> Vec<(String, String)> {
        self.entries.iter().map(|(k, (_, v))| (k.clone(), v.clone())).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgorithmSpec {
    /// Ranking under the identity ranking, i.e. Greedy in arrival order.
    Greedy,
    Kvv,
    RandomizedCategory { k: u32 },
    AdviceCategory,
    EpsAdvice { eps: f64 },
}

impl AlgorithmSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Greedy => "greedy",
            Self::Kvv => "kvv",
            Self::RandomizedCategory { .. } => "randomized_category",
            Self::AdviceCategory => "advice_category",
            Self::EpsAdvice { .. } => "eps_advice",
        }
    }

    fn from_kv(kv: &KeyValues) -> Result<Self> {
        let name: String = kv.require("algorithm")?;
        Ok(match name.as_str() {
            "greedy" => Self::Greedy,
            "kvv" => Self::Kvv,
            "randomized_category" => Self::RandomizedCategory { k: kv.require("k")? },
            "advice_category" => Self::AdviceCategory,
            "eps_advice" => Self::EpsAdvice { eps: kv.require("eps")? },
            other => return Err(Error::InvalidParameter(format!("unknown algorithm `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    File(PathBuf),
    Generator(GeneratorSpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrivalPolicy {
    Identity,
    Given(ArrivalOrder),
    RandomPerTrial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmSpec,
    pub instance: InstanceSource,
    pub trials: usize,
    pub seed: u64,
    pub arrival: ArrivalPolicy,
    /// Estimate per-category matched fractions only on graphs with a
    /// perfect matching.
    pub perfect_only: bool,
    /// The parsed pairs, echoed into result artifacts.
    pub raw: KeyValues,
}

const KNOWN_KEYS: &[&str] = &[
    "algorithm", "k", "eps", "instance", "generator", "c", "z", "n", "m", "p", "extra_edges", "graph_seed",
    "lb_eps", "sigma", "trials", "seed", "arrival", "arrival_order", "perfect_only",
];

impl ExperimentConfig {
    pub fn from_kv(kv: KeyValues) -> Result<Self> {
        if let Some(k) = kv.keys().find(|k| !KNOWN_KEYS.contains(k)) {
            return Err(Error::InvalidParameter(format!("unknown key `{k}`")));
        }
        let algorithm = AlgorithmSpec::from_kv(&kv)?;
        let instance = match (kv.get("instance"), kv.get("generator")) {
            (Some(path), None) => InstanceSource::File(PathBuf::from(path)),
            (None, Some(_)) => InstanceSource::Generator(GeneratorSpec::from_kv(&kv)?),
            _ => return Err(Error::InvalidParameter("give exactly one of `instance` or `generator`".into())),
        };
        let trials = kv.typed("trials")?.unwrap_or(1);
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        let arrival = match kv.get("arrival").unwrap_or("identity") {
            "identity" => ArrivalPolicy::Identity,
            "random" => ArrivalPolicy::RandomPerTrial,
            "given" => ArrivalPolicy::Given(kv.require::<ArrivalOrder>("arrival_order")?),
            other => return Err(Error::InvalidParameter(format!("unknown arrival policy `{other}`"))),
        };
        Ok(Self {
            algorithm,
            instance,
            trials,
            seed: kv.typed("seed")?.unwrap_or(0),
            arrival,
            perfect_only: kv.typed("perfect_only")?.unwrap_or(false),
            raw: kv,
        })
    }

    /// Replaces the trial count, keeping the echoed pairs in sync.
    pub fn with_trials(mut self, trials: usize) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        self.trials = trials;
        self.raw.set("trials", trials);
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.raw.set("seed", seed);
        self
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_kv(KeyValues::parse(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::GeneratorKind;

    #[test]
    fn parses_a_full_config() {
        let cfg: ExperimentConfig = "# demo\nalgorithm = randomized_category\nk = 2\ngenerator = semi_complete\nc = 30 # size\ntrials = 100\nseed = 7\narrival = random\n"
            .parse()
            .unwrap();
        assert_eq!(cfg.algorithm, AlgorithmSpec::RandomizedCategory { k: 2 });
        assert_eq!(cfg.trials, 100);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.arrival, ArrivalPolicy::RandomPerTrial);
        match cfg.instance {
            InstanceSource::Generator(g) => assert_eq!(g.kind, GeneratorKind::SemiComplete { c: 30 }),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_configs() {
        assert!("algorithm greedy".parse::<ExperimentConfig>().is_err());
        assert!("algorithm = greedy\nalgorithm = kvv".parse::<ExperimentConfig>().is_err());
        assert!("algorithm = greedy\ngenerator = semi_complete\nc = 3\ncolour = red".parse::<ExperimentConfig>().is_err());
        assert!("algorithm = magic\ngenerator = semi_complete\nc = 3".parse::<ExperimentConfig>().is_err());
        assert!("algorithm = greedy\ngenerator = semi_complete\nc = 3\ntrials = 0".parse::<ExperimentConfig>().is_err());
        assert!("algorithm = greedy".parse::<ExperimentConfig>().is_err());
        let err = "algorithm = greedy\ngenerator = semi_complete\nc = x".parse::<ExperimentConfig>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn given_arrival_order() {
        let cfg: ExperimentConfig =
            "algorithm = greedy\ngenerator = semi_complete\nc = 3\narrival = given\narrival_order = 3 1 2".parse().unwrap();
        assert_eq!(cfg.arrival, ArrivalPolicy::Given(ArrivalOrder::new(vec![3, 1, 2]).unwrap()));
    }
}
