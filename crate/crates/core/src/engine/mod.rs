//! Review strategies run against a simulated assessor.
//!
//! [`autotar_run`] is the continuous active learning loop with a single seed,
//! presumptive non-relevant sampling and exponentially growing batches.
//! [`cal_run`], [`sal_run`] and [`spl_run`] are the baselines it is compared
//! against. Every run produces a [`ReviewLog`]: the order in which documents
//! were put in front of the assessor.

mod autotar;
mod baselines;
mod log;
pub mod rng;
mod seed;
mod state;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use autotar::{autotar_run, BatchSchedule};
pub use baselines::{cal_run, sal_run, spl_run};
pub use log::{parse_log_csv, ParsedLog, ReviewEntry, ReviewLog, RunWarning, LOG_CSV_HEADER};
pub use seed::{select_seed, Seed};

use crate::collection::Collection;
use crate::corpus::Topic;
use crate::error::{Error, Result};
use crate::qrels::TopicQrels;

/// Reviews with no relevant document found before a stall warning.
pub const STALL_REVIEW_THRESHOLD: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[serde(rename = "autotar")]
    AutoTar,
    Cal,
    Sal,
    Spl,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::AutoTar => "autotar",
            Method::Cal => "cal",
            Method::Sal => "sal",
            Method::Spl => "spl",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "autotar" | "auto" => Ok(Method::AutoTar),
            "cal" => Ok(Method::Cal),
            "sal" => Ok(Method::Sal),
            "spl" => Ok(Method::Spl),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

/// How the initial relevant example is obtained.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SeedMode {
    /// Highest BM25-ranked document (on the seed query) judged relevant.
    Bm25,
    /// Uniformly random training-relevant document.
    RandomRelevant,
    /// Pseudo-document built from the topic description.
    Synthetic,
    /// A named document.
    Explicit(String),
}

impl fmt::Display for SeedMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedMode::Bm25 => f.write_str("bm25"),
            SeedMode::RandomRelevant => f.write_str("random"),
            SeedMode::Synthetic => f.write_str("synthetic"),
            SeedMode::Explicit(id) => write!(f, "explicit:{id}"),
        }
    }
}

impl FromStr for SeedMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(id) = s.strip_prefix("explicit:") {
            if id.is_empty() {
                return Err(Error::InvalidParameter("explicit seed needs a document id".into()));
            }
            return Ok(SeedMode::Explicit(id.to_string()));
        }
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "bm25" => Ok(SeedMode::Bm25),
            "random" | "randomrelevant" => Ok(SeedMode::RandomRelevant),
            "synthetic" | "syn" => Ok(SeedMode::Synthetic),
            other => Err(Error::InvalidParameter(format!("unknown seed mode {other:?}"))),
        }
    }
}

impl Serialize for SeedMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SeedMode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub method: Method,
    pub seed_mode: SeedMode,
    pub effort_budget: usize,
    pub rng_seed: u64,
    pub presumptive_count: usize,
    pub initial_batch: usize,
    pub growth_divisor: usize,
    pub cal_batch: usize,
    pub sal_spl_training_size: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            method: Method::AutoTar,
            seed_mode: SeedMode::Bm25,
            effort_budget: usize::MAX,
            rng_seed: 0,
            presumptive_count: 100,
            initial_batch: 1,
            growth_divisor: 10,
            cal_batch: 1000,
            sal_spl_training_size: 5000,
        }
    }
}

impl RunConfig {
    pub fn new(method: Method, seed_mode: SeedMode) -> Self {
        RunConfig {
            method,
            seed_mode,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("effort_budget", self.effort_budget),
            ("presumptive_count", self.presumptive_count),
            ("initial_batch", self.initial_batch),
            ("growth_divisor", self.growth_divisor),
            ("cal_batch", self.cal_batch),
            ("sal_spl_training_size", self.sal_spl_training_size),
        ];
        for (name, value) in positive {
            if value == 0 {
                return Err(Error::InvalidParameter(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }
}

/// Runs the configured method for one topic.
pub fn run(config: &RunConfig, collection: &Collection, topic: &Topic, training: &TopicQrels) -> Result<ReviewLog> {
    match config.method {
        Method::AutoTar => autotar_run(config, collection, topic, training),
        Method::Cal => cal_run(config, collection, topic, training),
        Method::Sal => sal_run(config, collection, topic, training),
        Method::Spl => spl_run(config, collection, topic, training),
    }
}

/// One unit of work for [`run_many`].
#[derive(Debug, Clone)]
pub struct RunJob<'a> {
    pub config: RunConfig,
    pub topic: &'a Topic,
    pub training: &'a TopicQrels,
}

/// Executes independent runs in parallel; results keep the job order.
pub fn run_many(collection: &Collection, jobs: &[RunJob<'_>]) -> Vec<Result<ReviewLog>> {
    jobs.par_iter()
        .map(|job| run(&job.config, collection, job.topic, job.training))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_modes_and_methods() {
        assert_eq!("bm25".parse::<SeedMode>().unwrap(), SeedMode::Bm25);
        assert_eq!("random".parse::<SeedMode>().unwrap(), SeedMode::RandomRelevant);
        assert_eq!(
            "explicit:D7".parse::<SeedMode>().unwrap(),
            SeedMode::Explicit("D7".into())
        );
        assert!("explicit:".parse::<SeedMode>().is_err());
        assert_eq!("AutoTAR".parse::<Method>().unwrap(), Method::AutoTar);
        assert!("svm".parse::<Method>().is_err());
    }

    #[test]
    fn config_serializes_with_defaults() {
        let c = RunConfig::new(Method::Sal, SeedMode::Explicit("x".into()));
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"seed_mode\":\"explicit:x\""), "{json}");
        assert!(json.contains("\"presumptive_count\":100"));
        let back: RunConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn validation() {
        let mut c = RunConfig::default();
        assert!(c.validate().is_ok());
        c.presumptive_count = 0;
        assert!(c.validate().is_err());
    }
}
