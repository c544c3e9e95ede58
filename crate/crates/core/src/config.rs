//! Analysis configuration: rating scale, thresholds, rating-to-probability
//! maps and ranking criteria.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::Rating;

pub const DEFAULT_SCALE_MAX: u8 = 10;
pub const DEFAULT_MAX_PROCESSES: usize = 10_000;
pub const DEFAULT_MAX_QUALITY_MEASURES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankingCriterion {
    WorstRpn,
    ExpectedCost,
    Duration,
}

impl fmt::Display for RankingCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankingCriterion::WorstRpn => "worst_rpn",
            RankingCriterion::ExpectedCost => "expected_cost",
            RankingCriterion::Duration => "duration",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigDoc", into = "ConfigDoc")]
pub struct AnalysisConfig {
    pub scale_max: u8,
    /// Per-row limit `t` on severity times occurrence.
    pub risk_threshold: u32,
    /// Limit on the worst RPN of an acceptable process.
    pub rpn_threshold: u32,
    pub max_quality_measures: usize,
    occurrence_probability: BTreeMap<u8, f64>,
    catch_probability: BTreeMap<u8, f64>,
    pub ranking_criteria: Vec<RankingCriterion>,
    pub max_processes: usize,
    /// Try every combination of quality measures instead of greedy insertion.
    pub exhaustive_qm: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("scale_max must be at least 2, got {0}")]
    ScaleTooSmall(u8),
    #[error("{field} must be at least 1")]
    NonPositive { field: &'static str },
    #[error("{map} has ratings {found:?}, expected exactly 1..={scale_max}")]
    IncompleteMap {
        map: &'static str,
        found: Vec<u8>,
        scale_max: u8,
    },
    #[error("{map}[{rating}] = {value} is outside {range}")]
    OutOfRange {
        map: &'static str,
        rating: u8,
        value: f64,
        range: &'static str,
    },
    #[error("occurrence_probability must increase strictly: rating {lower} -> {lower_value}, rating {higher} -> {higher_value}")]
    OccurrenceNotIncreasing {
        lower: u8,
        lower_value: f64,
        higher: u8,
        higher_value: f64,
    },
    #[error("catch_probability must not increase: rating {lower} -> {lower_value}, rating {higher} -> {higher_value}")]
    CatchIncreasing {
        lower: u8,
        lower_value: f64,
        higher: u8,
        higher_value: f64,
    },
    #[error("catch_probability at scale_max {scale_max} must be 0, got {value}")]
    CatchAtMaximum { scale_max: u8, value: f64 },
    #[error("ranking_criteria must not be empty")]
    NoRankingCriteria,
    #[error("ranking criterion {0} listed twice")]
    DuplicateCriterion(RankingCriterion),
}

/// Rating r maps to 10^(r - scale_max - 1), so the most frequent rating is 0.1.
pub fn default_occurrence_probability(scale_max: u8) -> BTreeMap<u8, f64> {
    (1..=scale_max)
        .map(|r| (r, 10f64.powi(i32::from(r) - i32::from(scale_max) - 1)))
        .collect()
}

/// Detection d maps linearly from 1.0 at d = 1 to 0.0 at d = scale_max.
pub fn default_catch_probability(scale_max: u8) -> BTreeMap<u8, f64> {
    let span = f64::from(scale_max - 1);
    (1..=scale_max)
        .map(|d| (d, f64::from(scale_max - d) / span))
        .collect()
}

pub fn default_ranking_criteria() -> Vec<RankingCriterion> {
    vec![
        RankingCriterion::WorstRpn,
        RankingCriterion::ExpectedCost,
        RankingCriterion::Duration,
    ]
}

impl AnalysisConfig {
    /// A config with default probability maps, ranking and caps.
    pub fn new(scale_max: u8, risk_threshold: u32, rpn_threshold: u32) -> Result<Self, ConfigError> {
        if scale_max < 2 {
            return Err(ConfigError::ScaleTooSmall(scale_max));
        }
        let config = AnalysisConfig {
            scale_max,
            risk_threshold,
            rpn_threshold,
            max_quality_measures: DEFAULT_MAX_QUALITY_MEASURES,
            occurrence_probability: default_occurrence_probability(scale_max),
            catch_probability: default_catch_probability(scale_max),
            ranking_criteria: default_ranking_criteria(),
            max_processes: DEFAULT_MAX_PROCESSES,
            exhaustive_qm: false,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_probabilities(
        mut self,
        occurrence: BTreeMap<u8, f64>,
        catch: BTreeMap<u8, f64>,
    ) -> Result<Self, ConfigError> {
        self.occurrence_probability = occurrence;
        self.catch_probability = catch;
        self.validate()?;
        Ok(self)
    }

    pub fn max_rating(&self) -> Rating {
        Rating::new(self.scale_max)
    }

    pub fn occurrence_probability(&self, rating: Rating) -> f64 {
        self.occurrence_probability[&rating.value()]
    }

    pub fn catch_probability(&self, rating: Rating) -> f64 {
        self.catch_probability[&rating.value()]
    }

    pub fn occurrence_map(&self) -> &BTreeMap<u8, f64> {
        &self.occurrence_probability
    }

    pub fn catch_map(&self) -> &BTreeMap<u8, f64> {
        &self.catch_probability
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let n = self.scale_max;
        if n < 2 {
            return Err(ConfigError::ScaleTooSmall(n));
        }
        if self.risk_threshold < 1 {
            return Err(ConfigError::NonPositive { field: "risk_threshold" });
        }
        if self.rpn_threshold < 1 {
            return Err(ConfigError::NonPositive { field: "rpn_threshold" });
        }
        if self.max_processes < 1 {
            return Err(ConfigError::NonPositive { field: "max_processes" });
        }
        for (map, values) in [
            ("occurrence_probability", &self.occurrence_probability),
            ("catch_probability", &self.catch_probability),
        ] {
            if !values.keys().copied().eq(1..=n) {
                return Err(ConfigError::IncompleteMap {
                    map,
                    found: values.keys().copied().collect(),
                    scale_max: n,
                });
            }
        }
        for (&rating, &value) in &self.occurrence_probability {
            if !(value > 0.0 && value < 1.0) {
                return Err(ConfigError::OutOfRange {
                    map: "occurrence_probability",
                    rating,
                    value,
                    range: "(0, 1)",
                });
            }
        }
        for (&rating, &value) in &self.catch_probability {
            if !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::OutOfRange {
                    map: "catch_probability",
                    rating,
                    value,
                    range: "[0, 1]",
                });
            }
        }
        let occ: Vec<(u8, f64)> = self.occurrence_probability.iter().map(|(&r, &p)| (r, p)).collect();
        for pair in occ.windows(2) {
            let ((lower, lower_value), (higher, higher_value)) = (pair[0], pair[1]);
            if higher_value <= lower_value {
                return Err(ConfigError::OccurrenceNotIncreasing {
                    lower,
                    lower_value,
                    higher,
                    higher_value,
                });
            }
        }
        let catch: Vec<(u8, f64)> = self.catch_probability.iter().map(|(&r, &p)| (r, p)).collect();
        for pair in catch.windows(2) {
            let ((lower, lower_value), (higher, higher_value)) = (pair[0], pair[1]);
            if higher_value > lower_value {
                return Err(ConfigError::CatchIncreasing {
                    lower,
                    lower_value,
                    higher,
                    higher_value,
                });
            }
        }
        let at_max = self.catch_probability[&n];
        if at_max != 0.0 {
            return Err(ConfigError::CatchAtMaximum {
                scale_max: n,
                value: at_max,
            });
        }
        if self.ranking_criteria.is_empty() {
            return Err(ConfigError::NoRankingCriteria);
        }
        for (i, c) in self.ranking_criteria.iter().enumerate() {
            if self.ranking_criteria[..i].contains(c) {
                return Err(ConfigError::DuplicateCriterion(*c));
            }
        }
        Ok(())
    }
}

/// Document form; keys mirror the config fields. Maps and caps are optional
/// and fall back to the defaults above.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    #[serde(default = "default_scale_max")]
    scale_max: u8,
    risk_threshold: u32,
    rpn_threshold: u32,
    #[serde(default = "default_max_quality_measures")]
    max_quality_measures: usize,
    #[serde(default)]
    occurrence_probability: Option<BTreeMap<u8, f64>>,
    #[serde(default)]
    catch_probability: Option<BTreeMap<u8, f64>>,
    #[serde(default = "default_ranking_criteria")]
    ranking_criteria: Vec<RankingCriterion>,
    #[serde(default = "default_max_processes")]
    max_processes: usize,
    #[serde(default)]
    exhaustive_qm: bool,
}

fn default_scale_max() -> u8 {
    DEFAULT_SCALE_MAX
}

fn default_max_quality_measures() -> usize {
    DEFAULT_MAX_QUALITY_MEASURES
}

fn default_max_processes() -> usize {
    DEFAULT_MAX_PROCESSES
}

impl TryFrom<ConfigDoc> for AnalysisConfig {
    type Error = ConfigError;

    fn try_from(doc: ConfigDoc) -> Result<Self, Self::Error> {
        if doc.scale_max < 2 {
            return Err(ConfigError::ScaleTooSmall(doc.scale_max));
        }
        let config = AnalysisConfig {
            scale_max: doc.scale_max,
            risk_threshold: doc.risk_threshold,
            rpn_threshold: doc.rpn_threshold,
            max_quality_measures: doc.max_quality_measures,
            occurrence_probability: doc
                .occurrence_probability
                .unwrap_or_else(|| default_occurrence_probability(doc.scale_max)),
            catch_probability: doc
                .catch_probability
                .unwrap_or_else(|| default_catch_probability(doc.scale_max)),
            ranking_criteria: doc.ranking_criteria,
            max_processes: doc.max_processes,
            exhaustive_qm: doc.exhaustive_qm,
        };
        config.validate()?;
        Ok(config)
    }
}

impl From<AnalysisConfig> for ConfigDoc {
    fn from(c: AnalysisConfig) -> Self {
        ConfigDoc {
            scale_max: c.scale_max,
            risk_threshold: c.risk_threshold,
            rpn_threshold: c.rpn_threshold,
            max_quality_measures: c.max_quality_measures,
            occurrence_probability: Some(c.occurrence_probability),
            catch_probability: Some(c.catch_probability),
            ranking_criteria: c.ranking_criteria,
            max_processes: c.max_processes,
            exhaustive_qm: c.exhaustive_qm,
        }
    }
}
