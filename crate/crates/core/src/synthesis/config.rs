use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::DocType;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A non-negative count: a constant or uniform over an inclusive range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountSpec {
    Fixed(u64),
    Uniform([u64; 2]),
}

impl CountSpec {
    pub fn bounds(&self) -> (u64, u64) {
        match *self {
            CountSpec::Fixed(v) => (v, v),
            CountSpec::Uniform([lo, hi]) => (lo, hi),
        }
    }

    /// Probability of each remainder mod 4.
    pub fn remainder_probabilities(&self) -> [Rational; 4] {
        let (lo, hi) = self.bounds();
        let mut counts = [0i64; 4];
        for v in lo..=hi {
            counts[(v % 4) as usize] += 1;
        }
        let n = (hi - lo + 1) as i64;
        counts.map(|c| rational::ratio(c, n))
    }

    pub fn mean(&self) -> Rational {
        let (lo, hi) = self.bounds();
        rational::ratio((lo + hi) as i64, 2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CitationModel {
    /// c = round(exp(mu + sigma·Z)) − 1, floored at zero.
    Lognormal { mu: f64, sigma: f64 },
    /// Yule–Simon with shape rho, shifted to start at zero.
    Yule { rho: f64 },
}

impl Default for CitationModel {
    fn default() -> Self {
        CitationModel::Lognormal { mu: 1.0, sigma: 1.1 }
    }
}

fn default_seed() -> u64 {
    1
}
fn default_max_categories() -> usize {
    3
}
fn default_papers() -> CountSpec {
    CountSpec::Fixed(10)
}
fn default_rank_volume() -> f64 {
    1.0
}
fn default_boost() -> f64 {
    1.0
}
fn default_max_citations() -> u64 {
    500
}
fn default_citation_years() -> i32 {
    10
}
fn default_years() -> Vec<i32> {
    vec![2020]
}
fn default_mix() -> BTreeMap<String, f64> {
    BTreeMap::from([("article".to_string(), 1.0)])
}
fn default_entities() -> usize {
    12
}
fn default_schema() -> String {
    "sim".to_string()
}

/// Parameters of a synthetic corpus. See `docs/gen-config.md`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_schema")]
    pub schema: String,
    pub num_categories: usize,
    pub journals_per_category: CountSpec,
    /// Chance that a journal gains a second category, and again a third.
    #[serde(default)]
    pub multi_attribution_prob: f64,
    #[serde(default = "default_max_categories")]
    pub max_categories: usize,
    #[serde(default = "default_papers")]
    pub papers_per_journal: CountSpec,
    /// Extra volume of the top journal of a category relative to the bottom
    /// one; 0 disables the correlation.
    #[serde(default = "default_rank_volume")]
    pub rank_volume: f64,
    #[serde(default)]
    pub citation_model: CitationModel,
    /// Citation multiplier for papers in journals with several categories.
    #[serde(default = "default_boost")]
    pub multi_field_boost: f64,
    #[serde(default = "default_max_citations")]
    pub max_citations: u64,
    /// Citations arrive 1..=citation_years years after publication.
    #[serde(default = "default_citation_years")]
    pub citation_years: i32,
    #[serde(default = "default_years")]
    pub years: Vec<i32>,
    #[serde(default = "default_mix")]
    pub doc_type_mix: BTreeMap<String, f64>,
    /// Affiliations drawn for authors; 0 leaves papers anonymous.
    #[serde(default = "default_entities")]
    pub entities: usize,
}

impl GenConfig {
    pub fn new(num_categories: usize, journals_per_category: CountSpec) -> Self {
        GenConfig {
            seed: default_seed(),
            schema: default_schema(),
            num_categories,
            journals_per_category,
            multi_attribution_prob: 0.0,
            max_categories: default_max_categories(),
            papers_per_journal: default_papers(),
            rank_volume: default_rank_volume(),
            citation_model: CitationModel::default(),
            multi_field_boost: default_boost(),
            max_citations: default_max_citations(),
            citation_years: default_citation_years(),
            years: default_years(),
            doc_type_mix: default_mix(),
            entities: default_entities(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: GenConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.num_categories == 0 {
            return bad("num_categories must be at least 1".into());
        }
        for (name, spec) in
            [("journals_per_category", self.journals_per_category), ("papers_per_journal", self.papers_per_journal)]
        {
            let (lo, hi) = spec.bounds();
            if lo > hi {
                return bad(format!("{name}: empty range {lo}..{hi}"));
            }
        }
        if !(0.0..=1.0).contains(&self.multi_attribution_prob) {
            return bad(format!("multi_attribution_prob {} is not a probability", self.multi_attribution_prob));
        }
        if self.max_categories == 0 {
            return bad("max_categories must be at least 1".into());
        }
        for (name, v) in [("rank_volume", self.rank_volume), ("multi_field_boost", self.multi_field_boost)] {
            if !v.is_finite() || v < 0.0 {
                return bad(format!("{name} must be a finite non-negative number"));
            }
        }
        match self.citation_model {
            CitationModel::Lognormal { mu, sigma } if !mu.is_finite() || !sigma.is_finite() || sigma <= 0.0 => {
                return bad("lognormal citation model needs finite mu and sigma > 0".into());
            }
            CitationModel::Yule { rho } if !rho.is_finite() || rho <= 0.0 => {
                return bad("yule citation model needs rho > 0".into());
            }
            _ => {}
        }
        if self.citation_years < 1 {
            return bad("citation_years must be at least 1".into());
        }
        if self.years.is_empty() {
            return bad("years must not be empty".into());
        }
        if self.schema.is_empty() {
            return bad("schema must not be empty".into());
        }
        let mut positive = false;
        for (name, &w) in &self.doc_type_mix {
            name.parse::<DocType>().map_err(|e| Error::Config(format!("doc_type_mix: {e}")))?;
            if !w.is_finite() || w < 0.0 {
                return bad(format!("doc_type_mix weight for `{name}` must be non-negative"));
            }
            positive |= w > 0.0;
        }
        if !positive {
            return bad("doc_type_mix needs a positive weight".into());
        }
        Ok(())
    }

    /// Whether every journal necessarily ends up with one category.
    pub fn single_attribution(&self) -> bool {
        self.multi_attribution_prob == 0.0 || self.max_categories == 1 || self.num_categories == 1
    }
}
